"""Fock states over the rank-l free-boson algebra and their mode actions.

States are finite linear combinations of monomials
a[i1](-k1)...a[ir](-kr)|alpha> with exact Scalar coefficients, where the
module label alpha is an l-tuple of Gaussian rationals.  Colors i are
1-based throughout, matching the text format ``a[i,-k]``.

A label may carry an auxiliary tau-part: the zero-mode eigenvalue of
a[i](0) on |alpha + tau*beta> is alpha_i + tau*beta_i.  Only the mode
algebra supports tau-parts; anything needing dot products of labels
(exponent offsets, weights) insists on tau-free labels.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .scalars import (
    GR_ONE,
    GR_ZERO,
    GaussRat,
    S_ONE,
    Scalar,
    as_gauss,
    as_scalar,
    binom,
    parse_scalar,
    tau_pow,
)

Part = tuple[int, int]  # (color, level), level >= 1


class Label(NamedTuple):
    alpha: tuple[GaussRat, ...]
    tau: tuple[GaussRat, ...]

    @property
    def rank(self) -> int:
        return len(self.alpha)

    @property
    def is_tau_free(self) -> bool:
        return all(t.is_zero for t in self.tau)

    @property
    def is_zero(self) -> bool:
        return self.is_tau_free and all(a.is_zero for a in self.alpha)

    def dot(self, other: "Label") -> GaussRat:
        if not (self.is_tau_free and other.is_tau_free):
            raise ValueError("dot product undefined for tau-carrying labels")
        if self.rank != other.rank:
            raise ValueError("label rank mismatch")
        out = GR_ZERO
        for a, b in zip(self.alpha, other.alpha):
            out = out + a * b
        return out

    def norm2(self) -> GaussRat:
        return self.dot(self)

    def a0_eigenvalue(self, color: int) -> Scalar:
        """Eigenvalue of a[color](0), a Scalar when a tau-part is present."""
        base = Scalar.rational(self.alpha[color - 1])
        t = self.tau[color - 1]
        if t.is_zero:
            return base
        return base + tau_pow(1).scale(t)

    def __add__(self, other: "Label") -> "Label":
        if self.rank != other.rank:
            raise ValueError("label rank mismatch")
        return Label(tuple(a + b for a, b in zip(self.alpha, other.alpha)),
                     tuple(a + b for a, b in zip(self.tau, other.tau)))

    def __neg__(self) -> "Label":
        return Label(tuple(-a for a in self.alpha), tuple(-t for t in self.tau))

    def __sub__(self, other: "Label") -> "Label":
        return self + (-other)

    def scale(self, c) -> "Label":
        c = as_gauss(c)
        return Label(tuple(a * c for a in self.alpha),
                     tuple(t * c for t in self.tau))

    def sort_key(self):
        return tuple(x.sort_key() for x in self.alpha + self.tau)

    def __str__(self) -> str:
        body = ",".join(str(a) for a in self.alpha)
        if not self.is_tau_free:
            body += ";tau:" + ",".join(str(t) for t in self.tau)
        return body


def label(values: Iterable, tau: Iterable | None = None) -> Label:
    alpha = tuple(as_gauss(v) for v in values)
    taup = tuple(as_gauss(v) for v in tau) if tau is not None else (GR_ZERO,) * len(alpha)
    if len(taup) != len(alpha):
        raise ValueError("tau part must match label rank")
    return Label(alpha, taup)


def zero_label(rank: int) -> Label:
    return Label((GR_ZERO,) * rank, (GR_ZERO,) * rank)


class FockMonomial(NamedTuple):
    label: Label
    parts: tuple[Part, ...]  # canonically sorted

    @property
    def levels_sum(self) -> int:
        return sum(k for _, k in self.parts)

    def weight(self) -> GaussRat:
        return self.label.norm2() / 2 + self.levels_sum

    def sort_key(self):
        return (self.label.sort_key(), self.parts)


def monomial(lab: Label, parts: Iterable[Part] = ()) -> FockMonomial:
    ps = tuple(sorted(parts))
    for i, k in ps:
        if k < 1:
            raise ValueError("creation levels must be >= 1")
        if not 1 <= i <= lab.rank:
            raise ValueError(f"color {i} out of range for rank {lab.rank}")
    return FockMonomial(lab, ps)


class State:
    """A finite Scalar-linear combination of Fock monomials."""

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: dict[FockMonomial, Scalar] | None = None,
                 *, _clean: bool = False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {m: c for m, c in terms.items() if not c.is_zero}
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("State is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "State":
        return cls(rank, {}, _clean=True)

    @classmethod
    def of(cls, mono: FockMonomial, coeff=S_ONE) -> "State":
        coeff = as_scalar(coeff)
        if coeff.is_zero:
            return cls.zero(mono.label.rank)
        return cls(mono.label.rank, {mono: coeff}, _clean=True)

    @classmethod
    def vacuum(cls, rank: int, lab: Label | None = None) -> "State":
        return cls.of(monomial(lab if lab is not None else zero_label(rank)))

    # -- linear structure ----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "State") -> "State":
        if not isinstance(other, State):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.rank != other.rank:
            raise ValueError("state rank mismatch")
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                s = acc + c
                if s.is_zero:
                    del out[m]
                else:
                    out[m] = s
        return State(self.rank, out, _clean=True)

    def __sub__(self, other: "State") -> "State":
        return self + other.scale(-1)

    def __neg__(self) -> "State":
        return self.scale(-1)

    def scale(self, c) -> "State":
        if isinstance(c, Scalar):
            if c.is_zero:
                return State.zero(self.rank)
            if c.is_one:
                return self
            return State(self.rank, {m: x * c for m, x in self.terms.items()})
        c = as_gauss(c)
        if c.is_zero:
            return State.zero(self.rank)
        return State(self.rank, {m: x.scale(c) for m, x in self.terms.items()},
                     _clean=True)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, GaussRat, Scalar)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    # -- structure queries ------------------------------------------------------
    def labels(self) -> set[Label]:
        return {m.label for m in self.terms}

    def single_label(self) -> Label:
        labs = self.labels()
        if len(labs) != 1:
            raise ValueError(f"state is not label-homogeneous ({len(labs)} labels)")
        return labs.pop()

    def max_levels(self) -> int:
        """Largest level sum over the monomials (0 for the zero state)."""
        return max((m.levels_sum for m in self.terms), default=0)

    def truncate_tau(self, order: int) -> "State":
        return State(self.rank, {m: c.truncate_tau(order)
                                 for m, c in self.terms.items()})

    def items_sorted(self) -> list[tuple[FockMonomial, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rank, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return format_state(self)

    def __repr__(self) -> str:
        return f"<State {self}>"


# ---------------------------------------------------------------------------
# mode actions


def apply_mode(color: int, n: int, s: State) -> State:
    """The Heisenberg mode a[color](n) acting on a state.

    Creation for n < 0, zero-mode eigenvalue for n = 0, contraction
    against matching creation parts for n > 0 via [a(n), a(-n)] = n.
    """
    out = State.zero(s.rank)
    for m, c in s.terms.items():
        out = out + _mode_on_monomial(color, n, m).scale(c)
    return out


def _mode_on_monomial(color: int, n: int, m: FockMonomial) -> State:
    key = (color, n, m)
    hit = _MODE_CACHE.get(key)
    if hit is None:
        if n < 0:
            hit = State.of(monomial(m.label, m.parts + ((color, -n),)))
        elif n == 0:
            hit = State.of(m, coeff=m.label.a0_eigenvalue(color))
        else:
            mult = sum(1 for i, k in m.parts if i == color and k == n)
            if mult == 0:
                hit = State.zero(m.label.rank)
            else:
                rest = list(m.parts)
                rest.remove((color, n))
                hit = State.of(monomial(m.label, rest), coeff=as_scalar(n * mult))
        _MODE_CACHE[key] = hit
    return hit


_MODE_CACHE: dict = {}


def apply_alpha_mode(avec: Sequence[Scalar], n: int, s: State) -> State:
    """alpha(n) = sum_i avec[i] a[i](n) for a Scalar coefficient vector."""
    out = State.zero(s.rank)
    for i, c in enumerate(avec, start=1):
        if not c.is_zero:
            out = out + apply_mode(i, n, s).scale(c)
    return out


def label_mode_vector(lab: Label) -> tuple[Scalar, ...]:
    """Coefficient vector of alpha(n) for a (possibly tau-carrying) label."""
    out = []
    for a, t in zip(lab.alpha, lab.tau):
        c = Scalar.rational(a)
        if not t.is_zero:
            c = c + tau_pow(1).scale(t)
        out.append(c)
    return tuple(out)


def virasoro_mode(n: int, s: State) -> State:
    """L(n) by the direct normal-ordered bilinear sum over the modes."""
    out = State.zero(s.rank)
    for m, c in s.terms.items():
        out = out + _virasoro_on_monomial(n, m).scale(c)
    return out


def _virasoro_on_monomial(n: int, m: FockMonomial) -> State:
    key = (n, m)
    hit = _VIRASORO_CACHE.get(key)
    if hit is not None:
        return hit
    rank = m.label.rank
    candidates = {0, n}
    if n <= 0:
        candidates.update(range(n, 1))
    for _, k in m.parts:
        candidates.add(k)
        candidates.add(n - k)
    acc = State.zero(rank)
    base = State.of(m)
    for j in sorted(candidates):
        k = n - j
        cr, an = min(j, k), max(j, k)
        for i in range(1, rank + 1):
            t = apply_mode(i, an, base)
            if t.is_zero:
                continue
            acc = acc + apply_mode(i, cr, t)
    hit = acc.scale(Fraction(1, 2))
    _VIRASORO_CACHE[key] = hit
    return hit


_VIRASORO_CACHE: dict = {}


def vertex_mode(u: State, n: int, s: State) -> State:
    """The mode u(n) of the vertex operator Y(u,z), for untwisted u.

    Built by the creation-left normal-ordered recursion
    Y(a[j](-k-1)v, z) = (1/k!) :d_z^k Y(a[j],z) Y(v,z): starting from
    Y(vacuum,z) = Id and Y(a[j],z) = sum a[j](m) z^(-m-1).
    """
    out = State.zero(s.rank)
    for um, uc in u.terms.items():
        if not (um.label.is_zero):
            raise ValueError("vertex_mode requires a label-0 (untwisted) head; "
                             "use the intertwiner for charged heads")
        part = State.zero(s.rank)
        for sm, sc in s.terms.items():
            part = part + _vertex_on_monomials(um.parts, n, sm).scale(sc)
        out = out + part.scale(uc)
    return out


def _vertex_on_monomials(uparts: tuple[Part, ...], n: int, sm: FockMonomial) -> State:
    key = (uparts, n, sm)
    hit = _VERTEX_CACHE.get(key)
    if hit is not None:
        return hit
    rank = sm.label.rank
    if not uparts:
        hit = State.of(sm) if n == -1 else State.zero(rank)
        _VERTEX_CACHE[key] = hit
        return hit
    (j_color, level), rest = uparts[0], uparts[1:]
    k = level - 1
    kv = sum(lev for _, lev in rest)
    ks = sm.levels_sum
    acc = State.zero(rank)
    # annihilation-right part: sum_{m>=0} (-1)^k binom(m+k,k) v(n-m-k-1) a(m) s
    ann_indices = {0} | {lev for _, lev in sm.parts}
    for m in sorted(ann_indices):
        b = binom(m + k, k)
        if b.is_zero:
            continue
        t = _mode_on_monomial(j_color, m, sm)
        if t.is_zero:
            continue
        inner = State.zero(rank)
        for tm, tc in t.terms.items():
            inner = inner + _vertex_on_monomials(rest, n - m - k - 1, tm).scale(tc)
        acc = acc + inner.scale(_sign(k) * b)
    # creation-left part: sum_{m<=-1} (-1)^k binom(m+k,k) a(m) v(n-m-k-1) s
    m_lo = n - k - kv - ks  # below this v(n-m-k-1) s dies by truncation
    for m in range(m_lo, 0):
        b = binom(m + k, k)
        if b.is_zero:
            continue
        inner = _vertex_on_monomials(rest, n - m - k - 1, sm)
        if inner.is_zero:
            continue
        acc = acc + apply_mode(j_color, m, inner).scale(_sign(k) * b)
    _VERTEX_CACHE[key] = acc
    return acc


_VERTEX_CACHE: dict = {}


def _sign(k: int) -> GaussRat:
    return GR_ONE if k % 2 == 0 else -GR_ONE


def clear_caches() -> None:
    _MODE_CACHE.clear()
    _VIRASORO_CACHE.clear()
    _VERTEX_CACHE.clear()


def translate_label(s: State, dalpha: Label) -> State:
    """Pure label shift |beta> -> |beta + dalpha| with no scalar factor.

    This is the exponentiated shift operator of the conjugation identities;
    the cocycle-dressed shift lives in the intertwiner layer.
    """
    out: dict[FockMonomial, Scalar] = {}
    for m, c in s.terms.items():
        out[monomial(m.label + dalpha, m.parts)] = c
    return State(s.rank, out, _clean=True)


def exp_virasoro_coeffs(n: int, s: State, order: int, sign: int = 1) -> list[State]:
    """Coefficients of exp(sign*z*L(n)) s, i.e. [s, sign*L(n)s, ...,
    sign^p L(n)^p s / p!], up to z-order ``order``."""
    out = [s]
    cur = s
    for p in range(1, order + 1):
        cur = virasoro_mode(n, cur).scale(Fraction(sign, p))
        out.append(cur)
    return out


def conformal_vector(rank: int) -> State:
    """omega = (1/2) sum_i a[i](-1)^2 |0>."""
    out = State.zero(rank)
    for i in range(1, rank + 1):
        out = out + State.of(monomial(zero_label(rank), ((i, 1), (i, 1))),
                             coeff=as_scalar(Fraction(1, 2)))
    return out


# ---------------------------------------------------------------------------
# bases


def partitions_colored(rank: int, total: int) -> Iterator[tuple[Part, ...]]:
    """All canonical part tuples with the given level sum."""
    def rec(remaining: int, min_part: Part) -> Iterator[tuple[Part, ...]]:
        if remaining == 0:
            yield ()
            return
        for i in range(1, rank + 1):
            for k in range(1, remaining + 1):
                p = (i, k)
                if p < min_part:
                    continue
                for tail in rec(remaining - k, p):
                    yield (p,) + tail
    yield from rec(total, (1, 1))


def basis_monomials(rank: int, max_levels: int, lab: Label | None = None,
                    exact: bool = False) -> list[FockMonomial]:
    """Fock basis with level sum <= max_levels (or == if exact)."""
    lab = lab if lab is not None else zero_label(rank)
    sums = [max_levels] if exact else range(max_levels + 1)
    out = []
    for t in sums:
        for parts in partitions_colored(rank, t):
            out.append(FockMonomial(lab, tuple(sorted(parts))))
    return sorted(out, key=lambda m: (m.levels_sum, m.sort_key()))


# ---------------------------------------------------------------------------
# text format: sum of terms "c * a[i,-k]a[i,-k]...|g1,g2,...>"

_PART_RE = re.compile(r"a\[(\d+),(-\d+)\]")


def format_state(s: State) -> str:
    if s.is_zero:
        return "0"
    terms = []
    for m, c in s.items_sorted():
        parts = "".join(f"a[{i},-{k}]" for i, k in m.parts)
        ket = "|" + ",".join(str(a) for a in m.label.alpha) + ">"
        if c.is_one:
            terms.append(f"{parts}{ket}" if parts else ket)
        else:
            terms.append(f"({c}) * {parts}{ket}")
    return " + ".join(terms)


def parse_state(text: str, rank: int) -> State:
    text = text.strip()
    if text == "0":
        return State.zero(rank)
    out = State.zero(rank)
    for term in _split_top_terms(text):
        coeff = S_ONE
        body = term.strip()
        if body.startswith("("):
            depth, idx = 0, 0
            for idx, ch in enumerate(body):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            coeff = parse_scalar(body[1:idx])
            body = body[idx + 1:].strip()
            if body.startswith("*"):
                body = body[1:].strip()
        if "|" not in body or not body.endswith(">"):
            raise ValueError(f"malformed state term: {term!r}")
        parts_text, ket = body.split("|", 1)
        parts = [(int(i), -int(k)) for i, k in _PART_RE.findall(parts_text)]
        consumed = "".join(f"a[{i},{-k}]" for i, k in parts)
        if consumed != parts_text.strip():
            raise ValueError(f"malformed creation parts: {parts_text!r}")
        lab_vals = ket[:-1].split(",") if ket[:-1] else []
        lab = label([GaussRat.parse(v) for v in lab_vals])
        if lab.rank != rank:
            raise ValueError(f"label rank {lab.rank} != {rank}")
        out = out + State.of(monomial(lab, parts), coeff=coeff)
    return out


def _split_top_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and text[i:i + 3] == " + ":
            out.append("".join(cur))
            cur = []
            i += 3
            continue
        cur.append(ch)
        i += 1
    if cur:
        out.append("".join(cur))
    return out
