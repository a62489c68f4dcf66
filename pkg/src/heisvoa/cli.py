"""Batch verification harness.

Loads a scenario config (JSON with exact rationals as strings), runs the
selected verifier suites, writes a structured text report, and exits with
a deterministic status:

    0  every non-designed-failure check passed
    1  at least one check failed (or a designed failure unexpectedly passed)
    2  malformed configuration
    3  window starvation: some case had no comparable coefficients

The report body is byte-identical for identical config and seed; wall
clock data lives only in '#' header lines.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .fock import (
    State,
    apply_mode,
    basis_monomials,
    label,
    monomial,
    virasoro_mode,
    zero_label,
)
from .form import FormConfig, det_scalar, gram, gram_matrix, verify_invariance
from .intertwiner import (
    CocycleSystem,
    IntertwinerSpec,
    verify_creativity,
    verify_e_conjugation,
    verify_shift_conj_lminus,
    verify_shift_conj_lplus,
    verify_shift_conj_vertex,
    verify_translation,
    verify_y_conj_minus,
    verify_y_conj_plus,
    verify_ypm_commutation,
    verify_yy_conj,
)
from .jacobi import (
    VerificationReport,
    verify_associativity,
    verify_commutator,
    verify_generalized_jacobi,
    verify_locality,
    verify_normal_order,
    verify_skew_symmetry,
)
from .lattice import (
    integral_lattice,
    lattice_cocycle,
    shifted_central_charge,
    shifted_virasoro,
    twist,
    twisted_virasoro_mode,
    verify_dlm_jacobi,
    verify_li_equivalence,
    verify_twist_grading,
    verify_twisted_jacobi,
)
from .scalars import GaussRat, as_scalar, gr, lam_pow
from .series import WindowError

SUITES = ("heisenberg", "virasoro", "intertwiner-props", "jacobi", "skew",
          "form", "lattice-twist", "dlm", "locality")


class ConfigError(ValueError):
    pass


@dataclass
class Scenario:
    rank: int = 1
    cutoff: int = 6
    window: int = 3
    windows: dict = field(default_factory=dict)
    n_branch: int = 1
    seed: int = 0
    suites: tuple = SUITES[:-1]
    max_weight: int = 4
    pairs: int = 5
    numerator_bound: int = 3
    denominator_bound: int = 3
    labels: tuple = ()
    heads: tuple = ((), ((1, -1),), ((1, -2),), ((1, -1), (1, -1)))
    jacobi_instances: tuple = (("1/2", "1/3", "-1/4"), ("1/2*i", "1/2", "0"),
                               ("0", "0", "0"))
    cocycle_f: tuple | None = None
    cocycle_g: tuple | None = None
    diagonal_fix: bool = False
    gram: tuple = ((1,),)
    embedding: tuple | None = None
    twists: tuple = ("1/2", "1/3")
    negative_controls: bool = True

    def radius(self, suite: str) -> int:
        return int(self.windows.get(suite, self.window))

    def cocycle(self, rank: int | None = None, corruption=None) -> CocycleSystem:
        r = rank if rank is not None else self.rank
        if self.cocycle_f is not None:
            f = tuple(tuple(gr(v) for v in row) for row in self.cocycle_f)
        else:
            f = tuple(tuple(gr("1/2") if i > j else gr(0) for j in range(r))
                      for i in range(r))
        if self.cocycle_g is not None:
            g = tuple(tuple(gr(v) for v in row) for row in self.cocycle_g)
        else:
            g = tuple((gr(0),) * r for _ in range(r))
        return CocycleSystem(r, f, g, self.diagonal_fix,
                             corruption if corruption is not None else gr(0))

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kw = dict(data)
        for key in ("labels", "heads", "jacobi_instances", "twists",
                    "suites", "gram", "embedding", "cocycle_f", "cocycle_g"):
            if key in kw and kw[key] is not None:
                kw[key] = _freeze(kw[key])
        scn = cls(**kw)
        if scn.rank < 1:
            raise ConfigError("rank must be positive")
        if scn.n_branch % 2 == 0:
            raise ConfigError("branch parameter N must be odd")
        if scn.cutoff < scn.window:
            raise ConfigError("cutoff must be at least the window radius")
        bad = [s for s in scn.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites: {bad}")
        radii = [scn.window] + [int(v) for v in scn.windows.values()]
        if scn.cutoff < max(radii):
            raise ConfigError("cutoff must be at least every window radius")
        for head in scn.heads:
            for part in head:
                if len(part) != 2 or part[1] >= 0:
                    raise ConfigError(f"malformed head part {part}")
        for row in scn.labels:
            if len(row) != scn.rank:
                raise ConfigError(f"label sample {row} does not match rank "
                                  f"{scn.rank}")
        return scn


def _freeze(x):
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(v) for v in x)
    return x


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return Scenario.from_dict(data)


def sample_labels(scn: Scenario, rng: random.Random, count: int, rank=None):
    """Gaussian-rational label tuples from the configured bounded ranges."""
    r = rank if rank is not None else scn.rank
    explicit = [label([gr(v) for v in row]) for row in scn.labels
                if len(row) == r]
    out = list(explicit)
    nb, db = scn.numerator_bound, scn.denominator_bound
    while len(out) < count:
        out.append(label([GaussRat(Fraction(rng.randint(-nb, nb), rng.randint(1, db)),
                                   Fraction(rng.randint(-nb, nb), rng.randint(1, db)))
                          for _ in range(r)]))
    return out[:count]


def head_state(scn: Scenario, parts, lab) -> State:
    """Heads come in the text-format convention (color, -level)."""
    return State.of(monomial(lab, tuple((int(i), int(-k)) for i, k in parts)))


Case = tuple[str, VerificationReport]


def _algebra_report(name: str, window: str) -> VerificationReport:
    return VerificationReport(name, window_used=window)


def suite_heisenberg(scn: Scenario) -> list[Case]:
    rep = _algebra_report("heisenberg_brackets",
                          f"weight<={scn.max_weight}, |n|,|m|<=3")
    rank = scn.rank
    basis = basis_monomials(rank, scn.max_weight)
    for bi, bm in enumerate(basis):
        s = State.of(bm)
        for i in range(1, rank + 1):
            for j in range(1, rank + 1):
                for n in range(-3, 4):
                    for m in range(-3, 4):
                        lhs = (apply_mode(i, n, apply_mode(j, m, s))
                               - apply_mode(j, m, apply_mode(i, n, s)))
                        rhs = s.scale(n) if (i == j and n == -m) else State.zero(rank)
                        rep.record((gr(i), gr(j), gr(n), gr(m), gr(bi)), lhs, rhs)
    return [("brackets", rep)]


def suite_virasoro(scn: Scenario) -> list[Case]:
    rng = random.Random(f"{scn.seed}:virasoro")
    rank = scn.rank
    rep = _algebra_report("virasoro_brackets",
                          f"weight<={scn.max_weight}, |m|,|n|<=3")
    labs = [zero_label(rank)] + sample_labels(scn, rng, 2)
    for li_, lab in enumerate(labs):
        for bi, bm in enumerate(basis_monomials(rank, min(scn.max_weight, 3), lab)):
            s = State.of(bm)
            for m in range(-3, 4):
                for n in range(-3, 4):
                    lhs = (virasoro_mode(m, virasoro_mode(n, s))
                           - virasoro_mode(n, virasoro_mode(m, s)))
                    rhs = virasoro_mode(m + n, s).scale(m - n)
                    if m == -n:
                        rhs = rhs + s.scale(Fraction(rank * (m ** 3 - m), 12))
                    rep.record((gr(li_), gr(bi), gr(m), gr(n)), lhs, rhs)
    return [("brackets", rep)]


def suite_intertwiner_props(scn: Scenario) -> list[Case]:
    rng = random.Random(f"{scn.seed}:intertwiner-props")
    rank = scn.rank
    cs = scn.cocycle()
    r = scn.radius("intertwiner-props")
    cases: list[Case] = []
    u = State.of(monomial(zero_label(rank), ((1, 1), (1, 1))))
    pool = sample_labels(scn, rng, 3 * scn.pairs)
    for idx in range(scn.pairs):
        alpha, beta, gamma = pool[3 * idx:3 * idx + 3]
        s = State.vacuum(rank, gamma)
        tag = f"pair{idx:03d}"
        cases.append((f"{tag}/ypm_commutation",
                      verify_ypm_commutation(alpha, beta, s, r, r, scn.cutoff)))
        cases.append((f"{tag}/y_conj_minus",
                      verify_y_conj_minus(alpha, u, s, (-r, r), min(r, 2), scn.cutoff)))
        cases.append((f"{tag}/y_conj_plus",
                      verify_y_conj_plus(alpha, u, s, r, (-r, r), scn.cutoff)))
        cases.append((f"{tag}/yy_conj",
                      verify_yy_conj(alpha, u, s, min(r, 2), (-r, r), scn.cutoff)))
        cases.append((f"{tag}/shift_conj_lminus",
                      verify_shift_conj_lminus(alpha, s, r, scn.cutoff)))
        cases.append((f"{tag}/shift_conj_lplus",
                      verify_shift_conj_lplus(alpha, State.of(
                          monomial(gamma, ((1, 1),))))))
        cases.append((f"{tag}/shift_conj_vertex",
                      verify_shift_conj_vertex(alpha, u, s, (-r, r))))
        spec = IntertwinerSpec(head_state(scn, ((1, -1),), alpha), cs)
        cases.append((f"{tag}/e_conjugation",
                      verify_e_conjugation(spec, beta, s, r, scn.cutoff)))
        cases.append((f"{tag}/translation",
                      verify_translation(spec, s, r, scn.cutoff)))
        cases.append((f"{tag}/creativity", verify_creativity(spec, scn.cutoff)))
    return cases


def suite_jacobi(scn: Scenario) -> list[Case]:
    rank = scn.rank
    cs = scn.cocycle()
    r = scn.radius("jacobi")
    cases: list[Case] = []
    for inst, (astr, bstr, gstr) in enumerate(scn.jacobi_instances):
        alpha = label([astr] + ["0"] * (rank - 1))
        beta = label([bstr] + ["0"] * (rank - 1))
        gamma = label([gstr] + ["0"] * (rank - 1))
        s = State.vacuum(rank, gamma)
        for hi_, hx in enumerate(scn.heads):
            for hj, hy in enumerate(scn.heads):
                x = IntertwinerSpec(head_state(scn, hx, alpha), cs)
                y = IntertwinerSpec(head_state(scn, hy, beta), cs)
                rep = verify_generalized_jacobi(x, y, s, r, scn.n_branch, scn.cutoff)
                cases.append((f"inst{inst}/heads{hi_}{hj}", rep))
    u = State.of(monomial(zero_label(rank), ((1, 1),)))
    alpha = label([scn.jacobi_instances[0][0]] + ["0"] * (rank - 1))
    w = IntertwinerSpec(State.vacuum(rank, alpha), cs)
    s0 = State.vacuum(rank, label([scn.jacobi_instances[0][1]] + ["0"] * (rank - 1)))
    cases.append(("commutator", verify_commutator(u, w, 1, s0, min(r, 2), scn.cutoff)))
    cases.append(("normal_order", verify_normal_order(u, w, s0, min(r, 2), scn.cutoff)))
    cases.append(("locality", verify_locality(u, w, s0, 1, min(r, 2), min(r, 2),
                                              scn.cutoff)))
    cases.append(("associativity", verify_associativity(u, w, s0, 1, min(r, 2),
                                                        min(r, 2), scn.cutoff)))
    if scn.negative_controls:
        bad = scn.cocycle(corruption=gr(1))
        xb = IntertwinerSpec(State.vacuum(rank, alpha), bad)
        yb = IntertwinerSpec(
            State.vacuum(rank, label([scn.jacobi_instances[0][1]] + ["0"] * (rank - 1))), bad)
        rep = verify_generalized_jacobi(xb, yb, s0, 1, scn.n_branch, scn.cutoff,
                                        expected_failure=True)
        cases.append(("negative/corrupt_cocycle", rep))
    return cases


def suite_locality(scn: Scenario) -> list[Case]:
    rank = scn.rank
    cs = scn.cocycle()
    r = min(scn.radius("locality"), 2)
    alpha = label(["1/2"] + ["0"] * (rank - 1))
    beta = label(["1/3"] + ["0"] * (rank - 1))
    u = State.of(monomial(zero_label(rank), ((1, 1),)))
    w = IntertwinerSpec(State.vacuum(rank, alpha), cs)
    s = State.vacuum(rank, beta)
    cases = [("adequate_m", verify_locality(u, w, s, 1, r, r, scn.cutoff))]
    if scn.negative_controls:
        cases.append(("negative/undersized_m",
                      verify_locality(u, w, s, 0, r, r, scn.cutoff,
                                      expected_failure=True)))
    return cases


def suite_skew(scn: Scenario) -> list[Case]:
    rng = random.Random(f"{scn.seed}:skew")
    rank = scn.rank
    cs = scn.cocycle()
    r = scn.radius("skew")
    cases: list[Case] = []
    pairs = []
    for astr, bstr, _ in scn.jacobi_instances:
        pairs.append((label([astr] + ["0"] * (rank - 1)),
                      label([bstr] + ["0"] * (rank - 1))))
    pool = sample_labels(scn, rng, 2 * scn.pairs)
    while len(pairs) < scn.pairs:
        k = len(pairs)
        pairs.append((pool[2 * k], pool[2 * k + 1]))
    for idx, (alpha, beta) in enumerate(pairs[:scn.pairs]):
        for hx in scn.heads[:2]:
            x = IntertwinerSpec(head_state(scn, hx, alpha), cs)
            y = State.vacuum(rank, beta)
            verdicts = []
            for n_branch in (1, 3):
                rep = verify_skew_symmetry(x, y, r, n_branch, scn.cutoff)
                verdicts.append(rep.verdict)
                cases.append((f"pair{idx:03d}/N{n_branch}", rep))
            agree = _algebra_report(f"skew_branch_agreement_{idx}", "N in {1,3}")
            agree.record((gr(idx),), as_scalar(int(verdicts[0])),
                         as_scalar(int(verdicts[1])),
                         note="verdict must not depend on the branch")
            cases.append((f"pair{idx:03d}/branch_agreement", agree))
    return cases


def suite_form(scn: Scenario) -> list[Case]:
    rng = random.Random(f"{scn.seed}:form")
    rank = scn.rank
    cs = scn.cocycle()
    cfg = FormConfig(scn.n_branch, cs)
    cases: list[Case] = []
    rep = _algebra_report("gram_slices", "weight<=3")
    for bstr in ("0", "1/2", "1/3*i"):
        beta = label([bstr] + ["0"] * (rank - 1))
        val = gram(State.vacuum(rank, beta), State.vacuum(rank, -beta), cfg)
        rep.record((gr(bstr), gr(-1)), val,
                   cs.epsilon(beta, -beta) * lam_pow(-beta.norm2()),
                   note="vacuum pairing")
        for k in range(0, 4):
            rows, cols, mat = gram_matrix(beta, k, cfg)
            _, _, tmat = gram_matrix(-beta, k, cfg)
            sym = all(mat[i][j] == tmat[j][i]
                      for i in range(len(rows)) for j in range(len(cols)))
            det = det_scalar(mat)
            rep.record((gr(bstr), gr(k)),
                       as_scalar(int(sym and det.is_monomial)), as_scalar(1),
                       note=f"symmetric slice with unit determinant, dim {len(rows)}")
    cases.append(("gram", rep))
    for idx in range(max(1, scn.pairs // 2)):
        alpha, beta = sample_labels(scn, rng, 2)
        gamma = -(alpha + beta)
        x = IntertwinerSpec(State.vacuum(rank, alpha), cs)
        y = State.vacuum(rank, beta)
        t = apply_mode(1, -1, State.vacuum(rank, gamma))
        cases.append((f"invariance{idx:03d}",
                      verify_invariance(x, y, t, cfg, min(scn.radius("form"), 2),
                                        scn.cutoff)))
    return cases


def _twist_of(lat, entry):
    """A twist config entry: one GaussRat string or a coordinate tuple."""
    coords = list(entry) if isinstance(entry, (list, tuple)) \
        else [entry] + ["0"] * (lat.rank - 1)
    return twist(lat, coords)


def suite_lattice_twist(scn: Scenario) -> list[Case]:
    lat = integral_lattice(scn.gram, scn.embedding)
    cs = lattice_cocycle(lat)
    cases: list[Case] = []
    r = scn.radius("lattice-twist")
    e1 = [1] + [0] * (lat.rank - 1)
    for tstr in scn.twists:
        td = _twist_of(lat, tstr)
        tag = f"alpha={tstr}"
        x = State.vacuum(lat.heis_rank, lat.label_of(e1))
        s = State.vacuum(lat.heis_rank, td.alpha)
        cases.append((f"{tag}/twisted_jacobi",
                      verify_twisted_jacobi(td, x, x, s, r, scn.cutoff, cs)))
        cases.append((f"{tag}/li_equivalence",
                      verify_li_equivalence(td, x, State.vacuum(lat.heis_rank),
                                            2, scn.cutoff, cs)))
        cases.append((f"{tag}/grading", verify_twist_grading(td, 3)))
        rep = _algebra_report(f"shifted_virasoro[{tstr}]",
                              "weight<=4, |m|,|n|<=3")
        c_a = shifted_central_charge(td)
        basis = basis_monomials(lat.heis_rank, min(scn.max_weight, 4),
                                lat.label_of(e1))
        for bi, bm in enumerate(basis):
            st = State.of(bm)
            low = (shifted_virasoro(td, 0, st)
                   - st.scale(c_a / 24))
            rig = (twisted_virasoro_mode(td, 0, st)
                   - st.scale(Fraction(lat.heis_rank, 24)))
            rep.record((gr(bi), gr(0)), low, rig, note="normalized grading match")
        for m in range(-3, 4):
            for n in range(-3, 4):
                st = State.of(basis[0])
                lhs = (shifted_virasoro(td, m, shifted_virasoro(td, n, st))
                       - shifted_virasoro(td, n, shifted_virasoro(td, m, st)))
                rhs = shifted_virasoro(td, m + n, st).scale(m - n)
                if m == -n:
                    rhs = rhs + st.scale(c_a * Fraction(m ** 3 - m, 12))
                rep.record((gr(m), gr(n)), lhs, rhs)
        cases.append((f"{tag}/shifted_virasoro", rep))
    return cases


def suite_dlm(scn: Scenario) -> list[Case]:
    lat = integral_lattice(scn.gram, scn.embedding)
    cs = lattice_cocycle(lat)
    r = min(scn.radius("dlm"), 2)
    e1 = [1] + [0] * (lat.rank - 1)
    td1 = _twist_of(lat, scn.twists[0])
    td2 = _twist_of(lat, scn.twists[-1])
    x = State.vacuum(lat.heis_rank, td1.alpha + lat.label_of(e1))
    y = State.vacuum(lat.heis_rank, td2.alpha + lat.label_of(e1))
    s = State.vacuum(lat.heis_rank)
    cases: list[Case] = []
    for variant in ("delta", "hat"):
        rep = verify_dlm_jacobi(td1, td2, zero_label(lat.heis_rank), x, y, s,
                                variant, scn.n_branch, r, scn.cutoff, cs)
        cases.append((f"{variant}", rep))
    return cases


SUITE_RUNNERS = {
    "heisenberg": suite_heisenberg,
    "virasoro": suite_virasoro,
    "intertwiner-props": suite_intertwiner_props,
    "jacobi": suite_jacobi,
    "skew": suite_skew,
    "form": suite_form,
    "lattice-twist": suite_lattice_twist,
    "dlm": suite_dlm,
    "locality": suite_locality,
}


def run_suites(scn: Scenario) -> dict[str, list[Case]]:
    """Run the selected suites concurrently; assembly stays ordered."""
    selected = sorted(set(scn.suites))
    with ThreadPoolExecutor(max_workers=max(1, len(selected))) as pool:
        futures = {name: pool.submit(SUITE_RUNNERS[name], scn)
                   for name in selected}
        return {name: futures[name].result() for name in selected}


def render_report(scn: Scenario, results: dict[str, list[Case]],
                  config_text: str) -> tuple[str, int]:
    """The report text and the exit status."""
    digest = hashlib.sha256(config_text.encode()).hexdigest()[:16]
    header = [
        "# heisvoa verification report",
        f"# generated: {datetime.datetime.now(datetime.timezone.utc).isoformat()}",
    ]
    body = [
        f"config-digest: {digest}",
        f"rank: {scn.rank}  cutoff: {scn.cutoff}  window: {scn.window}  "
        f"branch-N: {scn.n_branch}  seed: {scn.seed}",
        f"suites: {', '.join(sorted(set(scn.suites)))}",
        "",
    ]
    totals = {"checked": 0, "failed": 0, "skipped": 0}
    outcomes: list[str] = []
    for suite in sorted(results):
        for idx, (case_name, rep) in enumerate(results[suite]):
            body.append(f"suite {suite} case {idx:03d} {case_name}")
            body.extend("  " + ln for ln in rep.to_lines())
            totals["checked"] += len(rep.checked)
            totals["failed"] += len(rep.failures) if rep.outcome in ("FAIL", "XPASS") else 0
            totals["skipped"] += len(rep.skipped)
            outcomes.append(rep.outcome)
            body.append("")
    n_fail = sum(o in ("FAIL", "XPASS") for o in outcomes)
    n_starved = sum(o == "STARVED" for o in outcomes)
    n_xfail = sum(o == "XFAIL" for o in outcomes)
    body.append(f"summary: cases={len(outcomes)} checked={totals['checked']} "
                f"failing-cases={n_fail} designed-failures={n_xfail} "
                f"starved={n_starved} skipped-coefficients={totals['skipped']}")
    if n_fail:
        status = 1
    elif n_starved:
        status = 3
    else:
        status = 0
    body.append(f"verdict: {'PASS' if status == 0 else 'FAIL'}")
    return "\n".join(header + body) + "\n", status


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="heisvoa",
                                     description="exact identity verification "
                                                 "for free-boson intertwiners")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites from a config")
    v.add_argument("config")
    v.add_argument("--suite", action="append", default=None,
                   help="suite name, repeatable (default: config selection)")
    v.add_argument("--window", type=int, default=None)
    v.add_argument("--cutoff", type=int, default=None)
    v.add_argument("--branch-N", type=int, dest="n_branch", default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--report", default=None, help="report file (default stdout)")
    args = parser.parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config_text = fh.read()
        data = json.loads(config_text)
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        for key in ("suite", "window", "cutoff", "n_branch", "seed"):
            val = getattr(args, key if key != "suite" else "suite")
            if val is not None:
                data["suites" if key == "suite" else key] = val
        scn = Scenario.from_dict(data)
    except (OSError, json.JSONDecodeError, ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        results = run_suites(scn)
    except WindowError as exc:
        print(f"window starvation: {exc}", file=sys.stderr)
        return 3
    text, status = render_report(scn, results, config_text)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
