import random
from fractions import Fraction

import pytest

from heisvoa.fock import (
    State,
    apply_mode,
    label,
    monomial,
    vertex_mode,
    zero_label,
)
from heisvoa.intertwiner import (
    CocycleSystem,
    IntertwinerOp,
    IntertwinerSpec,
    apply_Delta,
    apply_Ypm,
    apply_e,
    apply_e_inverse,
    commutator_C,
    epsilon,
    intertwine,
    standard_cocycle,
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
from heisvoa.scalars import S_ONE, as_scalar, gr, zeta_pow
from heisvoa.series import CosetError, WindowError, series_derive, series_mul


def rand_label(rng, rank=1, den=3, num=3):
    return label([gr(Fraction(rng.randint(-num, num), rng.randint(1, den)),
                     Fraction(rng.randint(-num, num), rng.randint(1, den)))
                  for _ in range(rank)])


def generic_cocycle(rank, diagonal_fix=False):
    f = tuple(tuple(gr(Fraction(1, 2)) if i > j else gr(0) for j in range(rank))
              for i in range(rank))
    g = tuple(tuple(gr(Fraction(1, 3)) if i < j else gr(0) for j in range(rank))
              for i in range(rank))
    return CocycleSystem(rank, f, g, diagonal_fix)


def test_epsilon_examples():
    cs = generic_cocycle(2)
    a = label(["1/2", "-1/3*i"])
    zero = zero_label(2)
    assert epsilon(cs, a, zero).is_one
    assert epsilon(cs, zero, a).is_one

    rng = random.Random(3)
    fixed = generic_cocycle(2, diagonal_fix=True)
    for _ in range(25):
        b = rand_label(rng, 2)
        assert epsilon(fixed, b, -b).is_one

    # rank 2 with C(a,b) = zeta^(a1 b2 - a2 b1)
    g = (("0", "1/2"), ("-1/2", "0"))
    cs2 = CocycleSystem(2, tuple(tuple(gr(0) for _ in range(2)) for _ in range(2)),
                        tuple(tuple(gr(v) for v in row) for row in g))
    e1, e2 = label(["1", "0"]), label(["0", "1"])
    assert commutator_C(cs2, e1, e2) == zeta_pow(1)


def test_commutator_properties():
    cs = generic_cocycle(2)
    rng = random.Random(9)
    for _ in range(20):
        a, b, c = (rand_label(rng, 2) for _ in range(3))
        assert commutator_C(cs, a, a).is_one
        assert commutator_C(cs, a, -a).is_one
        assert commutator_C(cs, a + b, c) == commutator_C(cs, a, c) * commutator_C(cs, b, c)
        assert commutator_C(cs, a, b + c) == commutator_C(cs, a, b) * commutator_C(cs, a, c)
        assert commutator_C(cs, a, b) == commutator_C(cs, b, a).inverse()


def test_diagonal_fix_keeps_commutator():
    plain = generic_cocycle(2)
    fixed = generic_cocycle(2, diagonal_fix=True)
    rng = random.Random(17)
    for _ in range(20):
        a, b = rand_label(rng, 2), rand_label(rng, 2)
        assert commutator_C(plain, a, b) == commutator_C(fixed, a, b)


def test_corrupted_cocycle_breaks_associativity():
    base = generic_cocycle(1)
    bad = CocycleSystem(1, base.f, base.g, corruption=gr(1))
    a, b, c = label(["1/2"]), label(["1/3"]), label(["-1/4"])
    lhs = bad.epsilon(a, b) * bad.epsilon(a + b, c)
    rhs = bad.epsilon(b, c) * bad.epsilon(a, b + c)
    assert lhs != rhs
    assert bad.epsilon(a, zero_label(1)).is_one
    good_lhs = base.epsilon(a, b) * base.epsilon(a + b, c)
    good_rhs = base.epsilon(b, c) * base.epsilon(a, b + c)
    assert good_lhs == good_rhs


def test_apply_e_examples():
    cs = generic_cocycle(2)
    a = label(["1/2", "i"])
    b = label(["-1/3", "2"])
    vac = State.vacuum(2)
    assert apply_e(cs, a, vac) == State.vacuum(2, a)
    s = State.vacuum(2, b).scale(as_scalar(gr("1/5", "1")))
    lhs = apply_e(cs, a, apply_e(cs, b, s))
    rhs = apply_e(cs, a + b, s).scale(epsilon(cs, a, b))
    assert lhs == rhs
    swapped = apply_e(cs, b, apply_e(cs, a, s)).scale(commutator_C(cs, a, b))
    assert lhs == swapped
    assert apply_e_inverse(cs, a, apply_e(cs, a, s)) == s


def test_ypm_examples():
    alpha = label(["2/3"])
    beta = label(["-1/2", "1/5"])
    vb = State.vacuum(1, label(["-1/2"]))
    plus = apply_Ypm(alpha, 1, vb, order=0)
    assert plus.coefficient(0) == vb
    assert plus.coefficient(-1).is_zero  # positive modes kill the highest vector

    one = State.vacuum(1)
    minus = apply_Ypm(alpha, -1, one, order=2)
    a1 = apply_mode(1, -1, one)
    assert minus.coefficient(0) == one
    assert minus.coefficient(1) == a1.scale(gr("2/3"))
    expect2 = (apply_mode(1, -1, a1).scale(gr("2/3") * gr("2/3") * Fraction(1, 2))
               + apply_mode(1, -2, one).scale(gr("2/3") * Fraction(1, 2)))
    assert minus.coefficient(2) == expect2

    with pytest.raises(WindowError):
        apply_Ypm(alpha, -1, one, order=5, cutoff=3)


def test_ypm_commutation_identity():
    rng = random.Random(41)
    for rank in (1, 2):
        for _ in range(3):
            a, b = rand_label(rng, rank), rand_label(rng, rank)
            s = State.vacuum(rank, rand_label(rng, rank))
            rep = verify_ypm_commutation(a, b, s, r1=3, r2=3)
            assert rep.verdict, rep.failures_detail


def test_delta_examples():
    beta = label(["1/2", "-1/3"])
    mu = label(["1", "1/5"])
    vac_mu = State.vacuum(2, mu)
    d = apply_Delta(beta, vac_mu)
    assert d.offset == beta.dot(mu)
    assert d.coefficient_at(beta.dot(mu)) == vac_mu

    zero = zero_label(2)
    s = State.of(monomial(zero, ((1, 1), (2, 2))))
    assert apply_Delta(zero, s).coefficient_at(gr(0)) == s

    b1 = label(["1/2"])
    t = apply_mode(1, -1, State.vacuum(1))
    d2 = apply_Delta(b1, t)
    assert d2.coefficient_at(gr(0)) == t
    assert d2.coefficient_at(gr(-1)) == State.vacuum(1).scale(gr("1/2"))


def test_delta_dressing_reproduces_shifted_zero_modes():
    # Y(Delta(alpha,z) a, z) must have modes a(n) + alpha delta_{n,0}
    alpha = label(["1/2"])
    cs = standard_cocycle(1)
    a = apply_mode(1, -1, State.vacuum(1))
    s = State.of(monomial(zero_label(1), ((1, 2),)))
    d = apply_Delta(alpha, a)
    for n in range(-3, 3):
        acc = State.zero(1)
        for idx in d.support():
            op = IntertwinerOp(IntertwinerSpec(d.coeffs[idx], cs))
            acc = acc + op.coefficient(s, gr(-n - 1 - idx))
        expect = apply_mode(1, n, s)
        if n == 0:
            expect = expect + s.scale(gr("1/2"))
        assert acc == expect, n


def test_intertwine_vacuum_head_series():
    cs = generic_cocycle(1)
    alpha, beta = label(["1/2"]), label(["1/3"])
    x = IntertwinerSpec(State.vacuum(1, alpha), cs)
    target = State.vacuum(1, beta)
    series = intertwine(x, target, hi=2)
    eps = epsilon(cs, alpha, beta)
    ab = alpha.dot(beta)
    out_lab = alpha + beta
    vac = State.vacuum(1, out_lab)
    assert series.coefficient_at(ab) == vac.scale(eps)
    assert series.coefficient_at(ab + 1) == apply_mode(1, -1, vac).scale(eps * gr("1/2"))
    third = (apply_mode(1, -1, apply_mode(1, -1, vac)).scale(Fraction(1, 8))
             + apply_mode(1, -2, vac).scale(Fraction(1, 4)))
    assert series.coefficient_at(ab + 2) == third.scale(eps)
    # reduces to the plain vertex operator at label zero
    y = IntertwinerSpec(State.of(monomial(zero_label(1), ((1, 1),))), cs)
    s = State.of(monomial(zero_label(1), ((1, 2),)))
    op = IntertwinerOp(y)
    for n in range(-3, 3):
        assert op.coefficient(s, gr(n)) == vertex_mode(y.head, -n - 1, s)


def test_intertwine_derivative_is_weight_one_head():
    # d/dz of the vacuum-head series equals the series of alpha.a|alpha>
    cs = standard_cocycle(1)
    alpha = label(["2/3"])
    x = IntertwinerSpec(State.vacuum(1, alpha), cs)
    one = State.vacuum(1)
    base = intertwine(x, one, hi=2)
    dx = IntertwinerSpec(apply_mode(1, -1, State.vacuum(1, alpha)).scale(gr("2/3")), cs)
    deriv = series_derive(base)
    other = intertwine(dx, one, hi=1)
    assert other == deriv


def test_series_mul_with_monomial_shift():
    # multiplying the creation series by a bare z^(a.b) monomial series
    from heisvoa.series import constant_series
    alpha, beta = label(["2/3"]), label(["1/5"])
    one = State.vacuum(1)
    left = apply_Ypm(alpha, -1, one, order=2)
    right = constant_series(S_ONE, as_scalar(0), offset=alpha.dot(beta), hi=2)
    prod = series_mul(right, left, mul=lambda c, s: s.scale(c))
    assert prod.offset == alpha.dot(beta)
    assert prod.coefficient(0) == one
    assert prod.coefficient(1) == apply_mode(1, -1, one).scale(gr("2/3"))


def test_creativity_report():
    cs = generic_cocycle(1)
    head = apply_mode(1, -2, State.vacuum(1, label(["1/2", ]))).scale(as_scalar(3))
    rep = verify_creativity(IntertwinerSpec(head, cs))
    assert rep.verdict, rep.failures_detail


def test_translation_report():
    cs = generic_cocycle(1)
    head = apply_mode(1, -1, State.vacuum(1, label(["1/2"])))
    rep = verify_translation(IntertwinerSpec(head, cs), State.vacuum(1, label(["1/3"])), hi=2)
    assert rep.verdict, rep.failures_detail


def test_e_conjugation_report():
    rng = random.Random(23)
    cs = generic_cocycle(1)
    for _ in range(3):
        alpha, beta, gamma = (rand_label(rng) for _ in range(3))
        head = apply_mode(1, -1, State.vacuum(1, alpha))
        rep = verify_e_conjugation(IntertwinerSpec(head, cs), beta,
                                   State.vacuum(1, gamma), hi=2)
        assert rep.verdict, rep.failures_detail


def test_prop_conjugation_identities():
    rng = random.Random(57)
    rank = 1
    u = State.of(monomial(zero_label(rank), ((1, 1), (1, 1))))
    for _ in range(2):
        alpha = rand_label(rng, rank)
        gamma = rand_label(rng, rank)
        s = State.vacuum(rank, gamma)
        rep = verify_y_conj_minus(alpha, u, s, w1=(-3, 2), r2=2)
        assert rep.verdict, "minus: " + rep.failures_detail
        rep = verify_y_conj_plus(alpha, u, s, r1=3, w2=(-3, 2))
        assert rep.verdict, "plus: " + rep.failures_detail
        rep = verify_yy_conj(alpha, u, s, r1=2, w2=(-2, 2))
        assert rep.verdict, "yy: " + rep.failures_detail


def test_shift_conjugation_identities():
    rng = random.Random(71)
    rank = 1
    for _ in range(2):
        alpha = rand_label(rng, rank)
        s = State.of(monomial(label(["1/3"]), ((1, 1),)))
        rep = verify_shift_conj_lminus(alpha, s, order=3, tau_order=None)
        assert rep.verdict, rep.failures_detail
        rep = verify_shift_conj_lplus(alpha, s, tau_order=None)
        assert rep.verdict, rep.failures_detail
        u = State.of(monomial(zero_label(rank), ((1, 2),)))
        rep = verify_shift_conj_vertex(alpha, u, s, window=(-3, 2), tau_order=None)
        assert rep.verdict, rep.failures_detail


def test_mixed_coset_target_rejected():
    cs = standard_cocycle(1)
    x = IntertwinerSpec(State.vacuum(1, label(["1/2"])), cs)
    mixed = State.vacuum(1, label(["1/3"])) + State.vacuum(1, label(["1/4"]))
    with pytest.raises(CosetError):
        IntertwinerOp(x).coefficient(mixed, gr("1/6"))


def test_prop_conjugation_identities_rank2():
    rng = random.Random(91)
    rank = 2
    u = State.of(monomial(zero_label(rank), ((1, 1), (2, 1))))
    alpha = rand_label(rng, rank)
    gamma = rand_label(rng, rank)
    s = State.vacuum(rank, gamma)
    rep = verify_y_conj_minus(alpha, u, s, w1=(-2, 2), r2=2)
    assert rep.verdict, rep.failures_detail
    rep = verify_y_conj_plus(alpha, u, s, r1=2, w2=(-2, 2))
    assert rep.verdict, rep.failures_detail
    rep = verify_yy_conj(alpha, u, s, r1=2, w2=(-2, 1))
    assert rep.verdict, rep.failures_detail
