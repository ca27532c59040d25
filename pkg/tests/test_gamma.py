import math
import random
from fractions import Fraction as F

import pytest

from clustermaps.arith import PosReal
from clustermaps.gamma import (
    DIVERGES,
    LINE_OF_FIXED,
    TO_FIXED,
    TO_ORIGIN,
    EmptyLevelSet,
    MonomialMap,
    UnsupportedK,
    apply,
    classify_parabolic,
    classify_trace_form,
    compose,
    first_integral,
    gamma_element,
    integral_sign,
    level_set_points,
    normal_form,
    parabolic_form,
    parabolic_iterate,
    reversing_symmetry_holds,
    to_affine_log,
    trace_form,
)


def random_fraction(rng, hi=9):
    return F(rng.randint(1, hi), rng.randint(1, hi))


def random_point(rng, hi=9):
    return (random_fraction(rng, hi), random_fraction(rng, hi))


def random_gamma_element(rng, with_scales=True):
    while True:
        a, b, c, d = (rng.randint(-5, 5) for _ in range(4))
        if a * d - b * c == 1:
            break
    if with_scales:
        return gamma_element(a, b, c, d, random_fraction(rng), random_fraction(rng))
    return gamma_element(a, b, c, d)


def random_g_element(rng):
    """Determinant +-1 conjugator with rational scales."""
    while True:
        a, b, c, d = (rng.randint(-4, 4) for _ in range(4))
        if abs(a * d - b * c) == 1:
            return MonomialMap.make(a, b, c, d, random_fraction(rng), random_fraction(rng))


def points_equal(p, q):
    return p[0] == q[0] and p[1] == q[1]


# === group structure ===

def test_apply_examples():
    f0 = gamma_element(0, 1, -1, 0)  # the 4-periodic plane map
    assert points_equal(apply(f0, (F(2), F(3))), (3, F(1, 2)))
    sigma = MonomialMap.swap()
    assert sigma.det == -1
    assert points_equal(sigma((F(2), F(3))), (3, 2))
    bar2 = gamma_element(0, 1, -1, 2, 1, 2)
    assert points_equal(bar2((F(1), F(1))), (1, 2))


def test_compose_identity_and_inverse():
    rng = random.Random(30)
    ident = MonomialMap.identity()
    for _ in range(50):
        g = random_gamma_element(rng)
        assert compose(ident, g) == g
        assert compose(g, g.inverse()) == ident
        assert compose(g.inverse(), g) == ident


def test_compose_matches_pointwise_application():
    rng = random.Random(31)
    for _ in range(50):
        f = random_gamma_element(rng)
        g = random_gamma_element(rng)
        p = random_point(rng)
        assert points_equal(compose(f, g)(p), f(g(p)))


def test_inverse_requires_unimodular():
    with pytest.raises(ValueError):
        MonomialMap.make(2, 0, 0, 1).inverse()


def test_log_homomorphism():
    rng = random.Random(32)
    for _ in range(50):
        f = random_gamma_element(rng)
        g = random_gamma_element(rng)
        (mf, vf) = to_affine_log(f)
        (mg, vg) = to_affine_log(g)
        (mh, vh) = to_affine_log(compose(f, g))
        assert mh == tuple(
            tuple(sum(mf[i][t] * mg[t][j] for t in range(2)) for j in range(2))
            for i in range(2)
        )
        assert abs(vh[0] - (vf[0] + mf[0][0] * vg[0] + mf[0][1] * vg[1])) < 1e-12
        assert abs(vh[1] - (vf[1] + mf[1][0] * vg[0] + mf[1][1] * vg[1])) < 1e-12


def test_float_mode_application():
    bar2 = gamma_element(0, 1, -1, 2, 1, 2)
    x, y = bar2((1.0, 1.0))
    assert (x, y) == (1.0, 2.0)


# === normal forms ===

def conjugacy_holds(f, rng, samples=4):
    nf, h = normal_form(f)
    g = nf.as_map()
    for _ in range(samples):
        p = random_point(rng)
        if not points_equal(h(f(p)), g(h(p))):
            return False
    return True


def test_normal_form_of_restriction_maps():
    rng = random.Random(33)
    bar2 = gamma_element(0, 1, -1, 2, 1, 2)
    nf, h = normal_form(bar2)
    assert nf.kind == "parabolic" and nf.xi == 2
    assert h == MonomialMap.identity()  # already in normal form

    lam = F(7, 2)
    tilde2 = gamma_element(-1, 2, -2, 3, lam, lam**3)
    nf, _ = normal_form(tilde2)
    assert nf.kind == "parabolic" and nf.xi == PosReal.from_rational(lam**4)
    assert conjugacy_holds(tilde2, rng)

    for r in (1, 3, 4, 5):
        bar_r = gamma_element(0, 1, -1, r, 1, 2)
        nf, h = normal_form(bar_r)
        assert nf.kind == "trace" and nf.k == r
        # conjugator is the scaling by 2^(1/(r-2))
        expected = PosReal({2: F(1, r - 2)})
        assert h.alpha == expected and h.beta == expected
        assert (h.a, h.b, h.c, h.d) == (1, 0, 0, 1)
        assert conjugacy_holds(bar_r, rng)


def test_normal_form_of_fourth_iterate_restrictions():
    rng = random.Random(34)
    for r in (1, 3, 4, 5):
        m = r * r
        lam = random_fraction(rng)
        tilde_r = gamma_element(
            -1, m - 2, -(m - 2), (m - 3) * (m - 1), lam, lam ** (m - 1)
        )
        nf, _ = normal_form(tilde_r)
        assert nf.kind == "trace" and nf.k == (m - 2) ** 2 - 2
        assert conjugacy_holds(tilde_r, rng)


def test_normal_form_torus_and_swap_branches():
    rng = random.Random(35)
    plus = gamma_element(1, 0, 0, 1, F(2), F(3))
    nf, h = normal_form(plus)
    assert nf.kind == "torus" and nf.sign == 1
    assert h == MonomialMap.identity()

    minus = gamma_element(-1, 0, 0, -1, F(2), F(3))
    nf, _ = normal_form(minus)
    assert nf.kind == "torus" and nf.sign == -1
    # globally 2-periodic
    p = random_point(rng)
    assert points_equal(minus(minus(p)), p)

    c0 = gamma_element(1, 3, 0, 1, F(2), F(5))  # c = 0, b != 0, trace 2
    nf, h = normal_form(c0)
    assert nf.kind == "parabolic" and nf.xi == PosReal.from_rational(F(5) ** 3)
    assert conjugacy_holds(c0, rng)


def test_normal_form_random_conjugacy_exact():
    rng = random.Random(36)
    for _ in range(200):
        f = random_gamma_element(rng)
        assert conjugacy_holds(f, rng, samples=3)


def test_trace_preserved_and_xi_invariant_under_sl_conjugation():
    rng = random.Random(37)
    found = 0
    while found < 25:
        g = random_gamma_element(rng)
        f = random_gamma_element(rng)
        if f.trace != 2 or (f.b == 0 and f.c == 0):
            continue
        conj = compose(compose(g, f), g.inverse())
        assert conj.trace == f.trace
        nf_f, _ = normal_form(f)
        nf_c, _ = normal_form(conj)
        assert nf_c.kind == "parabolic"
        assert nf_c.xi == nf_f.xi
        found += 1


def test_xi_inverts_at_worst_under_full_g_conjugation():
    # determinant -1 conjugators may invert the parabolic parameter
    rng = random.Random(38)
    found = 0
    while found < 25:
        g = random_g_element(rng)
        f = random_gamma_element(rng)
        if f.trace != 2 or (f.b == 0 and f.c == 0):
            continue
        conj = compose(compose(g, f), g.inverse())
        nf_f, _ = normal_form(f)
        nf_c, _ = normal_form(conj)
        assert nf_c.xi in (nf_f.xi, nf_f.xi ** -1)
        found += 1


# === first integral ===

def test_first_integral_examples():
    assert first_integral(0, (F(1), F(1))) == 0.0
    assert first_integral(7, (F(1), F(1))) == 0.0
    expected = math.log(2) ** 2 - 3 * math.log(2) * math.log(3) + math.log(3) ** 2
    assert abs(first_integral(3, (F(2), F(3))) - expected) < 1e-15
    assert abs(expected - -0.5971) < 1e-4


@pytest.mark.parametrize("k", [-1, 0, 1, 3, 7, 14])
def test_first_integral_conserved(k):
    rng = random.Random(900 + k)
    fk = trace_form(k)
    for _ in range(50):
        p = random_point(rng)
        assert abs(first_integral(k, fk(p)) - first_integral(k, p)) < 1e-12


def test_integral_sign_exact_cases():
    one = PosReal.one()
    assert integral_sign(3, one, one) == 0
    assert integral_sign(3, PosReal.from_rational(2), one) == 1
    # proportional vectors: x = 2, y = 4 -> t = 2, 1 - 2k + 4
    assert integral_sign(3, PosReal.from_rational(2), PosReal.from_rational(4)) == -1
    assert integral_sign(7, PosReal.from_rational(F(1, 2)), PosReal.from_rational(F(1, 2))) == -1
    # independent vectors decided by interval refinement
    assert integral_sign(3, PosReal.from_rational(2), PosReal.from_rational(3)) == -1
    assert integral_sign(14, PosReal.from_rational(2), PosReal.from_rational(3)) == -1
    assert integral_sign(3, PosReal.from_rational(5), PosReal.from_rational(3)) == 1


# === trace-form dynamics ===

def test_classify_trace_form_periodic():
    rng = random.Random(40)
    for k, period in ((-1, 3), (0, 4), (1, 6)):
        fk = trace_form(k)
        assert classify_trace_form(k, (F(1), F(1))).period == 1
        for _ in range(30):
            p = random_point(rng)
            verdict = classify_trace_form(k, p)
            expected_period = 1 if p == (1, 1) else period
            assert verdict.kind == "periodic" and verdict.period == expected_period
            q = fk.iterate(p, verdict.period)
            assert points_equal(q, p)
            if verdict.period > 1:
                for m in range(1, verdict.period):
                    assert not points_equal(fk.iterate(p, m), p)


def test_classify_trace_form_examples():
    assert classify_trace_form(-1, (F(2), F(3))).period == 3
    assert classify_trace_form(7, (F(1), F(1))) == TO_FIXED
    assert classify_trace_form(7, (F(1, 2), F(1, 2))) == TO_ORIGIN
    assert classify_trace_form(3, (F(2), F(3))) == DIVERGES


def test_classify_trace_form_rejects_out_of_range():
    with pytest.raises(UnsupportedK):
        classify_trace_form(2, (F(1), F(1)))
    with pytest.raises(UnsupportedK):
        classify_trace_form(-2, (F(1), F(1)))


# === parabolic dynamics ===

def test_parabolic_iterate_examples():
    p = (F(1), F(1))
    assert parabolic_iterate(F(2), 0, p) == p
    assert parabolic_iterate(F(2), 2, p) == (2, 8)
    assert parabolic_iterate(F(1), 5, (F(3), F(3))) == (3, 3)


@pytest.mark.parametrize("xi", [F(2), F(1, 3), F(7, 5)])
def test_parabolic_closed_form_equals_composition(xi):
    rng = random.Random(41)
    f = parabolic_form(xi)
    for _ in range(10):
        p = random_point(rng)
        q = p
        for n in range(21):
            closed = parabolic_iterate(xi, n, p)
            assert points_equal(closed, q)
            q = f(q)


def test_parabolic_closed_form_posreal_coefficient():
    xi = PosReal({2: F(1, 2)})  # sqrt(2)
    f = parabolic_form(xi)
    p = (F(1), F(2))
    q = p
    for n in range(11):
        assert points_equal(parabolic_iterate(xi, n, p), q)
        q = f(q)


def test_classify_parabolic():
    assert classify_parabolic(F(2), (F(5), F(1))) == DIVERGES
    assert classify_parabolic(F(1), (F(2), F(2))) == LINE_OF_FIXED
    assert classify_parabolic(F(1), (F(3), F(2))) == TO_ORIGIN
    assert classify_parabolic(F(1), (F(2), F(3))) == DIVERGES
    assert classify_parabolic(F(1, 2), (F(5), F(1))) == TO_ORIGIN


# === reversing symmetry ===

def test_reversing_symmetry():
    rng = random.Random(42)
    for k in (-1, 0, 1, 3, 7):
        fk = trace_form(k)
        for _ in range(100):
            assert reversing_symmetry_holds(fk, random_point(rng))
    assert reversing_symmetry_holds(parabolic_form(F(2)), (F(1), F(4)))
    f3 = trace_form(3)
    p = (F(2), F(3))
    sigma = MonomialMap.swap()
    assert points_equal(sigma(f3(sigma(p))), f3.inverse()(p))


# === level sets ===

def test_level_set_circle():
    pts = level_set_points(0, 1.0, 32)
    for x, y in pts:
        assert abs(math.log(x) ** 2 + math.log(y) ** 2 - 1.0) < 1e-9


def test_level_set_zero_set_slopes():
    pts = level_set_points(3, 0.0, 16)
    slopes = {round(math.log(y) / math.log(x), 9) for x, y in pts if abs(math.log(x)) > 1e-9}
    golden = {round((3 - math.sqrt(5)) / 2, 9), round((3 + math.sqrt(5)) / 2, 9)}
    assert slopes <= golden and slopes


def test_level_set_residuals():
    pts = level_set_points(1, 1.0, 24)
    for x, y in pts:
        assert abs(first_integral(1, (x, y)) - 1.0) < 1e-9


def test_level_set_empty():
    with pytest.raises(EmptyLevelSet):
        level_set_points(0, -1.0, 4)
