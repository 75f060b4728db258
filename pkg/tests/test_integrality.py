import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fusioncheck import catalog as cat
from fusioncheck.criteria import invariant_In
from fusioncheck.integrality import (
    INCONCLUSIVE,
    NO,
    YES,
    J_ns,
    MinPolyResult,
    center_dims,
    frobenius_type_check,
    isaacs_check,
    isaacs_equivalence_check,
    lambda_s,
    minimal_polynomial,
    strongly_isaacs_check,
)
from fusioncheck.report import FAIL, PASS
from fusioncheck.spectra import character_table

from .conftest import COMMUTATIVE, TOL35, TOL40, spectrum_of


def mpq(ctx, s):
    s = Fraction(s)
    return ctx.mpf(s.numerator) / s.denominator


def ctx_at(bits):
    c = mpmath.MPContext()
    c.prec = bits
    return c


@pytest.mark.parametrize("bits", [256, 512])
def test_minpoly_worked_values(bits):
    ctx = ctx_at(bits)
    phi = minimal_polynomial((1 + ctx.sqrt(5)) / 2, 4, bits)
    assert phi.coefficients == (1, -1, -1) and phi.verdict == YES
    half = minimal_polynomial(ctx.mpf(1) / 2, 4, bits)
    assert half.coefficients == (2, -1) and half.verdict == NO
    three = minimal_polynomial(ctx.mpf(3), 4, bits)
    assert three.coefficients == (1, -3) and three.verdict == YES


def test_minpoly_string_and_props():
    r = MinPolyResult((1, -1, -1), None, YES)
    assert str(r) == "x**2 - x - 1" and r.degree == 2 and r.is_monic
    assert str(MinPolyResult((2, 0, -1), None, NO)) == "2*x**2 - 1"
    assert str(MinPolyResult((), None, INCONCLUSIVE)) == "none"


@given(p=st.integers(-50, 50), q=st.integers(1, 40))
def test_minpoly_rationals(p, q):
    g = math.gcd(p, q)
    p, q = p // g, q // g
    ctx = ctx_at(256)
    res = minimal_polynomial(ctx.mpf(p) / q, 3, 256)
    assert res.coefficients == (q, -p)
    assert res.verdict == (YES if q == 1 else NO)


def squarefree(c):
    return all(c % (k * k) for k in range(2, int(math.isqrt(c)) + 1))


@given(a=st.integers(-6, 6), b=st.integers(1, 5), c=st.integers(2, 30), halve=st.booleans())
def test_minpoly_quadratic_surds(a, b, c, halve):
    assume(squarefree(c))
    ctx = ctx_at(256)
    den = 2 if halve else 1
    v = (a + b * ctx.sqrt(c)) / den
    # exact oracle: (den x - a)^2 = b^2 c
    coeffs = [den * den, -2 * a * den, a * a - b * b * c]
    g = math.gcd(*coeffs)
    expected = tuple(x // g for x in coeffs)
    res = minimal_polynomial(v, 4, 256)
    assert res.coefficients == expected
    assert res.verdict == (YES if expected[0] == 1 else NO)


@given(a=st.integers(-3, 3), b=st.integers(-3, 3))
def test_minpoly_gaussian_and_cyclotomic(a, b):
    assume(b != 0)
    ctx = ctx_at(256)
    res = minimal_polynomial(ctx.mpc(a, b), 4, 256)
    assert res.coefficients == (1, -2 * a, a * a + b * b) and res.verdict == YES


@pytest.mark.parametrize("k", [5, 7, 8, 12])
def test_minpoly_matches_pslq_oracle(k):
    ctx = ctx_at(256)
    v = 2 * ctx.cos(2 * ctx.pi / k)
    res = minimal_polynomial(v, 6, 256)
    mpmath.mp.prec = 256
    try:
        oracle = mpmath.findpoly(mpmath.mpf(v), res.degree, maxcoeff=10**6)
    finally:
        mpmath.mp.prec = 53
    oracle = tuple(int(x) for x in oracle)
    if oracle[0] < 0:
        oracle = tuple(-x for x in oracle)
    assert res.coefficients == oracle and res.verdict == YES


def test_transcendental_is_inconclusive():
    ctx = ctx_at(256)
    assert minimal_polynomial(ctx.pi, 6, 256).verdict == INCONCLUSIVE
    assert minimal_polynomial(ctx.e + 100, 6, 256).verdict == INCONCLUSIVE


@given(seed=st.integers(0, 10**6))
def test_random_reals_never_get_a_confident_verdict(seed):
    ctx = ctx_at(256)
    v = ctx.mpf(seed + 1) * ctx.pi / 7 + ctx.sqrt(seed + 2) * ctx.e
    assert minimal_polynomial(v, 5, 256).verdict == INCONCLUSIVE


@pytest.mark.parametrize(
    "expr",
    ["sqrt(2)+sqrt(3)", "(1+sqrt(5))/2", "sqrt(2)/2", "cbrt(2)", "(3+sqrt(7))/4", "4801.5"],
)
def test_precision_doubling_never_flips(expr):
    verdicts = []
    for bits in (256, 512):
        ctx = ctx_at(bits)
        v = eval(expr, {"sqrt": ctx.sqrt, "cbrt": ctx.cbrt}) * ctx.mpf(1)
        verdicts.append(minimal_polynomial(v, 6, bits).verdict)
    assert INCONCLUSIVE in verdicts or verdicts[0] == verdicts[1]


def test_large_height_is_inconclusive_not_false():
    sp = character_table(cat.catalog("su2_9"))
    rep = frobenius_type_check(sp, 1)
    assert rep.verdict != FAIL


# --- lambda_s and J ---------------------------------------------------------

def _char_index(sp, values):
    for s, row in enumerate(sp.chars):
        if max(abs(row[i] - v) for i, v in enumerate(values)) < TOL40:
            return s
    raise AssertionError(values)


def test_center_dims():
    for name in COMMUTATIVE:
        sp = spectrum_of(name)
        cd = center_dims(sp)
        assert cd.residual(sp) < TOL40
        assert all(z > 0 for z in cd.dimZ)


def test_lambda_ising_examples():
    sp = spectrum_of("ising")
    cd = center_dims(sp)
    ctx = sp.ctx
    rho3 = _char_index(sp, [1, -1, 0])
    assert abs(cd.dimZ[rho3] - 2) < TOL40
    assert abs(lambda_s(sp, cd, 0, rho3, 2)) < TOL40
    assert abs(lambda_s(sp, cd, 0, sp.fp_index, 2) - 1) < TOL40
    for s in (0, Fraction(1, 2), 1):
        for rho in range(sp.size):
            expected = ctx.power(cd.dimC, mpq(ctx, s)) * ctx.power(cd.dimZ[rho], 1 - mpq(ctx, s))
            assert abs(lambda_s(sp, cd, s, rho, 0) - expected) < TOL40


def test_lambda_monotone_relation():
    sp = spectrum_of("fibonacci")
    cd = center_dims(sp)
    for rho in range(sp.size):
        for i in range(sp.ring.rank):
            a = lambda_s(sp, cd, 0, rho, i)
            b = lambda_s(sp, cd, 1, rho, i)
            assert abs(b - a * cd.dimC / cd.dimZ[rho]) < TOL40


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_J2_collapse(name):
    sp = spectrum_of(name)
    cd = center_dims(sp)
    for s in (0, Fraction(1, 2), 1):
        for rho in range(sp.size):
            for eta in range(sp.size):
                val = J_ns(sp, cd, 2, s, [rho, eta])
                expect = cd.dimC * sp.ctx.power(cd.dimZ[rho], 1 - 2 * mpq(sp.ctx, s)) if eta == sp.conj[rho] else 0
                assert abs(val - expect) < TOL35


def test_J_rep_s3_transposition_identity():
    sp = spectrum_of("rep_s3")
    cd = center_dims(sp)
    t = _char_index(sp, [1, -1, 0])
    val = J_ns(sp, cd, 3, 0, [t, t, sp.fp_index])
    assert abs(val - 18) < TOL40 and abs(val / cd.dimC - 3) < TOL40
    assert abs(J_ns(sp, cd, 3, 0, [t, t, t])) < TOL40


def test_J_fibonacci_two_point():
    sp = spectrum_of("fibonacci")
    cd = center_dims(sp)
    fp = sp.fp_index
    assert abs(J_ns(sp, cd, 2, 0, [fp, fp]) - sp.fpdim**2 / sp.codegrees[fp]) < TOL40


# --- criteria -----------------------------------------------------------------

@pytest.mark.parametrize("name", ["ising", "fibonacci", "rep_s3", "cyclic_2", "cyclic_3", "cyclic_4", "cyclic_5"])
def test_isaacs_zero_passes(name):
    assert isaacs_check(spectrum_of(name), 0).verdict == PASS


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_no_yes_then_confident_no(name):
    sp = spectrum_of(name)
    lo = isaacs_check(sp, 0)
    for t in (Fraction(1, 2), 1):
        hi = isaacs_check(sp, t)
        if lo.verdict == PASS:
            assert hi.verdict != FAIL


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_frobenius_type_follows_half_isaacs(name):
    sp = spectrum_of(name)
    if isaacs_check(sp, Fraction(1, 2)).verdict == PASS:
        assert frobenius_type_check(sp, Fraction(1, 2)).verdict == PASS


@pytest.mark.parametrize("name", ["rep_s3", "cyclic_2", "cyclic_3", "cyclic_4", "cyclic_5", "fibonacci", "ising"])
def test_strongly_isaacs(name):
    assert strongly_isaacs_check(spectrum_of(name), 3).verdict == PASS


def test_strongly_isaacs_fibonacci_independent_of_maxdeg():
    sp = spectrum_of("fibonacci")
    a = strongly_isaacs_check(sp, 4)
    b = strongly_isaacs_check(sp, 4, maxdeg=4)
    assert a.verdict == b.verdict == PASS


def test_non_integral_ring_is_caught():
    """A spectrum with global dimension 1/2 gives lambda_1 = +-1/2."""
    from dataclasses import replace

    sp = spectrum_of("cyclic_2")
    half = replace(sp, fpdim=sp.fpdim / 4, codegrees=tuple(a / 4 for a in sp.codegrees))
    rep = isaacs_check(half, 1)
    assert rep.verdict == FAIL and rep.witnesses


@pytest.mark.parametrize("name", ["fibonacci", "rep_s3"])
@pytest.mark.parametrize("s", [0, Fraction(1, 2), 1])
def test_equivalence_identity(name, s):
    rep = isaacs_equivalence_check(spectrum_of(name), s, (3, 4))
    assert rep.verdict == PASS
    assert mpmath.mpf(rep.parameters["max_residual"]) < TOL35


def test_invariant_In_symmetric():
    sp = spectrum_of("fib_x_fib")
    a = invariant_In(sp, (1, 2, 3))
    for perm in [(2, 1, 3), (3, 2, 1), (1, 3, 2)]:
        assert abs(invariant_In(sp, perm) - a) < TOL40
