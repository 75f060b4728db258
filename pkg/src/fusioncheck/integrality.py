"""Algebraic-integrality criteria for commutative fusion rings.

Categorical dimensions are unavailable for a bare ring, so the global
dimension is taken to be ``fpdim`` and the dimension attached to a
character ``rho`` is ``fpdim / alpha_rho`` (pseudounitary normalization).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import flint

from .criteria import invariant_In, residual_report
from .report import CriterionReport, Witness, decimal, digits_for
from .spectra import Spectrum

__all__ = [
    "YES",
    "NO",
    "INCONCLUSIVE",
    "NORMALIZATION_NOTE",
    "CenterDims",
    "MinPolyResult",
    "center_dims",
    "lambda_s",
    "J_ns",
    "minimal_polynomial",
    "isaacs_check",
    "isaacs_equivalence_check",
    "strongly_isaacs_check",
    "frobenius_type_check",
    "default_maxdeg",
]

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"
NORMALIZATION_NOTE = "pseudounitary normalization: dim C = fpdim, dim Z_rho = fpdim / alpha_rho"


@dataclass(frozen=True)
class CenterDims:
    dimC: object
    dimZ: tuple

    def residual(self, spectrum: Spectrum):
        return max(abs(z * a - self.dimC) for z, a in zip(self.dimZ, spectrum.codegrees))


def center_dims(spectrum: Spectrum) -> CenterDims:
    dimC = spectrum.fpdim
    return CenterDims(dimC, tuple(dimC / a for a in spectrum.codegrees))


def _power(ctx, x, s: Fraction):
    s = Fraction(s)
    if s.denominator == 1:
        return x ** int(s)
    return ctx.power(x, ctx.mpf(s.numerator) / s.denominator)


def lambda_s(spectrum: Spectrum, cd: CenterDims, s, rho: int, i: int):
    """``dimC^s dimZ_rho^(1-s) rho(b_i) / d_i``."""
    ctx = spectrum.ctx
    s = Fraction(s)
    return (
        _power(ctx, cd.dimC, s)
        * _power(ctx, cd.dimZ[rho], 1 - s)
        * spectrum.chars[rho][i]
        / spectrum.dims[i]
    )


def J_ns(spectrum: Spectrum, cd: CenterDims, n: int, s, chars) -> object:
    """``dimC^((n-2)s) (prod dimZ)^(1-s) I_n(chars)``."""
    if n < 2 or len(chars) != n:
        raise ValueError("J_ns needs n >= 2 characters")
    ctx = spectrum.ctx
    s = Fraction(s)
    prod = ctx.mpf(1)
    for c in chars:
        prod *= cd.dimZ[c]
    return _power(ctx, cd.dimC, (n - 2) * s) * _power(ctx, prod, 1 - s) * invariant_In(spectrum, chars)


@dataclass(frozen=True)
class MinPolyResult:
    """Integer polynomial vanishing at a value, leading coefficient first."""

    coefficients: tuple[int, ...]
    residual: object
    verdict: str

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coefficients) and self.coefficients[0] == 1

    def __str__(self) -> str:
        if not self.coefficients:
            return "none"
        terms = []
        deg = self.degree
        for k, c in enumerate(self.coefficients):
            e = deg - k
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if e == 0 else ("x" if e == 1 else f"x**{e}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms)


def _horner(coeffs, v):
    acc = 0 * v
    for c in coeffs:
        acc = acc * v + c
    return acc


def minimal_polynomial(v, maxdeg: int, precision: int | None = None) -> MinPolyResult:
    """Lowest-degree integer relation among ``1, v, ..., v^d`` for ``d <= maxdeg``.

    For each degree the powers are divided by ``W = max(1, |v|)^d`` and LLL
    runs on unit vectors augmented with the ``2^(3 precision/4)``-scaled real
    and imaginary parts.  A relation ``c`` of height ``H = max |c_k|`` is
    accepted when ``|p(v)| < 2^(-precision/4)`` and, more stringently,
    ``|p(v)| / W <= 2^(-precision/8) H^(-d)``.  Pigeonhole alone yields
    relations of height ``H`` with normalized residual near ``H^(-d)`` for
    any input, so the second test asks for ``precision/8`` bits beyond what
    chance provides.

    The verdict is ``yes`` for a monic relation, ``no`` for an irreducible
    nonmonic one with a simple root at ``v`` and ``inconclusive`` otherwise.
    """
    if maxdeg < 1:
        raise ValueError("maxdeg must be at least 1")
    from . import mpla

    if precision is None:
        precision = v.context.prec if hasattr(v, "context") else 256
    ctx = mpla.make_context(precision)
    if isinstance(v, Fraction):
        v = ctx.mpf(v.numerator) / v.denominator
    v = ctx.mpc(v)
    is_real = v.imag == 0
    scale = ctx.ldexp(1, 3 * precision // 4)
    accept_abs = ctx.ldexp(1, -(precision // 4))
    margin = ctx.ldexp(1, -(precision // 8))
    growth = max(ctx.mpf(1), abs(v))
    powers = [ctx.mpc(1)]
    for d in range(1, maxdeg + 1):
        powers.append(powers[-1] * v)
        W = growth**d
        rows = []
        for k in range(d + 1):
            row = [0] * (d + 1)
            row[k] = 1
            u = powers[k] / W
            row.append(int(ctx.nint(u.real * scale)))
            if not is_real:
                row.append(int(ctx.nint(u.imag * scale)))
            rows.append(row)
        reduced = flint.fmpz_mat(rows).lll()
        candidates = [[int(reduced[i, j]) for j in range(d + 1)] for i in range(d + 1)]
        candidates.sort(key=lambda c: (max(abs(x) for x in c), c))
        for c in candidates:  # c[k] multiplies v^k
            if c[d] == 0:
                continue
            g = math.gcd(*c)
            c = [x // g for x in c]
            if c[d] < 0:
                c = [-x for x in c]
            coeffs = tuple(reversed(c))
            residual = abs(_horner(coeffs, v))
            height = max(abs(x) for x in c)
            if residual < accept_abs and residual / W <= margin / ctx.mpf(height) ** d:
                return MinPolyResult(coeffs, residual, _classify(coeffs, v, ctx))
    return MinPolyResult((), None, INCONCLUSIVE)


def _classify(coeffs, v, ctx) -> str:
    if coeffs[0] == 1:
        return YES
    _, factors = flint.fmpz_poly(list(reversed(coeffs))).factor()
    if len(factors) != 1 or factors[0][1] != 1:
        return INCONCLUSIVE
    # A simple root: p'(v) must not vanish, otherwise the relation is degenerate.
    deriv = [c * (len(coeffs) - 1 - k) for k, c in enumerate(coeffs[:-1])]
    if abs(_horner(deriv, v)) < ctx.ldexp(1, -(ctx.prec // 4)):
        return INCONCLUSIVE
    return NO


def default_maxdeg(spectrum: Spectrum) -> int:
    return max(2, 2 * spectrum.ring.rank)


def _key(ctx, x):
    q = ctx.ldexp(1, -(ctx.prec // 4))
    return (int(ctx.nint(x.real / q)), int(ctx.nint(ctx.mpc(x).imag / q)))


class _MinPolyCache:
    def __init__(self, spectrum, maxdeg):
        self.spectrum = spectrum
        self.maxdeg = maxdeg
        self.cache: dict = {}

    def __call__(self, value) -> MinPolyResult:
        k = _key(self.spectrum.ctx, value)
        if k not in self.cache:
            self.cache[k] = minimal_polynomial(value, self.maxdeg, self.spectrum.precision)
        return self.cache[k]


def _integrality_report(spectrum, criterion, entries, maxdeg, parameters, notes):
    """Shared tail of the integrality checks; ``entries`` yields (indices, value)."""
    digits = digits_for(spectrum.precision)
    minpoly = _MinPolyCache(spectrum, maxdeg)
    witnesses, unresolved = [], []
    for indices, value in entries:
        res = minpoly(value)
        if res.verdict == NO:
            witnesses.append(
                Witness(indices, decimal(value, digits), str(res.coefficients[0] - 1), {"minpoly": str(res)})
            )
        elif res.verdict == INCONCLUSIVE:
            unresolved.append(
                Witness(indices, decimal(value, digits), "n/a", {"minpoly": str(res), "maxdeg": maxdeg})
            )
    return CriterionReport.from_findings(
        spectrum.ring.name or "ring",
        criterion,
        witnesses,
        spectrum.precision,
        decimal(spectrum.tolerance, 6),
        parameters={**parameters, "maxdeg": maxdeg},
        notes=[NORMALIZATION_NOTE, *notes],
        inconclusive=unresolved,
    )


def isaacs_check(spectrum: Spectrum, s=0, maxdeg: int | None = None) -> CriterionReport:
    """Is ``lambda_s(rho, b_i)`` an algebraic integer for every character and basis element?"""
    s = Fraction(s)
    maxdeg = maxdeg or default_maxdeg(spectrum)
    cd = center_dims(spectrum)
    r = spectrum.ring.rank
    entries = (
        ((rho, i), lambda_s(spectrum, cd, s, rho, i)) for rho in range(spectrum.size) for i in range(r)
    )
    return _integrality_report(spectrum, f"isaacs[s={s}]", entries, maxdeg, {"s": str(s)}, [])


def frobenius_type_check(spectrum: Spectrum, s=Fraction(1, 2), maxdeg: int | None = None) -> CriterionReport:
    """Is ``fpdim^(2s+1) / d_i^2`` an algebraic integer for every basis element?

    This is what ``s``-Isaacs (``s >= 1/2``) forces; a ring passing
    :func:`isaacs_check` at ``s`` must pass here at the same ``s``.  The
    value tested is the square root ``fpdim^(s+1/2) / d_i``: a number is
    integral exactly when its square is, and the root has smaller height.
    """
    s = Fraction(s)
    maxdeg = maxdeg or default_maxdeg(spectrum)
    ctx = spectrum.ctx
    entries = (
        ((i,), _power(ctx, spectrum.fpdim, s + Fraction(1, 2)) / spectrum.dims[i])
        for i in range(spectrum.ring.rank)
    )
    return _integrality_report(
        spectrum, f"frobenius-type[s={s}]", entries, maxdeg, {"s": str(s)},
        ["tests fpdim^(s+1/2) / d_i, whose square is fpdim^(2s+1) / d_i^2"],
    )


def strongly_isaacs_check(spectrum: Spectrum, nmax: int = 3, maxdeg: int | None = None) -> CriterionReport:
    """Integrality of ``J_{n,0} / (dimC sqrt(dimZ_a dimZ_b))`` for n = 3..nmax.

    ``J`` is symmetric in its arguments, so each multiset of characters is
    evaluated once and every unordered pair of its slots is tried as the
    distinguished pair ``(a, b)``.
    """
    maxdeg = maxdeg or default_maxdeg(spectrum)
    ctx = spectrum.ctx
    cd = center_dims(spectrum)

    def entries():
        for n in range(3, nmax + 1):
            for chars in itertools.combinations_with_replacement(range(spectrum.size), n):
                J = J_ns(spectrum, cd, n, 0, chars)
                seen = set()
                for p, q in itertools.combinations(range(n), 2):
                    pair = (chars[p], chars[q])
                    if pair in seen:
                        continue
                    seen.add(pair)
                    denom = cd.dimC * ctx.sqrt(cd.dimZ[pair[0]] * cd.dimZ[pair[1]])
                    yield (n, *chars, "slots", p, q), J / denom

    return _integrality_report(
        spectrum, "strong-isaacs", entries(), maxdeg, {"nmax": nmax},
        ["every pair of slots is tested as the distinguished pair; the usual convention uses slots 1 and 2 only"],
    )


def isaacs_equivalence_check(spectrum: Spectrum, s=0, ns=(3, 4)) -> CriterionReport:
    """Residual of the identity linking J_{n,s} sums to powers of lambda_s.

    For each character ``rho``, basis element ``Y`` and ``n``::

        sum_eta dimZ_eta^s J_{n,s}(rho,...,rho,eta) conj(eta(Y)) / dimZ_rho^(2(1-s))
            = dimC dimZ_rho^(s-1) rho(Y) lambda_s(rho, Y)^(n-2)
    """
    s = Fraction(s)
    ctx = spectrum.ctx
    cd = center_dims(spectrum)
    r = spectrum.ring.rank
    worst, worst_at = ctx.mpf(0), None
    for n in ns:
        for rho in range(spectrum.size):
            Js = [J_ns(spectrum, cd, n, s, [rho] * (n - 1) + [eta]) for eta in range(spectrum.size)]
            denom = _power(ctx, cd.dimZ[rho], 2 * (1 - s))
            for Y in range(r):
                lhs = sum(
                    (_power(ctx, cd.dimZ[eta], s) * Js[eta] * spectrum.chars[eta][Y].conjugate()
                     for eta in range(spectrum.size)),
                    ctx.mpc(0),
                ) / denom
                rhs = (
                    cd.dimC
                    * _power(ctx, cd.dimZ[rho], s - 1)
                    * spectrum.chars[rho][Y]
                    * lambda_s(spectrum, cd, s, rho, Y) ** (n - 2)
                )
                err = abs(lhs - rhs)
                if err > worst:
                    worst, worst_at = err, (n, rho, Y)
    return residual_report(
        spectrum, f"isaacs-equivalence[s={s}]", worst, worst_at,
        {"s": str(s), "n": list(ns)}, [NORMALIZATION_NOTE],
    )
