"""Necessary conditions for (unitary) categorification of a fusion ring.

* :func:`schur_inequalities` -- bounds on fusion coefficients in terms of
  Frobenius-Perron dimensions; they hold for every fusion ring, so a failure
  means bad input data or exhausted precision.
* :func:`lpw_positivity` / :func:`lpw_general` -- positivity of the
  Liu-Palcoux-Wu sums ``sum_i d_i^(2-n) rho_1(b_i) ... rho_n(b_i)``.
* :func:`recursion_check`, :func:`dual_ring` -- consistency identities of the
  invariants ``I_n`` and the induced product on characters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import mpla
from .report import CriterionReport, Witness, decimal, digits_for
from .ring import FusionRing
from .spectra import DEFAULT_SEED, IrrepSet, Spectrum, default_tolerance

__all__ = [
    "schur_inequalities",
    "invariant_In",
    "lpw_positivity",
    "lpw_general",
    "recursion_check",
    "DualRing",
    "dual_ring",
    "dual_ring_report",
    "residual_report",
]

SCHUR_NOTE = (
    "these inequalities hold for every fusion ring; a failure signals invalid "
    "input data or precision exhaustion"
)
SEARCH_NOTE = (
    "pass means no violation found by multi-start alternating search over product "
    "vectors; it is not a proof of positivity"
)


def _name(ring: FusionRing) -> str:
    return ring.name or "ring"


def residual_report(spectrum, criterion, residual, at, parameters=None, notes=()) -> CriterionReport:
    """Turn a maximal residual into a pass/fail report against the spectrum tolerance."""
    tol = spectrum.tolerance
    digits = digits_for(spectrum.precision)
    witnesses = []
    if residual > tol:
        witnesses.append(Witness(tuple(at or ()), decimal(residual, digits), decimal(residual - tol, 10)))
    params = dict(parameters or {})
    params["max_residual"] = decimal(residual, 10)
    return CriterionReport.from_findings(
        _name(spectrum.ring), criterion, witnesses, spectrum.precision, decimal(tol, 6),
        parameters=params, notes=list(notes),
    )


def schur_inequalities(ring: FusionRing, dims, tolerance=None) -> CriterionReport:
    """Check the four families of fusion-coefficient bounds over all index tuples.

    (i)   sum_m N_ijm^2 <= min(d_i^2, d_j^2)
    (ii)  N_ijm <= d_i d_j / d_m
    (iii) N_ijm <= min(d_i, d_j, d_m)
    (iv)  sum_m N_{i1 i2 m} N_{i3 i4 m} <= d_{ip} d_{iq} for all distinct p, q

    Double precision screens the candidates; anything within 1e-6 of its
    bound is re-evaluated at working precision.
    """
    ctx = dims[0].context
    tol = default_tolerance(ctx) if tolerance is None else ctx.mpf(tolerance)
    digits = digits_for(ctx.prec)
    N = ring.tensor
    df = np.array([float(d) for d in dims])
    witnesses: list[Witness] = []

    def check(family, indices, value, bound):
        margin = value - bound
        if margin > tol:
            witnesses.append(Witness((family, *indices), decimal(ctx.mpf(value), digits), decimal(margin, 10)))

    def near(values, bounds):
        return np.argwhere(values - bounds > -1e-6 * np.maximum(1.0, bounds))

    sq = (N.astype(np.float64) ** 2).sum(axis=2)
    b1 = np.minimum.outer(df**2, df**2)
    for i, j in near(sq, b1):
        i, j = int(i), int(j)
        check("i", (i, j), int((N[i, j] ** 2).sum()), min(dims[i] ** 2, dims[j] ** 2))

    Nf = N.astype(np.float64)
    b2 = np.einsum("i,j,m->ijm", df, df, 1 / df)
    for i, j, m in near(Nf, b2):
        i, j, m = int(i), int(j), int(m)
        check("ii", (i, j, m), int(N[i, j, m]), dims[i] * dims[j] / dims[m])

    b3 = np.minimum(np.minimum(df[:, None, None], df[None, :, None]), df[None, None, :])
    for i, j, m in near(Nf, b3):
        i, j, m = int(i), int(j), int(m)
        check("iii", (i, j, m), int(N[i, j, m]), min(dims[i], dims[j], dims[m]))

    Q = np.einsum("abm,cdm->abcd", N, N)
    D = [df[:, None, None, None], df[None, :, None, None], df[None, None, :, None], df[None, None, None, :]]
    b4 = np.full(Q.shape, np.inf)
    for p, q in itertools.combinations(range(4), 2):
        b4 = np.minimum(b4, D[p] * D[q])
    for idx in near(Q.astype(np.float64), b4):
        idx = tuple(int(k) for k in idx)
        bound = min(dims[idx[p]] * dims[idx[q]] for p, q in itertools.combinations(range(4), 2))
        check("iv", idx, int(Q[idx]), bound)

    return CriterionReport.from_findings(
        _name(ring), "schur", witnesses, ctx.prec, decimal(tol, 6), notes=[SCHUR_NOTE]
    )


def invariant_In(spectrum: Spectrum, chars) -> object:
    """``sum_i d_i^(2-n) chi_{s_1}(b_i) ... chi_{s_n}(b_i)`` for characters ``chars``."""
    n = len(chars)
    ctx = spectrum.ctx
    total = ctx.mpc(0)
    for i, d in enumerate(spectrum.dims):
        term = d ** (2 - n)
        for s in chars:
            term *= spectrum.chars[s][i]
        total += term
    return total


def lpw_positivity(spectrum: Spectrum, n: int) -> CriterionReport:
    """Scan ``I_n`` over all multisets of ``n`` characters (commutative rings).

    Fails where ``Re I_n < -tol`` or ``|Im I_n| > tol``; values in
    ``[-tol, 0)`` pass with a warning.
    """
    if n < 3:
        raise ValueError("positivity is automatic for n < 3; use n >= 3")
    tol = spectrum.tolerance
    digits = digits_for(spectrum.precision)
    witnesses, warnings = [], []
    for chars in itertools.combinations_with_replacement(range(spectrum.size), n):
        val = invariant_In(spectrum, chars)
        if val.real < -tol:
            witnesses.append(Witness(chars, decimal(val, digits), decimal(-val.real - tol, 10)))
        elif abs(val.imag) > tol:
            witnesses.append(Witness(chars, decimal(val, digits), decimal(abs(val.imag) - tol, 10)))
        elif val.real < 0:
            warnings.append(Witness(chars, decimal(val, digits), decimal(-val.real - tol, 10)))
    return CriterionReport.from_findings(
        _name(spectrum.ring), f"lpw[n={n}]", witnesses, spectrum.precision, decimal(tol, 6),
        parameters={"n": n}, warnings=warnings,
    )


def _quad_forms(mats, vecs):
    """``q[k][i] = v_k^H M_k[i] v_k`` as a complex array of shape (n, r)."""
    return np.array([[np.vdot(v, M @ v) for M in Ms] for Ms, v in zip(mats, vecs)])


def _sweep_search(mats, weights, rng, starts, sweeps):
    """Minimize ``Re sum_i w_i prod_k q_k[i]`` over unit product vectors.

    Alternating minimization: with all factors but one fixed, the objective is
    a Hermitian form in the free factor, minimized by its lowest eigenvector.
    """
    best_val, best_vecs, any_converged = np.inf, None, False
    for _ in range(starts):
        vecs = []
        for Ms in mats:
            v = rng.standard_normal(Ms.shape[1]) + 1j * rng.standard_normal(Ms.shape[1])
            vecs.append(v / np.linalg.norm(v))
        prev = np.inf
        converged = False
        for _ in range(sweeps):
            for k, Ms in enumerate(mats):
                if Ms.shape[1] == 1:
                    continue
                q = _quad_forms(mats, vecs)
                coef = weights * np.prod(np.delete(q, k, axis=0), axis=0)
                H = np.tensordot(coef, Ms, axes=1)
                H = (H + H.conj().T) / 2
                w, V = np.linalg.eigh(H)
                vecs[k] = V[:, 0]
            val = float(np.real(np.sum(weights * np.prod(_quad_forms(mats, vecs), axis=0))))
            if prev - val <= 1e-13 * max(1.0, abs(val)):
                converged = True
                break
            prev = val
        any_converged |= converged
        if val < best_val:
            best_val, best_vecs = val, [v.copy() for v in vecs]
    return best_val, best_vecs, any_converged


def _mp_polish(ctx, irreps, weights, vecs, sweeps=4):
    """Re-run a few alternating sweeps at working precision; return value and vectors."""
    vecs = [[ctx.mpc(complex(x)) for x in v] for v in vecs]
    r = len(weights)

    def forms():
        return [
            [mpla.vdot(v, mpla.matvec(rho.matrices[i], v)) for i in range(r)]
            for rho, v in zip(irreps, vecs)
        ]

    for _ in range(sweeps):
        for k, rho in enumerate(irreps):
            if rho.dim == 1:
                continue
            q = forms()
            H = [[ctx.mpc(0)] * rho.dim for _ in range(rho.dim)]
            for i in range(r):
                c = weights[i]
                for l in range(len(irreps)):
                    if l != k:
                        c *= q[l][i]
                Mi = rho.matrices[i]
                for a in range(rho.dim):
                    for b in range(rho.dim):
                        H[a][b] += c * Mi[a][b]
            H = [[(H[a][b] + H[b][a].conjugate()) / 2 for b in range(rho.dim)] for a in range(rho.dim)]
            _, V = mpla.eigh(ctx, H)
            vecs[k] = mpla.column(V, 0)
    q = forms()
    total = ctx.mpc(0)
    for i in range(r):
        term = weights[i]
        for l in range(len(irreps)):
            term *= q[l][i]
        total += term
    return total, vecs


def lpw_general(
    irrepset: IrrepSet,
    n: int,
    starts: int = 16,
    sweeps: int = 64,
    seed: int = DEFAULT_SEED,
) -> CriterionReport:
    """Search for product vectors making the LPW sum negative (any fusion ring).

    For each multiset of irreps the form
    ``v -> sum_i d_i^(2-n) prod_k (rho_k(b_i) v_k, v_k)`` is minimized over
    unit vectors ``v_k``.  Tuples of one-dimensional irreps are evaluated
    exactly.  A start that hits the sweep cap without converging does not
    count; if no start converges the tuple is inconclusive.
    """
    if n < 3:
        raise ValueError("positivity is automatic for n < 3; use n >= 3")
    ctx = irrepset.ctx
    tol = irrepset.tolerance
    digits = digits_for(ctx.prec)
    r = irrepset.ring.rank
    weights = [d ** (2 - n) for d in irrepset.dims]
    wf = np.array([float(w) for w in weights])
    npmats = [
        np.array([[[complex(x) for x in row] for row in M] for M in rho.matrices]) for rho in irrepset
    ]
    rng = np.random.default_rng(seed)
    witnesses, warnings, unresolved = [], [], []
    for combo in itertools.combinations_with_replacement(range(len(irrepset)), n):
        irreps = [irrepset.irreps[k] for k in combo]
        if all(rho.dim == 1 for rho in irreps):
            val = ctx.mpc(0)
            for i in range(r):
                term = weights[i]
                for rho in irreps:
                    term *= rho.matrices[i][0][0]
                val += term
            vecs = None
        else:
            fval, fvecs, converged = _sweep_search([npmats[k] for k in combo], wf, rng, starts, sweeps)
            val, vecs = _mp_polish(ctx, irreps, weights, fvecs)
            if not converged and val.real >= -tol:
                unresolved.append(Witness(combo, decimal(val, digits), "n/a", {"reason": "sweep cap reached"}))
                continue
        extra = {}
        if vecs is not None:
            extra["vectors"] = [[decimal(x, 20) for x in v] for v in vecs]
        if val.real < -tol:
            witnesses.append(Witness(combo, decimal(val, digits), decimal(-val.real - tol, 10), extra))
        elif val.real < 0:
            warnings.append(Witness(combo, decimal(val, digits), decimal(-val.real - tol, 10), extra))
    return CriterionReport.from_findings(
        _name(irrepset.ring), f"lpw-general[n={n}]", witnesses, ctx.prec, decimal(tol, 6),
        parameters={"n": n, "starts": starts, "sweeps": sweeps, "seed": seed},
        notes=[SEARCH_NOTE], warnings=warnings, inconclusive=unresolved,
    )


class _InCache:
    """Memoized ``I_n`` keyed by the sorted character multiset."""

    def __init__(self, spectrum: Spectrum):
        self.spectrum = spectrum
        self.values: dict = {}

    def __call__(self, chars):
        key = tuple(sorted(chars))
        if key not in self.values:
            self.values[key] = invariant_In(self.spectrum, key)
        return self.values[key]


def recursion_residual(spectrum: Spectrum, n: int):
    """Largest ``|I_n - sum_rho alpha_rho^-1 I_(n-1)(..., rho) I_3(conj rho, ., .)|`` and where."""
    if n < 3:
        raise ValueError("the recursion starts at n = 3")
    I = _InCache(spectrum)
    ctx = spectrum.ctx
    worst, at = ctx.mpf(0), None
    S = range(spectrum.size)
    for chars in itertools.product(S, repeat=n):
        lhs = I(chars)
        rhs = ctx.mpc(0)
        for rho in S:
            rhs += I(chars[: n - 2] + (rho,)) * I((spectrum.conj[rho], chars[n - 2], chars[n - 1])) / spectrum.codegrees[rho]
        err = abs(lhs - rhs)
        if err > worst:
            worst, at = err, chars
    return worst, at


def recursion_check(spectrum: Spectrum, n: int) -> CriterionReport:
    worst, at = recursion_residual(spectrum, n)
    return residual_report(spectrum, f"recursion[n={n}]", worst, at, {"n": n})


@dataclass(frozen=True, eq=False)
class DualRing:
    """Product on characters: ``rho_s * rho_t = sum_u c[s][t][u] rho_u``."""

    spectrum: Spectrum
    constants: tuple  # constants[s][t][u]

    @property
    def size(self) -> int:
        return len(self.constants)

    def commutativity_residual(self):
        c, S = self.constants, range(self.size)
        return max((abs(c[s][t][u] - c[t][s][u]) for s in S for t in S for u in S), default=0)

    def associativity_residual(self):
        c, S = self.constants, range(self.size)
        zero = self.spectrum.ctx.mpc(0)
        worst = self.spectrum.ctx.mpf(0)
        for s, t, w, x in itertools.product(S, repeat=4):
            left = sum((c[s][t][u] * c[u][w][x] for u in S), zero)
            right = sum((c[t][w][u] * c[s][u][x] for u in S), zero)
            worst = max(worst, abs(left - right))
        return worst

    def unit_residual(self):
        """Deviation of the Frobenius-Perron character from a two-sided unit."""
        c, S, fp = self.constants, range(self.size), self.spectrum.fp_index
        return max(
            max(abs(c[fp][t][u] - (1 if t == u else 0)), abs(c[t][fp][u] - (1 if t == u else 0)))
            for t in S for u in S
        )

    def imaginary_residual(self):
        return max(abs(x.imag) for plane in self.constants for row in plane for x in row)

    def min_real(self):
        return min(x.real for plane in self.constants for row in plane for x in row)


def dual_ring(spectrum: Spectrum) -> DualRing:
    """Structure constants ``c[s][t][u] = I_3(rho_s, rho_t, conj rho_u) / alpha_u``."""
    I = _InCache(spectrum)
    S = range(spectrum.size)
    const = tuple(
        tuple(tuple(I((s, t, spectrum.conj[u])) / spectrum.codegrees[u] for u in S) for t in S) for s in S
    )
    return DualRing(spectrum, const)


def dual_ring_report(spectrum: Spectrum) -> CriterionReport:
    dr = dual_ring(spectrum)
    parts = {
        "commutativity": dr.commutativity_residual(),
        "associativity": dr.associativity_residual(),
        "unit": dr.unit_residual(),
    }
    name, worst = max(parts.items(), key=lambda kv: kv[1])
    rep = residual_report(
        spectrum, "dual-ring", worst, (name,),
        {k: decimal(v, 10) for k, v in parts.items()} | {"min_structure_constant": decimal(dr.min_real(), 20)},
    )
    return rep
