"""Frobenius-Perron data, character tables, codegrees and irreducible
representations of the complexified fusion algebra, at arbitrary precision.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import mpla
from .ring import FusionRing

__all__ = [
    "DEFAULT_PRECISION",
    "DEFAULT_SEED",
    "SpectralError",
    "NotCommutativeError",
    "Spectrum",
    "Irrep",
    "IrrepSet",
    "default_tolerance",
    "fp_dimensions",
    "character_table",
    "decompose_regular",
    "codegree",
    "matrel_check",
]

DEFAULT_PRECISION = 256
DEFAULT_SEED = 20201113
MAX_REDRAWS = 8


class SpectralError(ArithmeticError):
    pass


class NotCommutativeError(ValueError):
    pass


def default_tolerance(ctx):
    return ctx.ldexp(1, -(ctx.prec // 2))


def _collision_gap(ctx):
    return ctx.ldexp(1, -(ctx.prec // 4))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Character table of a commutative fusion ring.

    ``chars[s][i]`` is the value of character ``s`` on ``b_i``.  Row 0 is
    the Frobenius-Perron character; the remaining rows are sorted by
    descending codegree.  ``conj[s]`` is the index of the complex
    conjugate character.
    """

    ring: FusionRing
    ctx: object
    tolerance: object
    dims: tuple
    fpdim: object
    chars: tuple
    codegrees: tuple
    conj: tuple
    fp_index: int = 0

    @property
    def precision(self) -> int:
        return self.ctx.prec

    @property
    def size(self) -> int:
        return len(self.chars)

    def residuals(self) -> dict[str, object]:
        """Largest violation of each defining identity (all should be ~0)."""
        ctx, ring = self.ctx, self.ring
        r = ring.rank
        N = ring.tensor
        zero = ctx.mpf(0)
        hom = conj = cod = zero
        for s, row in enumerate(self.chars):
            for i in range(r):
                conj = max(conj, abs(row[ring.dual[i]] - row[i].conjugate()))
                for j in range(r):
                    rhs = sum((int(N[i, j, m]) * row[m] for m in range(r) if N[i, j, m]), zero)
                    hom = max(hom, abs(row[i] * row[j] - rhs))
            cod = max(cod, abs(self.codegrees[s] - sum(abs(x) ** 2 for x in row)))
        inv_sum = abs(sum(1 / a for a in self.codegrees) - 1)
        fp_row = max(abs(self.chars[self.fp_index][i] - self.dims[i]) for i in range(r))
        return {
            "homomorphism": hom,
            "conjugation": conj,
            "codegree": cod,
            "inverse_codegree_sum": inv_sum,
            "fp_row": fp_row,
        }


@dataclass(frozen=True, eq=False)
class Irrep:
    """Matrices ``matrices[i] = rho(b_i)`` of one irreducible representation."""

    dim: int
    matrices: tuple
    codegree: object
    dual: tuple
    ctx: object

    @property
    def traces(self) -> list:
        return [sum((M[k][k] for k in range(self.dim)), self.ctx.mpc(0)) for M in self.matrices]


@dataclass(frozen=True, eq=False)
class IrrepSet:
    ring: FusionRing
    ctx: object
    tolerance: object
    dims: tuple
    fpdim: object
    irreps: tuple

    @property
    def precision(self) -> int:
        return self.ctx.prec

    def __iter__(self):
        return iter(self.irreps)

    def __len__(self) -> int:
        return len(self.irreps)

    def residuals(self) -> dict[str, object]:
        ctx, ring = self.ctx, self.ring
        r = ring.rank
        N = ring.tensor
        zero = ctx.mpf(0)
        unit = hom = adj = zero
        for rho in self.irreps:
            n = rho.dim
            M = rho.matrices
            I = mpla.identity(ctx, n)
            unit = max(unit, max(abs(M[0][a][b] - I[a][b]) for a in range(n) for b in range(n)))
            for i in range(r):
                Mi_adj = mpla.adjoint(M[i])
                di = M[ring.dual[i]]
                adj = max(adj, max(abs(di[a][b] - Mi_adj[a][b]) for a in range(n) for b in range(n)))
                for j in range(r):
                    prod = mpla.matmul(M[i], M[j])
                    for a in range(n):
                        for b in range(n):
                            rhs = sum((int(N[i, j, m]) * M[m][a][b] for m in range(r) if N[i, j, m]), zero)
                            hom = max(hom, abs(prod[a][b] - rhs))
        trace_exp = zero
        for i in range(r):
            val = sum((rho.traces[i] / rho.codegree for rho in self.irreps), zero)
            trace_exp = max(trace_exp, abs(val - (1 if i == 0 else 0)))
        return {
            "unit": unit,
            "homomorphism": hom,
            "adjoint": adj,
            "trace_expansion": trace_exp,
            "dimension_count": abs(sum(rho.dim**2 for rho in self.irreps) - r),
        }


def fp_dimensions(ring: FusionRing, precision: int = DEFAULT_PRECISION, max_iter: int = 10_000):
    """Frobenius-Perron dimensions ``d_i`` and ``fpdim = sum d_i^2``.

    Power iteration on ``M = sum_i L_i`` (a positive matrix), accelerated by
    repeated squaring, gives the Perron vector ``v``; ``d_i`` is the
    eigenvalue of ``L_i`` on ``v``.
    """
    ctx = mpla.make_context(precision)
    r = ring.rank
    if r == 1:
        return (ctx.mpf(1),), ctx.mpf(1)
    tol = default_tolerance(ctx)
    M = [[ctx.mpf(int(x)) for x in row] for row in ring.tensor.sum(axis=0).T]
    P = M
    for _ in range(max(4, (precision + 1).bit_length() + 2)):
        P = mpla.matmul(P, P)
        top = max(abs(x) for row in P for x in row)
        P = [[x / top for x in row] for row in P]
    v = mpla.matvec(P, [ctx.mpf(1)] * r)
    lam = None
    for _ in range(max_iter):
        w = mpla.matvec(M, v)
        lam_new = max(w)
        w = [x / lam_new for x in w]
        done = lam is not None and max(abs(a - b) for a, b in zip(w, v)) <= ctx.ldexp(tol, -8)
        v, lam = w, lam_new
        if done:
            break
    else:
        raise SpectralError("Perron power iteration did not converge; ring may be invalid")
    if min(v) <= 0:
        raise SpectralError("Perron vector has nonpositive entries")
    vv = sum(x * x for x in v)
    dims = []
    for i in range(r):
        Li = ring.left_matrix(i)
        Li_v = [sum((int(Li[m, j]) * v[j] for j in range(r) if Li[m, j]), ctx.mpf(0)) for m in range(r)]
        d = sum(a * b for a, b in zip(Li_v, v)) / vv
        res = max(abs(a - d * b) for a, b in zip(Li_v, v))
        if res > tol * max(1, d):
            raise SpectralError(f"b_{i} does not act by a scalar on the Perron vector (residual {ctx.nstr(res, 5)})")
        dims.append(d)
    # d_0 = 1 exactly up to rounding; pin it.
    dims[0] = ctx.mpf(1)
    fpdim = sum(d * d for d in dims)
    return tuple(dims), fpdim


def _int_rows(A) -> list[list[int]]:
    return [[int(x) for x in row] for row in A]


def _hermitian_coefficients(ctx, dual: Sequence[int], rng: random.Random) -> list:
    c = [None] * len(dual)
    for i, p in enumerate(dual):
        if c[i] is not None:
            continue
        if p == i:
            c[i] = ctx.mpc(rng.uniform(-1.0, 1.0))
        else:
            z = ctx.mpc(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
            c[i], c[p] = z, z.conjugate()
    return c


def _combination(ctx, mats, coeffs):
    n = len(mats[0])
    out = [[ctx.mpc(0)] * n for _ in range(n)]
    for c, A in zip(coeffs, mats):
        nz = np.argwhere(A != 0)
        for a, b in nz:
            out[a][b] += c * int(A[a, b])
    return out


def _split_once(ctx, mats, dual, basis, rng):
    """Diagonalize a random Hermitian combination compressed to ``basis``."""
    H = _combination(ctx, mats, _hermitian_coefficients(ctx, dual, rng))
    P = mpla.columns_to_matrix(basis)
    Hc = mpla.matmul(mpla.adjoint(P), mpla.matmul(H, P))
    values, W = mpla.eigh(ctx, Hc)
    scale = max(1, max((abs(v) for v in values), default=1))
    groups = mpla.cluster(values, _collision_gap(ctx) * scale)
    PW = mpla.matmul(P, W)
    return [[mpla.column(PW, k) for k in g] for g in groups]


def _joint_eigenspaces(ctx, mats, dual, rng, accept: Callable[[list], bool], basis=None, depth=0):
    """Split the space into joint eigenspaces of Hermitian combinations of ``mats``.

    Each returned block satisfies ``accept``.  Collisions are redrawn up to
    ``MAX_REDRAWS`` times, after which the finest split found is refined
    recursively inside each offending block.
    """
    n = len(mats[0])
    if basis is None:
        basis = [[ctx.mpc(1 if i == j else 0) for i in range(n)] for j in range(n)]
    if accept(basis):
        return [basis]
    if depth > n:
        raise SpectralError("eigenspace refinement exceeded its depth budget")
    best = None
    for _ in range(MAX_REDRAWS + 1):
        blocks = _split_once(ctx, mats, dual, basis, rng)
        if best is None or len(blocks) > len(best):
            best = blocks
        if all(accept(b) for b in blocks):
            return blocks
    if len(best) == 1:
        raise SpectralError(
            f"could not split a {len(basis)}-dimensional eigenspace after {MAX_REDRAWS} redraws"
        )
    out = []
    for block in best:
        out.extend(_joint_eigenspaces(ctx, mats, dual, rng, accept, block, depth + 1))
    return out


def _grid_key(ctx, x, q):
    return int(ctx.nint(x / q))


def character_table(
    ring: FusionRing,
    precision: int = DEFAULT_PRECISION,
    seed: int = DEFAULT_SEED,
    tolerance=None,
) -> Spectrum:
    """Characters of a commutative fusion ring by simultaneous diagonalization.

    The left multiplication matrices form a commuting normal family; a random
    Hermitian combination ``sum c_i L_i`` with ``c_{i*} = conj(c_i)``
    separates their joint eigenvectors, and each character value is the
    Rayleigh quotient of ``L_i`` on one of them.
    """
    if not ring.is_commutative:
        raise NotCommutativeError("character_table requires a commutative ring; use decompose_regular")
    dims, fpdim = fp_dimensions(ring, precision)
    ctx = dims[0].context
    tol = default_tolerance(ctx) if tolerance is None else ctx.mpf(tolerance)
    r = ring.rank
    if r == 1:
        one = ctx.mpc(1)
        return Spectrum(ring, ctx, tol, dims, fpdim, ((one,),), (ctx.mpf(1),), (0,))
    mats = [ring.left_matrix(i) for i in range(r)]
    rng = random.Random(seed)
    blocks = _joint_eigenspaces(ctx, mats, ring.dual, rng, accept=lambda b: len(b) == 1)
    if len(blocks) != r:
        raise SpectralError(f"found {len(blocks)} characters for a rank-{r} ring")
    rows = []
    for (v,) in blocks:
        vv = mpla.vdot(v, v)
        rows.append([mpla.vdot(v, mpla.matvec(_int_rows(L), v)) / vv for L in mats])
    return _assemble_spectrum(ring, ctx, tol, dims, fpdim, rows)


def _assemble_spectrum(ring, ctx, tol, dims, fpdim, rows) -> Spectrum:
    r = ring.rank
    fp = min(range(len(rows)), key=lambda s: max(abs(rows[s][i] - dims[i]) for i in range(r)))
    if max(abs(rows[fp][i] - dims[i]) for i in range(r)) > tol * fpdim:
        raise SpectralError("no character agrees with the Frobenius-Perron dimensions")
    codeg = [sum(abs(x) ** 2 for x in row) for row in rows]
    q = _collision_gap(ctx)

    def key(s):
        vals = tuple(k for x in rows[s] for k in (_grid_key(ctx, x.real, q), _grid_key(ctx, x.imag, q)))
        return (-_grid_key(ctx, codeg[s], q), vals)

    order = [fp] + sorted((s for s in range(len(rows)) if s != fp), key=key)
    rows = [tuple(rows[s]) for s in order]
    codeg = [codeg[s] for s in order]
    conj = []
    for s, row in enumerate(rows):
        target = [x.conjugate() for x in row]
        t = min(range(len(rows)), key=lambda t: max(abs(a - b) for a, b in zip(rows[t], target)))
        if max(abs(a - b) for a, b in zip(rows[t], target)) > tol * fpdim:
            raise SpectralError(f"character {s} has no conjugate partner")
        conj.append(t)
    if sorted(conj) != list(range(len(rows))):
        raise SpectralError("conjugation pairing is not a permutation")
    return Spectrum(ring, ctx, tol, dims, fpdim, tuple(rows), tuple(codeg), tuple(conj), 0)


def codegree(ring: FusionRing, irrep: Irrep, tolerance=None):
    """Scalar by which ``z = sum_i Tr(rho(b_i)) b_{i*}`` acts on ``rho``."""
    ctx = irrep.ctx
    tol = default_tolerance(ctx) if tolerance is None else tolerance
    n = irrep.dim
    traces = irrep.traces
    z = [[ctx.mpc(0)] * n for _ in range(n)]
    for i in range(ring.rank):
        Mi = irrep.matrices[ring.dual[i]]
        for a in range(n):
            for b in range(n):
                z[a][b] += traces[i] * Mi[a][b]
    alpha = z[0][0].real
    dev = max(abs(z[a][b] - (alpha if a == b else 0)) for a in range(n) for b in range(n))
    if dev > tol * max(1, abs(alpha)):
        raise SpectralError(f"central element does not act by a scalar (deviation {ctx.nstr(dev, 5)})")
    return alpha


def _restrict(ctx, mats, basis):
    P = mpla.columns_to_matrix(basis)
    Pa = mpla.adjoint(P)
    return [mpla.matmul(Pa, mpla.matmul(_int_rows(L), P)) for L in mats]


def _is_irreducible(ctx, left, basis) -> bool:
    m = len(basis)
    if m == 1:
        return True
    # Burnside: the restricted matrices span all m x m matrices.
    R = _restrict(ctx, left, basis)
    flat = [[x for row in A for x in row] for A in R]
    gram = [[mpla.vdot(a, b) for b in flat] for a in flat]
    return mpla.numerical_rank(ctx, gram, _collision_gap(ctx)) == m * m


def decompose_regular(
    ring: FusionRing,
    precision: int = DEFAULT_PRECISION,
    seed: int = DEFAULT_SEED,
    tolerance=None,
) -> IrrepSet:
    """Irreducible representations of the complexified fusion algebra.

    Eigenspaces of a random Hermitian element of the commutant (right
    multiplications) are left submodules; they are refined until each is
    irreducible, grouped into isomorphism classes by trace vectors, and one
    orthonormal representative per class is returned.
    """
    dims, fpdim = fp_dimensions(ring, precision)
    ctx = dims[0].context
    tol = default_tolerance(ctx) if tolerance is None else ctx.mpf(tolerance)
    r = ring.rank
    left = [ring.left_matrix(i) for i in range(r)]
    right = [ring.right_matrix(i) for i in range(r)]
    rng = random.Random(seed)
    blocks = _joint_eigenspaces(
        ctx, right, ring.dual, rng, accept=lambda b: _is_irreducible(ctx, left, b)
    )
    classes: list[tuple[list, list, int]] = []  # (traces, matrices, multiplicity)
    q = _collision_gap(ctx)
    for block in blocks:
        mats = _restrict(ctx, left, block)
        tr = [sum((A[k][k] for k in range(len(block))), ctx.mpc(0)) for A in mats]
        for k, (t0, m0, mult) in enumerate(classes):
            if len(m0[0]) == len(block) and max(abs(a - b) for a, b in zip(t0, tr)) < q * fpdim:
                classes[k] = (t0, m0, mult + 1)
                break
        else:
            classes.append((tr, mats, 1))
    for tr, mats, mult in classes:
        if mult != len(mats[0]):
            raise SpectralError(
                f"irrep of dimension {len(mats[0])} occurs {mult} times in the regular representation"
            )
    irreps = []
    for tr, mats, _ in classes:
        proto = Irrep(len(mats[0]), tuple(mats), None, ring.dual, ctx)
        irreps.append(Irrep(proto.dim, proto.matrices, codegree(ring, proto, tol), ring.dual, ctx))
    if sum(rho.dim**2 for rho in irreps) != r:
        raise SpectralError("irreducible dimensions do not account for the regular representation")

    def is_fp(rho):
        return rho.dim == 1 and max(abs(rho.matrices[i][0][0] - dims[i]) for i in range(r)) < q * fpdim

    def key(rho):
        vals = tuple(k for x in rho.traces for k in (_grid_key(ctx, x.real, q), _grid_key(ctx, x.imag, q)))
        return (not is_fp(rho), -_grid_key(ctx, rho.codegree, q), rho.dim, vals)

    irreps.sort(key=key)
    return IrrepSet(ring, ctx, tol, dims, fpdim, tuple(irreps))


def matrel_check(irrep: Irrep, v1, v2, f1, f2):
    """Residual of the orthogonality relation for matrix coefficients.

    ``|sum_i f1(rho(b_i) v1) f2(rho(b_{i*}) v2) - alpha f2(v1) f1(v2)|``,
    with functionals applied bilinearly.
    """
    ctx = irrep.ctx
    v1, v2, f1, f2 = ([ctx.mpc(x) for x in vec] for vec in (v1, v2, f1, f2))
    lhs = ctx.mpc(0)
    for i, Mi in enumerate(irrep.matrices):
        Mis = irrep.matrices[irrep.dual[i]]
        lhs += mpla.dot(f1, mpla.matvec(Mi, v1)) * mpla.dot(f2, mpla.matvec(Mis, v2))
    rhs = irrep.codegree * mpla.dot(f2, v1) * mpla.dot(f1, v2)
    return abs(lhs - rhs)
