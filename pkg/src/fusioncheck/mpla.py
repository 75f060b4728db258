"""Small dense linear algebra at arbitrary precision.

Matrices are lists of rows of mpmath numbers belonging to one
``MPContext``; every value created here carries that context's precision.
Only what the spectral engine needs is provided: products, adjoints, a
cyclic Jacobi eigensolver for Hermitian matrices and eigenvalue clustering.
"""

from __future__ import annotations

from mpmath import MPContext

__all__ = [
    "make_context",
    "to_matrix",
    "matmul",
    "matvec",
    "adjoint",
    "identity",
    "dot",
    "vdot",
    "norm",
    "frobenius_norm",
    "column",
    "columns_to_matrix",
    "eigh",
    "cluster",
    "numerical_rank",
]


def make_context(precision: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = int(precision)
    return ctx


def to_matrix(ctx, rows) -> list[list]:
    return [[ctx.mpc(x) for x in row] for row in rows]


def identity(ctx, n: int) -> list[list]:
    return [[ctx.mpc(1 if i == j else 0) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list]:
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    return [[sum((A[i][t] * B[t][j] for t in range(k)), 0 * A[i][0]) for j in range(m)] for i in range(n)]


def matvec(A, x) -> list:
    return [sum((a * b for a, b in zip(row, x)), 0 * x[0]) for row in A]


def adjoint(A) -> list[list]:
    if not A:
        return []
    return [[A[i][j].conjugate() for i in range(len(A))] for j in range(len(A[0]))]


def dot(x, y):
    """Bilinear ``sum x_k y_k``."""
    return sum((a * b for a, b in zip(x, y)), 0 * x[0])


def vdot(x, y):
    """Sesquilinear ``sum conj(x_k) y_k``."""
    return sum((a.conjugate() * b for a, b in zip(x, y)), 0 * x[0])


def norm(ctx, x):
    return ctx.sqrt(sum(abs(a) ** 2 for a in x))


def frobenius_norm(ctx, A):
    return ctx.sqrt(sum(abs(a) ** 2 for row in A for a in row))


def column(A, j: int) -> list:
    return [row[j] for row in A]


def columns_to_matrix(cols) -> list[list]:
    """Assemble column vectors into a matrix (rows x len(cols))."""
    return [[c[i] for c in cols] for i in range(len(cols[0]))]


def eigh(ctx, H, max_sweeps: int = 60):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with real eigenvalues in ascending order
    and ``vectors`` a unitary matrix whose columns are the eigenvectors.
    Raises ``ArithmeticError`` if the off-diagonal mass does not vanish
    within ``max_sweeps``.
    """
    n = len(H)
    A = [[ctx.mpc(x) for x in row] for row in H]
    for i in range(n):
        A[i][i] = ctx.mpc(A[i][i].real)
    V = identity(ctx, n)
    scale = frobenius_norm(ctx, A)
    if n <= 1 or scale == 0:
        return [A[i][i].real for i in range(n)], V
    eps = ctx.ldexp(scale, -ctx.prec + 8)
    for _ in range(max_sweeps):
        off = ctx.sqrt(sum(abs(A[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= eps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p][q]
                ah = abs(h)
                if ah <= ctx.ldexp(eps, -8):
                    continue
                phase = h / ah  # e^{i theta}
                app, aqq = A[p][p].real, A[q][q].real
                tau = (aqq - app) / (2 * ah)
                t = 1 / (abs(tau) + ctx.sqrt(1 + tau * tau))
                if tau < 0:
                    t = -t
                c = 1 / ctx.sqrt(1 + t * t)
                s = t * c
                # J = [[c, s], [-s e^{-i theta}, c e^{-i theta}]] acting on columns p, q.
                ph_bar = phase.conjugate()
                j10, j11 = -s * ph_bar, c * ph_bar
                for k in range(n):
                    akp, akq = A[k][p], A[k][q]
                    A[k][p] = akp * c + akq * j10
                    A[k][q] = akp * s + akq * j11
                for k in range(n):
                    apk, aqk = A[p][k], A[q][k]
                    A[p][k] = c * apk + j10.conjugate() * aqk
                    A[q][k] = s * apk + j11.conjugate() * aqk
                for k in range(n):
                    vkp, vkq = V[k][p], V[k][q]
                    V[k][p] = vkp * c + vkq * j10
                    V[k][q] = vkp * s + vkq * j11
                A[p][q] = A[q][p] = ctx.mpc(0)
                A[p][p] = ctx.mpc(app - t * ah)
                A[q][q] = ctx.mpc(aqq + t * ah)
    else:
        raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    order = sorted(range(n), key=lambda i: A[i][i].real)
    values = [A[i][i].real for i in order]
    vectors = [[V[k][i] for i in order] for k in range(n)]
    return values, vectors


def cluster(values, gap) -> list[list[int]]:
    """Group indices of sorted ``values`` whose consecutive spacing is below ``gap``."""
    groups: list[list[int]] = []
    for k, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] < gap:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def numerical_rank(ctx, gram, rel_tol) -> int:
    """Rank of a Hermitian positive semidefinite Gram matrix."""
    values, _ = eigh(ctx, gram)
    top = max((abs(v) for v in values), default=0)
    if top == 0:
        return 0
    return sum(1 for v in values if v > rel_tol * top)
