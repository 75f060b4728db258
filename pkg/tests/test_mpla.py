import random

import mpmath
import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from fusioncheck import mpla


def _ctx(bits=256):
    return mpla.make_context(bits)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_eigh_reconstructs_random_hermitian(seed, n):
    ctx = _ctx()
    rnd = random.Random(seed)
    A = [[ctx.mpc(0)] * n for _ in range(n)]
    for a in range(n):
        A[a][a] = ctx.mpc(rnd.uniform(-3, 3))
        for b in range(a + 1, n):
            z = ctx.mpc(rnd.uniform(-1, 1), rnd.uniform(-1, 1))
            A[a][b], A[b][a] = z, z.conjugate()
    w, V = mpla.eigh(ctx, A)
    assert all(w[k] <= w[k + 1] for k in range(n - 1))
    VtV = mpla.matmul(mpla.adjoint(V), V)
    AV = mpla.matmul(A, V)
    for a in range(n):
        for b in range(n):
            assert abs(VtV[a][b] - (a == b)) < ctx.mpf("1e-60")
            assert abs(AV[a][b] - V[a][b] * w[b]) < ctx.mpf("1e-60")


def test_eigh_agrees_with_numpy():
    ctx = _ctx()
    rng = np.random.default_rng(3)
    X = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = X + X.conj().T
    w, _ = mpla.eigh(ctx, [[ctx.mpc(complex(z)) for z in row] for row in H])
    assert np.allclose([float(x) for x in w], np.linalg.eigvalsh(H), atol=1e-12)


def test_cluster_and_rank():
    ctx = _ctx()
    groups = mpla.cluster([ctx.mpf(0), ctx.mpf("1e-70"), ctx.mpf(1)], ctx.mpf("1e-30"))
    assert [len(g) for g in groups] == [2, 1]
    gram = [[ctx.mpf(1), ctx.mpf(1)], [ctx.mpf(1), ctx.mpf(1)]]
    assert mpla.numerical_rank(ctx, gram, ctx.mpf("1e-30")) == 1


def test_precision_is_per_context():
    lo, hi = _ctx(64), _ctx(512)
    assert abs(hi.sqrt(2) ** 2 - 2) < mpmath.mpf("1e-150")
    assert lo.prec == 64 and hi.prec == 512
