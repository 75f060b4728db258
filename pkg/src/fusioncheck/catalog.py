"""Built-in fusion rings.

Fixed names: ``trivial``, ``fibonacci``, ``ising``, ``rep_s3``, ``fib_x_fib``,
``group_s3``.  Parametrised families: ``cyclic_<n>`` (group ring of Z/n) and
``su2_<k>`` (the level-k truncation of Rep SU(2), rank k+1).
"""

from __future__ import annotations

import re
from itertools import permutations

import numpy as np

from .ring import FusionRing, check_valid

__all__ = ["catalog", "catalog_names", "describe", "product_ring", "group_ring"]


def _from_products(name: str, dual, products: dict[tuple[int, int], dict[int, int]]) -> FusionRing:
    r = len(dual)
    t = np.zeros((r, r, r), dtype=np.int64)
    for a in range(r):
        t[0, a, a] = t[a, 0, a] = 1
    for (i, j), terms in products.items():
        for m, c in terms.items():
            t[i, j, m] = c
    return FusionRing(tuple(dual), t, name)


def _fibonacci() -> FusionRing:
    return _from_products("fibonacci", [0, 1], {(1, 1): {0: 1, 1: 1}})


def _ising() -> FusionRing:
    # 0 = 1, 1 = psi, 2 = sigma
    return _from_products(
        "ising",
        [0, 1, 2],
        {(1, 1): {0: 1}, (1, 2): {2: 1}, (2, 1): {2: 1}, (2, 2): {0: 1, 1: 1}},
    )


def _rep_s3() -> FusionRing:
    # 0 = trivial, 1 = sign, 2 = two-dimensional irrep
    return _from_products(
        "rep_s3",
        [0, 1, 2],
        {(1, 1): {0: 1}, (1, 2): {2: 1}, (2, 1): {2: 1}, (2, 2): {0: 1, 1: 1, 2: 1}},
    )


def _cyclic(n: int) -> FusionRing:
    t = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            t[i, j, (i + j) % n] = 1
    return FusionRing(tuple((-i) % n for i in range(n)), t, f"cyclic_{n}")


def _su2(k: int) -> FusionRing:
    r = k + 1
    t = np.zeros((r, r, r), dtype=np.int64)
    for a in range(r):
        for b in range(r):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                t[a, b, c] = 1
    return FusionRing(tuple(range(r)), t, f"su2_{k}")


def group_ring(elements: list[tuple[int, ...]], name: str) -> FusionRing:
    """Group ring of a permutation group; ``elements[0]`` must be the identity."""
    index = {g: k for k, g in enumerate(elements)}
    n = len(elements)
    t = np.zeros((n, n, n), dtype=np.int64)
    dual = [0] * n
    for a, g in enumerate(elements):
        inv = [0] * len(g)
        for x, y in enumerate(g):
            inv[y] = x
        dual[a] = index[tuple(inv)]
        for b, h in enumerate(elements):
            # (g h)(x) = g(h(x))
            t[a, b, index[tuple(g[h[x]] for x in range(len(g)))]] = 1
    return FusionRing(tuple(dual), t, name)


def _group_s3() -> FusionRing:
    elements = sorted(permutations(range(3)))
    return group_ring(elements, "group_s3")


def product_ring(a: FusionRing, b: FusionRing, name: str | None = None) -> FusionRing:
    """Tensor product ring; basis ``(i, j)`` is stored at index ``i * b.rank + j``."""
    ra, rb = a.rank, b.rank
    t = np.einsum("ikm,jln->ijklmn", a.tensor, b.tensor)
    t = t.reshape(ra * rb, ra * rb, ra * rb)
    dual = tuple(a.dual[i] * rb + b.dual[j] for i in range(ra) for j in range(rb))
    return FusionRing(dual, t, name or f"{a.name}_x_{b.name}")


_FIXED = {
    "trivial": lambda: _from_products("trivial", [0], {}),
    "fibonacci": _fibonacci,
    "ising": _ising,
    "rep_s3": _rep_s3,
    "fib_x_fib": lambda: product_ring(_fibonacci(), _fibonacci(), "fib_x_fib"),
    "group_s3": _group_s3,
}

_DESCRIPTIONS = {
    "trivial": "rank 1, the integers",
    "fibonacci": "rank 2, b1*b1 = 1 + b1",
    "ising": "rank 3 (1, psi, sigma), psi^2 = 1, psi sigma = sigma, sigma^2 = 1 + psi",
    "rep_s3": "rank 3 (1, sign, V), representation ring of S3",
    "fib_x_fib": "rank 4, Fibonacci tensor Fibonacci",
    "group_s3": "rank 6, group ring of S3 (noncommutative)",
    "cyclic_<n>": "rank n, group ring of Z/n",
    "su2_<k>": "rank k+1, level-k truncated SU(2) fusion rules",
}

_FAMILY = re.compile(r"^(cyclic|su2)_(\d+)$")


def catalog(name: str) -> FusionRing:
    """Return a validated built-in ring by name."""
    if name in _FIXED:
        return check_valid(_FIXED[name]())
    m = _FAMILY.match(name)
    if m:
        n = int(m.group(2))
        if m.group(1) == "cyclic" and 1 <= n <= 32:
            return check_valid(_cyclic(n))
        if m.group(1) == "su2" and 0 <= n <= 31:
            return check_valid(_su2(n))
    raise KeyError(f"unknown catalog ring {name!r}; known: {', '.join(_DESCRIPTIONS)}")


def catalog_names() -> list[str]:
    """Representative names, including a few members of each family."""
    return [
        "trivial", "fibonacci", "ising", "rep_s3", "cyclic_2", "cyclic_3",
        "cyclic_4", "cyclic_5", "fib_x_fib", "su2_3", "group_s3",
    ]


def describe() -> dict[str, str]:
    return dict(_DESCRIPTIONS)
