"""Fusion ring data model and axiom validation.

A fusion ring of rank ``r`` is stored as a dense ``r x r x r`` tensor of
nonnegative integers ``N[i, j, m]`` (the multiplicity of ``b_m`` in
``b_i * b_j``) together with a duality involution on basis indices.  Index 0
is always the unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "StructuralError",
    "Violation",
    "AxiomError",
    "FusionRing",
    "RingElement",
    "validate",
    "check_valid",
]

# Sums in the associativity check must stay below this bound in int64.
_INT64_SAFE = 2**62


class StructuralError(ValueError):
    """Malformed ring data: wrong shapes, bad involution, integer overflow.

    Distinct from an axiom violation, which is reported as data by
    :func:`validate`.
    """


@dataclass(frozen=True)
class Violation:
    """One violated fusion-ring identity at a specific index tuple."""

    axiom: str
    indices: tuple[int, ...]
    detail: str = ""

    def __str__(self) -> str:
        idx = ",".join(map(str, self.indices))
        return f"{self.axiom} violated at ({idx})" + (f": {self.detail}" if self.detail else "")


class AxiomError(ValueError):
    """Raised when a ring fails validation; carries the full violation list."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"{len(self.violations)} axiom violation(s): {head}{more}")


@dataclass(frozen=True)
class RingElement:
    """Integer combination ``sum_i coeffs[i] * b_i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: RingElement) -> RingElement:
        if len(self) != len(other):
            raise StructuralError("ring elements of different rank")
        return RingElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]


@dataclass(frozen=True, eq=False)
class FusionRing:
    """Based ring with nonnegative integer structure constants.

    ``tensor[i, j, m]`` is the coefficient of ``b_m`` in ``b_i b_j`` and
    ``dual[i]`` is the index of ``b_i^*``.  The constructor checks shapes
    and the involution only; use :func:`validate` for the ring axioms.
    """

    dual: tuple[int, ...]
    tensor: np.ndarray = field(repr=False)
    name: str | None = None

    def __post_init__(self):
        dual = tuple(int(p) for p in self.dual)
        try:
            raw = np.asarray(self.tensor)
        except (TypeError, ValueError) as exc:
            raise StructuralError(f"tensor is not a rectangular array: {exc}") from None
        r = len(dual)
        if r < 1:
            raise StructuralError("rank must be positive")
        if raw.shape != (r, r, r):
            raise StructuralError(f"tensor shape {raw.shape} does not match rank {r}")
        if raw.dtype.kind not in "iu" and not (
            raw.dtype == object and all(isinstance(x, (int, np.integer)) for x in raw.flat)
        ):
            raise StructuralError(f"tensor entries must be integers, got dtype {raw.dtype}")
        if any(int(x) >= _INT64_SAFE for x in raw.flat):
            raise StructuralError("fusion coefficient exceeds the int64-safe bound 2^62")
        tensor = raw.astype(np.int64)
        if (tensor < 0).any():
            bad = tuple(int(k) for k in np.argwhere(tensor < 0)[0])
            raise StructuralError(f"negative fusion coefficient at {bad}")
        if sorted(dual) != list(range(r)):
            raise StructuralError(f"dual {list(dual)} is not a permutation of 0..{r - 1}")
        for i, p in enumerate(dual):
            if dual[p] != i:
                raise StructuralError(f"dual is not an involution: dual(dual({i})) = {dual[p]}")
        if dual[0] != 0:
            raise StructuralError("dual(0) must be 0")
        tensor.setflags(write=False)
        object.__setattr__(self, "dual", dual)
        object.__setattr__(self, "tensor", tensor)

    @property
    def rank(self) -> int:
        return len(self.dual)

    @property
    def unit(self) -> int:
        return 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FusionRing):
            return NotImplemented
        return self.dual == other.dual and np.array_equal(self.tensor, other.tensor)

    def __hash__(self) -> int:
        return hash((self.dual, self.tensor.tobytes()))

    @property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.tensor, self.tensor.transpose(1, 0, 2)))

    def N(self, i: int, j: int, m: int) -> int:
        return int(self.tensor[i, j, m])

    def basis(self, i: int) -> RingElement:
        c = [0] * self.rank
        c[i] = 1
        return RingElement(tuple(c))

    def element(self, coeffs: Iterable[int]) -> RingElement:
        e = RingElement(tuple(coeffs))
        if len(e) != self.rank:
            raise StructuralError(f"element has length {len(e)}, ring rank is {self.rank}")
        return e

    def multiply(self, a: RingElement, b: RingElement) -> RingElement:
        """Product ``(ab)_m = sum_{i,j} a_i b_j N[i, j, m]``."""
        self._check(a)
        self._check(b)
        out = [0] * self.rank
        for i, ai in enumerate(a.coeffs):
            if not ai:
                continue
            for j, bj in enumerate(b.coeffs):
                if not bj:
                    continue
                row = self.tensor[i, j]
                for m in np.flatnonzero(row):
                    out[m] += ai * bj * int(row[m])
        return RingElement(tuple(out))

    def star(self, a: RingElement) -> RingElement:
        self._check(a)
        out = [0] * self.rank
        for i, c in enumerate(a.coeffs):
            out[self.dual[i]] = c
        return RingElement(tuple(out))

    def trace(self, a: RingElement) -> int:
        """Coefficient of the unit ``b_0``."""
        self._check(a)
        return a.coeffs[0]

    def inner(self, a: RingElement, b: RingElement) -> int:
        """``(a, b) = trace(a b^*)``; the basis is orthonormal."""
        return self.trace(self.multiply(a, self.star(b)))

    def left_matrix(self, i: int) -> np.ndarray:
        """Matrix of ``x -> b_i x``: entry ``[m, j] = N[i, j, m]``."""
        return np.ascontiguousarray(self.tensor[i].T)

    def right_matrix(self, i: int) -> np.ndarray:
        """Matrix of ``x -> x b_i``: entry ``[m, j] = N[j, i, m]``."""
        return np.ascontiguousarray(self.tensor[:, i, :].T)

    def with_entry(self, i: int, j: int, m: int, value: int) -> FusionRing:
        """Copy with a single tensor entry replaced (no validation)."""
        t = np.array(self.tensor)
        t[i, j, m] = value
        return FusionRing(self.dual, t, self.name)

    def _check(self, a: RingElement) -> None:
        if len(a) != self.rank:
            raise StructuralError(f"element has length {len(a)}, ring rank is {self.rank}")


def _collect(axiom: str, mask: np.ndarray, detail) -> list[Violation]:
    return [
        Violation(axiom, tuple(int(k) for k in idx), detail(tuple(int(k) for k in idx)))
        for idx in np.argwhere(mask)
    ]


def validate(ring: FusionRing) -> list[Violation]:
    """Return every violated ring axiom; an empty list means the ring is valid.

    Checks the unit axiom, the duality axiom ``N[i, j, 0] = [j = i*]``,
    associativity over all ``(i, j, k, l)`` and the Frobenius reciprocity
    symmetries.  Raises :class:`StructuralError` if the associativity sums
    could overflow 64-bit integers.
    """
    N = ring.tensor
    r = ring.rank
    D = np.asarray(ring.dual)
    eye = np.eye(r, dtype=np.int64)
    out: list[Violation] = []

    out += _collect("unit-left", N[0] != eye, lambda t: f"N[0,{t[0]},{t[1]}]={N[0, t[0], t[1]]}")
    out += _collect("unit-right", N[:, 0, :] != eye, lambda t: f"N[{t[0]},0,{t[1]}]={N[t[0], 0, t[1]]}")

    expected = np.zeros((r, r), dtype=np.int64)
    expected[np.arange(r), D] = 1
    bad = N[:, :, 0] != expected
    out += [
        Violation("duality", (i, j, 0), f"N[{i},{j},0]={N[i, j, 0]}, expected {expected[i, j]}")
        for i, j in (tuple(int(k) for k in idx) for idx in np.argwhere(bad))
    ]

    big = int(N.max()) if N.size else 0
    if r * big * big >= _INT64_SAFE:
        raise StructuralError(
            f"associativity sums may overflow int64 (rank {r}, max coefficient {big})"
        )
    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    out += _collect(
        "associativity",
        lhs != rhs,
        lambda t: f"(b{t[0]} b{t[1]}) b{t[2]} has {lhs[t]} copies of b{t[3]}, b{t[0]} (b{t[1]} b{t[2]}) has {rhs[t]}",
    )

    I, J, M = np.indices((r, r, r))
    images = {
        "frobenius N[i,j,m]=N[j,m*,i*]": N[J, D[M], D[I]],
        "frobenius N[i,j,m]=N[m*,i,j*]": N[D[M], I, D[J]],
        "frobenius N[i,j,m]=N[j*,i*,m*]": N[D[J], D[I], D[M]],
    }
    for axiom, img in images.items():
        out += _collect(axiom, N != img, lambda t, img=img: f"{N[t]} != {img[t]}")
    return out


def check_valid(ring: FusionRing) -> FusionRing:
    """Return ``ring`` unchanged or raise :class:`AxiomError`."""
    violations = validate(ring)
    if violations:
        raise AxiomError(violations)
    return ring
