"""Brute-force permutation-group oracle for the Rep(G) integrality identity.

For conjugacy classes ``C_1..C_n`` of a finite group the number of tuples
``(g_1..g_n)`` with ``g_k in C_k`` and ``g_1 ... g_n = 1`` can be counted
directly and compared with ``J_{n,0} / dimC`` computed from the fusion ring
``Rep(G)``.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .report import CriterionReport, Witness, decimal, digits_for
from .ring import FusionRing
from .spectra import Spectrum

__all__ = [
    "GroupTooLargeError",
    "CorrespondenceError",
    "PermGroup",
    "enumerate_group",
    "parse_cycles",
    "symmetric_group",
    "cyclic_group",
    "dihedral_group",
    "count_tuples",
    "orbit_divisibility",
    "s3_class_characters",
    "match_classes",
    "crosscheck_repG",
]

MAX_ORDER = 10_000
MAX_DEGREE = 8

Perm = tuple[int, ...]


class GroupTooLargeError(ValueError):
    pass


class CorrespondenceError(ValueError):
    """No bijection between conjugacy classes and ring characters fits the data."""


def compose(p: Perm, q: Perm) -> Perm:
    """``p * q``, acting as ``x -> p(q(x))``."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def parse_cycles(text: str, degree: int) -> Perm:
    """Permutation of ``{0..degree-1}`` from 1-based cycle notation such as ``(1 2)(3 4)``.

    Digits inside a cycle may be run together when the degree is below 10,
    so ``(123)`` is accepted.
    """
    perm = list(range(degree))
    for body in re.findall(r"\(([^()]*)\)", text):
        parts = body.replace(",", " ").split()
        if len(parts) == 1 and degree < 10:
            parts = list(parts[0])
        pts = [int(x) - 1 for x in parts]
        if len(set(pts)) != len(pts) or any(not 0 <= x < degree for x in pts):
            raise ValueError(f"bad cycle ({body})")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return tuple(perm)


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.degree))

    @cached_property
    def classes(self) -> tuple[frozenset, ...]:
        """Conjugacy classes, ordered by (size, smallest element)."""
        seen: set = set()
        out = []
        for g in self.elements:
            if g in seen:
                continue
            cls = frozenset(compose(compose(h, g), inverse(h)) for h in self.elements)
            seen |= cls
            out.append(cls)
        out.sort(key=lambda c: (len(c), min(c)))
        return tuple(out)

    @cached_property
    def centralizer_orders(self) -> tuple[int, ...]:
        out = []
        for cls in self.classes:
            g = min(cls)
            out.append(sum(1 for h in self.elements if compose(h, g) == compose(g, h)))
        return tuple(out)

    def class_of(self, g: Perm) -> int:
        for k, cls in enumerate(self.classes):
            if g in cls:
                return k
        raise KeyError(g)


def enumerate_group(generators, degree: int | None = None) -> PermGroup:
    """Breadth-first closure of the generators under composition."""
    gens = tuple(tuple(int(x) for x in g) for g in generators)
    if degree is None:
        if not gens:
            raise ValueError("degree needed for the trivial group")
        degree = len(gens[0])
    if degree > MAX_DEGREE:
        raise GroupTooLargeError(f"degree {degree} exceeds {MAX_DEGREE}")
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"{g} is not a permutation of degree {degree}")
    ident = tuple(range(degree))
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in seen:
                seen.add(h)
                order.append(h)
                queue.append(h)
                if len(order) > MAX_ORDER:
                    raise GroupTooLargeError(f"group order exceeds {MAX_ORDER}")
    return PermGroup(degree, gens, tuple(sorted(order)))


def symmetric_group(n: int = 3) -> PermGroup:
    if n == 1:
        return enumerate_group([], 1)
    return enumerate_group([parse_cycles("(1 2)", n), parse_cycles("(" + " ".join(map(str, range(1, n + 1))) + ")", n)])


def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return enumerate_group([], 1)
    return enumerate_group([parse_cycles("(" + " ".join(map(str, range(1, n + 1))) + ")", n)])


def dihedral_group(n: int = 4) -> PermGroup:
    """Symmetries of an ``n``-gon acting on its vertices."""
    rotation = parse_cycles("(" + " ".join(map(str, range(1, n + 1))) + ")", n)
    reflection = tuple((-x) % n for x in range(n))
    return enumerate_group([rotation, reflection])


def count_tuples(group: PermGroup, classes) -> int:
    """Number of ``(g_1..g_n)`` in ``C_1 x ... x C_n`` with ``g_1 ... g_n = 1``.

    ``classes`` holds class indices; the last element is forced, so only
    ``C_1 x ... x C_(n-1)`` is enumerated.
    """
    if len(classes) < 2:
        raise ValueError("need at least two classes")
    return sum(1 for _ in _solutions(group, classes))


def _solutions(group: PermGroup, classes):
    cls = [group.classes[k] for k in classes]
    for head in itertools.product(*cls[:-1]):
        prod = group.identity
        for g in head:
            prod = compose(prod, g)
        g_last = inverse(prod)
        if g_last in cls[-1]:
            yield head + (g_last,)


def orbit_divisibility(group: PermGroup, classes) -> list[tuple]:
    """Orbits of the solution set under simultaneous conjugation whose size
    is not divisible by some ``|C_k|``; each entry is (orbit size, k)."""
    remaining = set(_solutions(group, classes))
    sizes = [len(group.classes[k]) for k in classes]
    bad = []
    while remaining:
        t = next(iter(remaining))
        orbit = {tuple(compose(compose(h, g), inverse(h)) for g in t) for h in group.elements}
        remaining -= orbit
        for k, c in enumerate(sizes):
            if len(orbit) % c:
                bad.append((len(orbit), k))
    return bad


def s3_class_characters(g: Perm) -> tuple[int, int, int]:
    """Values of the trivial, sign and standard characters of S3 at ``g``.

    Ordered like the basis of the ``rep_s3`` catalog ring.
    """
    fixed = sum(1 for x, y in enumerate(g) if x == y)
    inversions = sum(1 for a in range(len(g)) for b in range(a + 1, len(g)) if g[a] > g[b])
    return (1, -1 if inversions % 2 else 1, fixed - 1)


def match_classes(group: PermGroup, spectrum: Spectrum, class_chars=s3_class_characters) -> tuple[int, ...]:
    """Spectrum character index for each conjugacy class.

    The class of ``g`` corresponds to the ring character ``b_i -> chi_i(g)``.
    """
    tol = spectrum.tolerance
    out = []
    for cls in group.classes:
        values = class_chars(min(cls))
        if len(values) != spectrum.ring.rank:
            raise CorrespondenceError("class character length differs from ring rank")
        hits = [
            s for s, row in enumerate(spectrum.chars)
            if all(abs(row[i] - values[i]) <= tol for i in range(len(values)))
        ]
        if len(hits) != 1:
            raise CorrespondenceError(f"class of {min(cls)} matches characters {hits}")
        out.append(hits[0])
    if sorted(out) != list(range(spectrum.size)):
        raise CorrespondenceError("class-to-character map is not a bijection")
    return tuple(out)


def crosscheck_repG(
    group: PermGroup,
    ring: FusionRing,
    spectrum: Spectrum,
    ns=(3, 4),
    class_chars=s3_class_characters,
) -> CriterionReport:
    """Compare ``J_{n,0}/dimC`` with :func:`count_tuples` over every class tuple.

    Also requires ``dimZ`` of each matched character to equal its class size.
    """
    from .integrality import J_ns, center_dims

    if spectrum.ring != ring:
        raise ValueError("spectrum was computed for a different ring")
    corr = match_classes(group, spectrum, class_chars)
    cd = center_dims(spectrum)
    tol = spectrum.tolerance
    digits = digits_for(spectrum.precision)
    witnesses = []
    for k, s in enumerate(corr):
        err = abs(cd.dimZ[s] - len(group.classes[k]))
        if err > tol:
            witnesses.append(Witness(("dimZ", k), decimal(cd.dimZ[s], digits), decimal(err - tol, 10)))
    worst = spectrum.ctx.mpf(0)
    checked = 0
    for n in ns:
        for tup in itertools.product(range(len(group.classes)), repeat=n):
            count = count_tuples(group, tup)
            value = J_ns(spectrum, cd, n, 0, [corr[k] for k in tup]) / cd.dimC
            err = abs(value - count)
            worst = max(worst, err)
            checked += 1
            if err > tol:
                witnesses.append(Witness((n, *tup), decimal(value, digits), decimal(err - tol, 10), {"count": count}))
    return CriterionReport.from_findings(
        ring.name or "ring", "group-oracle", witnesses, spectrum.precision, decimal(tol, 6),
        parameters={
            "group_order": group.order,
            "class_sizes": [len(c) for c in group.classes],
            "ns": list(ns),
            "tuples": checked,
            "max_residual": decimal(worst, 10),
        },
    )
