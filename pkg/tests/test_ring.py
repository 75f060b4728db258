import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusioncheck import catalog as cat
from fusioncheck.ring import (
    AxiomError,
    FusionRing,
    StructuralError,
    check_valid,
    validate,
)

from .conftest import ALL_RINGS


def brute_force_associative(ring):
    """Independent loop-based associativity check over all index quadruples."""
    r, N = ring.rank, ring.tensor
    for i, j, k, l in itertools.product(range(r), repeat=4):
        left = sum(int(N[i, j, m]) * int(N[m, k, l]) for m in range(r))
        right = sum(int(N[j, k, m]) * int(N[i, m, l]) for m in range(r))
        if left != right:
            return False
    return True


def test_fibonacci_valid():
    assert validate(cat.catalog("fibonacci")) == []


def test_fibonacci_duality_corruption_witnessed():
    bad = cat.catalog("fibonacci").with_entry(1, 1, 0, 0)
    found = validate(bad)
    assert any(v.axiom == "duality" and v.indices == (1, 1, 0) for v in found)


def test_rep_s3_associative_by_brute_force():
    ring = cat.catalog("rep_s3")
    assert brute_force_associative(ring)
    assert validate(ring) == []


@pytest.mark.parametrize("name", ALL_RINGS + ["su2_9", "cyclic_10", "cyclic_7", "su2_5"])
def test_catalog_rings_validate(name):
    assert validate(cat.catalog(name)) == []


def test_multiply_examples():
    fib = cat.catalog("fibonacci")
    b1 = fib.basis(1)
    assert fib.multiply(b1, b1).coeffs == (1, 1)
    s3 = cat.catalog("rep_s3")
    V = s3.basis(2)
    assert s3.multiply(V, V).coeffs == (1, 1, 1)
    assert s3.inner(s3.multiply(V, V), V) == 1
    assert fib.trace(fib.multiply(b1, b1)) == 1


@pytest.mark.parametrize("name", ALL_RINGS)
def test_inner_orthonormal_and_unit(name):
    ring = cat.catalog(name)
    for i in range(ring.rank):
        for j in range(ring.rank):
            assert ring.inner(ring.basis(i), ring.basis(j)) == int(i == j)
        assert ring.multiply(ring.basis(0), ring.basis(i)) == ring.basis(i)


def test_left_matrices():
    fib = cat.catalog("fibonacci")
    assert fib.left_matrix(0).tolist() == [[1, 0], [0, 1]]
    assert fib.left_matrix(1).tolist() == [[0, 1], [1, 1]]
    s3 = cat.catalog("rep_s3")
    assert (s3.left_matrix(2).T == s3.left_matrix(2)).all()


@pytest.mark.parametrize("name", ALL_RINGS)
def test_adjoint_identities(name):
    ring = cat.catalog(name)
    for i in range(ring.rank):
        assert (ring.left_matrix(i).T == ring.left_matrix(ring.dual[i])).all()
        assert (ring.right_matrix(i).T == ring.right_matrix(ring.dual[i])).all()


@pytest.mark.parametrize("name", ALL_RINGS)
def test_frobenius_symmetry_orbit(name):
    ring = cat.catalog(name)
    d = ring.dual
    for i, j, m in itertools.product(range(ring.rank), repeat=3):
        v = ring.N(i, j, m)
        assert v == ring.N(j, d[m], d[i]) == ring.N(d[m], i, d[j]) == ring.N(d[j], d[i], d[m])


coeffs = st.integers(-3, 3)


@pytest.mark.parametrize("name", ["fibonacci", "rep_s3", "su2_3", "group_s3"])
@given(data=st.data())
def test_multiply_associative_and_unital(name, data):
    ring = cat.catalog(name)
    vec = st.lists(coeffs, min_size=ring.rank, max_size=ring.rank)
    a, b, c = (ring.element(data.draw(vec)) for _ in range(3))
    assert ring.multiply(ring.multiply(a, b), c) == ring.multiply(a, ring.multiply(b, c))
    assert ring.multiply(ring.basis(0), a) == a == ring.multiply(a, ring.basis(0))


@given(i=st.integers(0, 1), j=st.integers(0, 1), m=st.integers(0, 1), value=st.integers(0, 5))
def test_single_corruptions(i, j, m, value):
    fib = cat.catalog("fibonacci")
    if value == fib.N(i, j, m):
        return
    bad = fib.with_entry(i, j, m, value)
    if (i, j, m) == (1, 1, 1):
        # x^2 = 1 + n x is a fusion ring for every n >= 0
        assert validate(bad) == []
        assert brute_force_associative(bad)
    else:
        assert validate(bad)


def test_structural_errors():
    with pytest.raises(StructuralError):
        FusionRing((0, 1), np.zeros((3, 3, 3), dtype=int))
    with pytest.raises(StructuralError):
        FusionRing((0, 0), np.zeros((2, 2, 2), dtype=int))
    with pytest.raises(StructuralError):
        FusionRing((1, 0), np.zeros((2, 2, 2), dtype=int))
    t = np.zeros((2, 2, 2), dtype=int)
    t[1, 1, 1] = -1
    with pytest.raises(StructuralError):
        FusionRing((0, 1), t)


def test_overflow_is_structural():
    t = np.zeros((2, 2, 2), dtype=object)
    t[0, 0, 0] = t[0, 1, 1] = t[1, 0, 1] = t[1, 1, 0] = 1
    t[1, 1, 1] = 2**40
    with pytest.raises(StructuralError):
        validate(FusionRing((0, 1), t))


def test_check_valid_raises_with_violations():
    bad = cat.catalog("fibonacci").with_entry(1, 1, 0, 0)
    with pytest.raises(AxiomError) as exc:
        check_valid(bad)
    assert exc.value.violations


def test_ring_is_immutable():
    fib = cat.catalog("fibonacci")
    with pytest.raises(ValueError):
        fib.tensor[0, 0, 0] = 5


def test_product_ring_and_unknown_name():
    ff = cat.catalog("fib_x_fib")
    assert ff.rank == 4 and ff.is_commutative
    assert not cat.catalog("group_s3").is_commutative
    with pytest.raises(KeyError):
        cat.catalog("nope")
    c3 = cat.catalog("cyclic_3")
    assert c3.dual[1] == 2
