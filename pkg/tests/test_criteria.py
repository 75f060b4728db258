import itertools
from functools import lru_cache
from pathlib import Path

import mpmath
import numpy as np
import pytest

from fusioncheck import catalog as cat
from fusioncheck.criteria import (
    dual_ring,
    dual_ring_report,
    invariant_In,
    lpw_general,
    lpw_positivity,
    recursion_check,
    recursion_residual,
    schur_inequalities,
)
from fusioncheck.fring import parse_file
from fusioncheck.report import FAIL, PASS
from fusioncheck.spectra import character_table, decompose_regular, fp_dimensions

from .conftest import COMMUTATIVE, TOL35, TOL40, irreps_of, spectrum_of

DATA = Path(__file__).parent / "data"


def as_complex(text: str) -> complex:
    return complex(text.replace("i", "j"))


@lru_cache(maxsize=None)
def violator():
    return parse_file(DATA / "lpw_violator.fring")


@lru_cache(maxsize=None)
def violator_x_s3_irreps():
    return decompose_regular(cat.product_ring(violator(), cat.catalog("group_s3"), "violator_x_s3"))


def schur_float_oracle(ring, dims):
    """Plain-float evaluation of the four families; returns violated families."""
    N = ring.tensor.astype(float)
    d = [float(x) for x in dims]
    r = ring.rank
    bad = set()
    eps = 1e-9
    for i, j in itertools.product(range(r), repeat=2):
        if (N[i, j] ** 2).sum() > min(d[i] ** 2, d[j] ** 2) + eps:
            bad.add("i")
        for m in range(r):
            if N[i, j, m] > d[i] * d[j] / d[m] + eps:
                bad.add("ii")
            if N[i, j, m] > min(d[i], d[j], d[m]) + eps:
                bad.add("iii")
    for q in itertools.product(range(r), repeat=4):
        val = sum(N[q[0], q[1], m] * N[q[2], q[3], m] for m in range(r))
        if val > min(d[q[p]] * d[q[s]] for p, s in itertools.combinations(range(4), 2)) + eps:
            bad.add("iv")
    return bad


@pytest.mark.parametrize("name", [*cat.catalog_names(), "su2_6"])
def test_schur_passes_and_agrees_with_oracle(name):
    ring = cat.catalog(name)
    dims, _ = fp_dimensions(ring)
    rep = schur_inequalities(ring, dims)
    assert rep.verdict == PASS
    assert schur_float_oracle(ring, dims) == set()
    assert "invalid input" in rep.notes[0]


def test_schur_ising_tight_bound():
    ring = cat.catalog("ising")
    dims, _ = fp_dimensions(ring)
    # N[sigma, sigma, 1] = 1 = min(sqrt2, sqrt2, 1): equality is allowed
    assert ring.N(2, 2, 0) == 1 and abs(min(dims[2], dims[2], dims[0]) - 1) < TOL40
    assert schur_inequalities(ring, dims).verdict == PASS


def test_schur_corrupted_fibonacci():
    fib = cat.catalog("fibonacci")
    dims, _ = fp_dimensions(fib)
    bad = fib.with_entry(1, 1, 1, 3)
    rep = schur_inequalities(bad, dims)
    assert rep.verdict == FAIL
    assert ("iii", 1, 1, 1) in [w.indices for w in rep.witnesses]
    assert "iii" in schur_float_oracle(bad, dims)


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_I1_and_I2(name):
    sp = spectrum_of(name)
    for s in range(sp.size):
        expected = sp.fpdim if s == sp.fp_index else 0
        assert abs(invariant_In(sp, (s,)) - expected) < TOL40
        for t in range(sp.size):
            expected = sp.codegrees[s] if t == sp.conj[s] else 0
            assert abs(invariant_In(sp, (s, t)) - expected) < TOL40


def test_rep_s3_transposition_triple_is_zero():
    sp = spectrum_of("rep_s3")
    t = next(s for s, row in enumerate(sp.chars) if abs(row[1] + 1) < TOL40)
    # 1*1 + 1*(-1)^3 + (1/2)*0
    assert abs(invariant_In(sp, (t, t, t))) < TOL40
    assert lpw_positivity(sp, 3).verdict == PASS


@pytest.mark.parametrize("name", COMMUTATIVE)
@pytest.mark.parametrize("n", [3, 4, 5])
def test_lpw_catalog_passes(name, n):
    assert lpw_positivity(spectrum_of(name), n).verdict == PASS


@pytest.mark.parametrize("n", [3, 4, 5])
def test_lpw_cyclic_values(n):
    sp = spectrum_of(f"cyclic_{n}")
    for combo in itertools.combinations_with_replacement(range(sp.size), 3):
        v = invariant_In(sp, combo)
        assert min(abs(v), abs(v - n)) < TOL40


def test_lpw_violator_fails_with_witness():
    sp = character_table(violator())
    rep = lpw_positivity(sp, 3)
    assert rep.verdict == FAIL
    w = rep.witnesses[0]
    chars = w.indices
    # two-path check: direct sum in numpy floats
    d = np.array([float(x) for x in sp.dims])
    chi = np.array([[complex(x) for x in row] for row in sp.chars])
    direct = sum(d[i] ** -1 * np.prod([chi[s][i] for s in chars]) for i in range(3))
    assert abs(direct - as_complex(w.value)) < 1e-12
    assert direct.real < 0


def test_lpw_rejects_small_n():
    with pytest.raises(ValueError):
        lpw_positivity(spectrum_of("fibonacci"), 2)


@pytest.mark.parametrize("name", ["fibonacci", "rep_s3", "cyclic_3"])
def test_lpw_general_agrees_on_commutative(name):
    irr = irreps_of(name)
    assert lpw_general(irr, 3).verdict == lpw_positivity(spectrum_of(name), 3).verdict == PASS


def test_lpw_general_violator_commutative():
    irr = decompose_regular(violator())
    assert lpw_general(irr, 3).verdict == FAIL


def test_lpw_general_group_s3():
    rep = lpw_general(irreps_of("group_s3"), 3)
    assert rep.verdict == PASS
    assert "not a proof" in rep.notes[0]


def test_lpw_general_trivial_slots_reduce_to_I1():
    """With two trivial slots the form is rho(sum_i d_i b_i), a positive operator."""
    irr = irreps_of("group_s3")
    d = [float(x) for x in irr.dims]
    for rho in irr:
        mats = [np.array([[complex(x) for x in row] for row in M]) for M in rho.matrices]
        R = sum(di * M for di, M in zip(d, mats))
        assert np.linalg.eigvalsh((R + R.conj().T) / 2).min() > -1e-12
    rep = lpw_general(irr, 3)
    assert not [w for w in rep.witnesses if list(w.indices).count(0) >= 2]


def test_lpw_general_finds_violation_in_matrix_irreps():
    irr = violator_x_s3_irreps()
    rep = lpw_general(irr, 3)
    assert rep.verdict == FAIL
    by_dims = {tuple(irr.irreps[k].dim for k in w.indices): w for w in rep.witnesses}
    w = by_dims[(2, 2, 2)]
    # re-evaluate the objective at the witness vectors with numpy
    vecs = [np.array([as_complex(x) for x in v]) for v in w.extra["vectors"]]
    d = np.array([float(x) for x in irr.dims])
    total = 0
    for i in range(irr.ring.rank):
        term = d[i] ** -1
        for k, v in zip(w.indices, vecs):
            M = np.array([[complex(x) for x in row] for row in irr.irreps[k].matrices[i]])
            term *= np.vdot(v, M @ v)
        total += term
    assert total.real < -1
    assert all(abs(np.linalg.norm(v) - 1) < 1e-12 for v in vecs)


@pytest.mark.parametrize("name", COMMUTATIVE)
@pytest.mark.parametrize("n", [3, 4])
def test_recursion(name, n):
    worst, _ = recursion_residual(spectrum_of(name), n)
    assert worst < TOL35
    assert recursion_check(spectrum_of(name), n).verdict == PASS


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_dual_ring(name):
    dr = dual_ring(spectrum_of(name))
    assert dr.commutativity_residual() < TOL35
    assert dr.associativity_residual() < TOL35
    assert dr.unit_residual() < TOL35
    assert dr.imaginary_residual() < TOL35
    assert dual_ring_report(spectrum_of(name)).verdict == PASS


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dual_of_cyclic_is_cyclic(n):
    dr = dual_ring(spectrum_of(f"cyclic_{n}"))
    for plane in dr.constants:
        for row in plane:
            for x in row:
                assert min(abs(x), abs(x - 1)) < TOL35
            assert abs(sum(row) - 1) < TOL35


def test_dual_fibonacci_nonnegative():
    assert dual_ring(spectrum_of("fibonacci")).min_real() > -TOL40
