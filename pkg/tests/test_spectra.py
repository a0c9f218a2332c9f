import io
import math

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

import rotorweyl as rw
from rotorweyl.spectra import ResonanceSet, SPECTRUM_CSV_HEADER


def synthetic_set(values):
    spec = rw.OpenMapSpec(dim=8, kick=1.0, opening=(0.31, 0.33))
    return ResonanceSet(eigenvalues=np.asarray(values, dtype=complex), spec=spec)


def random_contraction(rng, dim, norm=0.9):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return norm * g / np.linalg.svd(g, compute_uv=False)[0]


def match_distance(a, b):
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()


# ---------------------------------------------------------------- rates


def test_modulus_to_rate_values():
    rate, life = rw.modulus_to_rate(0.1)
    assert life == pytest.approx(1.0 / (2.0 * math.log(10.0)), rel=1e-14)
    assert rw.modulus_to_rate(1.0) == (0.0, math.inf)
    assert rw.modulus_to_rate(0.0) == (math.inf, 0.0)
    rate, life = rw.modulus_to_rate(math.exp(-0.5))
    assert rate == pytest.approx(1.0, rel=1e-14)
    assert life == pytest.approx(1.0, rel=1e-14)


def test_modulus_to_rate_inverts_definition():
    for rate in np.linspace(0.05, 12.0, 40):
        got, _ = rw.modulus_to_rate(math.exp(-rate / 2.0))
        assert got == pytest.approx(rate, rel=1e-12)


def test_modulus_to_rate_slack():
    assert rw.modulus_to_rate(1.0 + 5e-9) == (0.0, math.inf)
    assert rw.modulus_to_rate(-5e-9) == (math.inf, 0.0)
    with pytest.raises(ValueError):
        rw.modulus_to_rate(1.1)
    with pytest.raises(ValueError):
        rw.modulus_to_rate(-0.1)


# ---------------------------------------------------------------- eigenvalues


def test_closed_limit_all_unit_moduli():
    # opening that removes no site: the truncation is the full unitary
    spec = rw.OpenMapSpec(dim=8, kick=1.3, opening=(0.01, 0.02))
    omap = rw.open_map(spec)
    assert omap.K == 8
    res = rw.eigenvalues(omap)
    assert np.abs(res.moduli - 1.0).max() < 1e-10


def test_resonances_inside_unit_disk(res160):
    assert res160.K == 128
    assert res160.moduli.max() <= 1.0 + 1e-8


def test_eigenvalues_rejects_nonfinite(map160):
    bad = rw.OpenMap(matrix=np.array([[np.nan + 0j]]), kept=np.array([0]), spec=map160.spec)
    with pytest.raises(ValueError):
        rw.eigenvalues(bad)


def test_count_in_band_strictness():
    exact_unit = synthetic_set([1.0, -1.0, 1.0j, -1.0j])
    assert rw.count_in_band(exact_unit, 0.1, 0.98) == 0
    # strict upper bound: moduli exactly 1 are excluded from (0, 1)
    assert rw.count_in_band(exact_unit, 0.0, 1.0) == 0
    quartet = synthetic_set([0.05, 0.5, 0.99, 0.995])
    assert rw.count_in_band(quartet, 0.1, 0.98) == 1
    assert rw.count_in_band(quartet, 0.0, 0.1) == 1
    with pytest.raises(ValueError):
        rw.count_in_band(quartet, 0.5, 0.5)


# ---------------------------------------------------------------- ordered Schur


def test_ordered_schur_diagonal_case():
    A = np.diag([0.9, 0.1]).astype(complex)
    form = rw.ordered_schur(A, rw.ORDER_FAST)
    assert np.allclose(form.diag_moduli, [0.1, 0.9], atol=1e-14)
    # the basis is a permutation up to phases
    assert np.allclose(np.abs(form.basis), [[0.0, 1.0], [1.0, 0.0]], atol=1e-14)


def test_ordered_schur_2x2_analytic_swap():
    # A is already triangular with diagonal (0.9, 0.1); the fast order demands
    # one swap whose rotation is fixed analytically by the eigenvector of the
    # small eigenvalue: v = (1, -0.8)/sqrt(1.64)
    A = np.array([[0.9, 1.0], [0.0, 0.1]], dtype=complex)
    form = rw.ordered_schur(A, rw.ORDER_FAST)
    assert np.allclose(form.diag_moduli, [0.1, 0.9], atol=1e-12)
    n = math.sqrt(1.64)
    expected_abs = np.array([[1.0 / n, 0.8 / n], [0.8 / n, 1.0 / n]])
    assert np.abs(np.abs(form.basis) - expected_abs).max() < 1e-12
    # the off-diagonal coupling modulus is preserved by the unitary swap
    assert abs(form.triangular[0, 1]) == pytest.approx(1.0, abs=1e-12)
    recon = form.basis @ form.triangular @ form.basis.conj().T
    assert np.abs(recon - A).max() < 1e-12
    assert np.abs(form.basis.conj().T @ form.basis - np.eye(2)).max() < 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_ordered_schur_matches_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    A = random_contraction(rng, 8)
    form = rw.ordered_schur(A, rw.ORDER_FAST)
    mods = form.diag_moduli
    assert np.all(np.diff(mods) >= -1e-12)
    assert match_distance(np.diag(form.triangular), np.linalg.eigvals(A)) < 1e-8
    recon = form.basis @ form.triangular @ form.basis.conj().T
    assert np.abs(recon - A).max() < 1e-10
    assert np.abs(form.basis.conj().T @ form.basis - np.eye(8)).max() < 1e-10
    assert np.abs(np.tril(form.triangular, -1)).max() < 1e-10


def test_fast_and_slow_are_mutually_reversed():
    rng = np.random.default_rng(7)
    A = random_contraction(rng, 12)
    fast = rw.ordered_schur(A, rw.ORDER_FAST)
    slow = rw.ordered_schur(A, rw.ORDER_SLOW)
    assert np.all(np.diff(slow.diag_moduli) <= 1e-12)
    assert np.allclose(fast.diag_moduli, slow.diag_moduli[::-1], atol=1e-9)
    assert match_distance(np.diag(fast.triangular), np.diag(slow.triangular)) < 1e-9


def test_ordered_schur_deterministic(map160):
    a = rw.ordered_schur(map160, rw.ORDER_FAST)
    b = rw.ordered_schur(map160, rw.ORDER_FAST)
    assert np.array_equal(a.basis, b.basis)
    assert np.array_equal(a.triangular, b.triangular)


def test_ordered_schur_rejects_bad_inputs():
    with pytest.raises(ValueError):
        rw.ordered_schur(np.zeros((2, 3)), rw.ORDER_FAST)
    with pytest.raises(ValueError):
        rw.ordered_schur(np.eye(2), "upwards")
    with pytest.raises(ValueError):
        rw.ordered_schur(np.array([[np.inf, 0], [0, 1]]), rw.ORDER_FAST)


# ---------------------------------------------------------------- subspaces


def test_subspace_basis_diagonal_case():
    form = rw.ordered_schur(np.diag([0.9, 0.1]).astype(complex), rw.ORDER_FAST)
    basis = rw.subspace_basis(form, 1)
    assert np.allclose(np.abs(basis[:, 0]), [0.0, 1.0], atol=1e-14)


def test_subspace_invariance(map160, schur160_fast):
    r = rw.count_in_band(schur160_fast.diag_moduli, 0.0, 0.1)
    assert r > 0
    basis = rw.subspace_basis(schur160_fast, r)
    assert rw.invariance_residual(map160.matrix, basis) < 1e-9
    full = rw.subspace_basis(schur160_fast, schur160_fast.K)
    assert rw.invariance_residual(map160.matrix, full) < 1e-9


def test_fast_slow_subspace_dimensions_sum(map160):
    fast = rw.ordered_schur(map160, rw.ORDER_FAST)
    slow = rw.ordered_schur(map160, rw.ORDER_SLOW)
    r = rw.count_in_band(fast.diag_moduli, 0.0, 0.1)
    s = fast.K - r
    assert rw.invariance_residual(map160.matrix, rw.subspace_basis(fast, r)) < 1e-9
    assert rw.invariance_residual(map160.matrix, rw.subspace_basis(slow, s)) < 1e-9
    assert r + s == fast.K


def test_subspace_basis_range_check(schur160_fast):
    with pytest.raises(ValueError):
        rw.subspace_basis(schur160_fast, 0)
    with pytest.raises(ValueError):
        rw.subspace_basis(schur160_fast, schur160_fast.K + 1)


def test_schur_multiset_matches_eigenvalues(map160, res160, schur160_fast):
    assert match_distance(np.diag(schur160_fast.triangular), res160.eigenvalues) < 1e-8


# ---------------------------------------------------------------- CSV export


def test_spectrum_csv_format():
    res = synthetic_set([0.5 + 0.1j, 0.0, 1.0])
    buf = io.StringIO()
    rw.write_spectrum_csv(buf, res)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == SPECTRUM_CSV_HEADER
    assert len(lines) == 4
    fields = lines[1].split(",")
    assert int(fields[0]) == 0
    mu = complex(float(fields[1]), float(fields[2]))
    assert mu == 0.5 + 0.1j
    rate, life = rw.modulus_to_rate(abs(mu))
    assert float(fields[4]) == pytest.approx(rate, rel=1e-15)
    assert float(fields[5]) == pytest.approx(life, rel=1e-15)
    # sentinel rows carry empty rate fields
    assert lines[2].split(",")[4:] == ["", ""]
    assert lines[3].split(",")[4:] == ["", ""]
