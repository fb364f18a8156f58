"""Smoke tests for the python bindings: import, a tiny end-to-end
purification, and the determinism contract of the noise channel."""

import math

import numpy as np
import pytest

import rdmpurify as rp


@pytest.fixture(scope="module")
def two_site():
    ints = rp.hubbard_chain(2, t=1.0, U=4.0)
    k = rp.build_reduced_hamiltonian(ints, 2)
    basis = rp.build_basis(4, 2, 0)
    h = rp.build_hamiltonian_matrix(ints, basis)
    pairs = rp.eigensolve(h, basis, 1)
    e0, amps = pairs[0]
    d = rp.rdm2_from_state(basis, amps)
    return ints, k, basis, e0, d


def test_version():
    assert rp.__version__


def test_ground_energy_matches_the_analytic_value(two_site):
    _, _, _, e0, _ = two_site
    assert e0 == pytest.approx(2.0 - math.sqrt(8.0), abs=1e-12)


def test_energy_functional(two_site):
    _, k, _, e0, d = two_site
    assert rp.energy(k, d) == pytest.approx(e0, abs=1e-10)
    assert d.trace() == pytest.approx(2.0, abs=1e-12)


def test_packed_matrix_is_numpy(two_site):
    _, _, _, _, d = two_site
    m = d.packed
    assert isinstance(m, np.ndarray)
    assert m.shape == (6, 6)
    assert np.allclose(m, m.T)


def test_maps_are_psd(two_site):
    _, _, _, _, d = two_site
    q = rp.map_Q(d)
    g = rp.map_G(d)
    assert np.linalg.eigvalsh(q.packed).min() >= -1e-10
    assert np.linalg.eigvalsh(g).min() >= -1e-10


def test_noise_determinism(two_site):
    _, _, _, _, d = two_site
    a = rp.apply_noise(d, shots=10000, alpha=0.5, seed=42)
    b = rp.apply_noise(d, shots=10000, alpha=0.5, seed=42)
    c = rp.apply_noise(d, shots=10000, alpha=0.5, seed=43)
    assert np.array_equal(a.packed, b.packed)
    assert not np.array_equal(a.packed, c.packed)


def test_end_to_end_purification(two_site):
    _, k, _, e0, d = two_site
    noisy = rp.apply_noise(d, shots=10000, alpha=0.5, seed=7)
    res = rp.purify(k, noisy, 2, w=0.01, feas_tol=1e-8)
    assert res["status"] == "converged"
    assert res["min_eig_D"] >= -1e-6
    assert res["trace"] == pytest.approx(2.0, abs=1e-6)
    # two-electron DQG is exact, so a small w drives the energy to FCI
    assert res["energy"] == pytest.approx(e0, abs=1e-3)
    noisy_err = abs(rp.energy(k, noisy) - e0)
    assert abs(res["energy"] - e0) <= noisy_err + 1e-12


def test_v2rdm_mode(two_site):
    _, k, _, e0, d = two_site
    res = rp.purify(k, d, 2, mode="v2rdm", feas_tol=1e-9)
    assert res["energy"] == pytest.approx(e0, abs=1e-6)


def test_weight_sweep_monotonicity(two_site):
    _, k, _, _, d = two_site
    noisy = rp.apply_noise(d, shots=10000, alpha=0.5, seed=9)
    results = rp.weight_sweep(k, noisy, 2, [1e-3, 1e-1, 10.0], feas_tol=1e-8)
    slacks = [r["slack_trace"] for r in results]
    energies = [r["energy"] for r in results]
    assert all(s2 <= s1 + 1e-6 for s1, s2 in zip(slacks, slacks[1:]))
    assert all(e2 >= e1 - 1e-6 for e1, e2 in zip(energies, energies[1:]))


def test_psd_project():
    m = np.diag([1.0, -1.0])
    p = rp.psd_project(m)
    assert np.allclose(p, np.diag([1.0, 0.0]))


def test_rdm_json_roundtrip(tmp_path, two_site):
    _, _, _, _, d = two_site
    path = str(tmp_path / "rdm.json")
    rp.save_rdm_json(d, path)
    back = rp.load_rdm_json(path)
    assert np.array_equal(back.packed, d.packed)
    assert back.n == d.n
