import math

import numpy as np
import pytest

import delocalab as dl


def test_semicircle():
    assert dl.rho_sc(0.0) == pytest.approx(1.0 / math.pi)
    assert dl.cdf_sc(0.0) == pytest.approx(0.5)
    m = dl.m_sc(0.3, 0.1)
    assert m.imag > 0
    assert abs(m * m + complex(0.3, 0.1) * m + 1) < 1e-12
    gamma = dl.classical_locations(50)
    assert len(gamma) == 50 and all(np.diff(gamma) > 0)


def test_sampling_is_deterministic_and_symmetric():
    a = dl.sample("goe", 30, seed=5, stream=2)
    b = dl.sample("goe", 30, seed=5, stream=2)
    c = dl.sample("goe", 30, seed=5, stream=3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(a, a.T)
    h = dl.sample("gue", 20, seed=1)
    assert np.iscomplexobj(h) and np.allclose(h, h.conj().T)


def test_eigh_matches_numpy():
    m = dl.sample("goe", 40, seed=11)
    lam, u = dl.eigh(m)
    assert np.allclose(lam, np.linalg.eigvalsh(m))
    assert np.allclose(u.T @ u, np.eye(40), atol=1e-12)
    with pytest.raises(ValueError):
        dl.eigh(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_gue_kernel_normalization():
    assert dl.gue_expected_count(10, -10.0, 10.0) == pytest.approx(10.0, abs=1e-6)
    bound, lam, vacuous = dl.chernoff_tail_bound(3, 0.5)
    assert 0 < bound < 1 and not vacuous
    assert len(dl.decimate_goe_pair(12, seed=3)) == 12


def test_emf_conserves_total_mass_for_one_particle():
    m = dl.sample("goe", 8, seed=4)
    lam, u = dl.eigh(m)
    q = np.ones(8) / math.sqrt(8)
    configs, values = dl.integrate_emf_frozen(lam, u, q, 1, 0.2)
    assert len(configs) == 8
    assert values.sum() == pytest.approx(8.0, rel=1e-9)


def test_regularized_eigenvalue_and_free_energy():
    lam = np.array(dl.classical_locations(40))
    lt = dl.regularized_eigenvalue(lam, 20, 0.1, 0.02 / 3)
    assert abs(lt - lam[19]) <= dl.regularized_closeness_bound(40, 20, 0.1, 0.02)
    w = [0.1, 2.0, -1.0]
    assert abs(dl.free_energy(w, 10.0) - 2.0) < 2 * math.log(3) / 10


def test_run_experiment_rows():
    rows = dl.run_experiment({"experiment": "gumbel", "n_list": [20], "replicas": 3, "seed": 7})
    assert {r["stream"] for r in rows} >= {0, 1, 2}
    assert all(r["status"] == "ok" for r in rows)
    again = dl.run_experiment({"experiment": "gumbel", "n_list": [20], "replicas": 3, "seed": 7})
    assert [r["value"] for r in rows] == [r["value"] for r in again]
    with pytest.raises(ValueError):
        dl.run_experiment({"experiment": "gumbel", "replicas": -1})
    assert "decimation" in dl.experiment_names()
