import numpy as np
import pytest

from slicechroma.geom import GeometryError
from slicechroma.stability import (
    RejectionBudgetError,
    fit_scaling_exponents,
    measure_stability,
    min_altitude,
    sample_perturbation,
)


def test_zero_perturbation():
    m = measure_stability(sample_perturbation(1.0, 0.5, 0.0, 3))
    assert (m.dV2, m.dR2, m.dPhi) == (0.0, 0.0, 0.0)


def test_sample_constraints():
    s = sample_perturbation(1.0, 0.5, 0.1, 7)
    y = s.T0.as_float_array()
    z = s.T.as_float_array()
    assert np.all(y[:, 3:] == 0) and np.array_equal(z[:, :3], y[:, :3])
    assert np.all(np.linalg.norm(z - y, axis=1) <= 0.1 + 1e-15)
    d = np.linalg.norm(y[:, None] - y[None], axis=2)[np.triu_indices(4, 1)]
    assert d.min() >= 0.5
    assert min_altitude(y[:, :3]) >= 0.25
    again = sample_perturbation(1.0, 0.5, 0.1, 7)
    assert np.array_equal(again.T.as_float_array(), z)


def test_sample_errors():
    with pytest.raises(RejectionBudgetError):
        sample_perturbation(0.2, 0.5, 0.1, 0)
    with pytest.raises(GeometryError):
        sample_perturbation(1.0, 0.5, 0.6, 0)


@pytest.mark.parametrize("seed", range(5))
def test_distance_identity_and_bound(seed):
    for h in (0.1, 0.01):
        m = measure_stability(sample_perturbation(1.0, 0.5, h, seed))
        assert m.identity_residual < 1e-14
        assert m.max_pair_dev <= 4 * h * h


def test_rigid_motion_of_slab_block():
    s = sample_perturbation(1.0, 0.5, 0.05, 11)
    q = np.linalg.qr(np.random.default_rng(0).standard_normal((6, 6)))[0]
    z = s.T.as_float_array().copy()
    z[:, 3:] = z[:, 3:] @ q.T
    from slicechroma.geom import Simplex
    from slicechroma.stability import PerturbationSample

    rot = PerturbationSample(s.T0, Simplex(z, n_main=3), s.delta, s.h, s.seed, s.offsets @ q.T)
    a, b = measure_stability(s), measure_stability(rot)
    assert a.dV2 == pytest.approx(b.dV2, rel=1e-8, abs=1e-18)
    assert a.dR2 == pytest.approx(b.dR2, rel=1e-8, abs=1e-18)
    assert a.dPhi == pytest.approx(b.dPhi, rel=1e-8)


def test_threads_reproduce_serial():
    a = fit_scaling_exponents(trials_per_h=20, seed=4)
    b = fit_scaling_exponents(trials_per_h=20, seed=4, threads=3)
    assert a.slopes == b.slopes and a.to_csv() == b.to_csv()


def test_fit_errors():
    with pytest.raises(ValueError):
        fit_scaling_exponents(h_grid=[0.1, 0.05, 0.025])
    with pytest.raises(ValueError):
        fit_scaling_exponents(h_grid=[0.1, 0.05, 0.02, 0.01, 0.005])


def test_csv_header():
    f = fit_scaling_exponents(trials_per_h=3)
    lines = f.to_csv().splitlines()
    assert lines[0] == "h,trial,dV2,dR2,dPhi" and len(lines) == 1 + 3 * 6
