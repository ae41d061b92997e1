import numpy as np
import pytest

from collisim import bounds, collision
from collisim.bounds import BoundParams


def test_lambda_of_superradiance():
    spec = collision.superradiance_spec(1.0, 0.1)
    assert bounds.lambda_of(spec) == pytest.approx(1.0)
    # Lambda scales as sqrt(gamma).
    spec4 = collision.superradiance_spec(4.0, 0.1)
    assert bounds.lambda_of(spec4) == pytest.approx(2.0)
    # A Hamiltonian can dominate the max.
    spec_h = collision.CollisionSpec(
        n_subsystems=2, dt=0.1,
        jumps=spec.jumps, trotter_order=2,
        hamiltonian=5.0 * np.diag([1, 0, 0, -1]).astype(complex))
    assert bounds.lambda_of(spec_h) == pytest.approx(5.0)


def test_single_step_bound():
    params = BoundParams(M=2, J=1, Lambda=1.0, R=1.0, dt=0.1)
    value = bounds.single_step_bound(params)
    assert value == pytest.approx(2 * np.e * 0.4 ** 2, rel=1e-12)
    assert bounds.single_step_bound(params, dt=0.0) == 0.0
    # Quadratic leading order: halving dt divides by 4.
    assert bounds.single_step_bound(params, dt=0.05) == pytest.approx(value / 4)
    # Monotone increasing in dt.
    vals = [bounds.single_step_bound(params, dt=t) for t in (0.01, 0.05, 0.1, 0.2)]
    assert vals == sorted(vals)


def test_single_step_bound_with_corrections():
    base = BoundParams(M=2, J=1, Lambda=1.0, R=1.0, dt=0.1)
    with_pol = BoundParams(M=2, J=1, Lambda=1.0, R=1.0, dt=0.1,
                           pol1=2.0, pol2=3.0)
    assert bounds.single_step_bound(with_pol) == pytest.approx(
        bounds.single_step_bound(base) + 2.0 * 0.01 + 3.0 * 0.001)


def test_params_validation():
    with pytest.raises(ValueError):
        BoundParams(M=2, J=1, Lambda=1.0, R=1.0, dt=0.0)
    with pytest.raises(ValueError):
        BoundParams(M=2, J=1, Lambda=-1.0, R=1.0, dt=0.1)
    with pytest.raises(ValueError):
        BoundParams(M=2, J=1, Lambda=1.0, R=1.0, dt=0.1,
                    gate_diamond_distances=(1.5,))


def test_noisy_map_bound():
    assert bounds.noisy_map_bound([]) == 0.0
    assert bounds.noisy_map_bound([0.05]) == pytest.approx(0.1)
    a = bounds.noisy_map_bound([0.02, 0.03], [0.01])
    b = bounds.noisy_map_bound([0.02]) + bounds.noisy_map_bound([0.03], [0.01])
    assert a == pytest.approx(b)
    with pytest.raises(ValueError):
        bounds.noisy_map_bound([1.2])


def test_global_bound():
    assert bounds.global_bound(0, 0.5, 0.5) == (0.0, False)
    value, vacuous = bounds.global_bound(10, 0.05, 0.1)
    assert value == pytest.approx(1.5) and vacuous
    v1, _ = bounds.global_bound(3, 0.01, 0.02)
    v2, _ = bounds.global_bound(6, 0.01, 0.02)
    assert v2 == pytest.approx(2 * v1)


def test_composed_infidelity_bound():
    assert bounds.composed_infidelity_bound(1, 0.03, "coherent") == pytest.approx(0.03)
    assert bounds.composed_infidelity_bound(1, 0.03, "incoherent") == pytest.approx(0.03)
    assert bounds.composed_infidelity_bound(10, 0.01, "incoherent") == pytest.approx(0.1)
    assert bounds.composed_infidelity_bound(10, 0.02, "coherent") == 1.0
    with pytest.raises(ValueError):
        bounds.composed_infidelity_bound(10, 0.02, "quadratic")
    with pytest.raises(ValueError):
        bounds.composed_infidelity_bound(0, 0.02, "coherent")


def test_bound_report():
    params = BoundParams(M=2, J=1, Lambda=1.0, R=1.0, dt=0.1, n=5,
                         gate_diamond_distances=(0.05,) * 6)
    report = bounds.bound_report(params)
    assert report["leading_term_only"]
    assert report["noisy_map"] == pytest.approx(0.6)
    assert report["vacuous"]
