import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from collision_spin import MassSystem, find_cc, integrate, load_preset

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def equal3():
    return MassSystem(np.ones(3))


@pytest.fixture(scope="session")
def lagrange_cc(equal3):
    from collision_spin.presets import equilateral_shape_seed

    return find_cc(equal3, equilateral_shape_seed(equal3))


@pytest.fixture(scope="session")
def euler_cc(equal3):
    from collision_spin.presets import collinear_shape_seed

    return find_cc(equal3, collinear_shape_seed(equal3))


@pytest.fixture(scope="session")
def lagrange_record():
    preset = load_preset("lagrange-homothetic")
    return integrate(
        preset.system,
        preset.state,
        preset.tau_max,
        h=preset.h,
        capture=preset.capture,
    )


@pytest.fixture(scope="session")
def perturbed_preset():
    return load_preset("near-homothetic-perturbed")


@pytest.fixture(scope="session")
def perturbed_record(perturbed_preset):
    p = perturbed_preset
    return integrate(p.system, p.state, p.tau_max, h=p.h, capture=p.capture)


@pytest.fixture(scope="session")
def spiral_lift():
    from collision_spin.spindemo import horizontal_lift, spiral_curve

    return horizontal_lift(spiral_curve(c=1.0, t_end=1.0e4), n_samples=2001)
