import math

import numpy as np
import pytest

from herglotz import INF, DiskMeasure, boundary_param, disk_to_halfplane, evaluate, halfplane_to_disk, transfer_disk_measure
from herglotz.cayley import disk_evaluate
from herglotz.representation import RationalDensity


def disk_points(rng, n, rmax=0.95):
    return np.sqrt(rng.uniform(0, rmax ** 2, n)) * np.exp(1j * rng.uniform(-math.pi, math.pi, n))


def test_point_map_examples():
    assert disk_to_halfplane(0) == 1j
    x = np.linspace(-0.9, 0.9, 7)
    w = disk_to_halfplane(x)
    assert np.allclose(w.real, 0) and np.allclose(w.imag, (1 - x) / (1 + x))
    assert abs(halfplane_to_disk(1j)) < 1e-16


def test_point_map_roundtrip(rng):
    z = disk_points(rng, 100)
    w = disk_to_halfplane(z)
    assert np.all(w.imag > 0)
    assert np.max(np.abs(halfplane_to_disk(w) - z)) < 1e-12


def test_out_of_domain_points_raise():
    with pytest.raises(ValueError):
        disk_to_halfplane(1.0)
    with pytest.raises(ValueError):
        disk_to_halfplane(np.array([0.1, 2j]))
    with pytest.raises(ValueError):
        halfplane_to_disk(1.0)


def test_boundary_param():
    assert boundary_param(0.0) == 0.0
    assert boundary_param(math.pi / 2) == pytest.approx(1.0)
    assert boundary_param(-math.pi / 2) == pytest.approx(-1.0)
    assert boundary_param(math.pi) is INF
    for bad in (-math.pi, 4.0):
        with pytest.raises(ValueError):
            boundary_param(bad)


def test_uniform_density_gives_constant_i(rng):
    # mu = dt gives f = 1, so phi = i
    phi = transfer_disk_measure(DiskMeasure((), 1.0), 0.0)
    assert isinstance(phi.measure.density, RationalDensity) and phi.measure.total_mass == pytest.approx(1.0)
    w = disk_to_halfplane(disk_points(rng, 10))
    assert np.allclose(evaluate(phi, w), 1j, atol=1e-13)


def test_atom_at_minus_one_goes_to_infinity(rng):
    # 2 pi delta_pi gives f = (1 - z)/(1 + z), so phi(w) = w
    phi = transfer_disk_measure(DiskMeasure(((math.pi, 2 * math.pi),)), 0.0)
    assert phi.measure.atoms == ((INF, pytest.approx(1.0)),)
    w = disk_to_halfplane(disk_points(rng, 10))
    assert np.allclose(evaluate(phi, w), w, atol=1e-12)


def test_atom_at_one_goes_to_zero(rng):
    # 2 pi delta_0 gives f = (1 + z)/(1 - z), so phi(w) = -1/w
    phi = transfer_disk_measure(DiskMeasure(((0.0, 2 * math.pi),)), 0.0)
    (s, m), = phi.measure.atoms
    assert s == 0.0 and m == pytest.approx(1.0)
    w = disk_to_halfplane(disk_points(rng, 10))
    assert np.allclose(evaluate(phi, w), -1 / w, atol=1e-12)


def test_callable_density_and_constant(rng):
    # (1 + cos t) dt gives f = 1 + z; the imaginary constant adds i beta to f
    beta = 0.7
    phi = transfer_disk_measure(DiskMeasure((), lambda t: 1 + np.cos(t)), beta)
    assert phi.alpha == pytest.approx(-beta)
    z = disk_points(rng, 10, 0.9)
    expected = 1j * (1 + z + 1j * beta)
    assert np.max(np.abs(evaluate(phi, disk_to_halfplane(z)) - expected)) < 1e-7


def test_disk_evaluate_matches_closed_form(rng):
    z = disk_points(rng, 5)
    mu = DiskMeasure(((0.0, 1.0),), lambda t: 1 + np.cos(t))
    expected = 1 + z + (1 + z) / (1 - z) / (2 * math.pi)
    assert np.allclose(disk_evaluate(mu, 0.0, z), expected, atol=1e-10)
    assert mu.total_mass == pytest.approx(1 + 2 * math.pi, rel=1e-12)


def test_negative_data_rejected():
    with pytest.raises(ValueError):
        transfer_disk_measure(DiskMeasure(((0.0, -1.0),)), 0.0)
    with pytest.raises(ValueError):
        transfer_disk_measure(DiskMeasure((), -1.0), 0.0)
