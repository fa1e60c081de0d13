import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from herglotz import INF, BoundaryMeasure, GridDensity, HerglotzFunction, MixtureDensity, RationalDensity, extend, integrate
from herglotz.representation import (
    constant,
    density_from_json,
    extended_real,
    herglotz_from_json,
    measure_from_json,
    theta_of,
    total_mass,
)
from herglotz import samples


def cauchy_weight(x):
    return 1.0 / (1.0 + x * x)


def test_unit_atom_at_infinity_integrates_to_one():
    assert integrate(BoundaryMeasure.atom(INF), constant(1.0)) == pytest.approx(1.0, abs=1e-15)


def test_cauchy_density_has_unit_mass():
    m = BoundaryMeasure((), RationalDensity.cauchy())
    assert integrate(m, constant(1.0)) == pytest.approx(1.0, abs=1e-12)


def test_atom_plus_cauchy_density_against_mpmath():
    oracle = float(mp.quad(lambda x: 1 / (mp.pi * (1 + x * x) ** 2), [-mp.inf, 0, mp.inf]))
    assert oracle == pytest.approx(0.5, abs=1e-15)
    m = BoundaryMeasure(((0.0, 2.0),), RationalDensity.cauchy())
    assert integrate(m, extend(cauchy_weight, 0.0)) == pytest.approx(2.0 + oracle, abs=1e-12)


@pytest.mark.parametrize("measure, expected", [
    (BoundaryMeasure.atom(INF), 1.0),
    (BoundaryMeasure((), RationalDensity.cauchy(3.0)), 3.0),
    (BoundaryMeasure(((0.0, 0.5), (1.0, 0.25))), 0.75),
])
def test_total_mass_examples(measure, expected):
    assert total_mass(measure) == pytest.approx(expected, abs=1e-14)


def test_duplicate_atoms_merge():
    m = BoundaryMeasure(((1.0, 0.5), (1.0, 0.25), (INF, 1.0)))
    assert m.atoms == ((1.0, 0.75), (INF, 1.0))
    assert m.mass_at_infinity == 1.0
    assert m.atom_mass(1.0) == 0.75 and m.atom_mass(2.0) == 0.0


@pytest.mark.parametrize("atoms", [((0.0, -1.0),), ((0.0, 0.0),), ((0.0, math.inf),)])
def test_bad_atom_masses_rejected(atoms):
    with pytest.raises(ValueError):
        BoundaryMeasure(atoms)


def test_rational_density_validation():
    with pytest.raises(ValueError):
        RationalDensity((-1.0,), (1.0, 0.0, 1.0))  # negative
    with pytest.raises(ValueError):
        RationalDensity((1.0,), (-1.0, 0.0, 1.0))  # real poles
    with pytest.raises(ValueError):
        RationalDensity((0.0, 1.0), (1.0, 0.0, 1.0))  # not integrable
    with pytest.raises(ValueError):
        RationalDensity((1.0,), (0.0,))


def test_rational_density_mass_against_mpmath(rng):
    for _ in range(5):
        d = samples.rational_density(rng)
        num, den = d.num, d.den
        f = lambda x: mp.polyval(list(reversed(num)), x) / mp.polyval(list(reversed(den)), x)
        oracle = float(mp.quad(f, [-mp.inf, -1, 0, 1, mp.inf]))
        assert d.mass == pytest.approx(oracle, rel=1e-10)


def test_rational_herglotz_against_mpmath(rng):
    d = samples.rational_density(rng)
    num, den = d.num, d.den
    with mp.workdps(30):
        for w in (0.3 + 0.7j, -2 + 0.05j, 5 + 3j, 40 + 1j):
            f = lambda s: (1 + s * w) / (s - w) * mp.polyval(list(reversed(num)), s) / mp.polyval(list(reversed(den)), s)
            pts = sorted({-10, -1, 0, 1, 10, w.real - 1, w.real, w.real + 1})
            oracle = complex(mp.quad(f, [-mp.inf] + pts + [mp.inf]))
            assert abs(d.herglotz(np.array([w]))[0] - oracle) <= 1e-12 * (1 + abs(oracle))


def _grid(rng):
    x = np.sort(rng.uniform(-3, 3, 40))
    y = rng.uniform(0, 1, 40)
    return GridDensity(tuple(x), tuple(y), tail=0.3)


def test_grid_density_mass_is_trapezoid_plus_tails(rng):
    g = _grid(rng)
    x, y = np.array(g.nodes), np.array(g.values)
    body = float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))
    tail = 0.3 / math.pi * (math.atan(x[0]) + math.pi / 2 + math.pi / 2 - math.atan(x[-1]))
    assert g.mass == pytest.approx(body + tail, rel=1e-14)


def test_grid_herglotz_against_mpmath(rng):
    g = _grid(rng)
    x, y = g.nodes, g.values
    with mp.workdps(30):
        for w in (0.1 + 1e-3j, 1.7 + 0.2j, -8 + 2j, 300 + 5j):
            # split every piece at Re w so the near-pole is not stepped over
            pts = lambda a, b: [a] + ([w.real] if a < w.real < b else []) + [b]
            cells = [mp.quad(lambda s, i=i: (1 + s * w) / (s - w) * (y[i] + (y[i + 1] - y[i]) * (s - x[i]) / (x[i + 1] - x[i])),
                             pts(x[i], x[i + 1])) for i in range(len(x) - 1)]
            tail = lambda s: (1 + s * w) / (s - w) * 0.3 / (mp.pi * (1 + s * s))
            oracle = complex(mp.fsum(cells) + mp.quad(tail, pts(-mp.inf, x[0])) + mp.quad(tail, pts(x[-1], mp.inf)))
            assert abs(g.herglotz(np.array([w]))[0] - oracle) <= 1e-12 * (1 + abs(oracle))


def test_grid_density_validation():
    with pytest.raises(ValueError):
        GridDensity((0.0, 1.0), (1.0, -1.0))
    with pytest.raises(ValueError):
        GridDensity((1.0, 0.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        GridDensity((0.0,), (1.0,))


def test_grid_exact_component_adds_everywhere(rng):
    g = _grid(rng)
    r = RationalDensity.cauchy(0.7)
    ge = GridDensity(g.nodes, g.values, g.tail, r)
    x = np.linspace(-5, 5, 11)
    assert np.allclose(ge(x), g(x) + r(x), atol=1e-15)
    assert ge.mass == pytest.approx(g.mass + 0.7, rel=1e-14)
    w = np.array([0.5 + 0.5j, 3 + 2j])
    assert np.allclose(ge.herglotz(w), g.herglotz(w) + r.herglotz(w), atol=1e-13)


def test_mixture_matches_sum_of_parts(rng):
    parts = [samples.rational_density(rng) for _ in range(3)]
    mix = MixtureDensity(tuple(parts))
    x = np.linspace(-4, 4, 9)
    w = np.array([0.2 + 0.1j, -1 + 3j])
    assert np.allclose(mix(x), sum(p(x) for p in parts))
    assert mix.mass == pytest.approx(sum(p.mass for p in parts))
    assert np.allclose(mix.herglotz(w), sum(p.herglotz(w) for p in parts))
    assert mix.scaled(2.0).mass == pytest.approx(2 * mix.mass)


def test_json_roundtrip(rng):
    r = samples.rational_density(rng)
    g = GridDensity((0.0, 1.0, 2.0), (0.1, 0.5, 0.2), 0.1, MixtureDensity((r, RationalDensity.cauchy())))
    phi = HerglotzFunction(0.5, BoundaryMeasure(((INF, 1.0), (0.3, 2.0)), g))
    text = json.dumps(phi.to_json())
    back = herglotz_from_json(json.loads(text))
    z = np.array([0.3 + 1j, -2 + 0.2j])
    assert np.allclose(back(z), phi(z), atol=1e-13)
    assert density_from_json(None) is None
    with pytest.raises(ValueError):
        density_from_json({"kind": "spline"})
    assert measure_from_json({"atoms": [{"loc": "inf", "mass": 1}]}).mass_at_infinity == 1.0


def test_extended_real_and_theta():
    assert extended_real("inf") is INF and extended_real(INF) is INF
    with pytest.raises(ValueError):
        extended_real(math.inf)
    assert theta_of(INF) == pytest.approx(math.pi)
    assert theta_of(1.0) == pytest.approx(math.pi / 2)


def test_scaled_measure(rng):
    m = BoundaryMeasure(((0.0, 1.0),), samples.rational_density(rng))
    assert m.scaled(3.0).total_mass == pytest.approx(3 * m.total_mass)
    with pytest.raises(ValueError):
        m.scaled(0.0)


def test_vector_valued_integrand():
    m = BoundaryMeasure(((0.0, 1.0), (INF, 2.0)), RationalDensity.cauchy())
    f = extend(lambda x: np.stack([np.ones_like(x), 1 / (1 + x * x)], axis=-1), np.array([1.0, 0.0]))
    v = integrate(m, f)
    assert v[0] == pytest.approx(4.0, abs=1e-12)
    assert v[1] == pytest.approx(1.5, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_total_mass_equals_integral_of_one(seed):
    phi = samples.herglotz_function(np.random.default_rng(seed))
    assert integrate(phi.measure, constant(1.0)) == pytest.approx(phi.measure.total_mass, rel=1e-10)
