import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from herglotz import affine_check, linear_fractional_check, localized_positivity_check, quadratic_form_check, support_estimate
from herglotz.inversion import BoundarySupportEstimate
from herglotz.positivity import equality_gap
from herglotz.representation import INF


def sampled_min(a, b, c):
    """Brute-force minimum of Im(a/(z + c) + b) over a log-polar grid around -c."""
    r = np.geomspace(1e-6, 1e6, 400)
    t = np.linspace(0, math.pi, 401)
    z = (r[:, None] * np.exp(1j * t[None, :])).ravel() - c.real + 1j * 1e-12
    z = z[z.imag > 0]
    return float(np.min((a / (z + c) + b).imag))


@pytest.mark.parametrize("a, b, c, expected", [
    (-1, 0, 0, True),    # -1/z
    (1, 0, 0, False),    # 1/z
    (-1, 1j, 1j, True),
    (1, 1j, 1j, True),   # on the equality manifold
    (1, 0.9j, 1j, False),
    (2j, 1j, 1j, True),
    (3j, 1j, 1j, False),
    (-1, -0.1j, 0, False),
    (-1, 0, -0.5j, False),
])
def test_linear_fractional_examples(a, b, c, expected):
    assert linear_fractional_check(a, b, c) is expected


def test_linear_fractional_rejects_zero_a():
    with pytest.raises(ValueError):
        linear_fractional_check(0, 1j, 1j)


@pytest.mark.parametrize("a, b, expected", [
    (2, 0, True), (2, 1j, True), (-1, 0, False), (1j, 0, False), (1, -1j, False), (0, 1j, False),
])
def test_affine_examples(a, b, expected):
    assert affine_check(a, b) is expected


cplx = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))
pos = st.floats(0.01, 3)


@settings(max_examples=200, deadline=None)
@given(cplx, pos, pos, st.floats(-3, 3), st.floats(-3, 3))
def test_quadratic_form_is_equivalent(a, beta, gamma, rb, rc):
    assume(a != 0)
    b, c = complex(rb, beta), complex(rc, gamma)
    assume(abs(equality_gap(a, b, c)) > 1e-9)
    assert quadratic_form_check(a, b, c) == linear_fractional_check(a, b, c)


def test_quadratic_form_needs_positive_imaginary_parts():
    with pytest.raises(ValueError):
        quadratic_form_check(1, 0, 1j)


@settings(max_examples=60, deadline=None)
@given(cplx, st.floats(-1, 3), st.floats(-1, 3))
def test_agrees_with_brute_force(a, beta, gamma):
    assume(abs(a) > 1e-3)
    b, c = complex(0.3, beta), complex(-0.2, gamma)
    scale = abs(a) + abs(a.real) + 2 * abs(beta * gamma) + 1e-300
    assume(abs(equality_gap(a, b, c)) > 0.05 * scale)
    assume(min(beta, gamma) > 0.05 or min(beta, gamma) < -0.05 or min(beta, gamma) == 0)
    assert linear_fractional_check(a, b, c) == (sampled_min(a, b, c) >= -1e-9)


def test_localized_examples():
    s = 0.4
    atom = lambda z: (1 + s * z) / (s - z)
    est = support_estimate(atom, np.linspace(-3, 3, 61))
    rep = localized_positivity_check(atom, est)
    assert rep.passed and rep.witness is None and rep.samples > 0

    # Im z^2 = 2xy is too small at the probe height to be marked, so the interval is given
    sq = lambda z: z * z
    rep = localized_positivity_check(sq, BoundarySupportEstimate(((-1.0, 1.0),), 1e-2))
    assert not rep.passed and sq(rep.witness).imag < 0 and rep.witness.imag > 0

    boundary = lambda z: -1 / (z + 1j)
    est = BoundarySupportEstimate(((-1.0, 1.0), (INF, INF)), 1e-2)
    assert localized_positivity_check(boundary, est).passed

    empty = localized_positivity_check(sq, BoundarySupportEstimate((), 1e-2))
    assert empty.passed and empty.samples == 0
    assert empty.to_json()["witness"] is None


def test_localized_infinity_chart():
    # Im(-z) < 0 everywhere; only the chart around infinity sees it
    rep = localized_positivity_check(lambda z: -z, BoundarySupportEstimate(((INF, INF),), 1e-2))
    assert not rep.passed and abs(rep.witness) > 1
