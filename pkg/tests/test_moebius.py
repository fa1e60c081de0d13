import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from herglotz import (
    INF,
    ContactCircle,
    ContactLine,
    Endomatrix,
    Matrix2C,
    NonContact,
    RealOrbit,
    NotEndomatrix,
    NotUnboundedCase,
    apply,
    classify,
    contact_decompose,
    contact_degree,
    is_endomatrix,
    is_unbounded,
    left_translate,
)
from herglotz.moebius import (
    Circle,
    Line,
    atomic_matrix,
    boundary_image,
    class_to_json,
    matrix_from_json,
    proportionality_residual,
    sigma_family,
)
from herglotz import samples

SHIFT = Matrix2C(1, 1j, 0, 1)
J = Matrix2C(0, 1, -1, 0)
KINDS = ["real-orbit", "non-contact", "contact-circle", "contact-line"]


def test_apply_examples(rng):
    for z in samples.upper_points(rng, 5):
        assert apply(Matrix2C.identity(), z) == z
        assert abs(apply(J, z) - (-1 / z)) < 1e-15
        s = float(rng.normal())
        assert abs(apply(Matrix2C(s, 1, -1, s), z) - (1 + s * z) / (s - z)) < 1e-13


def test_apply_at_poles_and_infinity():
    assert apply(J, 0.0) is INF
    assert apply(J, INF) == 0
    assert apply(Matrix2C(2, 1, 0, 1), INF) is INF
    assert apply(Matrix2C(1, 0, 1, 1), INF) == 1


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        Matrix2C(1, 2, 2, 4)


def test_boundary_image_examples(rng):
    img = boundary_image(Matrix2C.identity())
    assert isinstance(img, Line) and abs(img.point.imag) < 1e-15 and abs(img.direction.imag) < 1e-15
    img = boundary_image(SHIFT)
    assert isinstance(img, Line)
    assert abs(img.point.imag - 1) < 1e-15 and abs(img.direction.imag) < 1e-15


def test_boundary_image_under_inversion(rng):
    for _ in range(5):
        M = samples.noncontact(rng)
        circ = boundary_image(M)
        c, r = circ.center, circ.radius
        img = boundary_image(J @ M)
        k = abs(c) ** 2 - r * r
        assert abs(img.center - (-c.conjugate() / k)) < 1e-10 * (1 + abs(img.center))
        assert img.radius == pytest.approx(r / k, rel=1e-10)


def test_boundary_image_contains_images_of_real_points(rng):
    M = samples.noncontact(rng)
    circ = boundary_image(M)
    for x in rng.normal(size=10):
        assert abs(abs(apply(M, x) - circ.center) - circ.radius) < 1e-10


def test_endomatrix_examples():
    assert is_endomatrix(SHIFT)
    assert not is_endomatrix(Matrix2C(1, -1j, 0, 1))
    assert not is_endomatrix(Matrix2C(1, 0, 0, -1))
    assert not is_endomatrix(Matrix2C(0, 1, 1, 0))
    # C+ maps onto the exterior of a circle
    assert not is_endomatrix(Matrix2C(1, 0, 1, 1j))


def test_contact_degree_examples():
    # disk of radius 1 about 2i
    M = Matrix2C.of(samples._disk_matrix(1.0, 2.0))
    img = boundary_image(M)
    assert abs(img.center - 2j) < 1e-14 and img.radius == pytest.approx(1.0)
    assert contact_degree(M) == pytest.approx(0.5, abs=1e-14)
    assert contact_degree(SHIFT) == 1
    assert contact_degree(Matrix2C(2, 1, 0, 1)) is None
    for sig, p, r, tau in [(0.5, 1.0, 1.0, 0.3), (2.0, 0.7, 0.4, -1.0), (-1.0, 2.0, 3.0, 0.0)]:
        M = sigma_family(sig, p, r, tau)
        assert contact_degree(M) == pytest.approx(1.0, abs=1e-12)
        img = boundary_image(M)
        assert img.radius == pytest.approx((1 + sig * sig) / (2 * r), rel=1e-12)
        assert abs(img.center - complex(sig, (1 + sig * sig) / (2 * r))) < 1e-12


def test_classify_examples():
    assert isinstance(classify(Matrix2C(2, 1, 0, 1)), RealOrbit)
    cls = classify(SHIFT)
    assert isinstance(cls, ContactLine) and cls.offset == pytest.approx(1.0)
    assert class_to_json(cls) == {"class": "contact-line", "kappa": 1, "offset": 1.0}
    with pytest.raises(NotEndomatrix):
        classify(Matrix2C(1, -1j, 0, 1))


def test_left_translate_of_contact_disk_is_tangent_at_the_image_point():
    sig = 0.5
    M = sigma_family(sig, 1.0, 1.0, 0.3)
    for s in (-2.0, 0.3, 4.0):
        cls = classify(left_translate(M, s))
        assert isinstance(cls, ContactCircle)
        assert cls.tangency == pytest.approx((1 + s * sig) / (s - sig), rel=1e-12)


@pytest.mark.parametrize("kind, cls", [("real-orbit", RealOrbit), ("non-contact", NonContact),
                                       ("contact-circle", ContactCircle), ("contact-line", ContactLine)])
def test_sampled_classes(rng, kind, cls):
    for _ in range(10):
        assert isinstance(classify(samples.endomatrix(rng, kind)), cls)


def test_left_translate_examples(rng):
    M = samples.noncontact(rng)
    assert proportionality_residual(left_translate(M, INF), M) < 1e-15
    for s in (-1.0, 0.0, 2.5):
        assert proportionality_residual(left_translate(Matrix2C.identity(), s), atomic_matrix(s)) < 1e-15
    for sig, p, r, tau in [(0.5, 1.0, 1.0, 0.3), (2.0, 0.7, 0.4, -1.0)]:
        ref = math.sqrt(1 + sig * sig) * np.array([[p, 1j * r], [0, 1]]) @ np.array([[tau, 1], [-1, tau]])
        assert proportionality_residual(left_translate(sigma_family(sig, p, r, tau), sig), Matrix2C.of(ref)) < 1e-14


def test_left_translate_composes_the_atomic_function(rng):
    M = samples.noncontact(rng)
    for s in (-1.0, 0.7):
        for z in samples.upper_points(rng, 3):
            w = apply(M, z)
            assert abs(apply(left_translate(M, s), z) - (1 + s * w) / (s - w)) < 1e-12 * (1 + abs(w))


def test_contact_decomposition_examples():
    d = contact_decompose(SHIFT, INF)
    assert d.p == pytest.approx(1.0) and abs(d.q - 1j) < 1e-15 and d.t is INF
    assert d.to_json() == {"p": 1.0, "q": [0.0, 1.0], "t": "inf"}
    assert is_unbounded(SHIFT, INF) and not is_unbounded(SHIFT, 0.0)
    with pytest.raises(NotUnboundedCase):
        contact_decompose(SHIFT, 0.0)


def test_contact_decomposition_reproduces_function(rng):
    M = samples.contact_circle(rng)
    s = classify(M).tangency
    d = contact_decompose(M, s)
    for z in samples.upper_points(rng, 5):
        w = apply(M, z)
        lhs = (1 + s * w) / (s - w)
        phi_t = z if d.t is INF else (1 + d.t * z) / (d.t - z)
        assert abs(lhs - (d.p * phi_t + d.q)) < 1e-9 * (1 + abs(lhs))


def test_endomatrix_product_and_json(rng):
    A, B = Endomatrix.of(samples.noncontact(rng)), samples.contact_line(rng)
    C = A @ B
    assert isinstance(C, Endomatrix) and not isinstance(C.cls, RealOrbit)
    M = samples.noncontact(rng)
    assert matrix_from_json(M.to_json()) == M


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(KINDS[1:]))
def test_kappa_bi_invariant(seed, kind):
    rng = np.random.default_rng(seed)
    M = samples.endomatrix(rng, kind).array
    A, B = samples.real_automatrix(rng), samples.real_automatrix(rng)
    assert abs(contact_degree(Matrix2C.of(A @ M @ B)) - contact_degree(Matrix2C.of(M))) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(KINDS))
def test_endomatrices_map_upper_half_plane_inside(seed, kind):
    rng = np.random.default_rng(seed)
    M = samples.endomatrix(rng, kind)
    assert is_endomatrix(M)
    for z in samples.upper_points(rng, 10):
        assert apply(M, z).imag > 0
