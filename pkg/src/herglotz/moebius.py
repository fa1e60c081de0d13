"""Möbius action of 2x2 complex matrices on the Riemann sphere.

The image of the extended real line under ``M`` is described through the
Hermitian form

    H(z) = A |z|^2 + Im(B z) + C,

with ``A = Im(c conj d)``, ``B = d conj a - conj b c`` and ``C = Im(a conj b)``.
``M.R`` is the zero set of ``H`` and ``M.C+`` is the set where ``H > 0``.
This gives centre, radius and orientation in closed form without fitting
a circle through sample points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DegenerateImage, NotEndomatrix, NotRealAutomatrix, NotUnboundedCase
from .representation import INF, ExtendedReal, extended_real

LINE_TOL = 1e-13
ENDO_TOL = 1e-12
REAL_TOL = 1e-10
CONTACT_TOL = 1e-9


@dataclass(frozen=True)
class Matrix2C:
    """Invertible complex 2x2 matrix, stored projectively normalised.

    Entries are scaled to unit Frobenius norm and the first entry that is
    not negligible is rotated onto the positive real axis, so proportional
    matrices compare equal up to rounding.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        v = np.array([self.a, self.b, self.c, self.d], dtype=complex)
        if not np.all(np.isfinite(v)):
            raise ValueError("matrix entries must be finite")
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("zero matrix")
        v = v / n
        k = int(np.argmax(np.abs(v) > 1e-12))
        v = v * (np.conj(v[k]) / abs(v[k]))
        v[k] = abs(v[k])
        if abs(v[0] * v[3] - v[1] * v[2]) <= 1e-14:
            raise ValueError("matrix is singular")
        for name, val in zip("abcd", v):
            object.__setattr__(self, name, complex(val))

    @classmethod
    def of(cls, m) -> "Matrix2C":
        if isinstance(m, Matrix2C):
            return m
        if isinstance(m, Endomatrix):
            return m.m
        arr = np.asarray(m, dtype=complex)
        if arr.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1])

    @classmethod
    def identity(cls) -> "Matrix2C":
        return cls(1, 0, 0, 1)

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Matrix2C":
        return Matrix2C(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other) -> "Matrix2C":
        return Matrix2C.of(self.array @ Matrix2C.of(other).array)

    def is_real(self, tol=REAL_TOL) -> bool:
        return max(abs(x.imag) for x in (self.a, self.b, self.c, self.d)) <= tol

    def real_representative(self) -> np.ndarray:
        """Real matrix proportional to ``self`` with positive determinant."""
        if not self.is_real():
            raise NotRealAutomatrix("matrix is not proportional to a real matrix")
        r = self.array.real
        if np.linalg.det(r) <= 0:
            raise NotRealAutomatrix("real representative has non-positive determinant")
        return r

    def to_json(self):
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in "abcd"}


J = Matrix2C(0, 1, -1, 0)


def matrix_from_json(d) -> Matrix2C:
    def entry(v):
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError("complex entries are [re, im] pairs")
            return complex(float(v[0]), float(v[1]))
        return complex(float(v))

    try:
        return Matrix2C(*(entry(d[k]) for k in "abcd"))
    except KeyError as exc:
        raise ValueError(f"matrix entry {exc.args[0]!r} missing") from exc


def atomic_matrix(s: ExtendedReal) -> Matrix2C:
    """Matrix of ``z -> (1 + s z)/(s - z)``; the identity for ``s = INF``."""
    s = extended_real(s)
    if s is INF:
        return Matrix2C.identity()
    return Matrix2C(s, 1, -1, s)


# --------------------------------------------------------------------------
# action


def apply(M, z):
    """``(a z + b)/(c z + d)`` on the Riemann sphere; ``INF`` stands for infinity."""
    M = Matrix2C.of(M)
    if z is INF:
        return INF if M.c == 0 else M.a / M.c
    z = complex(z)
    den = M.c * z + M.d
    if den == 0:
        return INF
    return (M.a * z + M.b) / den


def apply_array(M, z):
    """Vectorised action on finite points; poles become ``inf`` entries."""
    M = Matrix2C.of(M)
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (M.a * z + M.b) / (M.c * z + M.d)


# --------------------------------------------------------------------------
# boundary image


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float


@dataclass(frozen=True)
class Line:
    point: complex
    direction: complex


Circline = Union[Circle, Line]


def hermitian_form(M):
    """Coefficients ``(A, B, C)`` of the form whose zero set is ``M.R``."""
    M = Matrix2C.of(M)
    a, b, c, d = M.a, M.b, M.c, M.d
    A = (c * d.conjugate()).imag
    B = d * a.conjugate() - b.conjugate() * c
    C = (a * b.conjugate()).imag
    return A, B, C


def boundary_image(M) -> Circline:
    """The circline ``M.R``."""
    A, B, C = hermitian_form(M)
    if abs(A) <= LINE_TOL:
        if abs(B) <= LINE_TOL:
            raise DegenerateImage("boundary image collapsed")
        return Line(-1j * C / B, B.conjugate() / abs(B))
    z0 = -1j * B.conjugate() / (2 * A)
    r2 = abs(z0) ** 2 - C / A
    if r2 <= 0:
        raise DegenerateImage("boundary image has non-positive radius")
    return Circle(z0, math.sqrt(r2))


def _line_offset(A, B, C):
    """Offset ``r`` of a horizontal image ``C+ + i r``, or None when not horizontal/upward."""
    if abs(B.imag) > ENDO_TOL * abs(B) or B.real <= 0:
        return None
    return -C / B.real


def is_endomatrix(M) -> bool:
    M = Matrix2C.of(M)
    if M.is_real():
        return bool(np.linalg.det(M.array.real) > 0)
    w = apply(M, 1j)
    if w is INF or not w.imag > 0:
        return False
    A, B, C = hermitian_form(M)
    if abs(A) <= LINE_TOL:
        r = _line_offset(A, B, C)
        return r is not None and r >= -ENDO_TOL
    if A > 0:
        # M.C+ is the exterior of a circle, never inside C+
        return False
    img = boundary_image(M)
    return img.center.imag - img.radius >= -ENDO_TOL * max(1.0, img.radius)


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class RealOrbit:
    name = "real-orbit"


@dataclass(frozen=True)
class NonContact:
    kappa: float
    disk: Circle
    name = "non-contact"


@dataclass(frozen=True)
class ContactCircle:
    tangency: float
    kappa: float = 1.0
    name = "contact-circle"


@dataclass(frozen=True)
class ContactLine:
    offset: float
    kappa: float = 1.0
    name = "contact-line"


EndoClass = Union[RealOrbit, NonContact, ContactCircle, ContactLine]


def classify(M) -> EndoClass:
    M = Matrix2C.of(M)
    if not is_endomatrix(M):
        raise NotEndomatrix("matrix does not map the upper half-plane into itself")
    if M.is_real():
        return RealOrbit()
    img = boundary_image(M)
    if isinstance(img, Line):
        A, B, C = hermitian_form(M)
        return ContactLine(max(0.0, _line_offset(A, B, C)))
    kappa = img.radius / img.center.imag
    if abs(kappa - 1.0) <= CONTACT_TOL:
        return ContactCircle(img.center.real)
    return NonContact(min(kappa, 1.0), img)


def class_to_json(cls: EndoClass):
    d = {"class": cls.name}
    if isinstance(cls, NonContact):
        d.update(kappa=cls.kappa, center=[cls.disk.center.real, cls.disk.center.imag], radius=cls.disk.radius)
    elif isinstance(cls, ContactCircle):
        d.update(kappa=1, tangency=cls.tangency)
    elif isinstance(cls, ContactLine):
        d.update(kappa=1, offset=cls.offset)
    return d


@dataclass(frozen=True)
class Endomatrix:
    """A matrix certified to map C+ into itself, with its class."""

    m: Matrix2C
    cls: EndoClass

    @classmethod
    def of(cls, M) -> "Endomatrix":
        if isinstance(M, Endomatrix):
            return M
        M = Matrix2C.of(M)
        return cls(M, classify(M))

    def __matmul__(self, other) -> "Endomatrix":
        return Endomatrix.of(self.m @ Matrix2C.of(other))


def contact_degree(M) -> Optional[float]:
    """``radius / Im(centre)`` of ``M.R``; 1 for horizontal lines, None on the real orbit."""
    cls = Endomatrix.of(M).cls
    if isinstance(cls, RealOrbit):
        return None
    return cls.kappa


# --------------------------------------------------------------------------
# left translates and the unbounded case


def _translate_entries(M: Matrix2C, s):
    """Entries of ``((s, 1), (-1, s)) M`` scaled by ``1/sqrt(1+s^2)``; ``M`` itself at INF."""
    a, b, c, d = M.a, M.b, M.c, M.d
    if s is INF:
        return a, b, c, d
    k = 1.0 / math.sqrt(1.0 + s * s)
    return k * (s * a + c), k * (s * b + d), k * (c * s - a), k * (d * s - b)


def left_translate(M, s: ExtendedReal) -> Matrix2C:
    """The matrix of ``z -> phi_s(M.z)``."""
    M = Matrix2C.of(M)
    return Matrix2C(*_translate_entries(M, extended_real(s)))


def is_unbounded(M, s: ExtendedReal) -> bool:
    """True when the image of C+ under the left translate is unbounded."""
    _, _, C, D = _translate_entries(Matrix2C.of(M), extended_real(s))
    return abs((C * D.conjugate()).imag) <= REAL_TOL * (abs(C) ** 2 + abs(D) ** 2)


@dataclass(frozen=True)
class ContactDecomposition:
    """``phi_s(M.z) = p phi_t(z) + q``."""

    p: float
    q: complex
    t: ExtendedReal

    def matrix(self) -> Matrix2C:
        shift = np.array([[self.p, self.q], [0, 1]], dtype=complex)
        return Matrix2C.of(shift @ atomic_matrix(self.t).array)

    def to_json(self):
        return {"p": self.p, "q": [self.q.real, self.q.imag], "t": "inf" if self.t is INF else self.t}


def _pq(M: Matrix2C, S1, S0):
    a, b, c, d = M.a, M.b, M.c, M.d
    den = (-a * S0 + c * S1) ** 2 + (-b * S0 + d * S1) ** 2
    p = (a * d - b * c) * (S0 * S0 + S1 * S1) / den
    q = ((a * c + b * d) * (S1 * S1 - S0 * S0) + (c * c + d * d - a * a - b * b) * S0 * S1) / den
    return p, q


def contact_decompose(M, s: ExtendedReal) -> ContactDecomposition:
    M = Matrix2C.of(M)
    s = extended_real(s)
    if not is_unbounded(M, s):
        raise NotUnboundedCase("left translate has a bounded image")
    _, _, C, D = _translate_entries(M, s)
    S1, S0 = (1.0, 0.0) if s is INF else (s, 1.0)
    p, q = _pq(M, S1, S0)
    if abs(p.imag) > 1e-8 * abs(p) or p.real <= 0:
        raise NotUnboundedCase(f"weight p = {p} is not positive")
    if abs(C) <= REAL_TOL * abs(D):
        t = INF
    else:
        t = float((-D / C).real)
    return ContactDecomposition(float(p.real), complex(q), t)


def proportionality_residual(X, Y) -> float:
    """``min_phase |x - e^{i phase} y|`` for the unit-normalised entry vectors."""
    u = np.asarray(Matrix2C.of(X).array, dtype=complex).ravel()
    v = np.asarray(Matrix2C.of(Y).array, dtype=complex).ravel()
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    ip = np.vdot(v, u)
    phase = ip / abs(ip) if ip != 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def sigma_family(sigma: float, p: float, r: float, tau: float) -> Matrix2C:
    """``((sigma,-1),(1,sigma)) ((p, i r),(0, 1)) ((tau, 1),(-1, tau))``: contact disk tangent at ``sigma``."""
    L = np.array([[sigma, -1], [1, sigma]], dtype=complex)
    S = np.array([[p, 1j * r], [0, 1]], dtype=complex)
    R = np.array([[tau, 1], [-1, tau]], dtype=complex)
    return Matrix2C.of(L @ S @ R)
