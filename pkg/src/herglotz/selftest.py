"""Closed-form checks run by ``herglotz selftest``."""

from __future__ import annotations

import math
from typing import Callable, List, Tuple

import numpy as np

from .cayley import DiskMeasure, transfer_disk_measure
from .evaluation import evaluate
from .inversion import atom_mass_at, density_at, mass_at_infinity
from .moebius import ContactLine, Matrix2C, atomic_matrix, classify, contact_decompose
from .positivity import affine_check, linear_fractional_check
from .rational import RationalFunction, check_rational
from .representation import INF, BoundaryMeasure, HerglotzFunction, RationalDensity, integrate, constant
from .transform import TEST_FUNCTIONS, mu_family, semigroup_check


def _close(a, b, tol):
    return abs(complex(a) - complex(b)) <= tol


def _affine(rng):
    a, b = 1.7, complex(0.4, 2.5)
    phi = HerglotzFunction(b.real, BoundaryMeasure(((INF, a),), RationalDensity.cauchy(b.imag)))
    z = rng.normal(size=5) + 1j * rng.uniform(0.1, 3, 5)
    return np.max(np.abs(evaluate(phi, z) - (a * z + b))) < 1e-10


def _cauchy_mass(rng):
    return _close(integrate(BoundaryMeasure((), RationalDensity.cauchy()), constant(1.0)), 1.0, 1e-10)


def _classify_line(rng):
    cls = classify(Matrix2C(1, 1j, 0, 1))
    return isinstance(cls, ContactLine) and _close(cls.offset, 1.0, 1e-12)


def _decompose(rng):
    d = contact_decompose(Matrix2C(1, 1j, 0, 1), INF)
    return _close(d.p, 1, 1e-12) and _close(d.q, 1j, 1e-12) and d.t is INF


def _kernel(rng):
    mu = mu_family(Matrix2C(1, 1j, 0, 1), INF)
    return mu.atoms == ((INF, 1.0),) and _close(mu.density.mass, 1.0, 1e-12)


def _inversion(rng):
    s = 0.7
    phs = lambda z: (1 + s * z) / (s - z)
    return (_close(density_at(lambda z: z + 1j, 0.0), 1 / math.pi, 1e-10)
            and _close(mass_at_infinity(lambda z: 2 * z - 1 / z), 2.0, 1e-8)
            and _close(atom_mass_at(phs, s), 1.0, 1e-10)
            and _close(atom_mass_at(phs, 0.2), 0.0, 1e-10))


def _positivity(rng):
    return (linear_fractional_check(-1, 0, 0) and linear_fractional_check(1, 1j, 1j)
            and not linear_fractional_check(2, 1j, 1j) and affine_check(1, 1j)
            and not affine_check(-1, 1j) and not affine_check(1 + 0.1j, 0))


def _rational(rng):
    good = check_rational(RationalFunction((-1,), (0, 1)))
    bad = check_rational(RationalFunction((1,), (0, 1)))
    return (good.verdict and good.function.measure.atoms == ((0.0, 1.0),) and abs(good.function.alpha) < 1e-14
            and not bad.verdict and bad.verify())


def _cayley(rng):
    phi = transfer_disk_measure(DiskMeasure((), 1.0), 0.0)
    return _close(evaluate(phi, 0.3 + 2j), 1j, 1e-10)


def _semigroup(rng):
    M, N = atomic_matrix(0.5), atomic_matrix(-1.2)
    grid = list(np.linspace(-3, 3, 13)) + [INF]
    return semigroup_check(M, N, TEST_FUNCTIONS["cauchy"], grid) <= 1e-8


CHECKS: List[Tuple[str, Callable]] = [
    ("affine representation", _affine),
    ("cauchy density mass", _cauchy_mass),
    ("contact-line classification", _classify_line),
    ("contact decomposition at infinity", _decompose),
    ("kernel of the shift by i", _kernel),
    ("boundary limits", _inversion),
    ("closed-form positivity criteria", _positivity),
    ("rational certificates", _rational),
    ("uniform disk measure", _cayley),
    ("semigroup law for atomic matrices", _semigroup),
]


def run(seed=0):
    """List of ``(name, passed, message)``."""
    rng = np.random.default_rng(seed)
    out = []
    for name, check in CHECKS:
        try:
            ok = bool(check(rng))
            out.append((name, ok, "" if ok else "value mismatch"))
        except Exception as exc:  # a crash is a failure, reported with its message
            out.append((name, False, f"{type(exc).__name__}: {exc}"))
    return out
