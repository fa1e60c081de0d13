"""Deciding whether a rational function maps C+ into itself.

A rational endofunction has the shape

    f(z) = a z + (b + i c) + sum_j c_j / (s_j - z) + psi(z)

with ``a >= 0``, real simple poles ``s_j`` with ``c_j > 0``, and a proper
``psi`` whose poles all lie in C-.  Then ``f`` is an endofunction exactly
when ``c >= -min_R Im psi``.  Refutations come with a point of C+ where
``Im f < 0`` whenever one exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from . import _poly
from .errors import CriticalPointFailure, PoleInUpperHalfPlane, RootFindingFailure
from .representation import INF, BoundaryMeasure, HerglotzFunction, RationalDensity

SNAP_TOL = 1e-9
GCD_TOL = 1e-10
CLUSTER_TOL = 1e-5
ACCEPT_TOL = 1e-9
RESIDUE_TOL = 1e-8


def _parse_coeffs(c) -> np.ndarray:
    """Coefficients given as numbers, complex numbers or ``[re, im]`` pairs."""
    out = []
    for v in c:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError(f"coefficient pair expected, got {v!r}")
            out.append(complex(float(v[0]), float(v[1])))
        else:
            out.append(complex(v))
    if not out:
        raise ValueError("empty coefficient list")
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class RationalFunction:
    """``num(z) / den(z)``, ascending complex coefficients, reduced and with monic denominator."""

    num: Tuple[complex, ...]
    den: Tuple[complex, ...]

    def __post_init__(self):
        num = _poly.trim(np.asarray(self.num, dtype=complex))
        den = _poly.trim(np.asarray(self.den, dtype=complex))
        if not (np.all(np.isfinite(num)) and np.all(np.isfinite(den))):
            raise ValueError("non-finite coefficients")
        if _poly.degree(den) < 0:
            raise ValueError("zero denominator")
        if _poly.degree(num) < 0:
            num = np.zeros(1, dtype=complex)
        else:
            num, den = _reduce(num, den)
        lead = den[-1]
        object.__setattr__(self, "num", tuple(complex(v) for v in num / lead))
        object.__setattr__(self, "den", tuple(complex(v) for v in den / lead))

    @classmethod
    def from_json(cls, d) -> "RationalFunction":
        return cls(tuple(_parse_coeffs(d["num"])), tuple(_parse_coeffs(d.get("den", [[1, 0]]))))

    def to_json(self):
        return {"num": [[v.real, v.imag] for v in self.num], "den": [[v.real, v.imag] for v in self.den]}

    @property
    def is_real(self) -> bool:
        c = np.concatenate([np.array(self.num), np.array(self.den)])
        return bool(np.all(np.abs(c.imag) <= 1e-12 * max(np.max(np.abs(c)), 1e-300)))

    @property
    def is_constant(self) -> bool:
        return _poly.degree(np.array(self.den)) == 0 and _poly.degree(np.array(self.num)) <= 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return P.polyval(z, np.array(self.num)) / P.polyval(z, np.array(self.den))


def _reduce(num, den):
    """Cancel common roots, matched within ``GCD_TOL`` relative distance."""
    if _poly.degree(num) < 1 or _poly.degree(den) < 1:
        return num, den
    rn = list(_poly.roots(num))
    rd = list(_poly.roots(den))
    common = []
    for r in list(rd):
        for k, q in enumerate(rn):
            if abs(q - r) <= GCD_TOL * max(1.0, abs(r)):
                common.append(r)
                rn.pop(k)
                rd.remove(r)
                break
    if not common:
        return num, den
    return num[-1] * _poly.from_roots(rn), den[-1] * _poly.from_roots(rd)


@dataclass
class PartialFractionForm:
    """``a z + b + sum c/(s - z)^order + psi(z)`` plus whatever prevents that shape.

    ``a`` and the real-pole coefficients are kept complex so that a
    refutation can say what is wrong with them; ``extra_poly`` holds the
    coefficients of ``z^2, z^3, ...`` and ``upper_poles`` the poles in C+.
    """

    a: complex
    b: complex
    poles: List[Tuple[float, complex, int]]
    psi: Optional[RationalFunction]
    upper_poles: List[Tuple[complex, np.ndarray]] = field(default_factory=list)
    extra_poly: Tuple[complex, ...] = ()
    warnings: List[str] = field(default_factory=list)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.a * z + self.b
        for k, ck in enumerate(self.extra_poly, start=2):
            out = out + ck * z ** k
        for s, c, order in self.poles:
            out = out + c / (s - z) ** order
        for p, coeffs in self.upper_poles:
            for j, cj in enumerate(coeffs, start=1):
                out = out + cj / (z - p) ** j
        if self.psi is not None:
            out = out + self.psi(z)
        return out

    def to_json(self):
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "poles": [{"s": s, "c": [c.real, c.imag], "order": k} for s, c, k in self.poles],
            "psi": None if self.psi is None else self.psi.to_json(),
            "upper_poles": [[p.real, p.imag] for p, _ in self.upper_poles],
            "extra_poly": [[v.real, v.imag] for v in self.extra_poly],
            "warnings": list(self.warnings),
        }


def partial_fractions(f: RationalFunction, strict=True) -> PartialFractionForm:
    """Split ``f`` into its polynomial part, real-pole principal parts and the C- remainder.

    With ``strict`` a pole in C+ raises PoleInUpperHalfPlane; otherwise it
    is recorded in ``upper_poles``.
    """
    num, den = np.array(f.num), np.array(f.den)
    poly, parts = _poly.pole_parts(num, den, rtol=CLUSTER_TOL)
    poly = np.concatenate([poly, np.zeros(max(0, 2 - len(poly)))])
    b, a = complex(poly[0]), complex(poly[1])
    extra = tuple(complex(v) for v in _poly.trim(poly[2:])) if len(poly) > 2 else ()
    if extra and all(v == 0 for v in extra):
        extra = ()
    scale = max(1.0, max((abs(p) for p, _ in parts), default=1.0))
    poles, lower, upper, warnings = [], [], [], []
    for p, coeffs in parts:
        tol = SNAP_TOL * max(1.0, abs(p))
        if abs(p.imag) <= tol:
            if abs(p.imag) > 1e-3 * tol:
                warnings.append(f"pole {p:.6g} snapped to the real axis")
            s = float(p.real)
            for j, cj in enumerate(coeffs, start=1):
                c = complex(cj) * (-1) ** j
                if abs(c) > 1e-13 * max(1.0, np.max(np.abs(coeffs))):
                    poles.append((s, c, j))
        elif p.imag > 0:
            upper.append((complex(p), np.asarray(coeffs)))
        else:
            lower.append((complex(p), np.asarray(coeffs)))
    if upper and strict:
        raise PoleInUpperHalfPlane(f"pole {upper[0][0]:.6g} in the upper half-plane", pole=upper[0][0])
    psi = None
    if lower:
        pn, pd = _poly.assemble(lower)
        if _poly.degree(pn) >= 0 and np.max(np.abs(pn)) > 0:
            psi = RationalFunction(tuple(pn), tuple(pd))
    del scale
    return PartialFractionForm(a, b, poles, psi, upper, extra, warnings)


# --------------------------------------------------------------------------
# certificates


@dataclass
class EndofunctionCertificate:
    """Verdict with its evidence.

    ``function`` is the representation when the verdict is true.  On a
    false verdict ``reason`` names the obstruction and ``witness`` is a
    point of C+ with ``Im f < 0`` (``None`` only for real constants,
    which have ``Im f = 0`` everywhere).
    """

    verdict: bool
    reason: str
    f: RationalFunction
    function: Optional[HerglotzFunction] = None
    witness: Optional[complex] = None
    form: Optional[PartialFractionForm] = None
    minimum: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def verify(self, rng=None, n=100) -> bool:
        """Re-check the evidence by direct evaluation of ``f``."""
        if not self.verdict:
            if self.witness is None:
                return self.reason == "constant real function"
            return bool(self.f(self.witness).imag < 0)
        rng = np.random.default_rng(0) if rng is None else rng
        z = rng.normal(0, 3, n) + 1j * np.exp(rng.uniform(math.log(1e-3), math.log(10), n))
        return bool(np.all(self.f(z).imag >= -1e-9 * (1 + np.abs(self.f(z)))))

    def to_json(self):
        d = {"verdict": self.verdict, "reason": self.reason, "warnings": list(self.warnings)}
        if self.function is not None:
            d["function"] = self.function.to_json()
        if self.witness is not None:
            w = complex(self.witness)
            d["witness"] = {"z": [w.real, w.imag], "im_f": float(self.f(w).imag)}
        if self.minimum is not None:
            d["min_im_psi"] = self.minimum
        return d


def _refute(f, reason, witness, form=None, minimum=None):
    return EndofunctionCertificate(False, reason, f, None, witness, form, minimum,
                                   list(form.warnings) if form else [])


def _search(f, centre, leading, order, radius):
    """Point ``centre + r e^{i t}`` in C+ with ``Im f < 0``.

    Near ``centre`` ``f`` behaves like ``leading / (z - centre)^order``;
    the angle is chosen to make that term's imaginary part most negative
    and ``r`` shrinks until the direct check succeeds.
    """
    t = np.linspace(0.02, 0.98, 97) * math.pi
    score = (leading * np.exp(-1j * order * t)).imag
    if centre.imag > 0:
        t = np.linspace(-1, 1, 193) * math.pi
        score = (leading * np.exp(-1j * order * t)).imag
    order_idx = np.argsort(score)
    for k in order_idx[:5]:
        r = radius
        for _ in range(60):
            z = complex(centre + r * np.exp(1j * t[k]))
            if z.imag > 0 and f(z).imag < 0:
                return z
            r *= 0.5
    return None


def _search_infinity(f, leading, order):
    """Point of large modulus with ``Im f < 0``, guided by ``leading z^order``."""
    t = np.linspace(0.001, 0.999, 999) * math.pi
    score = (leading * np.exp(1j * order * t)).imag
    for k in np.argsort(score)[:5]:
        R = 10.0
        for _ in range(60):
            z = complex(R * np.exp(1j * t[k]))
            if f(z).imag < 0:
                return z
            R *= 2.0
    return None


def _search_boundary(f, x, ys=None):
    """``x + i y`` with ``Im f < 0`` for decreasing ``y``."""
    for y in (np.logspace(-1, -14, 53) if ys is None else ys):
        z = complex(x, y)
        if f(z).imag < 0:
            return z
    return None


def _structural(f: RationalFunction, form: PartialFractionForm, real_case: bool):
    """First structural obstruction in ``form``, as a refutation, or ``None``."""
    scale = max(1.0, abs(form.a), abs(form.b))
    if form.upper_poles:
        p, coeffs = form.upper_poles[0]
        k = len(coeffs)
        w = _search(f, p, coeffs[-1], k, 0.25 * p.imag)
        return _refute(f, f"pole in the upper half-plane at {p:.6g}", w, form)
    if form.extra_poly:
        k = len(form.extra_poly) + 1
        w = _search_infinity(f, form.extra_poly[-1], k)
        return _refute(f, f"polynomial part of degree {k}", w, form)
    if abs(form.a.imag) > 1e-12 * scale or form.a.real < -1e-12 * scale:
        w = _search_infinity(f, form.a, 1)
        return _refute(f, "coefficient of z is not a nonnegative real", w, form)
    for s, c, order in form.poles:
        if order > 1:
            lead = [cc for ss, cc, oo in form.poles if ss == s and oo == max(o for q, _, o in form.poles if q == s)][0]
            k = max(o for q, _, o in form.poles if q == s)
            w = _search(f, complex(s), lead * (-1) ** k, k, _gap(form, s))
            return _refute(f, f"pole of order {k} at {s:.6g}", w, form)
    # clear sign violations first; a residue is only non-real beyond rounding
    for s, c, order in form.poles:
        if c.real <= 0:
            return _refute(f, f"negative residue at pole {s:.6g}", _search(f, complex(s), -c, 1, _gap(form, s)), form)
    for s, c, order in form.poles:
        if abs(c.imag) > RESIDUE_TOL * max(1.0, abs(c)):
            return _refute(f, f"non-real residue at pole {s:.6g}", _search(f, complex(s), -c, 1, _gap(form, s)), form)
    return None


def _gap(form, s):
    """Distance from ``s`` to the nearest other pole, capped at 1."""
    d = [abs(q - s) for q, _, _ in form.poles if q != s]
    if form.psi is not None:
        d.extend(abs(r - s) for r in _poly.roots(np.array(form.psi.den)))
    return 0.25 * min([1.0] + d)


def _measure(form: PartialFractionForm, c: float, f: RationalFunction) -> HerglotzFunction:
    """Representation of an accepted ``f``; the constant is ``Re f(i)``."""
    atoms = []
    if form.a.real > 0:
        atoms.append((INF, float(form.a.real)))
    alpha = form.b.real
    for s, cj, _ in form.poles:
        w = 1.0 + s * s
        atoms.append((s, float(cj.real) / w))
        alpha += float(cj.real) * s / w
    dens = None
    num, den = _im_psi(form.psi)
    if form.psi is not None:
        alpha += float(form.psi(1j).real)
    # density (c + Im psi(x)) / (pi (1 + x^2))
    top = P.polyadd(c * den, num) / math.pi
    if _poly.degree(_poly.trim(top, 1e-15)) >= 0 and np.max(np.abs(top)) > 0:
        roots = [1j, -1j]
        if form.psi is not None:
            r = _poly.roots(np.array(form.psi.den))
            roots.extend(list(r) + list(np.conj(r)))
        dens = RationalDensity(tuple(_poly.trim(top, 1e-15)), tuple(P.polymul(den, [1.0, 0.0, 1.0])), tuple(roots))
    return HerglotzFunction(float(alpha), BoundaryMeasure(tuple(atoms), dens))


def _im_psi(psi: Optional[RationalFunction]):
    """``Im psi(x) = N(x) / D(x)`` on R with real polynomials, ``D = |den|^2 > 0``."""
    if psi is None:
        return np.zeros(1), np.ones(1)
    p, q = np.array(psi.num), np.array(psi.den)
    pb, qb = np.conj(p), np.conj(q)
    N = (P.polymul(p, qb) - P.polymul(pb, q)) / 2j
    D = P.polymul(q, qb)
    return np.real_if_close(N, tol=1e6).real, D.real


def min_im_psi(psi: Optional[RationalFunction]) -> Tuple[float, Optional[float]]:
    """``(min, argmin)`` of ``Im psi`` over the real line; ``argmin`` is ``None`` for the limit 0 at infinity.

    Candidates are the real roots of ``N' D - N D'`` (the numerator of the
    derivative), found by companion-matrix eigenvalues and polished by
    Newton steps.
    """
    if psi is None:
        return 0.0, None
    N, D = _im_psi(psi)
    crit = _poly.trim(P.polysub(P.polymul(P.polyder(N), D), P.polymul(N, P.polyder(D))))
    best, arg = 0.0, None
    if _poly.degree(crit) < 1:
        return best, arg
    try:
        r = _poly.roots(crit)
    except RootFindingFailure as exc:
        raise CriticalPointFailure(str(exc)) from exc
    dcrit = P.polyder(crit)
    for x in r:
        if abs(x.imag) > 1e-6 * max(1.0, abs(x)):
            continue
        x = float(x.real)
        for _ in range(3):
            d = P.polyval(x, dcrit)
            if d == 0:
                break
            step = P.polyval(x, crit) / d
            if not math.isfinite(step) or abs(step) > 1e-6 * max(1.0, abs(x)):
                break
            x -= step
        v = float(P.polyval(x, N) / P.polyval(x, D))
        if v < best:
            best, arg = v, x
    return best, arg


def check_real_rational(f: RationalFunction) -> EndofunctionCertificate:
    """Endofunction test for real coefficients: real simple poles, positive residues, ``a >= 0``."""
    if not f.is_real:
        raise ValueError("coefficients are not real")
    if f.is_constant:
        return EndofunctionCertificate(False, "constant real function", f)
    form = partial_fractions(f, strict=False)
    bad = _structural(f, form, True)
    if bad is not None:
        return bad
    if form.psi is not None:
        # a real proper part with poles off the axis has conjugate pairs, so one lies in C+
        p = _poly.roots(np.array(form.psi.den))
        q = p[np.argmax(np.abs(p.imag))]
        return _refute(f, f"pole in the upper half-plane at {np.conj(q) if q.imag < 0 else q:.6g}", None, form)
    return EndofunctionCertificate(True, "real simple poles with positive residues", f, _measure(form, 0.0, f),
                                   form=form, warnings=list(form.warnings))


def check_nonreal_rational(f: RationalFunction, strict=True) -> EndofunctionCertificate:
    """Endofunction test via ``c >= -min Im psi``.

    Raises PoleInUpperHalfPlane for a pole in C+ when ``strict``; otherwise
    that pole becomes a refutation with a witness.
    """
    form = partial_fractions(f, strict=strict)
    bad = _structural(f, form, False)
    if bad is not None:
        return bad
    c = form.b.imag
    form.b = complex(form.b.real, 0.0)
    m, x_min = min_im_psi(form.psi)
    tol = ACCEPT_TOL * max(1.0, abs(c), abs(m))
    if c < -m - tol:
        if x_min is None:
            w = _search_boundary(f, 1e6 * max(1.0, max((abs(s) for s, _, _ in form.poles), default=1.0)))
        else:
            w = _search_boundary(f, x_min)
        return _refute(f, f"constant imaginary part {c:.6g} below -min Im psi = {-m:.6g}", w, form, m)
    if f.is_real and form.psi is None and not form.poles and form.a.real <= 0:
        return EndofunctionCertificate(False, "constant real function", f)
    phi = _measure(form, c, f)
    return EndofunctionCertificate(True, "c >= -min Im psi", f, phi, form=form, minimum=m, warnings=list(form.warnings))


def check_rational(f: RationalFunction) -> EndofunctionCertificate:
    """Dispatch on the reality of the coefficients; never raises for a refutation."""
    if f.is_real:
        return check_real_rational(f)
    return check_nonreal_rational(f, strict=False)


# --------------------------------------------------------------------------
# brute force


def sampling_oracle(f, x_range=(-50.0, 50.0), nx=4001, y_range=(1e-4, 1.0), ny=25, big=(1e3, 1e5, 1e7)):
    """Sample ``Im f`` on a strip grid plus large semicircles; returns ``(ok, worst_point)``.

    One-sided: ``ok = False`` proves ``f`` is not an endofunction.
    """
    x = np.linspace(x_range[0], x_range[1], nx)
    y = np.geomspace(y_range[0], y_range[1], ny)
    z = (x[None, :] + 1j * y[:, None]).ravel()
    t = np.linspace(0.001, 0.999, 999) * math.pi
    z = np.concatenate([z] + [R * np.exp(1j * t) for R in big])
    with np.errstate(all="ignore"):
        v = np.asarray(f(z), dtype=complex).imag
    v = np.where(np.isfinite(v), v, np.inf)
    k = int(np.argmin(v))
    return bool(v[k] >= 0), complex(z[k])


__all__ = [
    "RationalFunction",
    "PartialFractionForm",
    "EndofunctionCertificate",
    "partial_fractions",
    "min_im_psi",
    "check_real_rational",
    "check_nonreal_rational",
    "check_rational",
    "sampling_oracle",
]
