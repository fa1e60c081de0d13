"""Points of the extended real line, boundary measures and their integrals.

A boundary measure lives on the extended real line ``R u {inf}``.  It is
stored as a finite list of atoms plus an optional absolutely continuous
density on ``R``.  Integration compactifies the line through
``x = tan(theta / 2)`` so that infinity becomes an ordinary end point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from . import _poly
from ._quad import gauss_kronrod, gauss_kronrod_columns

DEFAULT_TOL = 1e-10


class _Infinity:
    """The single point at infinity of the extended real line (and sphere)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("herglotz.INF")


INF = _Infinity()

ExtendedReal = Union[float, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def extended_real(x) -> ExtendedReal:
    """Validate and normalise an extended real; accepts ``INF`` or ``"inf"``."""
    if x is INF or (isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "∞")):
        return INF
    v = float(x)
    if not math.isfinite(v):
        raise ValueError(f"finite value expected, got {x!r}; use INF for the point at infinity")
    return v


def extend(fn: Callable, at_infinity) -> Callable:
    """Wrap a numpy function on R into one on the extended line.

    The result is called with arrays of finite reals, or with ``INF`` in which
    case ``at_infinity`` is returned.
    """

    def wrapped(x):
        if x is INF:
            return at_infinity
        return fn(np.asarray(x, dtype=float))

    wrapped.at_infinity = at_infinity
    return wrapped


def constant(value=1.0) -> Callable:
    """The constant function on the extended line, vectorised."""

    def one(x):
        if x is INF:
            return value
        return np.full(np.shape(x), value, dtype=np.result_type(value, float))

    return one


def theta_of(x) -> float:
    """Angle ``t`` with ``x = tan(t/2)``; infinity maps to ``pi``."""
    if x is INF:
        return math.pi
    return 2.0 * math.atan(x)


def _ratval(num, den, x, shift=0):
    """``x**shift * num(x)/den(x)`` evaluated stably for large ``|x|``."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=float)
    small = np.abs(x) <= 1.0
    if np.any(small):
        xs = x[small]
        out[small] = _poly.polyval(num, xs) / _poly.polyval(den, xs) * xs ** shift
    big = ~small
    if np.any(big):
        y = 1.0 / x[big]
        n, m = len(num) - 1, len(den) - 1
        out[big] = _poly.polyval(num[::-1], y) / _poly.polyval(den[::-1], y) * y ** (m - n - shift)
    return out


# --------------------------------------------------------------------------
# densities


@dataclass(frozen=True)
class RationalDensity:
    """Density ``num(x)/den(x)`` with real coefficients, ascending degree."""

    num: Tuple[float, ...]
    den: Tuple[float, ...]
    roots: Optional[Tuple[complex, ...]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        num = _poly.trim(np.asarray(_poly.real_if_close(np.asarray(self.num)), dtype=float))
        den = _poly.trim(np.asarray(_poly.real_if_close(np.asarray(self.den)), dtype=float))
        if not (np.all(np.isfinite(num)) and np.all(np.isfinite(den))):
            raise ValueError("non-finite coefficients")
        if _poly.degree(den) < 0:
            raise ValueError("zero denominator")
        object.__setattr__(self, "num", tuple(float(v) for v in num))
        object.__setattr__(self, "den", tuple(float(v) for v in den))
        if _poly.degree(num) >= 0 and _poly.degree(num) > _poly.degree(den) - 2:
            raise ValueError("need deg(num) <= deg(den) - 2 for integrability")
        if self.roots is not None:
            rts = np.asarray(self.roots, dtype=complex)
            if len(rts) != len(den) - 1:
                raise ValueError("root hint does not match the denominator degree")
            object.__setattr__(self, "roots", tuple(complex(r) for r in rts))
        else:
            rts = _poly.roots(den)
        if np.any(np.abs(rts.imag) <= 1e-12 * np.maximum(1.0, np.abs(rts))):
            raise ValueError("denominator has a real root")
        self._check_nonnegative()

    @classmethod
    def cauchy(cls, weight=1.0) -> "RationalDensity":
        """``weight / (pi (1 + x^2))``, total mass ``weight``."""
        return cls((weight / math.pi,), (1.0, 0.0, 1.0))

    def scaled(self, factor: float) -> "RationalDensity":
        return RationalDensity(tuple(factor * v for v in self.num), self.den, self.roots)

    @cached_property
    def _num(self):
        return np.array(self.num)

    @cached_property
    def _den(self):
        return np.array(self.den)

    def _check_nonnegative(self):
        n, d = self._num, self._den
        if _poly.degree(n) < 0:
            return
        crit = P.polysub(P.polymul(P.polyder(n), d), P.polymul(n, P.polyder(d)))
        cand = [0.0, 1e3, -1e3]
        for c in (crit, n):
            if _poly.degree(c) > 0:
                cand.extend(_poly.roots(c).real)
        vals = self(np.array(cand))
        scale = max(np.max(np.abs(vals)), 1e-300)
        if np.min(vals) < -1e-9 * scale:
            raise ValueError(f"density takes negative values (min {np.min(vals):.3g})")

    def __call__(self, x):
        return _ratval(self._num, self._den, x)

    def times_one_plus_x2(self, x):
        """``(1 + x^2) rho(x)``, bounded on the whole line."""
        x = np.asarray(x, dtype=float)
        return _ratval(P.polymul(self._num, [1.0, 0.0, 1.0]), self._den, x)

    @cached_property
    def pole_parts(self):
        _, parts = _poly.pole_parts(self._num, self._den, known_roots=self.roots)
        return parts

    @cached_property
    def lower_parts(self):
        return [(p, c) for p, c in self.pole_parts if p.imag < 0]

    def breakpoints(self):
        """Real parts of the poles, where the density may peak."""
        return sorted({float(p.real) for p, _ in self.pole_parts})

    @cached_property
    def mass(self) -> float:
        # close the contour in the lower half plane
        if _poly.degree(self._num) < 0:
            return 0.0
        total = -2j * math.pi * sum(c[0] for _, c in self.lower_parts)
        return float(total.real)

    def cauchy_transform(self, w):
        """``int rho(s) / (s - w) ds`` in closed form for ``Im w > 0``."""
        w = np.asarray(w, dtype=complex)
        acc = np.zeros(w.shape, dtype=complex)
        for p, coeffs in self.lower_parts:
            for j, c in enumerate(coeffs, start=1):
                acc += c * (-1) ** (j - 1) / (p - w) ** j
        return -2j * math.pi * acc

    @cached_property
    def inverted(self) -> "RationalDensity":
        """Image of ``rho(s) ds`` under ``s -> -1/s``: ``rho(-1/u) / u^2``."""
        n, d = self._num, self._den
        m = len(d) - 1
        sign = lambda k: -1.0 if k % 2 else 1.0
        num = np.zeros(m - 1)
        den = np.zeros(m + 1)
        for k, c in enumerate(n):
            num[m - 2 - k] = sign(k) * c
        for k, c in enumerate(d):
            den[m - k] = sign(k) * c
        hint = None if self.roots is None else tuple(-1.0 / r for r in self.roots)
        return RationalDensity(tuple(num), tuple(den), hint)

    def _herglotz_upper(self, w):
        return w * self.mass + (1.0 + w * w) * self.cauchy_transform(w)

    def herglotz(self, w):
        """``int (1 + s w)/(s - w) rho(s) ds`` in closed form for ``w`` off the axis.

        Far from the origin the identity ``phi_s(w) = phi_{-1/s}(-1/w)`` is
        used, which avoids cancellation between the two terms.
        """
        w = np.asarray(w, dtype=complex)
        up = w.imag >= 0
        ww = np.where(up, w, np.conj(w))
        big = np.abs(ww) > 1.0
        val = np.empty(ww.shape, dtype=complex)
        if np.any(~big):
            val[~big] = self._herglotz_upper(ww[~big])
        if np.any(big):
            val[big] = self.inverted._herglotz_upper(-1.0 / ww[big])
        return np.where(up, val, np.conj(val))

    def to_json(self):
        return {"kind": "rational", "num": list(self.num), "den": list(self.den)}


@dataclass(frozen=True)
class MixtureDensity:
    """Sum of rational densities kept term by term.

    Multiplying out a sum of sharply peaked kernels gives a high-degree
    rational function with clustered poles, whose coefficients lose the
    information; the parts themselves stay well conditioned.
    """

    parts: Tuple[RationalDensity, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts or not all(isinstance(p, RationalDensity) for p in parts):
            raise ValueError("a mixture needs at least one rational density")
        object.__setattr__(self, "parts", parts)

    def scaled(self, factor: float) -> "MixtureDensity":
        return MixtureDensity(tuple(p.scaled(factor) for p in self.parts))

    def __call__(self, x):
        return sum(p(x) for p in self.parts)

    def times_one_plus_x2(self, x):
        return sum(p.times_one_plus_x2(x) for p in self.parts)

    @property
    def lower_parts(self):
        return [lp for p in self.parts for lp in p.lower_parts]

    def breakpoints(self):
        return sorted({b for p in self.parts for b in p.breakpoints()})

    @cached_property
    def mass(self) -> float:
        return math.fsum(p.mass for p in self.parts)

    def cauchy_transform(self, w):
        return sum(p.cauchy_transform(w) for p in self.parts)

    def herglotz(self, w):
        return sum(p.herglotz(w) for p in self.parts)

    def to_json(self):
        return {"kind": "mixture", "parts": [p.to_json() for p in self.parts]}


def mixture(parts):
    """A single rational density, or their mixture."""
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else MixtureDensity(parts)


@dataclass(frozen=True)
class GridDensity:
    """Piecewise-linear density on sorted nodes with a Cauchy tail ``c/(pi(1+x^2))`` outside.

    ``exact`` is an optional rational density added on top; it carries
    sharply peaked but explicitly known parts (kernels of atoms under a
    Moebius transform) that a piecewise-linear grid resolves badly.
    """

    nodes: Tuple[float, ...]
    values: Tuple[float, ...]
    tail: float = 0.0
    exact: Optional[RationalDensity] = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape or len(nodes) < 2:
            raise ValueError("nodes and values must be 1-d of equal length >= 2")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(values))):
            raise ValueError("non-finite grid data")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        if np.any(values < 0) or self.tail < 0 or not math.isfinite(self.tail):
            raise ValueError("grid density must be nonnegative")
        object.__setattr__(self, "nodes", tuple(float(v) for v in nodes))
        object.__setattr__(self, "values", tuple(float(v) for v in values))
        object.__setattr__(self, "tail", float(self.tail))
        if self.exact is not None and not isinstance(self.exact, (RationalDensity, MixtureDensity)):
            raise ValueError("exact component must be rational or a mixture of rationals")

    @cached_property
    def _x(self):
        return np.array(self.nodes)

    @cached_property
    def _y(self):
        return np.array(self.values)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.interp(x, self._x, self._y)
        outer = self.tail / (math.pi * (1.0 + x * x))
        out = np.where((x < self._x[0]) | (x > self._x[-1]), outer, inside)
        return out if self.exact is None else out + self.exact(x)

    def times_one_plus_x2(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.interp(x, self._x, self._y) * (1.0 + x * x)
        out = np.where((x < self._x[0]) | (x > self._x[-1]), self.tail / math.pi, inside)
        return out if self.exact is None else out + self.exact.times_one_plus_x2(x)

    def breakpoints(self):
        extra = [] if self.exact is None else self.exact.breakpoints()
        return sorted(set(self.nodes) | set(extra))

    @cached_property
    def mass(self) -> float:
        x, y = self._x, self._y
        body = float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))
        tails = self.tail / math.pi * ((math.atan(x[0]) + math.pi / 2) + (math.pi / 2 - math.atan(x[-1])))
        return body + tails + (0.0 if self.exact is None else self.exact.mass)

    @cached_property
    def tail_mass(self) -> float:
        x0, x1 = self.nodes[0], self.nodes[-1]
        return self.tail / math.pi * ((math.atan(x0) + math.pi / 2) + (math.pi / 2 - math.atan(x1)))

    def herglotz(self, w, chunk=1 << 21):
        """``int (1 + s w)/(s - w) rho(s) ds``, exact for the piecewise-linear model.

        Cells close to ``w`` are integrated in closed form (a logarithm).  On
        the remaining cells the kernel is smooth relative to the cell width,
        and Gauss-Legendre rules avoid the cancellation the closed form
        suffers there.  The Cauchy tails are integrated analytically.
        """
        w = np.asarray(w, dtype=complex)
        shape = w.shape
        w = np.atleast_1d(w)
        up = w.imag >= 0
        ww = np.where(up, w, np.conj(w))
        x, y = self._x, self._y
        h = np.diff(x)
        slope = np.diff(y) / h
        mid = 0.5 * (x[1:] + x[:-1])
        # 4-point rule on every cell, in the form -s + (1 + s^2)/(s - w)
        t4, w4 = _GL[4]
        s4 = (mid[:, None] + 0.5 * h[:, None] * t4[None, :]).ravel()
        q4 = (0.5 * h[:, None] * w4[None, :] * (y[:-1, None] + slope[:, None] * (0.5 * h[:, None] * (1 + t4[None, :]))))
        q4 = q4.ravel()
        base = -float(np.dot(q4, s4))
        c4 = q4 * (1.0 + s4 * s4)
        out = np.empty(ww.shape, dtype=complex)
        order = np.argsort(ww.real)
        step = max(1, min(256, chunk // (4 * len(s4))))
        for i in range(0, len(ww), step):
            sel = order[i:i + step]
            z = ww[sel]
            acc = base + c4 @ (1.0 / (s4[:, None] - z[None, :]))
            # cells near some z in this chunk get a finer rule or the closed form
            cand = np.nonzero((mid >= z.real.min() - 50 * h) & (mid <= z.real.max() + 50 * h))[0]
            if len(cand):
                r = np.abs(mid[cand, None] - z[None, :]) / h[cand, None]
                hit = np.any(r <= 50, axis=1)
                rows, r = cand[hit], r[hit]
                if len(rows):
                    acc -= np.where(r <= 50, _gl_cells(x, y, slope, h, mid, z, rows, 4, True), 0.0).sum(axis=0)
                    acc += _gl_cells(x, y, slope, h, mid, z, rows, 8, (r > 4) & (r <= 50)).sum(axis=0)
                    near = np.any(r <= 4, axis=1)
                    if np.any(near):
                        rn, rr = rows[near], r[near]
                        zz = z[None, :]
                        wa = x[rn, None] - zz
                        L = np.log(1.0 + h[rn, None] / wa)
                        cauchy = (y[rn + 1, None] - y[rn, None]) + (y[rn, None] - slope[rn, None] * wa) * L
                        cell = (0.5 * (y[rn + 1] + y[rn]) * h[rn])[:, None]
                        closed = zz * cell + (1.0 + zz * zz) * cauchy
                        acc += np.where(rr <= 4, closed, 0.0).sum(axis=0)
            out[sel] = acc
        X0, X1 = x[0], x[-1]
        # tails: the terms linear in w cancel against w times the tail mass
        tails = np.log(X0 - ww) - np.log(X1 - ww) + 0.5 * (math.log1p(X1 * X1) - math.log1p(X0 * X0)) + 1j * math.pi
        out += self.tail / math.pi * tails
        if self.exact is not None:
            out += self.exact.herglotz(ww)
        out = np.where(up, out, np.conj(out))
        return out.reshape(shape)

    def to_json(self):
        d = {"kind": "grid", "nodes": list(self.nodes), "values": list(self.values), "tail": self.tail}
        if self.exact is not None:
            d["exact"] = self.exact.to_json()
        return d


_GL = {n: np.polynomial.legendre.leggauss(n) for n in (4, 8)}


def _gl_cells(x, y, slope, h, mid, z, rows, n, mask):
    """``n``-point Gauss-Legendre for the atomic kernel on the selected cells, zero where ``mask`` is off."""
    t, wt = _GL[n]
    acc = np.zeros((len(rows), len(z)), dtype=complex)
    for tk, wk in zip(t, wt):
        s = mid[rows] + 0.5 * h[rows] * tk
        rho = y[rows] + slope[rows] * (s - x[rows])
        acc += (0.5 * wk * h[rows] * rho)[:, None] * (1.0 + s[:, None] * z[None, :]) / (s[:, None] - z[None, :])
    return np.where(mask, acc, 0.0)


DensitySpec = Union[RationalDensity, MixtureDensity, GridDensity]


# --------------------------------------------------------------------------
# measures


def _atom_key(item):
    loc = item[0]
    return (1, 0.0) if loc is INF else (0, loc)


@dataclass(frozen=True)
class BoundaryMeasure:
    """Finite positive measure on the extended real line.

    ``atoms`` is a sequence of ``(location, mass)`` pairs; duplicate
    locations are merged by adding their masses.
    """

    atoms: Tuple[Tuple[ExtendedReal, float], ...] = ()
    density: Optional[DensitySpec] = None

    def __post_init__(self):
        merged = {}
        for loc, mass in self.atoms:
            loc = extended_real(loc)
            mass = float(mass)
            if not (mass > 0 and math.isfinite(mass)):
                raise ValueError(f"atom masses must be positive and finite, got {mass!r}")
            merged[loc] = merged.get(loc, 0.0) + mass
        atoms = tuple(sorted(merged.items(), key=_atom_key))
        object.__setattr__(self, "atoms", atoms)
        if self.density is not None and not isinstance(self.density, (RationalDensity, MixtureDensity, GridDensity)):
            raise TypeError("density must be a RationalDensity, MixtureDensity or GridDensity")

    @classmethod
    def atom(cls, loc, mass=1.0) -> "BoundaryMeasure":
        return cls(atoms=((loc, mass),))

    @property
    def finite_atoms(self):
        return [(s, m) for s, m in self.atoms if s is not INF]

    @property
    def mass_at_infinity(self) -> float:
        return self.atom_mass(INF)

    def atom_mass(self, loc) -> float:
        loc = extended_real(loc)
        for s, m in self.atoms:
            if s is loc or (s is not INF and loc is not INF and s == loc):
                return m
        return 0.0

    @property
    def total_mass(self) -> float:
        return total_mass(self)

    def without_density(self) -> "BoundaryMeasure":
        return BoundaryMeasure(self.atoms, None)

    def density_only(self) -> "BoundaryMeasure":
        return BoundaryMeasure((), self.density)

    def scaled(self, factor: float) -> "BoundaryMeasure":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        dens = self.density
        if isinstance(dens, (RationalDensity, MixtureDensity)):
            dens = dens.scaled(factor)
        elif isinstance(dens, GridDensity):
            exact = None if dens.exact is None else dens.exact.scaled(factor)
            dens = GridDensity(dens.nodes, tuple(factor * v for v in dens.values), factor * dens.tail, exact)
        return BoundaryMeasure(tuple((s, factor * m) for s, m in self.atoms), dens)

    def to_json(self):
        return {
            "atoms": [{"loc": "inf" if s is INF else s, "mass": m} for s, m in self.atoms],
            "density": None if self.density is None else self.density.to_json(),
        }


def total_mass(measure: BoundaryMeasure) -> float:
    """Sum of the atom masses plus the mass of the density."""
    total = math.fsum(m for _, m in measure.atoms)
    if measure.density is not None:
        total += measure.density.mass
    return total


def density_integral(density: DensitySpec, f: Callable, tol=DEFAULT_TOL, breakpoints=(), limit=20000):
    """``int f(x) rho(x) dx`` over R, in the compactified angle variable."""

    def h(theta):
        x = np.tan(0.5 * theta)
        w = 0.5 * density.times_one_plus_x2(x)
        fx = np.asarray(f(x))
        if fx.ndim == 2:
            return fx * w[:, None]
        return fx * w

    edges = [-math.pi, math.pi]
    edges += [2.0 * math.atan(b) for b in density.breakpoints()]
    edges += [theta_of(b) for b in breakpoints if b is not INF]
    edges = np.unique(np.clip(edges, -math.pi, math.pi))
    value, _ = gauss_kronrod(h, edges, tol=tol, limit=limit)
    return value


def herglotz_quadrature(density: DensitySpec, z, tol=DEFAULT_TOL, limit=2_000_000):
    """``int (1 + s z)/(s - z) rho(s) ds`` by adaptive quadrature, one mesh per point ``z``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    base = [-math.pi, math.pi] + [2.0 * math.atan(b) for b in density.breakpoints()]

    def h(theta, j):
        x = np.tan(0.5 * theta)
        zj = z[j]
        return (1.0 + x * zj) / (x - zj) * 0.5 * density.times_one_plus_x2(x)

    edges = [base + [2.0 * math.atan(v)] for v in z.real]
    value, _ = gauss_kronrod_columns(h, edges, tol=tol, limit=limit)
    return value


def integrate(measure: BoundaryMeasure, f: Callable, tol=DEFAULT_TOL, breakpoints=(), limit=20000):
    """``int f d(measure)`` for ``f`` continuous on the extended line.

    ``f`` is called with arrays of finite reals and with ``INF`` (see
    :func:`extend`).  It may return vectors, in which case the result is a
    vector.  ``tol`` bounds the absolute quadrature error of the density part.
    """
    total = 0.0
    for loc, mass in measure.atoms:
        if loc is INF:
            val = f(INF)
        else:
            val = np.asarray(f(np.array([loc])))[0]
        total = total + mass * np.asarray(val)
    if measure.density is not None:
        bps = list(breakpoints) + list(getattr(f, "breakpoints", ()))
        total = total + density_integral(measure.density, f, tol=tol, breakpoints=bps, limit=limit)
    total = np.asarray(total)
    if total.ndim == 0:
        return complex(total) if np.iscomplexobj(total) else float(total)
    return total


# --------------------------------------------------------------------------
# Herglotz functions


@dataclass(frozen=True)
class HerglotzFunction:
    """``alpha + mass_inf * z + int (1 + s z)/(s - z) lambda(ds)``.

    ``alpha`` is the real part of the function at ``i``.
    """

    alpha: float
    measure: BoundaryMeasure = field(default_factory=BoundaryMeasure)

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a):
            raise ValueError("alpha must be finite")
        object.__setattr__(self, "alpha", a)

    def __call__(self, z, tol=DEFAULT_TOL):
        from .evaluation import evaluate

        return evaluate(self, z, tol)

    def to_json(self):
        d = {"alpha": self.alpha}
        d.update(self.measure.to_json())
        return d


def density_from_json(d):
    if d is None:
        return None
    kind = d.get("kind")
    if kind == "rational":
        return RationalDensity(tuple(d["num"]), tuple(d["den"]))
    if kind == "mixture":
        return mixture(density_from_json(p) for p in d["parts"])
    if kind == "grid":
        exact = d.get("exact")
        if exact is not None:
            exact = density_from_json(exact)
        return GridDensity(tuple(d["nodes"]), tuple(d["values"]), float(d.get("tail", 0.0)), exact)
    raise ValueError(f"unknown density kind {kind!r}")


def measure_from_json(d) -> BoundaryMeasure:
    atoms = tuple((extended_real(a["loc"]), float(a["mass"])) for a in d.get("atoms", []))
    return BoundaryMeasure(atoms, density_from_json(d.get("density")))


def herglotz_from_json(d) -> HerglotzFunction:
    return HerglotzFunction(float(d.get("alpha", 0.0)), measure_from_json(d))


def as_measure(atoms: Sequence = (), density: Optional[DensitySpec] = None) -> BoundaryMeasure:
    return BoundaryMeasure(tuple(atoms), density)
