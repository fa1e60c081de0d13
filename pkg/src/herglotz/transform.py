"""Transformation of representing measures under endomatrices.

For an endomatrix ``M`` and a boundary point ``s`` the function
``z -> phi_s(M.z)`` is again an endofunction; its representing measure
``mu_{sM}`` is available in closed form (a single atom, an atom plus a
Cauchy density, or a rational density).  Integrating this kernel against a
measure ``lambda`` gives the representing measure of ``phi(M.z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from . import _poly
from ._quad import gauss_kronrod_columns
from .evaluation import eval_atomic
from .moebius import (
    REAL_TOL,
    ContactCircle,
    ContactLine,
    Endomatrix,
    Matrix2C,
    RealOrbit,
    _translate_entries,
    apply,
    apply_array,
    contact_decompose,
)
from .representation import (
    DEFAULT_TOL,
    INF,
    BoundaryMeasure,
    GridDensity,
    MixtureDensity,
    RationalDensity,
    constant,
    extend,
    extended_real,
    integrate,
    mixture,
)

# --------------------------------------------------------------------------
# real automatrices


def _real_weight(R, s):
    """Mass carried from ``s`` to ``R^{-1}.s``: ``det (1+s^2) / ((-a+cs)^2 + (-b+ds)^2)``."""
    (a, b), (c, d) = R
    S1, S0 = (1.0, 0.0) if s is INF else (s, 1.0)
    return (a * d - b * c) * (S0 * S0 + S1 * S1) / ((-a * S0 + c * S1) ** 2 + (-b * S0 + d * S1) ** 2)


def _real_preimage(R, s):
    (a, b), (c, d) = R
    if s is INF:
        return _ratio(d, -c)
    return _ratio(d * s - b, -c * s + a)


def _ratio(num, den):
    if abs(den) <= 1e-15 * max(1.0, abs(num)):
        return INF
    return float(num / den)


def _compose_rational(dens: RationalDensity, R) -> RationalDensity:
    """Density of the pushforward under ``t -> R.t`` preimages, as an exact rational."""
    (a, b), (c, d) = R
    num, den = np.array(dens.num), np.array(dens.den)
    m = len(den) - 1
    top = _poly.compose_moebius(num, a, b, c, d, m - 2)
    top = P.polymul(top, P.polyadd(P.polypow([b, a], 2), P.polypow([d, c], 2)))
    bottom = P.polymul(_poly.compose_moebius(den, a, b, c, d, m), [1.0, 0.0, 1.0])
    top = np.real(top)
    bottom = np.real(bottom)
    if bottom[np.nonzero(bottom)[0][-1]] < 0:
        top, bottom = -top, -bottom
    return RationalDensity(tuple(top), tuple(bottom))


def pushforward_real(lam: BoundaryMeasure, A, grid_tol=1e-8) -> BoundaryMeasure:
    """Representing measure of ``phi(A.z)`` for a real automatrix ``A``."""
    R = Matrix2C.of(A).real_representative()
    atoms = [(_real_preimage(R, s), m * _real_weight(R, s)) for s, m in lam.atoms]
    dens = lam.density
    if isinstance(dens, RationalDensity):
        dens = _compose_rational(dens, R)
    elif isinstance(dens, MixtureDensity):
        dens = mixture(_compose_rational(p, R) for p in dens.parts)
    elif isinstance(dens, GridDensity):
        (a, b), (c, d) = R

        def g(t):
            with np.errstate(divide="ignore", invalid="ignore"):
                s = (a * t + b) / (c * t + d)
            return dens.times_one_plus_x2(s) / (1.0 + t * t)

        seeds = [x for x in (_real_preimage(R, s) for s in dens.nodes) if x is not INF]
        dens = sample_density(g, seeds=seeds, tol=grid_tol)
    return BoundaryMeasure(tuple(atoms), dens)


# --------------------------------------------------------------------------
# the kernel family


def _bounded_density(A, B, C, D) -> RationalDensity:
    """``Im((A x + B)/(C x + D)) / (pi (1 + x^2))`` as a rational density."""
    num = np.array([(B * D.conjugate()).imag, (A * D.conjugate() + B * C.conjugate()).imag, (A * C.conjugate()).imag])
    den = P.polymul([abs(D) ** 2, 2 * (C * D.conjugate()).real, abs(C) ** 2], [1.0, 0.0, 1.0])
    z0 = -D / C
    return RationalDensity(tuple(num / math.pi), tuple(den), (z0, z0.conjugate(), 1j, -1j))


def mu_family(M, s) -> BoundaryMeasure:
    """Representing measure of ``z -> phi_s(M.z)``."""
    E = Endomatrix.of(M)
    s = extended_real(s)
    if isinstance(E.cls, RealOrbit):
        R = E.m.real_representative()
        return BoundaryMeasure.atom(_real_preimage(R, s), _real_weight(R, s))
    A, B, C, D = _translate_entries(E.m, s)
    if abs((C * D.conjugate()).imag) <= REAL_TOL * (abs(C) ** 2 + abs(D) ** 2):
        dec = contact_decompose(E.m, s)
        dens = RationalDensity((dec.q.imag / math.pi,), (1.0, 0.0, 1.0), (1j, -1j)) if dec.q.imag > 0 else None
        return BoundaryMeasure(((dec.t, dec.p),), dens)
    return BoundaryMeasure((), _bounded_density(A, B, C, D))


@dataclass(frozen=True)
class KernelFamily:
    """``s -> mu_{sM}``, the kernel of the Markov operator of ``M``."""

    M: Endomatrix

    @classmethod
    def of(cls, M) -> "KernelFamily":
        return cls(Endomatrix.of(M))

    def measure(self, s) -> BoundaryMeasure:
        return mu_family(self.M, s)

    def mass(self, s) -> float:
        """``Im phi_s(M.i)``, the total mass of ``mu_{sM}``."""
        return float(eval_atomic(extended_real(s), apply(self.M.m, 1j)).imag)

    def apply(self, f, s, tol=DEFAULT_TOL):
        return markov_apply(self.M, f, s, tol)


# --------------------------------------------------------------------------
# Markov operator


def _call(f, x):
    """Evaluate ``f`` on an array of extended reals given as floats with ``inf`` markers."""
    x = np.asarray(x, dtype=float)
    fin = np.isfinite(x)
    if np.all(fin):
        return np.asarray(f(x))
    vals = np.asarray(f(np.where(fin, x, 0.0)))
    return np.where(fin, vals, np.asarray(f(INF)))


def _markov_finite(E: Endomatrix, f: Callable, s: np.ndarray, tol) -> np.ndarray:
    """Vectorised ``mu_{sM}(f)`` for an array of finite ``s``."""
    M = E.m
    s = np.asarray(s, dtype=float)
    if isinstance(E.cls, RealOrbit):
        R = M.real_representative()
        (a, b), (c, d) = R
        w = _real_weight(R, s)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (d * s - b) / (-c * s + a)
        t = np.where(np.abs(-c * s + a) <= 1e-15 * np.maximum(1.0, np.abs(d * s - b)), np.inf, t)
        return w * _call(f, t)

    k = 1.0 / np.sqrt(1.0 + s * s)
    A = k * (s * M.a + M.c)
    B = k * (s * M.b + M.d)
    C = k * (M.c * s - M.a)
    D = k * (M.d * s - M.b)
    unb = np.abs((C * np.conj(D)).imag) <= REAL_TOL * (np.abs(C) ** 2 + np.abs(D) ** 2)
    parts = {}

    if np.any(unb):
        su = s[unb]
        den = (-M.a + M.c * su) ** 2 + (-M.b + M.d * su) ** 2
        p = ((M.a * M.d - M.b * M.c) * (1 + su * su) / den).real
        q = ((M.a * M.c + M.b * M.d) * (su * su - 1) + (M.c ** 2 + M.d ** 2 - M.a ** 2 - M.b ** 2) * su) / den
        Cu, Du = C[unb], D[unb]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(np.abs(Cu) <= REAL_TOL * np.abs(Du), np.inf, (-Du / Cu).real)
        val = p * _call(f, t)
        qi = np.maximum(q.imag, 0.0)
        if np.any(qi > 0):
            val = val + qi * _cauchy_mean(f, tol / max(1.0, float(qi.max())))
        parts["unb"] = val

    bnd = ~unb
    if np.any(bnd):
        const, K, u0, use_x = _pole_form(A[bnd], B[bnd], C[bnd], D[bnd], M.det())

        # f at the kernel peak; the peak times that value integrates in closed form
        with np.errstate(divide="ignore"):
            xa = np.where(use_x, u0.real, np.where(u0.real == 0, np.inf, -1.0 / u0.real))
        fa = _call(f, xa)

        def h(theta, j):
            x = np.tan(0.5 * theta)
            fx = np.asarray(f(x))
            peak = _kernel_im(x, 0.0, K[j], u0[j], use_x[j])
            return (fx * const[j].imag + (fx - fa[j]) * peak) / (2 * math.pi)

        extra = [2 * math.atan(b) for b in getattr(f, "breakpoints", ()) if b is not INF]
        edges = [[-math.pi, math.pi] + extra + _peak_edges(u, ux) for u, ux in zip(u0, use_x)]
        val, _ = gauss_kronrod_columns(h, edges, tol=tol)
        parts["bnd"] = val + fa * _peak_mass(K, u0) / math.pi

    sample = next(iter(parts.values()))
    out = np.zeros(s.shape, dtype=np.result_type(sample, float))
    if "unb" in parts:
        out[unb] = parts["unb"]
    if "bnd" in parts:
        out[bnd] = parts["bnd"]
    return out


def _peak_edges(u0, use_x):
    """Angles bracketing the Lorentzian peak of the kernel at geometrically growing distances.

    Close to contact the peak width ``Im u0`` is tiny, and the adaptive rule
    would otherwise spend most of its budget finding it.
    """
    width = max(abs(u0.imag), 1e-300)
    offs = [0.0]
    if width < 0.1:
        steps = width * 4.0 ** np.arange(int(math.log(1.0 / width, 4)) + 1)
        offs += list(steps) + list(-steps)
    out = []
    for d in offs:
        u = u0.real + d
        if use_x:
            out.append(2 * math.atan(u))
        elif u != 0:
            out.append(2 * math.atan(-1.0 / u))
    return out


def _peak_mass(K, u0):
    """``int Im(K/(u - u0)) du/(1 + u^2)`` over R, by residues."""
    def cauchy(p):
        return np.where(p.imag < 0, math.pi / (1j - p), math.pi / (-1j - p))

    return ((K * cauchy(u0) - np.conj(K) * cauchy(np.conj(u0))) / 2j).real


def _pole_form(A, B, C, D, det):
    """Write ``(A u + B)/(C u + D)`` as ``const + K/(u - u0)`` with ``|u0| <= 1``.

    Where ``|C| < |D|`` the chart ``u = -1/x`` is used instead of ``u = x``.
    ``K`` comes from the determinant, which keeps the kernel free of
    cancellation close to the tangency locus.
    """
    use_x = np.abs(C) >= np.abs(D)
    Cs = np.where(use_x, C, 1.0)
    Ds = np.where(use_x, 1.0, D)
    const = np.where(use_x, A / Cs, B / Ds)
    K = np.where(use_x, -det / Cs ** 2, -det / Ds ** 2)
    u0 = np.where(use_x, -D / Cs, C / Ds)
    return const, K, u0, use_x


def _kernel_im(x, const, K, u0, use_x):
    """``Im((A x + B)/(C x + D))`` from the pole form."""
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(use_x, x, -1.0 / x)
        du = u - u0.real
        term = (K.imag * du + K.real * u0.imag) / (du * du + u0.imag ** 2)
    term = np.where(np.isfinite(u), term, 0.0)
    return const.imag + term


def _cauchy_mean(f, tol):
    """``int f(x) dx / (pi (1 + x^2))``."""
    return integrate(BoundaryMeasure((), RationalDensity.cauchy(1.0)), f, tol=tol)


def markov_apply(M, f: Callable, s, tol=DEFAULT_TOL):
    """``(Lambda_M f)(s) = mu_{sM}(f)``; ``s`` may be an extended real or an array of finite reals.

    ``f`` follows the extended-line convention of :func:`representation.extend`.
    """
    E = Endomatrix.of(M)
    if np.ndim(s) == 0:
        s = extended_real(s)
        if s is INF:
            return integrate(mu_family(E, INF), f, tol=tol)
        v = _markov_finite(E, f, np.array([s]), tol)[0]
        return complex(v) if np.iscomplexobj(v) else float(v)
    return _markov_finite(E, f, np.asarray(s, dtype=float), tol)


def _split_grid(grid):
    fin = [i for i, s in enumerate(grid) if s is not INF]
    inf = [i for i, s in enumerate(grid) if s is INF]
    return fin, inf


def markov_grid(M, f, grid: Sequence, tol=DEFAULT_TOL) -> np.ndarray:
    """``Lambda_M f`` on a list of extended reals."""
    grid = [extended_real(s) for s in grid]
    fin, inf = _split_grid(grid)
    vals = [None] * len(grid)
    if fin:
        v = markov_apply(M, f, np.array([grid[i] for i in fin]), tol)
        for i, x in zip(fin, v):
            vals[i] = x
    for i in inf:
        vals[i] = markov_apply(M, f, INF, tol)
    return np.array(vals)


def compose_operator(N, f: Callable, tol=DEFAULT_TOL) -> Callable:
    """``Lambda_N f`` as a function on the extended line, vectorised over finite arrays."""
    E = Endomatrix.of(N)

    def g(t):
        if t is INF:
            return markov_apply(E, f, INF, tol)
        return markov_apply(E, f, np.asarray(t, dtype=float), tol)

    # a jump of f at b moves to N.b, since mu_{tN} has its atom at N^{-1}.t
    g.breakpoints = []
    for b in list(getattr(f, "breakpoints", ())) + [INF]:
        img = apply(E.m, b if b is INF else complex(b))
        if img is not INF and abs(img.imag) <= 1e-12 * max(1.0, abs(img)):
            g.breakpoints.append(float(img.real))
    return g


def semigroup_check(M, N, f: Callable, grid: Sequence, tol=DEFAULT_TOL) -> float:
    """Max over ``grid`` of ``|Lambda_{MN} f - Lambda_M Lambda_N f|``."""
    EM, EN = Endomatrix.of(M), Endomatrix.of(N)
    lhs = markov_grid(EM @ EN.m, f, grid, tol)
    rhs = markov_grid(EM, compose_operator(EN, f, tol), grid, tol)
    return float(np.max(np.abs(lhs - rhs)))


# --------------------------------------------------------------------------
# general transform


def _far_angles(levels=44):
    k = np.arange(2, levels)
    far = math.pi * (1.0 - 2.0 ** (-k.astype(float)))
    return np.concatenate([-far, far])


def sample_density(g: Callable, seeds=(), tol=1e-8, nodes=256, max_nodes=400000) -> GridDensity:
    """Adaptive piecewise-linear sampling of a density ``g`` on R.

    Nodes start uniform in ``theta = 2 atan(x)``, where the measure
    ``g(x) dx`` has the bounded density ``g (1 + x^2) / 2``.  Cells are
    bisected in ``theta`` until the estimated L1 interpolation error,
    summed over all cells, is below ``tol``.  The Cauchy tail constant is
    read off the outermost nodes.
    """
    theta = -math.pi + (np.arange(nodes) + 0.5) * (2 * math.pi / nodes)
    extra = [2 * math.atan(x) for x in seeds if np.isfinite(x)]
    theta = np.unique(np.concatenate([theta, _far_angles(), extra]))
    x = np.tan(0.5 * theta)
    keep = np.concatenate([[True], np.diff(x) > 0])
    theta, x = theta[keep], x[keep]
    y = np.asarray(g(x), dtype=float)
    # midpoint values are cached per cell; only bisected cells are re-evaluated
    tm = 0.5 * (theta[1:] + theta[:-1])
    ym = np.asarray(g(np.tan(0.5 * tm)), dtype=float)
    for _ in range(80):
        xm = np.tan(0.5 * tm)
        lam = (xm - x[:-1]) / (x[1:] - x[:-1])
        lin = y[:-1] + lam * (y[1:] - y[:-1])
        # a parabolic error profile integrates to 2/3 of its peak times the width
        cell = np.abs(ym - lin) * (1.0 + xm * xm) * 0.5 * np.diff(theta) * (2.0 / 3.0)
        total = cell.sum()
        if total <= tol:
            break
        bad = cell > 0.25 * tol / len(cell)
        # a bisection must produce distinct nodes
        bad &= (xm > x[:-1]) & (xm < x[1:])
        if not bad.any() or len(theta) + bad.sum() > max_nodes:
            break
        idx = np.nonzero(bad)[0]
        left = 0.5 * (theta[idx] + tm[idx])
        right = 0.5 * (tm[idx] + theta[idx + 1])
        new_m = np.asarray(g(np.tan(0.5 * np.concatenate([left, right]))), dtype=float)
        n = len(idx)
        # cell i becomes (theta_i, tm_i) and (tm_i, theta_i+1)
        theta = np.insert(theta, idx + 1, tm[idx])
        x = np.insert(x, idx + 1, xm[idx])
        y = np.insert(y, idx + 1, ym[idx])
        pos = idx + np.arange(n)
        tm = np.insert(tm, idx + 1, right)
        ym = np.insert(ym, idx + 1, new_m[n:])
        tm[pos] = left
        ym[pos] = new_m[:n]
    y = np.maximum(y, 0.0)
    tail = 0.5 * math.pi * (y[0] * (1 + x[0] ** 2) + y[-1] * (1 + x[-1] ** 2))
    return GridDensity(tuple(x), tuple(y), tail)


def _density_herglotz(dens, w):
    """``int (1 + s w)/(s - w) rho(s) ds`` for ``w`` in the closed upper half-plane."""
    if isinstance(dens, (RationalDensity, MixtureDensity)):
        return dens.herglotz(w)
    out = np.empty(w.shape, dtype=complex)
    # on the axis itself only the boundary value pi (1 + u^2) rho(u) of the imaginary part is needed
    near = w.imag <= 1e-12 * (1 + np.abs(w.real))
    out[~near] = dens.herglotz(w[~near])
    out[near] = 1j * math.pi * dens.times_one_plus_x2(w[near].real)
    return out


def transform_measure(lam: BoundaryMeasure, alpha: float, M, tol=DEFAULT_TOL, nodes=256, grid_tol=1e-8):
    """``(alpha_M, lambda^M)``: the representation of ``z -> phi(M.z)``."""
    E = Endomatrix.of(M)
    w_i = apply(E.m, 1j)

    def re_kernel(s):
        if s is INF:
            return w_i.real
        return ((1 + s * w_i) / (s - w_i)).real

    alpha_M = alpha + integrate(lam, re_kernel, tol=tol) if lam.atoms or lam.density else alpha
    alpha_M = float(np.real(alpha_M))

    if isinstance(E.cls, RealOrbit):
        return alpha_M, pushforward_real(lam, E.m, grid_tol)

    atoms = []
    rationals = []
    for s, m in lam.atoms:
        mu = mu_family(E, s)
        atoms.extend((t, m * p) for t, p in mu.atoms)
        if mu.density is not None:
            rationals.append((m, mu.density))

    if lam.density is None:
        dens = _kernel_mixture(rationals) if rationals else None
        return alpha_M, BoundaryMeasure(tuple(atoms), dens)

    dens_in = lam.density
    M_ = E.m

    def g(x):
        x = np.asarray(x, dtype=float)
        w = apply_array(M_, x.astype(complex))
        pole = ~np.isfinite(w)
        if np.any(pole):
            # the density is continuous there; step off the pole
            w[pole] = apply_array(M_, x[pole] + 1e-9 * (1 + np.abs(x[pole])))
        w = w.real + 1j * np.maximum(w.imag, 0.0)
        return _density_herglotz(dens_in, w).imag / (math.pi * (1.0 + x * x))

    seeds = list(_contact_preimages(E))
    if isinstance(dens_in, (RationalDensity, MixtureDensity)):
        Minv = E.m.inverse()
        for p, _c in dens_in.lower_parts:
            q = apply(Minv, p)
            if q is not INF:
                seeds.extend(_around(q))
    dens = sample_density(g, seeds=seeds, tol=grid_tol, nodes=nodes)
    if rationals:
        # atom kernels stay exact; a grid cannot resolve them near contact
        dens = GridDensity(dens.nodes, dens.values, dens.tail, _kernel_mixture(rationals))
    return alpha_M, BoundaryMeasure(tuple(atoms), dens)


def _around(p, offsets=np.array([-16, -8, -4, -2, -1, -0.5, -0.25, 0, 0.25, 0.5, 1, 2, 4, 8, 16])):
    """Sample positions resolving a Lorentzian feature centred at ``Re p`` of width ``|Im p|``."""
    p = complex(p)
    return list(p.real + abs(p.imag) * offsets)


def _contact_preimages(E: Endomatrix):
    """Real points sent to the tangency point; the transformed density concentrates there."""
    cls = E.cls
    if isinstance(cls, ContactCircle):
        t = apply(E.m.inverse(), complex(cls.tangency))
    elif isinstance(cls, ContactLine):
        t = apply(E.m.inverse(), INF)
    else:
        return []
    if t is INF:
        return []
    t = float(t.real)
    eps = 1e-9 * (1 + abs(t))
    return [t - eps, t + eps]


def _kernel_mixture(items):
    return mixture(r.scaled(m) for m, r in items)


def _cauchy_weight(x):
    return 1.0 / (1.0 + x * x)


def _odd_weight(x):
    return x / (1.0 + x * x)


# continuous functions on the extended line, addressed by name from the command line
TEST_FUNCTIONS = {
    "one": constant(1.0),
    "cauchy": extend(_cauchy_weight, 0.0),
    "odd": extend(_odd_weight, 0.0),
    "arctan": extend(np.arctan, math.pi / 2),
}
