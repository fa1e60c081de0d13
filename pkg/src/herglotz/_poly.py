"""Polynomial helpers on ascending coefficient arrays (``c[k]`` multiplies ``z**k``)."""

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import RootFindingFailure


def as_coeffs(c, dtype=complex):
    c = np.atleast_1d(np.asarray(c, dtype=dtype))
    return trim(c)


def trim(c, rtol=0.0):
    """Drop vanishing leading (highest-degree) coefficients, keeping at least one."""
    c = np.asarray(c)
    scale = np.max(np.abs(c)) if c.size else 0.0
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= rtol * scale:
        n -= 1
    return c[:n]


def degree(c):
    c = trim(c)
    if len(c) == 1 and c[0] == 0:
        return -1
    return len(c) - 1


def polyval(c, z):
    return P.polyval(z, c)


def real_if_close(c, tol=1e-12):
    c = np.asarray(c)
    if np.iscomplexobj(c):
        scale = max(np.max(np.abs(c)), 1e-300)
        if np.all(np.abs(c.imag) <= tol * scale):
            return c.real.copy()
    return c


def roots(c):
    c = trim(np.asarray(c))
    if len(c) <= 1:
        return np.array([], dtype=complex)
    try:
        r = P.polyroots(c)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eig failure
        raise RootFindingFailure(str(exc)) from exc
    r = np.asarray(r, dtype=complex)
    if not np.all(np.isfinite(r)):
        raise RootFindingFailure("non-finite polynomial roots")
    return r


def cluster(points, rtol=1e-5):
    """Group nearly equal roots; returns ``[(centre, multiplicity), ...]``."""
    pts = list(np.asarray(points, dtype=complex))
    out = []
    while pts:
        p = pts.pop(0)
        group = [p]
        scale = max(1.0, abs(p))
        rest = []
        for q in pts:
            (group if abs(q - p) <= rtol * scale else rest).append(q)
        pts = rest
        out.append((complex(np.mean(group)), len(group)))
    return out


def from_roots(rs):
    if len(rs) == 0:
        return np.array([1.0 + 0j])
    return np.asarray(P.polyfromroots(list(rs)), dtype=complex)


def pole_parts(num, den, rtol=1e-5, known_roots=None):
    """Partial fractions of ``num/den``.

    Returns ``(poly, parts)``: the polynomial part (ascending) and a list of
    ``(pole, coeffs)`` where ``coeffs[j-1]`` multiplies ``1/(z - pole)**j``.
    Simple poles get exact residues ``num(p)/den'(p)`` from the factored
    denominator.  Clusters (multiple poles) are fitted by least squares on a
    circle enclosing all poles.  ``known_roots`` skips root finding when the
    caller knows the roots of ``den`` exactly; they are clustered only when
    they coincide to rounding.
    """
    num = as_coeffs(num)
    den = as_coeffs(den)
    if degree(den) < 0:
        raise ZeroDivisionError("zero denominator")
    poly, rem = P.polydiv(num, den)
    poly = trim(np.asarray(poly, dtype=complex))
    rem = np.asarray(rem, dtype=complex)
    if known_roots is None:
        rts = roots(den)
    else:
        rts = np.asarray(known_roots, dtype=complex)
        rtol = 1e-12
    groups = cluster(rts, rtol)
    if not groups:
        return poly, []
    lead = den[-1]
    if all(m == 1 for _, m in groups):
        parts = []
        for j, (p, _) in enumerate(groups):
            others = np.prod([p - q for k, (q, _) in enumerate(groups) if k != j])
            parts.append((p, np.array([P.polyval(p, rem) / (lead * others)])))
        return poly, parts
    radius = 2.0 * max(1.0, max(abs(p) for p, _ in groups))
    n_unknown = sum(m for _, m in groups)
    n_pts = max(4 * n_unknown, 16)
    theta = 2 * np.pi * (np.arange(n_pts) + 0.37) / n_pts
    z = radius * np.exp(1j * theta)
    rhs = P.polyval(z, rem) / P.polyval(z, den)
    cols = []
    for p, m in groups:
        for j in range(1, m + 1):
            cols.append(1.0 / (z - p) ** j)
    A = np.stack(cols, axis=1)
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    parts = []
    k = 0
    for p, m in groups:
        parts.append((p, sol[k:k + m]))
        k += m
    return poly, parts


def assemble(parts):
    """Inverse of :func:`pole_parts` for the proper part: returns ``(num, den)``."""
    den = from_roots([p for p, m in parts for _ in range(len(m))])
    num = np.zeros(1, dtype=complex)
    for i, (p, coeffs) in enumerate(parts):
        others = from_roots([q for k, (q, c) in enumerate(parts) if k != i for _ in range(len(c))])
        m = len(coeffs)
        for j, cj in enumerate(coeffs, start=1):
            term = P.polymul(others, P.polypow([-p, 1.0], m - j)) * cj
            num = P.polyadd(num, term)
    return trim(np.asarray(num, dtype=complex)), den


def compose_moebius(c, a, b, cc, d, total_degree):
    """Homogenised ``sum_k c_k (a t + b)^k (cc t + d)^(total_degree - k)``."""
    u = np.array([b, a])
    v = np.array([d, cc])
    out = np.zeros(1, dtype=np.result_type(c, u, v, float))
    for k, ck in enumerate(c):
        if ck == 0:
            continue
        term = P.polymul(P.polypow(u, k), P.polypow(v, total_degree - k)) * ck
        out = P.polyadd(out, term)
    return out


def conj_poly(c):
    """Coefficients of ``z -> conj(p(conj(z)))``."""
    return np.conj(np.asarray(c))
