"""Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.

The integrand is evaluated on whole batches of nodes at once and may be
vector valued: ``h(x)`` receives a 1-d array of shape ``(n,)`` and returns
shape ``(n,)`` or ``(n, k)``.  Errors are controlled in the max norm over
the ``k`` components.
"""

import numpy as np

from .errors import NonConvergentQuadrature

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# symmetric 15-point layout: -x0..-x6, 0, x6..x0
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
GAUSS = np.zeros(15)
GAUSS[[1, 3, 5]] = _WG[:3]
GAUSS[7] = _WG[3]
GAUSS[[9, 11, 13]] = _WG[2::-1]

_EPS = np.finfo(float).eps


def _rule(h, a, b):
    """Apply the 15-point pair to every interval ``[a_j, b_j]``."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(h(x.ravel()))
    scalar = fx.ndim == 1
    if scalar:
        fx = fx[:, None]
    fx = fx.reshape(len(a), 15, -1)
    if not np.all(np.isfinite(fx)):
        raise NonConvergentQuadrature("integrand returned non-finite values")
    kron = np.einsum("j,mjk->mk", KRONROD, fx) * half[:, None]
    gauss = np.einsum("j,mjk->mk", GAUSS, fx) * half[:, None]
    mean = kron / (2.0 * half[:, None])
    resasc = np.einsum("j,mjk->mk", KRONROD, np.abs(fx - mean[:, None, :])) * np.abs(half)[:, None]
    resabs = np.einsum("j,mjk->mk", KRONROD, np.abs(fx)) * np.abs(half)[:, None]
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return kron, err.max(axis=1), scalar


def gauss_kronrod(h, edges, tol=1e-10, limit=20000):
    """Integrate ``h`` over ``[edges[0], edges[-1]]``.

    ``edges`` is a sorted sequence of breakpoints; the integrand may have
    kinks or jumps there.  Returns ``(value, error_estimate)`` where value
    has shape ``(k,)`` (or is a scalar for scalar integrands).

    Raises NonConvergentQuadrature when more than ``limit`` subintervals
    would be needed.
    """
    edges = np.unique(np.asarray(edges, dtype=float))
    if len(edges) < 2:
        raise ValueError("need at least two distinct breakpoints")
    a, b = edges[:-1], edges[1:]
    kron, err, scalar = _rule(h, a, b)
    n_total = len(a)
    while True:
        total_err = err.sum()
        if total_err <= tol:
            break
        order = np.argsort(err)[::-1]
        tail = np.cumsum(err[order][::-1])[::-1]
        # bisect the worst leaves until the remainder is within half the budget
        n_split = int(np.searchsorted(-tail, -0.5 * tol, side="left"))
        n_split = max(1, min(n_split, len(order)))
        split = order[:n_split]
        keep = np.ones(len(a), dtype=bool)
        keep[split] = False
        sa, sb = a[split], b[split]
        sm = 0.5 * (sa + sb)
        tiny = (sb - sa) <= 64 * _EPS * np.maximum(1.0, np.abs(sm))
        if np.all(tiny):
            raise NonConvergentQuadrature(
                f"subintervals collapsed before reaching tol={tol:g} (error {total_err:.3g})"
            )
        na = np.concatenate([sa, sm])
        nb = np.concatenate([sm, sb])
        n_total += len(na)
        if n_total > limit:
            raise NonConvergentQuadrature(
                f"subdivision budget {limit} exhausted (error {total_err:.3g} > tol {tol:g})"
            )
        k2, e2, _ = _rule(h, na, nb)
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        kron = np.concatenate([kron[keep], k2])
        err = np.concatenate([err[keep], e2])
    # fixed summation order (by interval position) keeps results reproducible
    pos = np.argsort(a, kind="stable")
    value = kron[pos].sum(axis=0)
    if scalar:
        return value[0], total_err
    return value, total_err


def _rule_columns(h, a, b, col):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = (mid[:, None] + half[:, None] * NODES[None, :]).ravel()
    fx = np.asarray(h(x, np.repeat(col, 15))).reshape(len(a), 15)
    if not np.all(np.isfinite(fx)):
        raise NonConvergentQuadrature("integrand returned non-finite values")
    kron = fx @ KRONROD * half
    gauss = fx @ GAUSS * half
    mean = kron / (2.0 * half)
    ah = np.abs(half)
    resasc = np.abs(fx - mean[:, None]) @ KRONROD * ah
    resabs = np.abs(fx) @ KRONROD * ah
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    return kron, np.maximum(err, 50.0 * _EPS * resabs)


def gauss_kronrod_columns(h, edges, tol=1e-10, limit=2_000_000):
    """Integrate many scalar integrands at once, each on its own adaptive mesh.

    ``edges[j]`` are the breakpoints of integrand ``j``; ``h(x, j)`` is called
    with flat arrays of nodes and column indices.  Every column is refined
    independently until its error estimate is below ``tol``.  Returns
    ``(values, errors)`` as arrays of length ``len(edges)``.
    """
    A, B, Cols = [], [], []
    for j, e in enumerate(edges):
        e = np.unique(np.asarray(e, dtype=float))
        A.append(e[:-1])
        B.append(e[1:])
        Cols.append(np.full(len(e) - 1, j))
    a, b, col = np.concatenate(A), np.concatenate(B), np.concatenate(Cols)
    ncol = len(edges)
    kron, err = _rule_columns(h, a, b, col)
    value = np.zeros(ncol, dtype=kron.dtype)
    while True:
        tot = np.bincount(col, weights=err, minlength=ncol)
        bad = tot > tol
        if not np.any(bad):
            break
        cnt = np.bincount(col, minlength=ncol)
        worst = np.zeros(ncol)
        np.maximum.at(worst, col, err)
        thr = np.minimum(tol / (4.0 * cnt), worst)
        split = bad[col] & (err >= thr[col])
        sa, sb, sc = a[split], b[split], col[split]
        sm = 0.5 * (sa + sb)
        tiny = (sb - sa) <= 64 * _EPS * np.maximum(1.0, np.abs(sm))
        if np.all(tiny):
            raise NonConvergentQuadrature(
                f"subintervals collapsed before reaching tol={tol:g} (error {tot.max():.3g})"
            )
        if len(a) + len(sa) > limit:
            raise NonConvergentQuadrature(
                f"subdivision budget {limit} exhausted (error {tot.max():.3g} > tol {tol:g})"
            )
        na = np.concatenate([sa, sm])
        nb = np.concatenate([sm, sb])
        nc = np.concatenate([sc, sc])
        k2, e2 = _rule_columns(h, na, nb, nc)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        col = np.concatenate([col[keep], nc])
        kron = np.concatenate([kron[keep], k2])
        err = np.concatenate([err[keep], e2])
    # deterministic order: by column, then position
    order = np.lexsort((a, col))
    kron, col = kron[order], col[order]
    if np.iscomplexobj(kron):
        value = np.bincount(col, weights=kron.real, minlength=ncol) + 1j * np.bincount(col, weights=kron.imag, minlength=ncol)
    else:
        value = np.bincount(col, weights=kron, minlength=ncol)
    return value, np.bincount(col, weights=err[order], minlength=ncol)
