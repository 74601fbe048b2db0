"""Panel Gauss-Legendre quadrature helpers.

All integrands here are smooth and (super-)exponentially decaying, possibly
oscillatory.  The workhorse is a fixed-order composite rule with one
refinement step for an error estimate; semi-infinite integrals are truncated
using a caller-supplied decay radius.
"""

from __future__ import annotations

import numpy as np

MAX_REFINE = 20


def gl_nodes(a, b, n_panels, order=16):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate(f, a, b, n_panels=4, order=16, tol=1e-12):
    """Adaptively refined composite quadrature of a vectorized integrand.

    Returns (value, est_error).  Refinement doubles the panel count until the
    change is below tol (relative to 1+|value|) or MAX_REFINE is reached.
    """
    if b <= a:
        return 0.0 + 0.0j, 0.0
    nodes, weights = gl_nodes(a, b, n_panels, order)
    val = np.sum(f(nodes) * weights)
    err = np.inf
    for _ in range(MAX_REFINE):
        n_panels *= 2
        nodes, weights = gl_nodes(a, b, n_panels, order)
        new = np.sum(f(nodes) * weights)
        err = abs(new - val)
        val = new
        if err <= tol * (1.0 + abs(val)):
            break
    return val, err


def oscillation_panels(a, b, max_freq, per_period=10, order=16, min_panels=4):
    """Panel count so that an e^{i max_freq t} factor gets >= per_period nodes
    per period."""
    periods = abs(b - a) * abs(max_freq) / (2.0 * np.pi)
    need = int(np.ceil(periods * per_period / order)) + 1
    return max(min_panels, need)


def cumulative_from_minus_inf(f, radius, z_values, order=24, pts_per_unit=6):
    """Evaluate F(z) = int_{-inf}^{z} f for each z in z_values.

    f must be vectorized and negligible outside [-radius, radius].  Panels are
    laid out over [-radius, max(z)] with breakpoints at every requested z so
    each cumulative value is an exact partial sum of panel integrals.
    """
    z_values = np.atleast_1d(np.asarray(z_values, dtype=float))
    out = np.zeros(z_values.shape, dtype=complex)
    order_idx = np.argsort(z_values)
    zs = z_values[order_idx]
    lo = -abs(radius)
    acc = 0.0 + 0.0j
    prev = lo
    results = np.zeros(len(zs), dtype=complex)
    for i, z in enumerate(zs):
        hi = min(z, abs(radius))
        if hi > prev:
            n_panels = max(2, int(np.ceil((hi - prev) * pts_per_unit)))
            nodes, weights = gl_nodes(prev, hi, n_panels, order)
            acc = acc + np.sum(f(nodes) * weights)
            prev = hi
        results[i] = acc
    out[order_idx] = results
    return out
