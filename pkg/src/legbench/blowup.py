"""Coordinate charts on the blow-up Y = [X; C] and a numerical smoothness probe.

X carries coordinates (x, y) with x >= 0 the boundary defining function and
C = {x = 0, y' = 0}, y' = (y_1..y_k).  Charts implemented:

  interior_mf      (x, y)                          away from C
  ff_projective_j  (rho = y_j, sigma = x/y_j,      y_j > 0 dominant
                    w_i = y'_i/y_j for i != j, y'')
  ff_x             (x, Z' = y'/x, y'')             interior of the front face

Only the y_j > 0 projective charts are carried, matching the half-space the
constructions live in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class XPoint:
    x: float
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=float)))
        if self.x < 0:
            raise ChartError("x must be >= 0")


@dataclass(frozen=True)
class Chart:
    kind: str  # 'interior_mf' | 'ff_projective' | 'ff_x'
    n: int
    k: int
    j: int = 0  # dominant primed index for ff_projective (1-based)

    def __post_init__(self):
        if self.kind not in ("interior_mf", "ff_projective", "ff_x"):
            raise ChartError(f"unknown chart kind {self.kind!r}")
        if not 1 <= self.k <= self.n - 1:
            raise ChartError("need 1 <= k <= n-1")
        if self.kind == "ff_projective" and not 1 <= self.j <= self.k:
            raise ChartError("projective chart needs 1 <= j <= k")

    @property
    def dim(self):
        return self.n

    def coord_names(self):
        k, n = self.k, self.n
        ypp = [f"y{k + 1 + i}" for i in range(n - 1 - k)]
        if self.kind == "interior_mf":
            return ["x"] + [f"y{i+1}" for i in range(n - 1)]
        if self.kind == "ff_x":
            return ["x"] + [f"Z{i+1}" for i in range(k)] + ypp
        w = [f"w{i}" for i in range(1, k + 1) if i != self.j]
        return ["rho", "sigma"] + w + ypp


@dataclass(frozen=True)
class ChartPoint:
    chart: Chart
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coords", np.atleast_1d(np.asarray(self.coords, dtype=float))
        )
        if len(self.coords) != self.chart.dim:
            raise ChartError("coordinate vector has wrong length")
        c = self.coords
        if self.chart.kind == "interior_mf" and c[0] < 0:
            raise ChartError("x must be >= 0")
        if self.chart.kind == "ff_x" and c[0] < 0:
            raise ChartError("x must be >= 0")
        if self.chart.kind == "ff_projective" and (c[0] < 0 or c[1] < 0):
            raise ChartError("rho and sigma must be >= 0")


def to_chart(p: XPoint, chart: Chart) -> ChartPoint:
    """Exact coordinate change for interior points inside the chart domain."""
    n, k = chart.n, chart.k
    if len(p.y) != n - 1:
        raise ChartError("point dimension does not match chart")
    yp = p.y[:k]
    ypp = p.y[k:]
    if chart.kind == "interior_mf":
        if p.x <= 0:
            raise ChartError("interior chart requires x > 0")
        return ChartPoint(chart, np.concatenate([[p.x], p.y]))
    if chart.kind == "ff_x":
        if p.x <= 0:
            raise ChartError("ff_x chart requires x > 0")
        return ChartPoint(chart, np.concatenate([[p.x], yp / p.x, ypp]))
    yj = yp[chart.j - 1]
    if yj <= 0:
        raise ChartError(f"ff_projective_{chart.j} requires y_{chart.j} > 0")
    w = np.array([yp[i] / yj for i in range(k) if i != chart.j - 1])
    return ChartPoint(chart, np.concatenate([[yj, p.x / yj], w, ypp]))


def from_chart(cp: ChartPoint) -> XPoint:
    chart = cp.chart
    n, k = chart.n, chart.k
    c = cp.coords
    if chart.kind == "interior_mf":
        return XPoint(c[0], c[1:])
    if chart.kind == "ff_x":
        x = c[0]
        yp = c[1 : 1 + k] * x
        return XPoint(x, np.concatenate([yp, c[1 + k :]]))
    rho, sigma = c[0], c[1]
    w = c[2 : 2 + k - 1]
    ypp = c[2 + k - 1 :]
    yp = np.empty(k)
    wi = 0
    for i in range(k):
        if i == chart.j - 1:
            yp[i] = rho
        else:
            yp[i] = w[wi] * rho
            wi += 1
    return XPoint(rho * sigma, np.concatenate([yp, ypp]))


def transition(cp: ChartPoint, target: Chart) -> ChartPoint:
    """Chart overlap map, computed through the interior model."""
    if target == cp.chart:
        return cp
    return to_chart(from_chart(cp), target)


def boundary_defining_functions(chart: Chart):
    """(rho_mf, rho_ff) as maps of the chart coordinates; None where the chart
    does not meet the face."""
    if chart.kind == "interior_mf":
        return (lambda c: c[0]), None
    if chart.kind == "ff_x":
        # interior of ff: the lift of x=0 with y'/x finite is the front face
        return None, (lambda c: c[0])
    return (lambda c: c[1]), (lambda c: c[0])


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ProbeGrid:
    """Geometric refinement toward a boundary piece of a chart.

    base: chart coordinates of the anchor point (all positive where needed);
    shrink: indices of the coordinates scaled by t at each level.
    """

    base: tuple
    shrink: tuple
    t0: float = 0.5
    levels: int = 7
    step_fraction: float = 0.25


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    max_derivative_growth: float
    slopes: dict


def _fd_derivative(g, t, order, h):
    """Centered finite-difference derivative of a 1D slice.

    Returns (derivative, noise_floor), the latter an estimate of the roundoff
    amplification eps * scale / h^order inherent to the stencil.
    """
    from math import comb

    ks = np.arange(order + 1)
    coefs = np.array([(-1) ** (order - k) * comb(order, k) for k in ks])
    pts = t + (ks - order / 2.0) * h
    vals = np.array([g(p) for p in pts])
    deriv = float(np.dot(coefs, vals) / h**order)
    scale = float(np.max(np.abs(vals))) if len(vals) else 0.0
    noise = np.finfo(float).eps * scale * float(np.sum(np.abs(coefs))) / h**order
    return deriv, noise


def smoothness_probe(f, chart: Chart, order: int, grid: ProbeGrid, tol=0.1):
    """Decide numerically whether f (a function on the interior of X) extends
    smoothly to the probed boundary piece in this chart.

    Derivatives up to `order` in each shrinking coordinate are computed on a
    geometric refinement t_i = t0 * 2^-i; smooth iff the fitted blow-up
    exponent (negated log-log slope) stays <= tol for every order/direction.
    """

    def F(coords):
        return float(np.real(f(from_chart(ChartPoint(chart, np.asarray(coords))))))

    ts = grid.t0 * 0.5 ** np.arange(grid.levels)
    slopes = {}
    worst = -np.inf
    for d in range(1, order + 1):
        for axis in grid.shrink:
            mags = []
            floors = []
            for t in ts:
                coords = np.array(grid.base, dtype=float)
                coords[list(grid.shrink)] = coords[list(grid.shrink)] * t
                # stencil halfwidth (order/2)*h must stay below the boundary
                h = grid.step_fraction * coords[axis] / (order / 2.0 + 1.0)

                def g(p, coords=coords, axis=axis):
                    c = coords.copy()
                    c[axis] = p
                    return F(c)

                deriv, noise = _fd_derivative(g, coords[axis], d, h)
                mags.append(abs(deriv))
                floors.append(noise)
            mags = np.asarray(mags)
            floors = np.asarray(floors)
            # fit the deepest levels only: bounded derivatives settle there,
            # while blow-ups keep growing
            deep = np.zeros(len(ts), dtype=bool)
            deep[max(0, len(ts) - 4) :] = True
            mask = deep & (mags > np.maximum(10.0 * floors, 1e-13))
            if mask.sum() < 3:
                slopes[(d, axis)] = 0.0
                continue
            slope = np.polyfit(np.log(ts[mask]), np.log(mags[mask]), 1)[0]
            growth = -slope  # positive = blow-up toward the boundary
            slopes[(d, axis)] = growth
            worst = max(worst, growth)
    if worst == -np.inf:
        worst = 0.0
    return SmoothnessReport(smooth=bool(worst <= tol), max_derivative_growth=worst,
                            slopes=slopes)
