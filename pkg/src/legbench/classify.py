"""Corner Taylor-coefficient extraction and the membership criterion.

In the projective front-face chart (rho = y, sigma = x/y) a candidate
u(x, y), after stripping the prefactor x^{m+1/2} = (rho*sigma)^{m+1/2},
should extend smoothly to the corner with Taylor expansion

    u / x^{m+1/2}  ~  sum_{j,l} c_{jl} sigma^j rho^l ,

and membership in the class requires every coefficient with l < j to vanish:
powers of sigma = x/y can only enter accompanied by at least as many powers
of rho = y.  Coefficients are extracted by a two-stage polynomial fit on
geometric grids, with leave-one-out replicates supplying uncertainties, and a
properness witness multiplies in an extra factor to exhibit a violation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npp


class ClassifyError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClassifyGrid:
    """Geometric corner grids sigma_i = sigma0 * 2^-i, rho_l = rho0 * 2^-l."""

    sigma0: float = 0.4
    rho0: float = 0.2
    levels: int = 8

    def sigmas(self):
        return self.sigma0 * 0.5 ** np.arange(self.levels)

    def rhos(self):
        return self.rho0 * 0.5 ** np.arange(self.levels)


@dataclass(frozen=True)
class AsymptoticTable:
    """Fitted corner coefficients c[j, l] (sigma^j rho^l) with uncertainties."""

    order: int
    c: np.ndarray  # (order+1, order+1) complex
    sigma_unc: np.ndarray  # same shape, >= 0
    m: float


def _fit_two_stage(vals, sigmas, rhos, order):
    """vals[l, i] = stripped u at (rho_l, sigma_i) -> coefficient matrix."""
    # stage 1: per rho, polynomial in sigma
    d = np.empty((len(rhos), order + 1), dtype=complex)
    for li in range(len(rhos)):
        d[li] = npp.polyfit(sigmas, vals[li], order)
    # stage 2: per sigma-order j, polynomial in rho
    c = np.empty((order + 1, order + 1), dtype=complex)
    for j in range(order + 1):
        c[j] = npp.polyfit(rhos, d[:, j], order)
    return c


def extract_coefficients(u, m, order=4, grid=None) -> AsymptoticTable:
    """Fit the corner Taylor table of u(x, y) after stripping x^{m+1/2}.

    u: callable (x, y) -> complex, evaluated at x = rho*sigma, y = rho over
    the geometric corner grids.  Uncertainties are leave-one-out maxima over
    dropping any single sigma or rho grid level.
    """
    grid = grid or ClassifyGrid()
    sigmas = grid.sigmas()
    rhos = grid.rhos()
    if grid.levels < order + 3:
        raise ClassifyError(
            f"need at least order+3 = {order + 3} grid levels for "
            f"leave-one-out fits at order {order}; increase `levels`"
        )
    cond = np.linalg.cond(npp.polyvander(sigmas / sigmas[0], order))
    if cond > 1e8:
        raise ClassifyError(
            f"Vandermonde condition number {cond:.2e} too large; "
            "reduce the fit order or widen the grid spacing"
        )
    vals = np.empty((len(rhos), len(sigmas)), dtype=complex)
    for li, rho in enumerate(rhos):
        for si, sg in enumerate(sigmas):
            x = rho * sg
            vals[li, si] = complex(u(x, rho)) / x ** (m + 0.5)
    c = _fit_two_stage(vals, sigmas, rhos, order)
    unc = np.zeros_like(c, dtype=float)
    for si in range(len(sigmas)):
        keep = np.arange(len(sigmas)) != si
        c_rep = _fit_two_stage(vals[:, keep], sigmas[keep], rhos, order)
        unc = np.maximum(unc, np.abs(c_rep - c))
    for li in range(len(rhos)):
        keep = np.arange(len(rhos)) != li
        c_rep = _fit_two_stage(vals[keep], sigmas, rhos[keep], order)
        unc = np.maximum(unc, np.abs(c_rep - c))
    return AsymptoticTable(order=order, c=c, sigma_unc=unc, m=m)


@dataclass(frozen=True)
class MembershipResult:
    status: str  # 'member' | 'not_member' | 'inconclusive'
    violations: tuple  # of (j, l, value, unc)
    inconclusive: tuple  # of (j, l, value, unc)


def check_membership(t: AsymptoticTable, tol=1e-8) -> MembershipResult:
    """Test that every coefficient with l < j vanishes within 3x uncertainty.

    An entry violates when it is both above tolerance/uncertainty and clearly
    resolved (|c| > 10*unc); entries above threshold but not resolved are
    reported as inconclusive rather than failed.
    """
    violations = []
    unresolved = []
    for j in range(t.order + 1):
        for l in range(j):
            v, u = t.c[j, l], t.sigma_unc[j, l]
            if abs(v) <= max(tol, 3.0 * u):
                continue
            if abs(v) > 10.0 * u:
                violations.append((j, l, v, u))
            else:
                unresolved.append((j, l, v, u))
    if violations:
        status = "not_member"
    elif unresolved:
        status = "inconclusive"
    else:
        status = "member"
    return MembershipResult(status, tuple(violations), tuple(unresolved))


@dataclass(frozen=True)
class Witness:
    table: AsymptoticTable
    result: MembershipResult

    @property
    def proper(self) -> bool:
        """True when the multiplied function has left the class."""
        return self.result.status == "not_member"


def properness_witness(u, m, h, order=4, grid=None, tol=1e-8) -> Witness:
    """Corner table and membership verdict for h(x, y) * u(x, y).

    With h = x/y this exhibits that multiplication by sigma shifts the table
    one row down (c_{00} -> c_{10}) and so leaves the class whenever the
    leading coefficient is nonzero; smooth multipliers of the form
    y^a * x^{2b} shift within the allowed l >= j wedge and keep membership.
    """
    table = extract_coefficients(
        lambda x, y: h(x, y) * u(x, y), m, order=order, grid=grid
    )
    return Witness(table=table, result=check_membership(table, tol=tol))
