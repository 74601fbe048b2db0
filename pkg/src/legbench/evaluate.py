"""Numerical evaluation of the four model distribution classes.

Order-to-exponent bookkeeping:

  type 1        u = x^q e^{i phi(y)/x} a(x,y),            q = m + n/4
  type 2        u = x^q V(x, y'/x, y''),                  q = m + n/4 - k/2
  intersecting  u = x^{m+n/4-(p+1)/2} * oscillatory int.  (n=2: x^{m-1/2})
  fibred        prefactors rho^{r+n/4-k/2} sigma^{m+n/4-p/2}, p = k-1

The intersecting class carries two independent evaluation paths: direct panel
quadrature of the defining double integral (numerical Fourier), and the
reduced one-dimensional form using the closed-form transform of the
amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blowup import Chart, ChartPoint
from .poly import Poly
from .quadrature import gl_nodes, oscillation_panels

X_MIN = 1e-3  # smallest x the numerics are specified for


class EvalError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvalReport:
    value: complex
    est_error: float
    method: str

    def __post_init__(self):
        if self.est_error < 0:
            raise ValueError("est_error must be >= 0")


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Type1:
    """u = x^q e^{i phi(y)/x} a(x, y) with polynomial phi, a."""

    m: float
    n: int
    phase: Poly  # in variables y1..y_{n-1}
    amp: Poly  # in variables x, y1..y_{n-1}

    @property
    def q(self):
        return self.m + self.n / 4.0


def eval_type1(d: Type1, x, y) -> EvalReport:
    if x <= 0:
        raise EvalError("x must be > 0")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    phi = complex(d.phase(*y))
    a = complex(d.amp(x, *y))
    return EvalReport(x**d.q * np.exp(1j * phi.real / x) * a, 0.0, "closed_form")


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Type2:
    """u = x^q V(y_1/x) * smooth(x, y'') with V Schwartz; k = 1 numerics."""

    m: float
    n: int
    k: int
    profile: object  # Schwartz function of Z = y_1/x (HermiteGaussianSum etc.)
    smooth: Poly | None = None  # in variables x, y2..y_{n-1}; None means 1

    @property
    def q(self):
        return self.m + self.n / 4.0 - self.k / 2.0


def _smooth_factor(d: Type2, x, ypp):
    if d.smooth is None:
        return 1.0 + 0.0j
    return complex(d.smooth(x, *ypp))


def eval_type2(d: Type2, x, y) -> EvalReport:
    if x <= 0:
        raise EvalError("x must be > 0")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    val = x**d.q * complex(d.profile(y[0] / x)) * _smooth_factor(d, x, y[1:])
    return EvalReport(val, 0.0, "closed_form")


def eval_type2_synthesis(d: Type2, x, y, order=24) -> EvalReport:
    """Fourier-synthesis path: x^q int e^{i eta Z} W(eta) d eta with W chosen
    so the integral reproduces V(Z); numerical quadrature cross-check."""
    if x <= 0:
        raise EvalError("x must be > 0")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    Z = y[0] / x
    W = d.profile.fourier_transform().reflect().scaled(1.0 / (2.0 * np.pi))
    R = W.support_radius(1e-18)
    npan = oscillation_panels(-R, R, Z, per_period=10, order=order, min_panels=8)
    vals = []
    for fac in (1, 2):
        nodes, weights = gl_nodes(-R, R, npan * fac, order)
        vals.append(np.sum(np.exp(1j * nodes * Z) * W(nodes) * weights))
    val = x**d.q * vals[1] * _smooth_factor(d, x, y[1:])
    return EvalReport(val, abs(vals[1] - vals[0]) * x**d.q, "fourier_synthesis")


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Intersecting:
    """n = 2 intersecting class: sum_i P_i(x, y, ybar) * S_i(zeta) amplitudes.

    u = x^{m-1/2} int_0^inf int e^{i zeta (y-ybar)/x} a(x,y,zeta,ybar) dzeta dybar
    """

    m: float
    terms: tuple  # of (Poly in (x, y, ybar), Schwartz function of zeta)
    n: int = 2

    def __post_init__(self):
        for p, _ in self.terms:
            if p.vars != ("x", "y", "ybar"):
                raise ValueError("passive polynomials must use variables (x, y, ybar)")

    def ybar_free(self):
        return all(
            all(e[2] == 0 for e in p.coeffs) for p, _ in self.terms
        )


def _transform_radius(s, eps=1e-18):
    ft = s.fourier_transform()
    return ft.support_radius(eps)


def eval_intersecting_direct(
    d: Intersecting, x, y, order=16, zcut=None, refine_check=True
) -> EvalReport:
    """Defining double integral by tensor Gauss-Legendre panels.

    The ybar window is [max(0, y - x*Rz), y + x*Rz] where Rz bounds the decay
    of the transformed amplitude; the inner zeta integral is oscillatory with
    frequency |y - ybar|/x <= Rz and gets >= 10 nodes per period.
    """
    if x <= 0:
        raise EvalError("x must be > 0")
    Rz = zcut if zcut is not None else max(
        _transform_radius(s) for _, s in d.terms
    )
    lo = max(0.0, y - x * Rz)
    hi = y + x * Rz
    if hi <= lo:
        # window entirely outside ybar >= 0: value below truncation level
        return EvalReport(0.0 + 0.0j, 1e-300, "direct_quadrature")

    def run(scale):
        n_out = max(8, int(np.ceil((hi - lo) / x * 1.5 * scale)))
        yb, wy = gl_nodes(lo, hi, n_out, order)
        results = np.zeros(len(yb), dtype=complex)
        for p, s in d.terms:
            Rzeta = s.support_radius(1e-18)
            npan = oscillation_panels(
                -Rzeta, Rzeta, Rz, per_period=10 * scale, order=order, min_panels=8
            )
            zn, zw = gl_nodes(-Rzeta, Rzeta, npan, order)
            sw = s(zn) * zw
            phase = np.exp(1j * np.multiply.outer((y - yb) / x, zn))
            inner = phase @ sw
            results += np.asarray(p(x, y, yb)) * inner
        return np.sum(results * wy)

    v1 = run(1)
    if refine_check:
        v2 = run(2)
        err = abs(v2 - v1)
        v1 = v2
    else:
        err = np.nan
    return EvalReport(x ** (d.m - 0.5) * v1, x ** (d.m - 0.5) * err,
                      "direct_quadrature")


def eval_intersecting_reduced(d: Intersecting, x, y) -> EvalReport:
    """Reduced form x^{m+1/2} int_{-inf}^{Z} a-hat(x, y, Z') dZ', Z = y/x.

    (With the e^{+i zeta Z} forward transform the reflection in the
    conventional statement of this reduction is already absorbed.)  Requires
    the amplitude to be ybar-independent; uses the closed-form transform of
    each Schwartz factor.
    """
    if x <= 0:
        raise EvalError("x must be > 0")
    if not d.ybar_free():
        raise EvalError("reduced path requires a ybar-independent amplitude")
    Z = y / x
    total = 0.0 + 0.0j
    for p, s in d.terms:
        ft = s.fourier_transform()
        cum = ft.integrate_to(np.array([Z]))[0]
        total += complex(p(x, y, 0.0)) * cum
    return EvalReport(x ** (d.m + 0.5) * total, 0.0, "fourier_reduced")


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class GeneralIntersecting:
    """n = 3, k = 2 intersecting class built on the corner model phase

    psi = -y2*T(y2, v) + v*(y1 - y2*Y(y2, v)) + zeta*(y2 - ybar),

    with amplitude P(x, y1, y2) * Sv(v) * Szeta(zeta).
    """

    m: float
    T: Poly  # in (yk, v1)
    Y: Poly  # in (yk, v1)
    P: Poly  # in (x, y1, y2)
    Sv: object
    Szeta: object
    n: int = 3
    k: int = 2

    @property
    def prefactor_exponent(self):
        p = self.k  # parameters: v (k-1 of them) plus zeta; here p+1 = 3
        return self.m + self.n / 4.0 - (p + 1) / 2.0  # m - 3/4

    def phi_v(self, y1, y2, v):
        """The zeta-free part of the phase."""
        t = np.real(self.T(y2, v))
        yy = np.real(self.Y(y2, v))
        return -y2 * t + v * (y1 - y2 * yy)


def eval_general_direct(d: GeneralIntersecting, x, y1, y2, order=16) -> EvalReport:
    if x <= 0:
        raise EvalError("x must be > 0")
    Rz = _transform_radius(d.Szeta)
    lo, hi = max(0.0, y2 - x * Rz), y2 + x * Rz
    if hi <= lo:
        return EvalReport(0.0 + 0.0j, 1e-300, "direct_quadrature")
    Rv = d.Sv.support_radius(1e-16)
    Rzeta = d.Szeta.support_radius(1e-16)

    def run(scale):
        vfreq = (abs(y1) + abs(y2) * 2.0) / x
        vn, vw = gl_nodes(
            -Rv, Rv,
            oscillation_panels(-Rv, Rv, vfreq, per_period=8 * scale, order=order),
            order,
        )
        zn, zw = gl_nodes(
            -Rzeta, Rzeta,
            oscillation_panels(-Rzeta, Rzeta, Rz, per_period=8 * scale, order=order),
            order,
        )
        yb, yw = gl_nodes(lo, hi, max(8, int((hi - lo) / x * 1.5 * scale)), order)
        iv = np.sum(np.exp(1j * d.phi_v(y1, y2, vn) / x) * d.Sv(vn) * vw)
        ph = np.exp(1j * np.multiply.outer((y2 - yb) / x, zn))
        izy = np.sum((ph @ (d.Szeta(zn) * zw)) * yw)
        return iv * izy

    v1, v2 = run(1), run(2)
    pref = x**d.prefactor_exponent * complex(d.P(x, y1, y2))
    return EvalReport(pref * v2, abs(pref) * abs(v2 - v1), "direct_quadrature")


def eval_general_reduced(d: GeneralIntersecting, x, y1, y2, order=24) -> EvalReport:
    """Semi-reduced cross-check: numerical v-integral times the closed-form
    zeta/ybar reduction."""
    if x <= 0:
        raise EvalError("x must be > 0")
    Rv = d.Sv.support_radius(1e-18)
    vfreq = (abs(y1) + abs(y2) * 2.0) / x
    vn, vw = gl_nodes(
        -Rv, Rv, oscillation_panels(-Rv, Rv, vfreq, per_period=12, order=order), order
    )
    iv = np.sum(np.exp(1j * d.phi_v(y1, y2, vn) / x) * d.Sv(vn) * vw)
    cum = d.Szeta.fourier_transform().integrate_to(np.array([y2 / x]))[0]
    val = x ** (d.prefactor_exponent + 1.0) * complex(d.P(x, y1, y2)) * iv * cum
    return EvalReport(val, 0.0, "fourier_reduced")


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Fibred:
    """Fibred class in a projective front-face chart, orders (m, r).

    value = rho^{r+n/4-k/2} sigma^{m+n/4-p/2} *
            int e^{i phitilde/sigma} a(chart) Sv(v) dv,      p = k - 1.

    For k = 1 there is no v-integral.  phitilde and amp are polynomials in the
    chart coordinate names plus v1 (for k = 2).
    """

    m: float
    r: float
    n: int
    k: int
    phitilde: Poly
    amp: Poly
    Sv: object | None = None

    def exponents(self):
        p = self.k - 1
        return (self.r + self.n / 4.0 - self.k / 2.0,
                self.m + self.n / 4.0 - p / 2.0)


def eval_fibred(d: Fibred, cp: ChartPoint, order=24) -> EvalReport:
    ch = cp.chart
    if ch.kind != "ff_projective" or ch.j != d.k:
        raise EvalError("fibred evaluation requires the ff_projective_k chart")
    rho, sigma = cp.coords[0], cp.coords[1]
    if rho <= 0 or sigma <= 0:
        raise EvalError("interior chart point required")
    e_rho, e_sigma = d.exponents()
    pref = rho**e_rho * sigma**e_sigma
    rest = list(cp.coords)
    if d.k == 1:
        phase = float(np.real(d.phitilde(*rest)))
        a = complex(d.amp(*rest))
        return EvalReport(pref * np.exp(1j * phase / sigma) * a, 0.0, "closed_form")
    # k = 2: one-dimensional v-integral
    Rv = d.Sv.support_radius(1e-18)
    wmax = max(abs(c) for c in cp.coords) + 1.0

    def run(scale):
        npan = oscillation_panels(
            -Rv, Rv, wmax / sigma, per_period=10 * scale, order=order
        )
        vn, vw = gl_nodes(-Rv, Rv, npan, order)
        phase = np.real(d.phitilde(*rest, vn))
        a = d.amp(*rest, vn) * d.Sv(vn)
        return np.sum(np.exp(1j * phase / sigma) * a * vw)

    v1, v2 = run(1), run(2)
    return EvalReport(pref * v2, abs(pref) * abs(v2 - v1), "direct_quadrature")
