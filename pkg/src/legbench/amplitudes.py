"""Schwartz amplitude algebra and the canonical smooth cutoff.

The core family is finite sums of modulated Hermite-Gaussian terms

    coeff * H_k((w - center)/width) * exp(-((w - center)/width)^2) * e^{i freq w}

which is closed under the Fourier transform.  Convention used throughout the
package: forward transform  F[a](Z) = int e^{i zeta Z} a(zeta) d zeta  (no 2*pi
on the forward side), so F[F[a]](w) = 2*pi*a(-w).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite as nph

from .quadrature import cumulative_from_minus_inf, gl_nodes

SQRT_PI = np.sqrt(np.pi)


@dataclass(frozen=True)
class HermiteTerm:
    coeff: complex
    hermite: int = 0
    center: float = 0.0
    width: float = 1.0
    freq: float = 0.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be positive")
        if self.hermite < 0:
            raise ValueError("hermite index must be >= 0")


class HermiteGaussianSum:
    """Finite sum of modulated Hermite-Gaussian terms; immutable."""

    def __init__(self, terms):
        self.terms = tuple(
            t if isinstance(t, HermiteTerm) else HermiteTerm(*t) for t in terms
        )

    @classmethod
    def gaussian(cls, coeff=1.0, center=0.0, width=1.0, freq=0.0):
        return cls([HermiteTerm(coeff, 0, center, width, freq)])

    @classmethod
    def zero(cls):
        return cls([])

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros(z.shape, dtype=complex)
        for t in self.terms:
            u = (z - t.center) / t.width
            hcoef = [0.0] * t.hermite + [1.0]
            out += t.coeff * nph.hermval(u, hcoef) * np.exp(-(u**2)) * np.exp(
                1j * t.freq * z
            )
        return out

    # ------------------------------------------------------------------
    def fourier_transform(self):
        """Closed-form transform, again a HermiteGaussianSum.

        For a single term with parameters (c, s, k, omega):
        F(Z) = s*sqrt(pi)*i^k*e^{i c omega} * e^{i c Z} * 2^k u^k e^{-u^2},
        u = (Z + omega) / (2/s).
        """
        new_terms = []
        for t in self.terms:
            s, c, k, w = t.width, t.center, t.hermite, t.freq
            pref = t.coeff * s * SQRT_PI * (1j**k) * np.exp(1j * c * w) * 2**k
            # expand u^k in physicists' Hermite polynomials
            hcoefs = nph.poly2herm([0.0] * k + [1.0])
            for j, hj in enumerate(hcoefs):
                if hj == 0:
                    continue
                new_terms.append(
                    HermiteTerm(pref * hj, j, center=-w, width=2.0 / s, freq=c)
                )
        return HermiteGaussianSum(new_terms)

    def reflect(self):
        """The amplitude z -> a(-z)."""
        return HermiteGaussianSum(
            [
                HermiteTerm(
                    t.coeff * (-1.0) ** t.hermite,
                    t.hermite,
                    center=-t.center,
                    width=t.width,
                    freq=-t.freq,
                )
                for t in self.terms
            ]
        )

    def scaled(self, factor):
        return HermiteGaussianSum(
            [
                HermiteTerm(t.coeff * factor, t.hermite, t.center, t.width, t.freq)
                for t in self.terms
            ]
        )

    def __add__(self, other):
        return HermiteGaussianSum(self.terms + other.terms)

    def integral_over_line(self):
        """Exact int_R a(z) dz = F[a](0)."""
        return complex(self.fourier_transform()(0.0))

    def support_radius(self, eps=1e-16):
        """Radius outside which every term is below eps (conservative)."""
        if not self.terms:
            return 1.0
        r = 1.0
        for t in self.terms:
            amp = max(abs(t.coeff), 1.0)
            tail = np.sqrt(max(np.log(amp / eps), 1.0)) + 1.5 + t.hermite
            r = max(r, abs(t.center) + t.width * tail)
        return r

    def integrate_to(self, z_values, eps=1e-20):
        """int_{-inf}^{z} a, vectorized over z (panel quadrature)."""
        return cumulative_from_minus_inf(self, self.support_radius(eps), z_values)


# ----------------------------------------------------------------------
# canonical smooth step
def _bump_h(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    pos = t > 0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / t[pos])
    return out


def alpha(t):
    """Smooth step: 0 for t <= 0, 1 for t >= 1, monotone in between.

    alpha(t) = h(t) / (h(t) + h(1-t)) with h(t) = exp(-1/t) for t > 0.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    h0 = _bump_h(t)
    h1 = _bump_h(1.0 - t)
    out = np.zeros(t.shape)
    mid = (t > 0) & (t < 1)
    out[mid] = h0[mid] / (h0[mid] + h1[mid])
    out[t >= 1] = 1.0
    return float(out[0]) if scalar else out


def alpha_prime(t):
    """Derivative of alpha; a smooth bump supported in [0, 1], integral 1."""
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros(t.shape)
    mid = (t > 0) & (t < 1)
    tm = t[mid]
    h0 = np.exp(-1.0 / tm)
    h1 = np.exp(-1.0 / (1.0 - tm))
    d0 = h0 / tm**2
    d1 = h1 / (1.0 - tm) ** 2
    out[mid] = (d0 * h1 + h0 * d1) / (h0 + h1) ** 2
    return float(out[0]) if scalar else out


class CutoffPrime:
    """The bump alpha'(Z) as a Schwartz-function object; exact transform of
    the converse-synthesis amplitude.  Its cumulative integral is alpha."""

    def __call__(self, z):
        return alpha_prime(np.asarray(z, dtype=float)) + 0.0j

    def support_radius(self, eps=1e-16):
        return 1.5

    def integrate_to(self, z_values, eps=1e-20):
        return alpha(np.asarray(z_values, dtype=float)) + 0.0j


class CutoffTransformAmplitude:
    """(1/2pi) int e^{-i zeta t} alpha'(t) dt; Schwartz but not Hermite-Gaussian.

    Its forward e^{+i zeta Z} transform is exactly alpha'(Z), which makes the
    converse synthesis of the structure theorem reproduce alpha(Z) on the nose.
    """

    def __init__(self, quad_order=32, quad_panels=48):
        self._nodes, self._weights = gl_nodes(0.0, 1.0, quad_panels, quad_order)
        self._fvals = alpha_prime(self._nodes)

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        phase = np.exp(-1j * np.multiply.outer(zeta, self._nodes))
        return phase @ (self._weights * self._fvals) / (2.0 * np.pi)

    def fourier_transform(self):
        return CutoffPrime()

    def support_radius(self, eps=1e-16):
        # |hat(alpha')| decays roughly like exp(-c sqrt|zeta|); generous bound
        return max(50.0, np.log(1.0 / eps) ** 2 / 2.0)


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class DecayFit:
    order: int
    sup_bound: float
    growth_exponent: float
    passes: bool


def schwartz_decay_report(f, n_max, window=(2.0, 14.0), n_samples=12, slope_tol=0.2):
    """Fit tail growth exponents of |Z|^N |f(Z)| for N = 0..n_max.

    The base exponent p is the fitted slope of log|f| against log|Z| over a
    geometric tail grid on each side of the origin (worst side taken); the
    reported growth exponent for order N is p + N, and the order passes when
    that is <= slope_tol.  Values within a relative factor 1e-12 of the window
    peak are below the numerical noise floor and count as already decayed.
    """
    lo, hi = window
    grid = np.geomspace(lo, hi, n_samples)
    both = np.abs(np.asarray(f(np.concatenate([grid, -grid])), dtype=complex))
    floor = max(float(np.max(both)) * 1e-12, 1e-250)
    slopes = []
    for side in (+1.0, -1.0):
        z = side * grid
        vals = np.abs(np.asarray(f(z), dtype=complex))
        mask = vals > floor
        if mask.sum() < 3:
            continue  # negligible on this side at the measurable precision
        logz = np.log(grid[mask])
        logf = np.log(vals[mask])
        # weight the outer half of the window to capture tail behavior
        half = len(logz) // 2
        slope = np.polyfit(logz[half:], logf[half:], 1)[0] if len(logz) - half >= 3 \
            else np.polyfit(logz, logf, 1)[0]
        slopes.append(slope)
    base = max(slopes) if slopes else -np.inf
    report = []
    zboth = np.concatenate([grid, -grid])
    vals = np.abs(np.asarray(f(zboth), dtype=complex))
    for n in range(n_max + 1):
        sup = float(np.max(np.abs(zboth) ** n * vals))
        g = base + n
        report.append(DecayFit(n, sup, g, bool(g <= slope_tol)))
    return report
