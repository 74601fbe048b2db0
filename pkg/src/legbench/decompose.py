"""Constructive decomposition of intersecting distributions and its converse.

Forward direction: an intersecting instance with a ybar-frozen amplitude is
rewritten, exactly, as

    u(x, y) = x^{m+1/2} [ alpha(y/x) * f(x, y) + g(x, y/x) ],

with f(x, y) = int_R a-hat(x, y, Z') dZ' (closed form, polynomial in (x, y))
and g the cumulative integral of b = a-hat - f * alpha', which is Schwartz in
Z by the choice of f.  The converse synthesizes alpha(y/x) * f back into the
oscillatory-integral form using the transform of alpha'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import (
    CutoffTransformAmplitude,
    HermiteGaussianSum,
    HermiteTerm,
    alpha,
    schwartz_decay_report,
)
from .evaluate import (
    EvalReport,
    Intersecting,
    Type2,
    eval_type2,
    eval_type2_synthesis,
)
from .poly import Poly

XYB = ("x", "y", "ybar")


class DecomposeError(RuntimeError):
    pass


def _derivative(s: HermiteGaussianSum) -> HermiteGaussianSum:
    """Exact d/dz of a Hermite-Gaussian sum (stays in the family)."""
    out = []
    for t in s.terms:
        out.append(
            HermiteTerm(-t.coeff / t.width, t.hermite + 1, t.center, t.width, t.freq)
        )
        if t.freq != 0.0:
            out.append(
                HermiteTerm(1j * t.freq * t.coeff, t.hermite, t.center, t.width, t.freq)
            )
    return HermiteGaussianSum(out)


def _split_u_powers(p: Poly):
    """Rewrite P(x, y, ybar) as sum_r Q_r(x, y) * (y - ybar)^r.

    Returns {r: Poly in (x, y)}.  Uses the substitution ybar = y - u and
    collects powers of u.
    """
    from math import comb

    out = {}
    for (ex, ey, eb), c in p.coeffs.items():
        # ybar^eb = (y - u)^eb
        for r in range(eb + 1):
            coef = c * comb(eb, r) * (-1.0) ** r
            key = (ex, ey + (eb - r))
            out.setdefault(r, {})[key] = out.get(r, {}).get(key, 0) + coef
    return {
        r: Poly(("x", "y"), coeffs) for r, coeffs in out.items()
    }


def reduce_ybar_dependence(d: Intersecting, order_n=4):
    """Freeze the ybar dependence of the amplitude by iterated integration by
    parts: each factor (y - ybar) becomes i*x*(d/d zeta) on the Schwartz
    factor (exact for polynomial ybar dependence).

    Returns (frozen, tail, bound_coeff): `frozen` collects the reductions of
    the (y - ybar)-orders r <= order_n; `tail` the exactly reduced orders
    r > order_n (each carrying x^r); bound_coeff * x^{order_n+1} bounds the
    tail amplitude's sup over |x| <= 1 by construction.
    """
    frozen_terms = []
    tail_terms = []
    bound = 0.0
    for p, s in d.terms:
        if not isinstance(s, HermiteGaussianSum):
            raise DecomposeError("ybar reduction needs Hermite-Gaussian factors")
        for r, q in _split_u_powers(p).items():
            if q.is_zero():
                continue
            s_red = s
            for _ in range(r):
                s_red = _derivative(s_red)
            xr = Poly(("x", "y"), {(r, 0): (1j) ** r})
            q_big = (q * xr).embed(XYB)
            if r <= order_n:
                frozen_terms.append((q_big, s_red))
            else:
                tail_terms.append((q_big, s_red))
                sup_q = sum(abs(c) for c in q.coeffs.values())
                zgrid = np.linspace(-s.support_radius(), s.support_radius(), 801)
                bound += sup_q * np.trapezoid(np.abs(s_red(zgrid)), zgrid)
    frozen = Intersecting(m=d.m, terms=tuple(frozen_terms))
    tail = Intersecting(m=d.m, terms=tuple(tail_terms)) if tail_terms else None
    return frozen, tail, bound


# ----------------------------------------------------------------------
@dataclass
class Decomposition:
    """u = x^{m+1/2} [alpha(y/x) f(x,y) + g(x, y/x)]; f closed form."""

    m: float
    f: Poly  # in (x, y)
    g_parts: tuple  # of (Poly in (x, y), transform object, line integral)
    diagnostics: dict

    def g(self, x, Z):
        """The Schwartz remainder profile; exact panel quadrature per part."""
        Z = np.asarray(Z, dtype=float)
        total = np.zeros(np.broadcast(np.asarray(x), Z).shape, dtype=complex)
        for p, ft, line in self.g_parts:
            cum = ft.integrate_to(np.atleast_1d(Z)).reshape(Z.shape)
            total = total + np.asarray(p(x, x * Z)) * (cum - line * alpha(Z))
        return total

    def reconstruct(self, x, y):
        Z = np.asarray(y) / np.asarray(x)
        val = alpha(Z) * self.f(x, y) + self.g(x, Z)
        return np.asarray(x) ** (self.m + 0.5) * val

    def g_decay_report(self, x, n_max=6, window=(2.0, 14.0)):
        return schwartz_decay_report(lambda Z: self.g(x, Z), n_max, window)


def decompose_forward(d: Intersecting) -> Decomposition:
    """Split a ybar-frozen intersecting instance into the cutoff and Schwartz
    parts; f is chosen pointwise as the full line integral of a-hat, which
    makes the remainder's line integral vanish identically."""
    if not d.ybar_free():
        raise DecomposeError(
            "decompose_forward requires a ybar-frozen amplitude; "
            "run reduce_ybar_dependence first"
        )
    f = Poly.zero(("x", "y"))
    g_parts = []
    cancel = []
    for p, s in d.terms:
        ft = s.fourier_transform()
        line = 2.0 * np.pi * complex(s(0.0))  # int_R s-hat = 2 pi s(0)
        pxy = Poly(
            ("x", "y"),
            {(ex, ey): c for (ex, ey, eb), c in p.coeffs.items()},
        )
        f = f + pxy * line
        g_parts.append((pxy, ft, line))
        # b-cancellation residual: quadrature of s-hat over the line vs 2 pi s(0)
        R = ft.support_radius(1e-20)
        cancel.append(abs(complex(ft.integrate_to(np.array([R]))[0]) - line))
    diag = {"b_cancellation_residuals": cancel}
    return Decomposition(m=d.m, f=f, g_parts=tuple(g_parts), diagnostics=diag)


def decompose_converse(f: Poly, m: float) -> Intersecting:
    """Synthesize x^{m+1/2} alpha(y/x) f(x, y) as an intersecting instance.

    The amplitude is f(x, y) * (transform of alpha'), whose own transform is
    exactly alpha', so the reduced evaluation reproduces alpha(y/x) f(x, y).
    """
    if f.vars != ("x", "y"):
        raise DecomposeError("f must be a polynomial in (x, y)")
    return Intersecting(
        m=m, terms=((f.embed(XYB), CutoffTransformAmplitude()),)
    )


def type2_roundtrip(V: HermiteGaussianSum, m: float, grid=None):
    """Synthesize-then-evaluate consistency for the conormal-type class.

    Returns (Type2 instance, max residual of |synthesis - direct| / x^q over
    the grid of (x, y) points).
    """
    d = Type2(m=m, n=2, k=1, profile=V)
    if grid is None:
        xs = 0.3 * 0.5 ** np.arange(5)
        Zs = np.array([-3.0, -1.0, 0.0, 0.5, 2.0])
        grid = [(x, x * Z) for x in xs for Z in Zs]
    worst = 0.0
    for x, y in grid:
        direct = eval_type2(d, x, [y]).value
        synth = eval_type2_synthesis(d, x, [y]).value
        worst = max(worst, abs(direct - synth) / x**d.q)
    return d, worst
