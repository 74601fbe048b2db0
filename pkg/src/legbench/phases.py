"""Evaluable polynomial phase functions and induced Legendre samples.

A phase phi(y, v) parametrizes a Legendre submanifold through

    tau = -phi(y, v),  mu = d_y phi(y, v)   on the critical set d_v phi = 0,

subject to the rank condition that the differentials d(d phi / d v_i) are
linearly independent there.  Phases are multivariate polynomials, so all
gradients and Hessians are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contact import ContactPoint
from .poly import Poly


class PhaseError(ValueError):
    pass


def _yv_names(n_y, n_v, extra=()):
    return tuple(
        [f"y{i+1}" for i in range(n_y)] + [f"v{i+1}" for i in range(n_v)] + list(extra)
    )


class PhaseFunction:
    """Polynomial phase phi(y, v) with exact derivative maps."""

    def __init__(self, n_y: int, n_v: int, poly: Poly):
        if poly.vars != _yv_names(n_y, n_v):
            raise PhaseError(
                f"phase variables must be {_yv_names(n_y, n_v)}, got {poly.vars}"
            )
        self.n_y = n_y
        self.n_v = n_v
        self.poly = poly
        self._dy = [poly.diff(f"y{i+1}") for i in range(n_y)]
        self._dv = [poly.diff(f"v{i+1}") for i in range(n_v)]

    def _args(self, y, v):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float)) if self.n_v else np.zeros(0)
        if len(y) != self.n_y or len(v) != self.n_v:
            raise PhaseError("argument dimensions do not match the phase")
        return list(y) + list(v)

    def eval(self, y, v=()):
        return float(np.real(self.poly(*self._args(y, v))))

    def grad_y(self, y, v=()):
        a = self._args(y, v)
        return np.array([float(np.real(d(*a))) for d in self._dy])

    def grad_v(self, y, v=()):
        a = self._args(y, v)
        return np.array([float(np.real(d(*a))) for d in self._dv])

    def hess_mixed(self, y, v=()):
        """Rows d(d phi/d v_i) as gradients over the full (y, v) space."""
        a = self._args(y, v)
        names = _yv_names(self.n_y, self.n_v)
        return np.array(
            [[float(np.real(d.diff(nm)(*a))) for nm in names] for d in self._dv]
        )

    def hess_vv(self, y, v=()):
        a = self._args(y, v)
        return np.array(
            [
                [float(np.real(d.diff(f"v{j+1}")(*a))) for j in range(self.n_v)]
                for d in self._dv
            ]
        )


class IntersectingPhase(PhaseFunction):
    """Phase phi(y, v, s) with a distinguished half-line parameter s >= 0,
    stored as the last parameter variable."""

    def __init__(self, n_y: int, n_v: int, poly: Poly):
        # n_v counts the ordinary parameters; s is appended after them
        super().__init__(n_y, n_v + 1, poly)
        self.n_params = n_v

    def restrict_s0(self) -> PhaseFunction:
        """The phase phi(y, v, 0), itself a valid phase in (y, v)."""
        small = _yv_names(self.n_y, self.n_params)
        coeffs = {}
        for expo, c in self.poly.coeffs.items():
            if expo[-1] != 0:
                continue
            coeffs[expo[:-1]] = coeffs.get(expo[:-1], 0) + c
        return PhaseFunction(self.n_y, self.n_params, Poly(small, coeffs))


# ----------------------------------------------------------------------
def nondegeneracy_check(phi: PhaseFunction, y, v=(), tol=1e-8) -> bool:
    """Rank condition at a critical point: the rows d(d phi/d v_i) over the
    full (y, v) space must have rank p."""
    res = phi.grad_v(y, v)
    if res.size and np.max(np.abs(res)) > max(tol, 1e-8):
        raise PhaseError(
            f"point is not on the critical set: |d_v phi| = {np.max(np.abs(res)):.3g}"
        )
    if phi.n_v == 0:
        return True
    rows = phi.hess_mixed(y, v)
    s = np.linalg.svd(rows, compute_uv=False)
    return bool(s[0] > 0 and np.sum(s > 1e-10 * s[0]) == phi.n_v)


def intersecting_nondeg_check(psi: IntersectingPhase, y, params, tol=1e-8) -> bool:
    """Rank condition with the extra rows: d(d phi/d s) and ds itself."""
    rows = psi.hess_mixed(y, params)  # p+1 rows: the v_i and s derivatives
    ds = np.zeros(psi.n_y + psi.n_v)
    ds[-1] = 1.0
    stacked = np.vstack([rows, ds])
    s = np.linalg.svd(stacked, compute_uv=False)
    return bool(s[0] > 0 and np.sum(s > 1e-10 * s[0]) == psi.n_v + 1)


def newton_critical_point(phi: PhaseFunction, y, v0, tol=1e-12, max_iter=50):
    """Damped Newton for d_v phi(y, v) = 0; returns v or None."""
    v = np.atleast_1d(np.asarray(v0, dtype=float))
    for _ in range(max_iter):
        r = phi.grad_v(y, v)
        if np.max(np.abs(r)) <= tol:
            return v
        J = phi.hess_vv(y, v)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        base = np.linalg.norm(r)
        while lam > 1e-6:
            vn = v + lam * step
            if np.linalg.norm(phi.grad_v(y, vn)) < base:
                v = vn
                break
            lam *= 0.5
        else:
            return None
    return v if np.max(np.abs(phi.grad_v(y, v))) <= tol else None


def induced_legendrian_sample(phi: PhaseFunction, y_grid, v_seeds=((),), tol=1e-12):
    """Sample the induced Legendrian over a grid of boundary points.

    Returns (points, skipped) where points are ContactPoints satisfying
    tau = -phi, mu = d_y phi at Newton-converged critical points, and skipped
    counts nonconvergent seeds.
    """
    points = []
    skipped = 0
    for y in y_grid:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        found = []
        if phi.n_v == 0:
            found.append(np.zeros(0))
        else:
            for seed in v_seeds:
                v = newton_critical_point(phi, y, seed, tol=tol)
                if v is None:
                    skipped += 1
                    continue
                if not any(np.allclose(v, f, atol=1e-8) for f in found):
                    found.append(v)
        for v in found:
            points.append(
                ContactPoint(y=y, tau=-phi.eval(y, v), mu=phi.grad_y(y, v))
            )
    return points, skipped


# ----------------------------------------------------------------------
def graph_tangent_subspace(phi: PhaseFunction, y, v=()):
    """Tangent space of the induced Legendrian at a critical point where the
    projection to y is a diffeomorphism (hess_vv invertible).

    Uses the implicit-function derivative dv/dy = -hess_vv^{-1} d_y(d_v phi),
    so the basis is exact for polynomial phases.
    """
    from .contact import ContactPoint as CP
    from .contact import TangentSubspace, TangentVector

    y = np.atleast_1d(np.asarray(y, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float)) if phi.n_v else np.zeros(0)
    res = phi.grad_v(y, v)
    if res.size and np.max(np.abs(res)) > 1e-8:
        raise PhaseError("point is not on the critical set")
    args = list(y) + list(v)
    names = _yv_names(phi.n_y, phi.n_v)
    if phi.n_v:
        mixed = phi.hess_mixed(y, v)  # rows d(d phi/d v_i) over (y, v)
        A = mixed[:, : phi.n_y]
        B = mixed[:, phi.n_y :]
        try:
            dv_dy = -np.linalg.solve(B, A)
        except np.linalg.LinAlgError as e:
            raise PhaseError("hess_vv singular: Legendrian is not a graph") from e
    else:
        dv_dy = np.zeros((0, phi.n_y))
    # second derivatives of phi in y and mixed y,v for the mu push-forward
    d2 = np.array(
        [[float(np.real(dyi.diff(nm)(*args))) for nm in names] for dyi in phi._dy]
    )
    hyy = d2[:, : phi.n_y]
    hyv = d2[:, phi.n_y :]
    gy = phi.grad_y(y, v)
    basis = []
    for i in range(phi.n_y):
        dy = np.zeros(phi.n_y)
        dy[i] = 1.0
        dv = dv_dy[:, i]
        dtau = -float(gy[i])  # d_v phi = 0 on the critical set
        dmu = hyy[:, i] + hyv @ dv
        basis.append(TangentVector(dy, dtau, dmu))
    q = CP(y=y, tau=-phi.eval(y, v), mu=gy)
    return TangentSubspace(q, basis)


def conormal_tangent(q: "ContactPoint", k: int):
    """Tangent space of the model conormal {y'=0, tau=0, mu''=0} at q:
    span of the d mu' and d y'' directions."""
    from .contact import TangentSubspace, unit_vector

    ny = q.dim_y
    basis = [unit_vector(ny, "dmu", j) for j in range(k)]
    basis += [unit_vector(ny, "dy", i) for i in range(k, ny)]
    return TangentSubspace(q, basis)


def random_model_pair(rng, n, k, degree=2, scale=0.6):
    """Random Legendre pair (V1, V2) meeting cleanly at a corner point.

    V1 is the tangent space of the Legendrian induced by a random model phase,
    taken at a point of its boundary face, where it automatically meets the
    model conormal; V2 is the conormal tangent there.  Tangents of the
    explicit corner parametrization are computed by complex-step
    differentiation, so they are exact to machine precision.

    Returns (V1, V2, SplittingData, ContactPoint).
    """
    from .contact import ContactPoint as CP
    from .contact import SplittingData, TangentSubspace

    n_ypp = n - 1 - k
    small = tuple(
        ["yk"] + [f"w{i+1}" for i in range(n_ypp)] + [f"v{i+1}" for i in range(k - 1)]
    )

    def rand_poly():
        coeffs = {}
        nv = len(small)
        for _ in range(4):
            expo = tuple(int(e) for e in rng.integers(0, degree + 1, nv))
            if sum(expo) > degree:
                continue
            coeffs[expo] = coeffs.get(expo, 0.0) + scale * rng.uniform(-1, 1)
        coeffs.setdefault((0,) * nv, scale * rng.uniform(-1, 1))
        return Poly(small, coeffs)

    data = ModelPhaseData(n, k, rand_poly(), tuple(rand_poly() for _ in range(k - 1)))
    phi = build_model_phase(data)
    dy_polys = phi._dy
    dT_dv = [data.T.diff(f"v{j+1}") for j in range(k - 1)]
    dY_dv = [
        [data.Y[l].diff(f"v{j+1}") for l in range(k - 1)] for j in range(k - 1)
    ]

    base = np.concatenate(
        [[0.0], rng.uniform(-1, 1, n_ypp), rng.uniform(-1, 1, k - 1)]
    )

    def G(params):
        """(yk, y'', v) -> (y, tau, mu) on the induced Legendrian."""
        yk = params[0]
        ypp = params[1 : 1 + n_ypp]
        v = params[1 + n_ypp :]
        small_args = [yk] + list(ypp) + list(v)
        # solve the critical equations d phi / d v_j = 0 for y_j; every term
        # carries a factor yk, so the corner structure is preserved
        yprime = [
            yk
            * (
                data.Y[j](*small_args)
                + dT_dv[j](*small_args)
                + sum(v[l] * dY_dv[j][l](*small_args) for l in range(k - 1))
            )
            for j in range(k - 1)
        ] + [yk]
        args = yprime + list(ypp) + list(v)
        tau = -phi.poly(*args)
        mu = [d(*args) for d in dy_polys]
        return np.array(yprime + list(ypp) + [tau] + mu)

    q_arr = np.real(G(base.astype(complex)))
    ny = n - 1
    q = CP(y=q_arr[:ny], tau=float(q_arr[ny]), mu=q_arr[ny + 1 :])
    h = 1e-30
    cols = []
    for i in range(len(base)):
        p = base.astype(complex)
        p[i] += 1j * h
        cols.append(np.imag(G(p)) / h)
    V1 = TangentSubspace(q, cols)
    V2 = conormal_tangent(q, k)
    return V1, V2, SplittingData(k=k, n=n), q


@dataclass(frozen=True)
class ModelPhaseData:
    """Data (T, Y) for the model phases near a corner point.

    T and Y_j are polynomials in (yk, y''..., v...); the stored maps are the
    reduced ones, i.e. the phase uses T' = yk*T and Ytil_j = yk*Y_j, which
    builds in the required vanishing at yk = 0.
    """

    n: int
    k: int
    T: Poly
    Y: tuple

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise PhaseError("need 1 <= k <= n-1")
        if len(self.Y) != self.k - 1:
            raise PhaseError("Y must have k-1 components")
        names = self.small_vars()
        for p in (self.T, *self.Y):
            if p.vars != names:
                raise PhaseError(f"T and Y must use variables {names}")

    def small_vars(self):
        n_ypp = self.n - 1 - self.k
        return tuple(
            ["yk"]
            + [f"w{i+1}" for i in range(n_ypp)]
            + [f"v{i+1}" for i in range(self.k - 1)]
        )

    def tprime(self, big_vars):
        """y_k * T embedded into the full phase variable set."""
        ren = self._rename()
        return Poly.var(big_vars, f"y{self.k}") * self.T.embed(big_vars, ren)

    def ytil(self, big_vars, j):
        ren = self._rename()
        return Poly.var(big_vars, f"y{self.k}") * self.Y[j].embed(big_vars, ren)

    def _rename(self):
        n_ypp = self.n - 1 - self.k
        ren = {"yk": f"y{self.k}"}
        for i in range(n_ypp):
            ren[f"w{i+1}"] = f"y{self.k + 1 + i}"
        return ren


def build_model_phase(data: ModelPhaseData) -> PhaseFunction:
    """phi(y, v) = -yk*T + sum_j v_j (ytilde_j - yk*Y_j), with ytilde = y_1..y_{k-1}."""
    n_y, n_v = data.n - 1, data.k - 1
    big = _yv_names(n_y, n_v)
    phi = -data.tprime(big)
    for j in range(n_v):
        phi = phi + Poly.var(big, f"v{j+1}") * (
            Poly.var(big, f"y{j+1}") - data.ytil(big, j)
        )
    return PhaseFunction(n_y, n_v, phi)


def build_model_intersecting_phase(data: ModelPhaseData) -> IntersectingPhase:
    """psi(y, v, zeta, ybar) = phi(y, v) + zeta*(yk - ybar), with ybar >= 0 the
    half-line parameter (stored last) and zeta an ordinary parameter."""
    n_y = data.n - 1
    n_par = data.k - 1 + 1  # v's plus zeta
    big = _yv_names(n_y, n_par + 1)  # parameters: v1..v_{k-1}, zeta=v_k, ybar=v_{k+1}
    phi = -data.tprime(big)
    for j in range(data.k - 1):
        phi = phi + Poly.var(big, f"v{j+1}") * (
            Poly.var(big, f"y{j+1}") - data.ytil(big, j)
        )
    zeta = Poly.var(big, f"v{data.k}")
    ybar = Poly.var(big, f"v{data.k + 1}")
    psi = phi + zeta * (Poly.var(big, f"y{data.k}") - ybar)
    return IntersectingPhase(n_y, n_par, psi)
