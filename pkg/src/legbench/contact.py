"""Linear contact/symplectic algebra in the flat coordinate model (y, tau, mu).

The ambient space at a point is the (2n-1)-dimensional tangent space with
coordinates (dy, dtau, dmu); the contact form is chi = dtau + mu . dy and
d chi = sum_i dmu_i ^ dy_i.  Primed coordinates are y_1..y_k.  All values are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_RANK_TOL = 1e-10


class ContactError(ValueError):
    """Raised when a geometric precondition fails."""


@dataclass(frozen=True)
class ContactPoint:
    y: np.ndarray
    tau: float
    mu: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=float)))
        object.__setattr__(self, "mu", np.atleast_1d(np.asarray(self.mu, dtype=float)))
        if self.y.shape != self.mu.shape:
            raise ContactError("y and mu must have the same dimension")

    @property
    def dim_y(self):
        return len(self.y)


@dataclass(frozen=True)
class TangentVector:
    dy: np.ndarray
    dtau: float
    dmu: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dy", np.atleast_1d(np.asarray(self.dy, dtype=float)))
        object.__setattr__(self, "dmu", np.atleast_1d(np.asarray(self.dmu, dtype=float)))
        if self.dy.shape != self.dmu.shape:
            raise ContactError("dy and dmu must have the same dimension")

    def as_array(self):
        return np.concatenate([self.dy, [self.dtau], self.dmu])

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=float)
        m = (len(a) - 1) // 2
        return cls(a[:m], float(a[m]), a[m + 1 :])


def _unit(ny, kind, i):
    """Basis tangent vector; kind in {'dy', 'dtau', 'dmu'}."""
    dy = np.zeros(ny)
    dmu = np.zeros(ny)
    dtau = 0.0
    if kind == "dy":
        dy[i] = 1.0
    elif kind == "dmu":
        dmu[i] = 1.0
    elif kind == "dtau":
        dtau = 1.0
    else:
        raise ValueError(kind)
    return TangentVector(dy, dtau, dmu)


unit_vector = _unit


@dataclass(frozen=True)
class SplittingData:
    k: int
    n: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise ContactError("need 1 <= k <= n-1")


class TangentSubspace:
    """Linear subspace of the tangent space at a contact point.

    The basis is orthonormalized on construction (SVD); linear dependence at
    the rank tolerance is rejected.
    """

    def __init__(self, base: ContactPoint, basis, rank_tol=DEFAULT_RANK_TOL):
        self.base = base
        vectors = [
            v.as_array() if isinstance(v, TangentVector) else np.asarray(v, float)
            for v in basis
        ]
        ny = base.dim_y
        self.ambient_dim = 2 * ny + 1
        if not vectors:
            self.matrix = np.zeros((0, self.ambient_dim))
            return
        raw = np.vstack(vectors)
        if raw.shape[1] != self.ambient_dim:
            raise ContactError("tangent vectors do not match base point dimension")
        u, s, vt = np.linalg.svd(raw, full_matrices=False)
        if s[0] == 0 or s[-1] <= rank_tol * s[0]:
            raise ContactError("basis vectors are numerically linearly dependent")
        self.matrix = vt[: len(vectors)]

    @property
    def dim(self):
        return self.matrix.shape[0]

    def vectors(self):
        return [TangentVector.from_array(row) for row in self.matrix]

    def projector(self):
        return self.matrix.T @ self.matrix

    def contains(self, v: TangentVector, tol=1e-8):
        a = v.as_array()
        return np.linalg.norm(a - self.projector() @ a) <= tol * max(
            1.0, np.linalg.norm(a)
        )


# ----------------------------------------------------------------------
def contact_eval(q: ContactPoint, v: TangentVector) -> float:
    """chi(v) = dtau + mu . dy at the point q."""
    if q.dim_y != len(v.dy):
        raise ContactError("dimension mismatch")
    return float(v.dtau + np.dot(q.mu, v.dy))


def dchi_pairing(v: TangentVector, w: TangentVector) -> float:
    """d chi(v, w) = sum_i (dmu_i(v) dy_i(w) - dy_i(v) dmu_i(w))."""
    if len(v.dy) != len(w.dy):
        raise ContactError("dimension mismatch")
    return float(np.dot(v.dmu, w.dy) - np.dot(v.dy, w.dmu))


def is_legendre_subspace(V: TangentSubspace, tol=1e-8) -> bool:
    """True iff dim V = n-1 and chi, d chi vanish on V at the tolerance."""
    ny = V.base.dim_y
    if V.dim != ny:
        return False
    vecs = V.vectors()
    for i, b in enumerate(vecs):
        if abs(contact_eval(V.base, b)) > tol:
            return False
        for b2 in vecs[i + 1 :]:
            if abs(dchi_pairing(b, b2)) > tol:
                return False
    return True


def _chi_row(q: ContactPoint):
    ny = q.dim_y
    row = np.zeros(2 * ny + 1)
    row[:ny] = q.mu
    row[ny] = 1.0
    return row


def _dchi_row(w: TangentVector):
    ny = len(w.dy)
    row = np.zeros(2 * ny + 1)
    row[:ny] = -w.dmu
    row[ny + 1 :] = w.dy
    return row


def annihilator_in_ker(W: TangentSubspace, rank_tol=DEFAULT_RANK_TOL) -> TangentSubspace:
    """W' = {v : chi(v) = 0, d chi(v, w) = 0 for all w in W}.

    Requires W isotropic inside ker chi; dim W' = (2n-2) - dim W and W <= W'.
    """
    q = W.base
    for i, b in enumerate(W.vectors()):
        if abs(contact_eval(q, b)) > 1e-8:
            raise ContactError("W is not contained in ker chi")
        for b2 in W.vectors()[i + 1 :]:
            if abs(dchi_pairing(b, b2)) > 1e-8:
                raise ContactError("W is not isotropic for d chi")
    rows = [_chi_row(q)] + [_dchi_row(w) for w in W.vectors()]
    A = np.vstack(rows)
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > rank_tol * s[0]))
    null = vt[rank:]
    return TangentSubspace(q, list(null))


def intersect(V1: TangentSubspace, V2: TangentSubspace, rank_tol=DEFAULT_RANK_TOL):
    """V1 cap V2 via the nullspace of stacked orthogonal-complement projectors."""
    d = V1.ambient_dim
    A = np.vstack([np.eye(d) - V1.projector(), np.eye(d) - V2.projector()])
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > max(rank_tol, 1e-8) * s[0]))
    null = vt[rank:]
    return TangentSubspace(V1.base, list(null)) if len(null) else TangentSubspace(
        V1.base, []
    )


def transversal_coordinate_index(
    V1: TangentSubspace,
    V2: TangentSubspace,
    split: SplittingData,
    tol=1e-8,
) -> int:
    """Index j in {1..k} such that dy_j does not vanish identically on V1.

    Preconditions: V1, V2 Legendre; W = V1 cap V2 of codimension 1 in each
    (or W = 0 in the n = 2 case); the dy'' differentials independent on W.
    The returned functional satisfies max_basis |dy_j| > tol; existence is
    what the clean-intersection geometry guarantees.
    """
    n, k = split.n, split.k
    ny = n - 1
    if V1.base.dim_y != ny:
        raise ContactError("splitting data inconsistent with point dimension")
    if not is_legendre_subspace(V1, 1e-6) or not is_legendre_subspace(V2, 1e-6):
        raise ContactError("V1 and V2 must both be Legendre subspaces")
    W = intersect(V1, V2)
    expected = ny - 1 if ny >= 1 else 0
    if W.dim != max(expected, 0):
        raise ContactError(
            f"clean codimension-1 intersection violated: dim W = {W.dim}, "
            f"expected {expected} (V1 = V2 or non-clean intersection)"
        )
    n_ypp = ny - k
    if n_ypp > 0 and W.dim > 0:
        # rows of dy'' evaluated on a basis of W must have rank n_ypp
        dypp = np.array([[w.dy[k + i] for w in W.vectors()] for i in range(n_ypp)])
        s = np.linalg.svd(dypp, compute_uv=False)
        if len(s) == 0 or s[0] == 0 or np.sum(s > 1e-8 * s[0]) < n_ypp:
            raise ContactError("dy'' differentials not independent on W")
    scores = np.array(
        [max(abs(v.dy[j]) for v in V1.vectors()) for j in range(k)]
    )
    j = int(np.argmax(scores))
    if scores[j] <= tol:
        raise ContactError(
            "no primed coordinate differential survives on V1; "
            "inputs contradict the clean-intersection geometry"
        )
    return j + 1
