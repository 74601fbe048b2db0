"""Sparse multivariate polynomials with exact differentiation.

Phases and smooth coefficient maps are restricted to polynomials so that
gradients and Hessians carry no differentiation error.  Coefficients may be
complex; evaluation is vectorized over numpy arrays.
"""

from __future__ import annotations

import numpy as np


class Poly:
    """Polynomial in named variables, stored as {exponent tuple: coefficient}."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, variables, coeffs=None):
        self.vars = tuple(variables)
        self.coeffs = {}
        if coeffs:
            nv = len(self.vars)
            for expo, c in coeffs.items():
                expo = tuple(int(e) for e in expo)
                if len(expo) != nv:
                    raise ValueError(
                        f"exponent tuple {expo} does not match variables {self.vars}"
                    )
                if c != 0:
                    self.coeffs[expo] = self.coeffs.get(expo, 0) + c

    # ------------------------------------------------------------------
    # constructors
    @classmethod
    def const(cls, variables, value):
        z = (0,) * len(variables)
        return cls(variables, {z: value} if value != 0 else {})

    @classmethod
    def var(cls, variables, name, power=1):
        variables = tuple(variables)
        i = variables.index(name)
        expo = tuple(power if j == i else 0 for j in range(len(variables)))
        return cls(variables, {expo: 1.0})

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    # ------------------------------------------------------------------
    def __call__(self, *args):
        """Evaluate; args are scalars or broadcastable arrays, one per variable."""
        if len(args) != len(self.vars):
            raise ValueError(f"expected {len(self.vars)} arguments, got {len(args)}")
        args = [np.asarray(a) for a in args]
        out = np.zeros(np.broadcast(*args).shape if args else (), dtype=complex)
        for expo, c in self.coeffs.items():
            term = np.ones_like(out)
            for a, e in zip(args, expo):
                if e:
                    term = term * a**e
            out = out + c * term
        return out

    def diff(self, name):
        i = self.vars.index(name)
        coeffs = {}
        for expo, c in self.coeffs.items():
            if expo[i] == 0:
                continue
            new = list(expo)
            new[i] -= 1
            key = tuple(new)
            coeffs[key] = coeffs.get(key, 0) + c * expo[i]
        return Poly(self.vars, coeffs)

    def embed(self, variables, rename=None):
        """Re-express in a larger variable set; rename maps old name -> new name."""
        rename = rename or {}
        variables = tuple(variables)
        index = {v: j for j, v in enumerate(variables)}
        coeffs = {}
        for expo, c in self.coeffs.items():
            new = [0] * len(variables)
            for v, e in zip(self.vars, expo):
                new[index[rename.get(v, v)]] += e
            key = tuple(new)
            coeffs[key] = coeffs.get(key, 0) + c
        return Poly(variables, coeffs)

    # ------------------------------------------------------------------
    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError("variable sets differ; use embed() first")
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        coeffs = dict(self.coeffs)
        for expo, c in other.coeffs.items():
            coeffs[expo] = coeffs.get(expo, 0) + c
        return Poly(self.vars, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.vars, {e: c * other for e, c in self.coeffs.items()})
        other = self._coerce(other)
        coeffs = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                coeffs[key] = coeffs.get(key, 0) + c1 * c2
        return Poly(self.vars, coeffs)

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coeffs.values())

    def degree(self):
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return f"Poly({self.vars}, 0)"
        parts = []
        for expo, c in sorted(self.coeffs.items()):
            mon = "*".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.vars, expo)
                if e
            )
            parts.append(f"{c}*{mon}" if mon else f"{c}")
        return f"Poly({' + '.join(parts)})"
