"""Truncated real Fourier series fields.

Warp functions, base metric entries, and initial graphs are all finite
trigonometric series, so every background derivative the geometry needs is
exact term by term. Discretization error then enters only through the curve
operators, never through the background data.
"""

from __future__ import annotations

import numpy as np
from scipy.special import iv

__all__ = ["FourierField", "FourierField2D"]

TWO_PI = 2.0 * np.pi


class FourierField:
    """f(x) = sum_k cos_coef[k] cos(k x) + sin_coef[k] sin(k x) on S^1."""

    dim = 1

    def __init__(self, cos_coef, sin_coef=None):
        cos_coef = np.atleast_1d(np.asarray(cos_coef, dtype=float))
        if sin_coef is None:
            sin_coef = np.zeros_like(cos_coef)
        sin_coef = np.atleast_1d(np.asarray(sin_coef, dtype=float))
        if cos_coef.ndim != 1 or sin_coef.ndim != 1:
            raise ValueError("coefficient arrays must be one dimensional")
        n = max(cos_coef.size, sin_coef.size, 1)
        self.cos_coef = np.zeros(n)
        self.cos_coef[: cos_coef.size] = cos_coef
        self.sin_coef = np.zeros(n)
        self.sin_coef[: sin_coef.size] = sin_coef
        self.sin_coef[0] = 0.0  # sin(0 x) carries nothing
        self._k = np.arange(n, dtype=float)
        self._has_sin = bool(np.any(self.sin_coef))
        self._dcos = self._k * self.sin_coef   # derivative coefficients
        self._dsin = self._k * self.cos_coef
        self._ndsin = -self._dsin
        self._deriv = None

    @classmethod
    def constant(cls, value: float) -> "FourierField":
        return cls([float(value)])

    @classmethod
    def exp_cos(cls, a: float, tol: float = 1e-16) -> "FourierField":
        """Expansion of exp(a cos x) through modified Bessel functions:
        exp(a cos x) = I_0(a) + 2 sum_{k>=1} I_k(a) cos(k x), truncated once
        the next coefficient falls below tol."""
        a = float(a)
        k = 1
        while 2.0 * abs(iv(k + 1, a)) >= tol and k < 128:
            k += 1
        coef = np.zeros(k + 1)
        coef[0] = iv(0, a)
        coef[1:] = 2.0 * iv(np.arange(1, k + 1), a)
        return cls(coef)

    @property
    def degree(self) -> int:
        """Highest wavenumber stored."""
        return self._k.size - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        kx = np.multiply.outer(x, self._k)
        out = np.cos(kx) @ self.cos_coef
        if self._has_sin:
            out = out + np.sin(kx) @ self.sin_coef
        return out

    def values(self, pts):
        """Evaluate at points of shape (..., 1) or plain angle arrays."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim and pts.shape[-1] == 1:
            pts = pts[..., 0]
        return self(pts)

    def values_with_derivative(self, x):
        """(f(x), f'(x)) sharing one trigonometric table."""
        x = np.asarray(x, dtype=float)
        if self._k.size == 1:
            return (np.full(x.shape, self.cos_coef[0]),
                    np.zeros(x.shape))
        kx = x[..., None] * self._k
        if not self._has_sin:
            # pure cosine series: the value needs only the cosine table and
            # the derivative only the sine table
            return np.cos(kx) @ self.cos_coef, np.sin(kx) @ self._ndsin
        c = np.cos(kx)
        s = np.sin(kx)
        val = c @ self.cos_coef + s @ self.sin_coef
        dval = c @ self._dcos - s @ self._dsin
        return val, dval

    def derivative(self, axis: int = 0) -> "FourierField":
        """Exact term-wise derivative, cached."""
        if axis != 0:
            raise ValueError("one dimensional field has only axis 0")
        if self._deriv is None:
            self._deriv = FourierField(self._k * self.sin_coef,
                                       -self._k * self.cos_coef)
        return self._deriv

    def grid_values(self, n: int = 4096) -> np.ndarray:
        return self(np.linspace(0.0, TWO_PI, n, endpoint=False))

    def min_on_grid(self, n: int = 4096) -> float:
        return float(self.grid_values(n).min())

    def max_on_grid(self, n: int = 4096) -> float:
        return float(self.grid_values(n).max())

    def __repr__(self) -> str:
        return f"FourierField(degree={self.degree})"


class FourierField2D:
    """f(x, y) on the 2-torus as a double cosine/sine series:

        sum_{j,k} cc[j,k] cos(jx)cos(ky) + cs[j,k] cos(jx)sin(ky)
                + sc[j,k] sin(jx)cos(ky) + ss[j,k] sin(jx)sin(ky)
    """

    dim = 2

    def __init__(self, cc, cs=None, sc=None, ss=None):
        cc = np.atleast_2d(np.asarray(cc, dtype=float))
        shape = cc.shape

        def block(m):
            if m is None:
                return np.zeros(shape)
            m = np.atleast_2d(np.asarray(m, dtype=float))
            if m.shape != shape:
                raise ValueError("coefficient blocks must share one shape")
            return m.copy()

        self.cc = cc.copy()
        self.cs = block(cs)
        self.sc = block(sc)
        self.ss = block(ss)
        # zero-wavenumber rows and columns cannot carry sine terms
        self.cs[:, 0] = 0.0
        self.sc[0, :] = 0.0
        self.ss[0, :] = 0.0
        self.ss[:, 0] = 0.0
        self._j = np.arange(shape[0], dtype=float)
        self._kk = np.arange(shape[1], dtype=float)
        self._derivs: dict[int, "FourierField2D"] = {}

    @classmethod
    def constant(cls, value: float) -> "FourierField2D":
        return cls([[float(value)]])

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        x = pts[..., 0]
        y = pts[..., 1]
        jx = np.multiply.outer(x, self._j)
        ky = np.multiply.outer(y, self._kk)
        cj, sj = np.cos(jx), np.sin(jx)
        ck, sk = np.cos(ky), np.sin(ky)
        out = np.einsum("...j,jk,...k->...", cj, self.cc, ck)
        out = out + np.einsum("...j,jk,...k->...", cj, self.cs, sk)
        out = out + np.einsum("...j,jk,...k->...", sj, self.sc, ck)
        out = out + np.einsum("...j,jk,...k->...", sj, self.ss, sk)
        return out

    def values(self, pts):
        return self(pts)

    def derivative(self, axis: int = 0) -> "FourierField2D":
        """Exact partial derivative along torus axis 0 or 1, cached."""
        if axis not in (0, 1):
            raise ValueError("axis must be 0 or 1")
        if axis not in self._derivs:
            j = self._j[:, None]
            k = self._kk[None, :]
            if axis == 0:
                d = FourierField2D(j * self.sc, j * self.ss,
                                   -j * self.cc, -j * self.cs)
            else:
                d = FourierField2D(k * self.cs, -k * self.cc,
                                   k * self.ss, -k * self.sc)
            self._derivs[axis] = d
        return self._derivs[axis]

    def grid_values(self, n: int = 4096) -> np.ndarray:
        side = max(int(round(np.sqrt(n))), 1)
        g = np.linspace(0.0, TWO_PI, side, endpoint=False)
        pts = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1)
        return self(pts)

    def min_on_grid(self, n: int = 4096) -> float:
        return float(self.grid_values(n).min())

    def max_on_grid(self, n: int = 4096) -> float:
        return float(self.grid_values(n).max())

    def __repr__(self) -> str:
        return f"FourierField2D(degrees=({self._j.size - 1}, {self._kk.size - 1}))"
