"""Functions on [0, 2*pi] as vectors in the sine/cosine basis.

A periodic function is a coordinate vector once a basis of harmonics is
fixed; the coordinates are recovered by quadrature against each basis
function.  Everything here is finite and sampled: coefficients come from a
composite trapezoid rule, reconstruction is a finite partial sum.

The square wave is normalized to amplitude pi/4 so that its sine
coordinates are exactly (1, 0, 1/3, 0, 1/5, ...), with all cosine
coordinates zero.  Discontinuity points take the midpoint value 0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatchError, NumericError

__all__ = [
    "DOMAIN",
    "SquareWave",
    "Sine",
    "Cosine",
    "Constant",
    "SampledFunction",
    "fourier_coeffs",
    "partial_sum",
]

DOMAIN = (0.0, 2.0 * math.pi)


class SquareWave:
    """+pi/4 on (0, pi), -pi/4 on (pi, 2*pi), 0 at the jumps."""

    amplitude = math.pi / 4.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = np.where(np.sin(x) > 0, self.amplitude,
                     np.where(np.sin(x) < 0, -self.amplitude, 0.0))
        return y if y.ndim else float(y)


class Sine:
    """sin(k x) for integer k >= 1."""

    def __init__(self, k: int):
        if k < 1:
            raise NumericError("harmonic order must be >= 1")
        self.k = int(k)

    def __call__(self, x):
        return np.sin(self.k * np.asarray(x, dtype=float))


class Cosine:
    """cos(k x) for integer k >= 0."""

    def __init__(self, k: int):
        if k < 0:
            raise NumericError("harmonic order must be >= 0")
        self.k = int(k)

    def __call__(self, x):
        return np.cos(self.k * np.asarray(x, dtype=float))


class Constant:
    def __init__(self, c: float):
        self.c = float(c)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, self.c) if x.ndim else self.c


class SampledFunction:
    """Function given by samples (x, y) on [0, 2*pi], evaluated by
    linear interpolation.  The x grid must be strictly increasing."""

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise DimensionMismatchError("samples need matching 1-D x and y arrays")
        if np.any(np.diff(xs) <= 0):
            raise NumericError("sample x values must be strictly increasing")
        if xs[0] < DOMAIN[0] - 1e-12 or xs[-1] > DOMAIN[1] + 1e-12:
            raise NumericError("sample domain must lie within [0, 2*pi]")
        self.xs = xs
        self.ys = ys

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys)


def _trapezoid(values: np.ndarray, h: float) -> float:
    return float(h * (values[0] / 2.0 + values[1:-1].sum() + values[-1] / 2.0))


def fourier_coeffs(f, harmonics: int, quad_points: int = 2 ** 14
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Sine and cosine coordinates of ``f`` up to order ``harmonics``.

    Returns ``(a, b)`` where ``a[k-1] = (1/pi) * integral f(x) sin(kx) dx``
    for k = 1..harmonics, ``b[k] = (1/pi) * integral f(x) cos(kx) dx`` for
    k >= 1, and ``b[0]`` is the mean of ``f``.  Integrals use the composite
    trapezoid rule with ``quad_points`` panels (>= 64).
    """
    if harmonics < 1:
        raise NumericError("need at least one harmonic")
    if quad_points < 64:
        raise NumericError("quad_points must be >= 64")
    xs = np.linspace(DOMAIN[0], DOMAIN[1], quad_points + 1)
    h = (DOMAIN[1] - DOMAIN[0]) / quad_points
    fx = np.asarray(f(xs), dtype=float)
    if fx.shape != xs.shape:
        raise DimensionMismatchError("function must evaluate pointwise on the grid")
    a = np.empty(harmonics)
    b = np.empty(harmonics + 1)
    b[0] = _trapezoid(fx, h) / (2.0 * math.pi)
    for k in range(1, harmonics + 1):
        a[k - 1] = _trapezoid(fx * np.sin(k * xs), h) / math.pi
        b[k] = _trapezoid(fx * np.cos(k * xs), h) / math.pi
    return a, b


def partial_sum(a, b, x):
    """Evaluate ``sum_k a_k sin(kx) + sum_k b_k cos(kx)`` at ``x``.

    ``a`` indexes k = 1.. and ``b`` indexes k = 0.. (its first entry is the
    constant term); ``x`` may be a scalar or an array.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for k, ak in enumerate(a, start=1):
        total = total + ak * np.sin(k * x)
    for k, bk in enumerate(b):
        total = total + bk * np.cos(k * x)
    return total if total.ndim else float(total)
