"""Periodic finite-difference and Fourier derivatives on raw sample arrays.

All operators act along one axis of an array sampled at ``n`` equispaced
points per period. They are exact adjoints of each other in the sense the
cell solver relies on: first derivatives are skew-adjoint and second
derivatives self-adjoint with respect to the plain sample inner product.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
import scipy.fft

Scheme = Literal["central", "spectral"]
SCHEMES: tuple[str, ...] = ("central", "spectral")


def _wavenumbers(n: int, period: float) -> np.ndarray:
    return 2.0 * np.pi * scipy.fft.fftfreq(n, d=1.0 / n) / period


def _along(symbol: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = symbol.size
    return symbol.reshape(shape)


def first_symbol(n: int, scheme: Scheme = "central", period: float = 1.0) -> np.ndarray:
    """Fourier symbol of the first derivative (Nyquist mode annihilated)."""
    h = period / n
    k = _wavenumbers(n, period)
    if scheme == "central":
        return 1j * np.sin(k * h) / h
    symbol = 1j * k
    if n % 2 == 0:
        symbol[n // 2] = 0.0
    return symbol


def second_symbol(n: int, scheme: Scheme = "central", period: float = 1.0) -> np.ndarray:
    """Fourier symbol of the pure second derivative."""
    h = period / n
    k = _wavenumbers(n, period)
    if scheme == "central":
        return -4.0 * np.sin(0.5 * k * h) ** 2 / h**2
    return -(k**2) + 0j


def derivative(
    values: np.ndarray, axis: int, scheme: Scheme = "central", period: float = 1.0
) -> np.ndarray:
    n = values.shape[axis]
    h = period / n
    if scheme == "central":
        return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2.0 * h)
    if scheme == "spectral":
        symbol = _along(first_symbol(n, scheme, period), values.ndim, axis)
        spectrum = scipy.fft.fft(values, axis=axis)
        return scipy.fft.ifft(symbol * spectrum, axis=axis).real
    raise ValueError(f"Unknown differentiation scheme: {scheme}")


def second_derivative(
    values: np.ndarray,
    axis_a: int,
    axis_b: int,
    scheme: Scheme = "central",
    period: float = 1.0,
) -> np.ndarray:
    """``d^2/dx_a dx_b``; compact stencil on the diagonal for the central scheme."""
    if axis_a != axis_b:
        return derivative(derivative(values, axis_b, scheme, period), axis_a, scheme, period)
    n = values.shape[axis_a]
    h = period / n
    if scheme == "central":
        return (
            np.roll(values, -1, axis=axis_a) - 2.0 * values + np.roll(values, 1, axis=axis_a)
        ) / h**2
    if scheme == "spectral":
        symbol = _along(second_symbol(n, scheme, period), values.ndim, axis_a)
        spectrum = scipy.fft.fft(values, axis=axis_a)
        return scipy.fft.ifft(symbol * spectrum, axis=axis_a).real
    raise ValueError(f"Unknown differentiation scheme: {scheme}")
