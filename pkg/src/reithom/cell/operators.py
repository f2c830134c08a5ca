"""The periodic ``D^s`` operator on batched cell fields and its Fourier preconditioner.

Batched fields have shape ``(B, n, ..., n, d)``: a batch axis, ``N`` grid axes
and a component axis. ``apply`` appends the derivative axes of ``xi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from reithom.errors import ResolutionError
from reithom.fields.differentiation import (
    Scheme,
    derivative,
    first_symbol,
    second_derivative,
    second_symbol,
)
from reithom.fields.periodic import MIN_RESOLUTION

# Relative cut below which a Fourier mode is treated as in the kernel.
KERNEL_CUT = 1e-12


@dataclass(frozen=True)
class PeriodicOperator:
    """``D`` (s=1) or the symmetrized Hessian (s=2) on the unit cell."""

    resolution: int
    dim: int
    components: int
    order: int
    scheme: Scheme = "central"

    def __post_init__(self) -> None:
        n = self.resolution
        if n < MIN_RESOLUTION or n & (n - 1):
            raise ResolutionError(
                f"cell resolution must be a power of two >= {MIN_RESOLUTION}, got {n}"
            )

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return (self.resolution,) * self.dim

    @property
    def size(self) -> int:
        return self.resolution**self.dim

    def field_shape(self, batch: int) -> tuple[int, ...]:
        return (batch,) + self.grid_shape + (self.components,)

    def apply(self, psi: np.ndarray) -> np.ndarray:
        if self.order == 1:
            return np.stack(
                [derivative(psi, 1 + a, self.scheme) for a in range(self.dim)], axis=-1
            )
        n = self.dim
        h = np.empty(psi.shape + (n, n))
        for a in range(n):
            for b in range(a, n):
                h[..., a, b] = second_derivative(psi, 1 + a, 1 + b, self.scheme)
                h[..., b, a] = h[..., a, b]
        return h

    def adjoint(self, sigma: np.ndarray) -> np.ndarray:
        if self.order == 1:
            return -sum(derivative(sigma[..., a], 1 + a, self.scheme) for a in range(self.dim))
        out = 0.0
        for a in range(self.dim):
            for b in range(self.dim):
                out = out + second_derivative(sigma[..., a, b], 1 + a, 1 + b, self.scheme)
        return out

    def _entries(self, scheme: Scheme) -> list[np.ndarray]:
        """Fourier symbols of every entry of ``D^s`` on the grid axes."""
        n, N = self.resolution, self.dim
        first = first_symbol(n, scheme)
        second = second_symbol(n, scheme)

        def along(s: np.ndarray, axis: int) -> np.ndarray:
            shape = [1] * N
            shape[axis] = n
            return s.reshape(shape)

        if self.order == 1:
            return [along(first, a) for a in range(N)]
        entries = []
        for a in range(N):
            for b in range(N):
                if a == b:
                    entries.append(along(second, a))
                else:
                    entries.append(along(first, a) * along(first, b))
        return entries

    def _symbol(self) -> np.ndarray:
        """Fourier symbol of ``D^T D`` on the grid axes."""
        total = np.zeros(self.grid_shape)
        for entry in self._entries(self.scheme):
            total = total + np.abs(entry) ** 2
        return total

    def to_spectral(self, psi: np.ndarray) -> np.ndarray:
        """Mean-zero fields whose Fourier ``D^s`` is the least-squares fit of this
        operator's ``D^s psi``.

        For the central scheme this drops the odd/even decoupled content the
        stencil cannot see, leaving a corrector that is smooth between nodes.
        """
        if self.scheme == "spectral":
            return psi
        fit = self._entries("spectral")
        numerator = np.zeros(self.grid_shape, dtype=complex)
        denominator = np.zeros(self.grid_shape)
        for target, source in zip(fit, self._entries(self.scheme)):
            numerator = numerator + np.conj(target) * source
            denominator = denominator + np.abs(target) ** 2
        keep = denominator > KERNEL_CUT * float(np.max(denominator))
        ratio = np.where(keep, numerator / np.where(keep, denominator, 1.0), 0.0)
        axes = tuple(range(1, 1 + self.dim))
        spectrum = scipy.fft.fftn(psi, axes=axes)
        return scipy.fft.ifftn(ratio[(None,) + (...,) + (None,)] * spectrum, axes=axes).real

    def preconditioner(self) -> "FourierPreconditioner":
        return FourierPreconditioner(self._symbol(), self.size, self.dim)


class FourierPreconditioner:
    """Pseudo-inverse of ``D^T D / M`` applied in Fourier space."""

    def __init__(self, symbol: np.ndarray, size: int, dim: int) -> None:
        cut = KERNEL_CUT * float(np.max(symbol))
        self._inverse = np.where(symbol > cut, size / np.where(symbol > cut, symbol, 1.0), 0.0)
        self._axes = tuple(range(1, 1 + dim))

    def __call__(self, g: np.ndarray) -> np.ndarray:
        inv = self._inverse[(None,) + (...,) + (None,)]
        spectrum = scipy.fft.fftn(g, axes=self._axes)
        return scipy.fft.ifftn(inv * spectrum, axes=self._axes).real
