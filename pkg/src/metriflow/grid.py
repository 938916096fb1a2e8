"""Periodic structured grids with adjoint-consistent discrete calculus.

All differential operators are second-order central differences with
periodic wraparound.  The key structural property is exact discrete
integration by parts: ``integrate(f * div(u)) == -integrate(dot(grad(f), u))``
up to floating-point roundoff, for every field f and vector field u.  Every
global budget and bracket identity in the rest of the package leans on this.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid in 1 or 2 dimensions.

    n and length may be scalars (same per axis) or per-axis sequences.
    """

    dim: int
    n: tuple[int, ...] = ()
    length: tuple[float, ...] = ()
    h: tuple[float, ...] = field(init=False, default=())

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        n = self.n if isinstance(self.n, tuple) else (self.n,) * self.dim
        if len(n) == 1 and self.dim == 2:
            n = n * 2
        length = self.length if isinstance(self.length, tuple) else (float(self.length),) * self.dim
        if len(length) == 1 and self.dim == 2:
            length = length * 2
        if any(ni < 4 for ni in n):
            raise ValueError(f"need at least 4 cells per axis, got {n}")
        if any(li <= 0 for li in length):
            raise ValueError(f"length must be positive, got {length}")
        object.__setattr__(self, "n", tuple(int(ni) for ni in n))
        object.__setattr__(self, "length", tuple(float(li) for li in length))
        object.__setattr__(self, "h", tuple(li / ni for li, ni in zip(self.length, self.n)))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    def coords(self) -> list[np.ndarray]:
        """Cell-center coordinates, broadcastable to the grid shape."""
        axes = []
        for k in range(self.dim):
            x = (np.arange(self.n[k]) + 0.5) * self.h[k]
            shape = [1] * self.dim
            shape[k] = self.n[k]
            axes.append(x.reshape(shape))
        return axes

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)

    def zeros_vector(self) -> np.ndarray:
        return np.zeros((self.dim,) + self.shape)

    def deriv(self, f: np.ndarray, axis: int) -> np.ndarray:
        """Central difference along one axis, periodic.

        Hand-rolled shifts (slice assignments) rather than np.roll; this is
        the innermost operation of every RHS evaluation and np.roll's
        per-call overhead dominates at desk-scale grid sizes.
        """
        ax = f.ndim - self.dim + axis
        out = np.empty_like(f)
        mid = [slice(None)] * f.ndim
        plus = [slice(None)] * f.ndim
        minus = [slice(None)] * f.ndim
        mid[ax], plus[ax], minus[ax] = slice(1, -1), slice(2, None), slice(None, -2)
        np.subtract(f[tuple(plus)], f[tuple(minus)], out=out[tuple(mid)])
        lo = [slice(None)] * f.ndim
        lo[ax] = slice(0, 1)
        plus[ax], minus[ax] = slice(1, 2), slice(-1, None)
        np.subtract(f[tuple(plus)], f[tuple(minus)], out=out[tuple(lo)])
        lo[ax] = slice(-1, None)
        plus[ax], minus[ax] = slice(0, 1), slice(-2, -1)
        np.subtract(f[tuple(plus)], f[tuple(minus)], out=out[tuple(lo)])
        out *= 1.0 / (2.0 * self.h[axis])
        return out

    def grad(self, f: np.ndarray) -> np.ndarray:
        """Gradient of a scalar field; returns shape (dim, *shape)."""
        if f.shape != self.shape:
            raise ValueError(f"field shape {f.shape} does not match grid {self.shape}")
        return np.stack([self.deriv(f, k) for k in range(self.dim)])

    def div(self, u: np.ndarray) -> np.ndarray:
        """Divergence of a vector field (dim, *shape) -> scalar field.

        Exactly the negative adjoint of grad under the cell-sum inner
        product, by skew-symmetry of the periodic central stencil.
        """
        if u.shape != (self.dim,) + self.shape:
            raise ValueError(f"vector field shape {u.shape} does not match grid")
        out = self.deriv(u[0], 0)
        for k in range(1, self.dim):
            out = out + self.deriv(u[k], k)
        return out

    def div_tensor(self, t: np.ndarray) -> np.ndarray:
        """Divergence of a rank-2 tensor field t[j, i] = T_{ji} over j.

        Returns the vector field with components (div T)_i = d_j T_{ji}.
        """
        return np.stack([self.div(t[:, i]) for i in range(self.dim)])

    def integrate(self, f: np.ndarray) -> float:
        """Cell-sum quadrature with deterministic pairwise summation."""
        return float(np.sum(f) * self.cell_volume)

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        """Discrete L2 inner product (sums over any leading component axes)."""
        return float(np.sum(f * g) * self.cell_volume)

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.sum(f * f) * self.cell_volume))

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        """div(grad(f)): the wide stencil, so summation by parts is exact."""
        return self.div(self.grad(f))
