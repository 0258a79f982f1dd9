"""Discretized weighted Lebesgue spaces on ``(0, x_max]`` and their isometries.

The space ``L^{p,alpha}`` carries the measure ``x**(alpha-1) dx``.  Under the
coordinate ``xi = x**alpha`` the measure becomes ``d(xi)/alpha`` and the space
is isometric to classical ``L^p(0, x_max**alpha]`` through the diagonal map

    (u_p f)(xi) = alpha**(-1/p) * f(xi**(1/alpha)).

All grids here are uniform in ``xi`` (so ``u_p`` really is diagonal), grid
functions interpolate piecewise-linearly in ``xi``, and every norm/pairing is
a composite trapezoid rule in ``xi`` with the first cell ``(0, xi_1]`` closed
by a rectangle at its right node.  That one shared quadrature makes the
discrete isometry exact to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ContractError, DomainError, GridMismatchError
from .kernel import Order

__all__ = [
    "SpaceDescriptor",
    "GridFunction",
    "make_grid",
    "norm_p_alpha",
    "norm_lp",
    "inner_product_alpha",
    "inner_product_l2",
    "u_p",
    "u_p_inverse",
    "distance",
    "distance_lp",
    "pairing",
    "write_grid_function_csv",
    "read_grid_function_csv",
]


@dataclass(frozen=True)
class SpaceDescriptor:
    """Parameters of a discretized ``L^{p,alpha}(0, x_max]``: exponent, order, window, grid size."""

    p: float
    order: Order
    x_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.p) and self.p >= 1):
            raise DomainError(f"integrability exponent must be finite and >= 1, got {self.p}")
        if self.n < 2:
            raise DomainError(f"grid size must be at least 2, got {self.n}")
        if not (np.isfinite(self.x_max) and self.x_max > 0):
            raise DomainError(f"window edge must be finite and positive, got {self.x_max}")

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def xi_max(self) -> float:
        """Window edge in the transformed coordinate, ``x_max**alpha``."""
        return self.x_max ** self.alpha

    @property
    def h(self) -> float:
        """Uniform spacing of the xi-grid."""
        return self.xi_max / self.n

    def xi_grid(self) -> np.ndarray:
        return _cached_grids(self)[0]

    def grid(self) -> np.ndarray:
        return make_grid(self)


class GridFunction:
    """A sampled complex function on a strictly increasing finite grid.

    Immutable: arrays are copied on construction and marked read-only.
    Arithmetic (+, -, scalar *) requires matching grids.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        grid = np.array(grid, dtype=float, copy=True)
        values = np.array(values, dtype=complex, copy=True)
        if grid.ndim != 1 or values.ndim != 1 or grid.size != values.size:
            raise ContractError("grid and values must be 1-d arrays of equal length")
        if grid.size == 0:
            raise ContractError("grid must be nonempty")
        if np.any(np.diff(grid) <= 0) or grid[0] <= 0:
            raise ContractError("grid must be strictly increasing and positive")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise ContractError("grid and values must be finite")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    def __len__(self):
        return self.grid.size

    @classmethod
    def sample(cls, grid, fn: Callable) -> "GridFunction":
        """Sample a vectorizable callable on ``grid``."""
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(fn(grid), dtype=complex))

    def same_grid(self, other: "GridFunction") -> bool:
        return self.grid.shape == other.grid.shape and np.array_equal(self.grid, other.grid)

    def _require_same_grid(self, other: "GridFunction"):
        if not isinstance(other, GridFunction):
            raise TypeError("expected a GridFunction")
        if not self.same_grid(other):
            raise GridMismatchError("grid functions live on different grids")

    def __add__(self, other):
        self._require_same_grid(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._require_same_grid(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, c):
        return GridFunction(self.grid, self.values * complex(c))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@lru_cache(maxsize=64)
def _cached_grids(desc: SpaceDescriptor):
    xi = desc.h * np.arange(1, desc.n + 1)
    xi[-1] = desc.xi_max
    x = xi ** (1.0 / desc.alpha)
    x[-1] = desc.x_max
    xi.flags.writeable = False
    x.flags.writeable = False
    return xi, x


def make_grid(desc: SpaceDescriptor) -> np.ndarray:
    """Nodes ``x_i = (i * x_max**alpha / n)**(1/alpha)``, uniform in ``xi = x**alpha``.

    The last node is pinned to ``x_max`` exactly.  The returned array is
    read-only (shared across calls).
    """
    return _cached_grids(desc)[1]


def _trapezoid_weights(n: int, h: float) -> np.ndarray:
    # composite trapezoid on [xi_1, xi_n] plus rectangle closure of (0, xi_1]
    w = np.full(n, h)
    w[0] = 1.5 * h
    w[-1] = 0.5 * h
    return w


def _check_on_descriptor_grid(desc: SpaceDescriptor, f: GridFunction):
    if len(f) != desc.n or not np.array_equal(f.grid, make_grid(desc)):
        raise GridMismatchError("grid function does not live on the descriptor's grid")


def _uniform_spacing(grid: np.ndarray) -> float:
    h = grid[0]
    if grid.size > 1:
        d = np.diff(grid)
        if np.max(np.abs(d - h)) > 1e-9 * max(h, abs(grid[-1]) / grid.size):
            raise ContractError("expected a uniform grid starting at its spacing")
    return float(h)


def norm_p_alpha(desc: SpaceDescriptor, f: GridFunction) -> float:
    """Discrete ``L^{p,alpha}`` norm of ``f`` on the descriptor's grid."""
    _check_on_descriptor_grid(desc, f)
    w = _trapezoid_weights(desc.n, desc.h)
    s = float(np.sum(w * np.abs(f.values) ** desc.p))
    return (s / desc.alpha) ** (1.0 / desc.p)


def norm_lp(g: GridFunction, p: float) -> float:
    """Classical ``L^p`` norm of a grid function on a uniform grid."""
    if not (np.isfinite(p) and p >= 1):
        raise DomainError(f"need finite p >= 1, got {p}")
    h = _uniform_spacing(g.grid)
    w = _trapezoid_weights(len(g), h)
    return float(np.sum(w * np.abs(g.values) ** p)) ** (1.0 / p)


def inner_product_alpha(desc: SpaceDescriptor, f: GridFunction,
                        g: GridFunction) -> complex:
    """Weighted inner product ``int f conj(g) x**(alpha-1) dx`` (discrete)."""
    _check_on_descriptor_grid(desc, f)
    _check_on_descriptor_grid(desc, g)
    w = _trapezoid_weights(desc.n, desc.h)
    return complex(np.sum(w * f.values * np.conj(g.values)) / desc.alpha)


def inner_product_l2(f: GridFunction, g: GridFunction) -> complex:
    """Classical ``L^2`` inner product on a shared uniform grid."""
    f._require_same_grid(g)
    h = _uniform_spacing(f.grid)
    w = _trapezoid_weights(len(f), h)
    return complex(np.sum(w * f.values * np.conj(g.values)))


def _up_scale(desc: SpaceDescriptor) -> float:
    return desc.alpha ** (-1.0 / desc.p)


def u_p(desc: SpaceDescriptor, f: GridFunction) -> GridFunction:
    """Isometry onto classical ``L^p``: values scaled by ``alpha**(-1/p)`` on the xi-grid.

    Node ``xi_i = x_i**alpha``, so on matched grids the map is diagonal and
    ``norm_lp(u_p(f), p) == norm_p_alpha(desc, f)`` to rounding.
    """
    _check_on_descriptor_grid(desc, f)
    return GridFunction(desc.xi_grid(), f.values * _up_scale(desc))


def u_p_inverse(desc: SpaceDescriptor, g: GridFunction) -> GridFunction:
    """Inverse isometry, ``f(x) = alpha**(1/p) g(x**alpha)`` on the matched grid.

    Implemented as division by the stored forward factor so the round trip is
    exact to at most one rounding per node.
    """
    if len(g) != desc.n or not np.array_equal(g.grid, desc.xi_grid()):
        raise GridMismatchError("grid function does not live on the descriptor's xi-grid")
    return GridFunction(make_grid(desc), g.values / _up_scale(desc))


def distance(desc: SpaceDescriptor, f: GridFunction, g: GridFunction) -> float:
    """``L^{p,alpha}`` distance between two functions on the descriptor's grid."""
    return norm_p_alpha(desc, f - g)


def distance_lp(f: GridFunction, g: GridFunction, p: float) -> float:
    """Classical ``L^p`` distance on a shared uniform grid."""
    return norm_lp(f - g, p)


def pairing(desc: SpaceDescriptor, phi: GridFunction, f: GridFunction) -> complex:
    """Dual pairing ``<phi, f> = int conj(phi) f x**(alpha-1) dx`` (discrete)."""
    return complex(np.conj(inner_product_alpha(desc, phi, f)))


def write_grid_function_csv(path, f: GridFunction):
    """Serialize as ``x,re,im`` rows with 17 significant digits, LF endings."""
    lines = ["x,re,im"]
    for x, v in zip(f.grid, f.values):
        lines.append(f"{x:.17g},{v.real:.17g},{v.imag:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_grid_function_csv(path) -> GridFunction:
    data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=float)
    data = np.atleast_2d(data)
    return GridFunction(data[:, 0], data[:, 1] + 1j * data[:, 2])
