"""Cartesian meshes of the unit square and Lagrange DOF numbering.

The domain is always (0,1)^2 divided into m x m congruent squares of size
h = 1/m.  Elements are numbered lexicographically with x fastest; the global
node lattice for order-p elements is the closed (p*m+1) x (p*m+1) tensor grid,
also numbered x fastest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True)
class Edge:
    """Interior edge between two elements.

    ``axis`` names the coordinate that is constant along the edge; the unit
    normal always points along that positive coordinate axis, and
    ``left_elem`` lies on its negative side.
    """

    axis: str                 # "x" or "y"
    left_elem: int
    right_elem: int
    normal: tuple[float, float]
    length: float


@dataclass(frozen=True)
class Mesh:
    """Uniform Cartesian mesh with m elements per side."""

    m: int

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @property
    def n_elements(self) -> int:
        return self.m * self.m

    @cached_property
    def elements(self) -> NDArray[np.int64]:
        """Lower-left corner index (i, j) of each element, x fastest."""
        e = np.arange(self.n_elements)
        return np.column_stack((e % self.m, e // self.m))

    def x_edge_elements(self) -> NDArray[np.int64]:
        """(left, right) element pairs across edges with normal +x."""
        m = self.m
        i = np.arange(m - 1)
        j = np.arange(m)
        left = (j[:, None] * m + i[None, :]).ravel()
        return np.column_stack((left, left + 1))

    def y_edge_elements(self) -> NDArray[np.int64]:
        """(below, above) element pairs across edges with normal +y."""
        m = self.m
        i = np.arange(m)
        j = np.arange(m - 1)
        below = (j[:, None] * m + i[None, :]).ravel()
        return np.column_stack((below, below + m))

    @cached_property
    def interior_edges(self) -> list[Edge]:
        h = self.h
        edges = [
            Edge("x", int(l), int(r), (1.0, 0.0), h)
            for l, r in self.x_edge_elements()
        ]
        edges += [
            Edge("y", int(l), int(r), (0.0, 1.0), h)
            for l, r in self.y_edge_elements()
        ]
        return edges


def build_cartesian(m: int) -> Mesh:
    """Mesh of m x m squares of size h = 1/m."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"element count per side must be a positive integer, got {m!r}")
    return Mesh(int(m))


@dataclass(frozen=True)
class DofMap:
    """Global numbering of the order-p Lagrange node lattice.

    Local nodes of an element are numbered x fastest: local = b*(p+1) + a for
    lattice offsets (a, b), matching the tensor basis ordering.
    """

    mesh: Mesh = field(repr=False)
    p: int

    @property
    def nodes_per_side(self) -> int:
        return self.p * self.mesh.m + 1

    @property
    def total(self) -> int:
        return self.nodes_per_side ** 2

    def global_index(self, elem: int, local: int) -> int:
        p = self.p
        a, b = local % (p + 1), local // (p + 1)
        i, j = elem % self.mesh.m, elem // self.mesh.m
        return (j * p + b) * self.nodes_per_side + (i * p + a)

    @cached_property
    def element_dofs(self) -> NDArray[np.int64]:
        """Global indices of all local nodes, shape (m^2, (p+1)^2)."""
        m, p, nps = self.mesh.m, self.p, self.nodes_per_side
        e = np.arange(m * m)
        i, j = e % m, e // m
        a = np.arange(p + 1)
        row = i[:, None] * p + a[None, :]            # (m^2, p+1) x-lattice
        col = j[:, None] * p + a[None, :]            # (m^2, p+1) y-lattice
        return (col[:, :, None] * nps + row[:, None, :]).reshape(m * m, -1)

    def node_coordinates(self) -> NDArray[np.float64]:
        """Physical (x, y) of every global node, shape (total, 2)."""
        nps = self.nodes_per_side
        step = 1.0 / (self.p * self.mesh.m)
        g = np.arange(self.total)
        return np.column_stack(((g % nps) * step, (g // nps) * step))


def build_dof_map(mesh: Mesh, p: int) -> DofMap:
    """DOF numbering for order-p elements on ``mesh``."""
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise ValueError(f"element order must be a positive integer, got {p!r}")
    return DofMap(mesh, int(p))
