"""Finite-dimensional model spaces K_u with the Takenaka-Malmquist basis.

K_u = H^2 ominus u H^2 for a finite Blaschke product u of degree n.  Vectors
are stored as coordinates in the orthonormal Takenaka-Malmquist basis

    e_k(z) = sqrt(1 - |a_k|^2)/(1 - conj(a_k) z) * prod_{j<k} (z - a_j)/(1 - conj(a_j) z),

which reduces to the monomials 1, z, ..., z^{n-1} when u = z^n.  All integrals
against the unit circle use the uniform trapezoid rule, whose error decays
geometrically for rational integrands with poles off the circle; the grid size
is doubled at construction until the basis Gram matrix is the identity to
1e-12 (1e-10 is a hard floor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import POLE_TOL, BlaschkeProduct
from .errors import (
    GridMismatch,
    OutsideClosedDisc,
    PoleHit,
    QuadratureError,
    SpaceMismatch,
)

DEFAULT_GRAM_TOL = 1e-12
GRAM_TOL_FLOOR = 1e-10
MAX_QUAD_POINTS = 1 << 18


def _next_pow2(m: int) -> int:
    return 1 << (int(m) - 1).bit_length()


def default_quad_points(degree: int) -> int:
    """Grid-size floor: a power of two, at least 256 and at least 8*(2n+1)."""
    return _next_pow2(max(256, 8 * (2 * degree + 1)))


def circle_grid(num_points: int) -> np.ndarray:
    j = np.arange(num_points)
    return np.exp(2j * np.pi * j / num_points)


def circle_inner(f_values: np.ndarray, g_values: np.ndarray) -> complex:
    """Trapezoid value of <f, g> = (1/N) sum f(zeta_j) conj(g(zeta_j))."""
    f = np.asarray(f_values, dtype=complex)
    g = np.asarray(g_values, dtype=complex)
    if f.shape != g.shape:
        raise GridMismatch(f"grid tables of shapes {f.shape} and {g.shape}")
    return complex(np.sum(f * np.conj(g)) / f.size)

def adaptive_circle_inner(f, g, start_points: int = 256, tol: float = 1e-12) -> complex:
    """Inner product of two callables on the circle, doubling N until stable."""
    n = _next_pow2(start_points)
    grid = circle_grid(n)
    value = circle_inner(f(grid), g(grid))
    while n < MAX_QUAD_POINTS:
        n *= 2
        grid = circle_grid(n)
        refined = circle_inner(f(grid), g(grid))
        if abs(refined - value) < tol:
            return refined
        value = refined
    raise QuadratureError("adaptive circle quadrature failed to stabilize")


class ModelSpace:
    """Computational handle for K_u: cached grid, basis table, conjugation.

    Parameters
    ----------
    u : BlaschkeProduct
    quad_points : int, optional
        Starting grid size; rounded up to a power of two and to the structural
        floor 4*(2n+1), then doubled until the Gram matrix is the identity to
        ``gram_tol``.
    gram_tol : float
        Construction accuracy target for the basis Gram matrix.
    """

    def __init__(self, u: BlaschkeProduct, quad_points: int | None = None,
                 gram_tol: float = DEFAULT_GRAM_TOL):
        self.u = u
        self.dim = u.degree
        floor = max(_next_pow2(4 * (2 * self.dim + 1)), 8)
        n_pts = default_quad_points(self.dim) if quad_points is None else max(
            _next_pow2(quad_points), floor)
        while True:
            grid = circle_grid(n_pts)
            basis = self.basis_values_at(grid)
            gram = basis.conj() @ basis.T / n_pts
            err = float(np.max(np.abs(gram - np.eye(self.dim))))
            if err <= gram_tol or n_pts >= MAX_QUAD_POINTS:
                break
            n_pts *= 2
        if err > GRAM_TOL_FLOOR:
            raise QuadratureError(
                f"Gram residual {err:.3e} above {GRAM_TOL_FLOOR} at N={n_pts}")
        self.quad_points = n_pts
        self.grid = grid
        self.basis_values = basis
        self.u_values = u.evaluate(grid)
        self.gram_residual = err
        self._op_cache: dict = {}
        self.conj_matrix = self._build_conjugation_matrix()

    def _build_conjugation_matrix(self) -> np.ndarray:
        # (C e_k)(zeta) = u(zeta) * conj(zeta e_k(zeta)) on the circle
        cvals = self.u_values * np.conj(self.grid * self.basis_values)
        m = self.basis_values.conj() @ cvals.T / self.quad_points
        sym = float(np.max(np.abs(m - m.T)))
        invol = float(np.max(np.abs(m @ m.conj() - np.eye(self.dim))))
        if sym > 1e-10 or invol > 1e-10:
            raise QuadratureError(
                f"conjugation matrix residuals sym={sym:.3e} invol={invol:.3e}")
        return m

    def __repr__(self):
        return f"ModelSpace(degree={self.dim}, quad_points={self.quad_points})"

    # -- basis and evaluation -------------------------------------------------

    def basis_values_at(self, points) -> np.ndarray:
        """Takenaka-Malmquist basis values, shape (dim, len(points))."""
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        a = self.u._zero_arr
        out = np.empty((self.dim, pts.size), dtype=complex)
        running = np.ones(pts.size, dtype=complex)
        for k in range(self.dim):
            den = 1.0 - np.conj(a[k]) * pts
            if np.any(np.abs(den) < POLE_TOL):
                raise PoleHit("basis evaluation at a reflected zero")
            out[k] = np.sqrt(1.0 - abs(a[k]) ** 2) / den * running
            running = running * (pts - a[k]) / den
        return out

    def tm_basis_value(self, k: int, z) -> complex:
        if not 0 <= k < self.dim:
            raise ValueError(f"basis index {k} outside 0..{self.dim - 1}")
        return complex(self.basis_values_at(z)[k, 0])

    def vector(self, coords) -> "ModelVector":
        return ModelVector(np.asarray(coords, dtype=complex), self)

    def basis_vector(self, k: int) -> "ModelVector":
        coords = np.zeros(self.dim, dtype=complex)
        coords[k] = 1.0
        return self.vector(coords)

    def zero_vector(self) -> "ModelVector":
        return self.vector(np.zeros(self.dim, dtype=complex))

    def inner_values(self, f_values, g_values) -> complex:
        return circle_inner(f_values, g_values)

    # -- kernels and conjugation ----------------------------------------------

    def kernel(self, lam) -> "ModelVector":
        """Reproducing kernel K_lam, valid on the closed unit disc."""
        lam = complex(lam)
        if abs(lam) > 1.0 + 1e-12:
            raise OutsideClosedDisc(f"|lambda| = {abs(lam):.6f} > 1")
        coords = np.conj(self.basis_values_at(lam)[:, 0])
        return self.vector(coords)

    def conjugate_kernel(self, lam) -> "ModelVector":
        """Conjugate kernel, the conjugation image of K_lam; equals (u(z)-u(lam))/(z-lam)."""
        return self.conjugate(self.kernel(lam))

    def conjugate(self, f: "ModelVector") -> "ModelVector":
        """Apply the conjugation C f = u * conj(z f) in coordinates."""
        if f.space is not self and not same_space(f.space, self):
            raise SpaceMismatch("vector belongs to a different model space")
        return self.vector(self.conj_matrix @ np.conj(f.coords))

    @property
    def k0(self) -> "ModelVector":
        if "k0" not in self._op_cache:
            self._op_cache["k0"] = self.kernel(0.0)
        return self._op_cache["k0"]

    @property
    def kt0(self) -> "ModelVector":
        if "kt0" not in self._op_cache:
            self._op_cache["kt0"] = self.conjugate_kernel(0.0)
        return self._op_cache["kt0"]


def same_space(a: ModelSpace, b: ModelSpace) -> bool:
    return a is b or (a.u == b.u and a.quad_points == b.quad_points)


@dataclass(frozen=True, eq=False)
class ModelVector:
    """Element of K_u stored as Takenaka-Malmquist coordinates."""

    coords: np.ndarray
    space: ModelSpace

    def __post_init__(self):
        arr = np.array(self.coords, dtype=complex)
        if arr.shape != (self.space.dim,):
            raise ValueError(f"coordinate shape {arr.shape} != ({self.space.dim},)")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    def evaluate(self, z):
        pts, scalar = np.atleast_1d(np.asarray(z, dtype=complex)), np.ndim(z) == 0
        vals = self.coords @ self.space.basis_values_at(pts)
        return complex(vals[0]) if scalar else vals

    def grid_values(self) -> np.ndarray:
        return self.coords @ self.space.basis_values

    def inner(self, other: "ModelVector") -> complex:
        if not same_space(self.space, other.space):
            raise SpaceMismatch("inner product across different model spaces")
        return complex(np.vdot(other.coords, self.coords))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def conjugate(self) -> "ModelVector":
        return self.space.conjugate(self)

    def _binary(self, other, op):
        if not same_space(self.space, other.space):
            raise SpaceMismatch("arithmetic across different model spaces")
        return ModelVector(op(self.coords, other.coords), self.space)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        return ModelVector(self.coords * complex(scalar), self.space)

    __rmul__ = __mul__

    def __neg__(self):
        return ModelVector(-self.coords, self.space)
