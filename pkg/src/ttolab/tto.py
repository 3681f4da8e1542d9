"""Truncated Toeplitz operators: construction, membership, symbol recovery.

A truncated Toeplitz operator on K_u is A_Phi = P_u M_Phi restricted to K_u,
with Phi a bounded symbol on the circle.  In the orthonormal basis the matrix
is (A)_{jk} = <Phi e_k, e_j>, computed by circle quadrature.  Every such A is
characterized by its shift defect: A is a truncated Toeplitz operator iff

    A - S A S^* = phi (x) K_0  +  K_0 (x) psi

for some phi, psi in K_u, in which case A = A_{phi + conj(psi)}.  That defect
test, its canonical (phi, psi) extraction with psi(0) = 0, and the kernel
shift identities live here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from .blaschke import RationalPair
from .errors import NotATTO, PoleOnCircle, QuadratureError, SpaceMismatch
from .model_space import (MAX_QUAD_POINTS, ModelSpace, ModelVector, circle_grid,
                          same_space)

DEFAULT_TOL_FACTOR = 1e-8


def spectral_norm(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat, 2))


def outer(f: ModelVector, g: ModelVector) -> np.ndarray:
    """Rank-one operator f (x) g, acting as h -> f <h, g>."""
    if not same_space(f.space, g.space):
        raise SpaceMismatch("outer product across different model spaces")
    return np.outer(f.coords, np.conj(g.coords))


@dataclass(frozen=True, eq=False)
class TTOMatrix:
    """Matrix tagged with the model space it acts on."""

    mat: np.ndarray
    space: ModelSpace

    def __post_init__(self):
        arr = np.array(self.mat, dtype=complex)
        n = self.space.dim
        if arr.shape != (n, n):
            raise ValueError(f"matrix shape {arr.shape} != ({n}, {n})")
        arr.setflags(write=False)
        object.__setattr__(self, "mat", arr)

    def adjoint(self) -> "TTOMatrix":
        return TTOMatrix(self.mat.conj().T, self.space)

    def norm(self) -> float:
        return spectral_norm(self.mat)

    def apply(self, f: ModelVector) -> ModelVector:
        if not same_space(f.space, self.space):
            raise SpaceMismatch("operator applied to a foreign vector")
        return self.space.vector(self.mat @ f.coords)

    def _coerce(self, other):
        if isinstance(other, TTOMatrix):
            if not same_space(other.space, self.space):
                raise SpaceMismatch("arithmetic across different model spaces")
            return other.mat
        return np.asarray(other, dtype=complex)

    def __matmul__(self, other):
        return TTOMatrix(self.mat @ self._coerce(other), self.space)

    def __add__(self, other):
        return TTOMatrix(self.mat + self._coerce(other), self.space)

    def __sub__(self, other):
        return TTOMatrix(self.mat - self._coerce(other), self.space)

    def __mul__(self, scalar):
        return TTOMatrix(self.mat * complex(scalar), self.space)

    __rmul__ = __mul__


def as_matrix(space: ModelSpace, operator) -> np.ndarray:
    """Accept a TTOMatrix bound to ``space`` or a bare (n, n) array."""
    if isinstance(operator, TTOMatrix):
        if not same_space(operator.space, space):
            raise SpaceMismatch("operator belongs to a different model space")
        return operator.mat
    arr = np.asarray(operator, dtype=complex)
    n = space.dim
    if arr.shape != (n, n):
        raise ValueError(f"matrix shape {arr.shape} != ({n}, {n})")
    return arr


# -- symbols ------------------------------------------------------------------


@dataclass(frozen=True)
class RationalTerm:
    """Rational symbol term, optionally divided by (1 - clark_alpha * conj(u))."""

    pair: RationalPair
    clark_alpha: complex | None = None


@dataclass(frozen=True, eq=False)
class SymbolExpr:
    """Symbol Phi = analytic + conj(coanalytic) + constant + rational terms.

    ``analytic`` and ``coanalytic`` are K_u vectors; the coanalytic field
    stores phi_2 itself, the symbol contribution being conj(phi_2).  Rational
    terms cover symbols such as u/(z - lambda) and phi/(1 - alpha conj(u))
    that are not of the K_u + conj(K_u) + constant shape.
    """

    analytic: ModelVector | None = None
    coanalytic: ModelVector | None = None
    constant: complex = 0j
    rational_terms: tuple[RationalTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constant", complex(self.constant))
        object.__setattr__(self, "rational_terms", tuple(self.rational_terms))
        spaces = [v.space for v in (self.analytic, self.coanalytic) if v is not None]
        if len(spaces) == 2 and not same_space(spaces[0], spaces[1]):
            raise SpaceMismatch("symbol parts live in different model spaces")

    @property
    def is_standard_form(self) -> bool:
        return not self.rational_terms

    def conjugated(self) -> "SymbolExpr":
        if not self.is_standard_form:
            raise ValueError("conjugation of rational symbol terms is not representable")
        return SymbolExpr(self.coanalytic, self.analytic, np.conj(self.constant))

    def values_at(self, space: ModelSpace, points: np.ndarray,
                  u_values: np.ndarray | None = None,
                  basis_values: np.ndarray | None = None) -> np.ndarray:
        """Symbol values at arbitrary circle points."""
        points = np.asarray(points, dtype=complex)
        vals = np.full(points.shape, self.constant, dtype=complex)
        if basis_values is None and (self.analytic is not None
                                     or self.coanalytic is not None):
            basis_values = space.basis_values_at(points)
        if self.analytic is not None:
            if not same_space(self.analytic.space, space):
                raise SpaceMismatch("analytic part lives in a different model space")
            vals = vals + self.analytic.coords @ basis_values
        if self.coanalytic is not None:
            if not same_space(self.coanalytic.space, space):
                raise SpaceMismatch("coanalytic part lives in a different model space")
            vals = vals + np.conj(self.coanalytic.coords @ basis_values)
        for term in self.rational_terms:
            roots = term.pair.denominator_roots()
            if roots.size and np.min(np.abs(np.abs(roots) - 1.0)) < 1e-10:
                raise PoleOnCircle("rational symbol term has a pole on the unit circle")
            tv = term.pair.evaluate(points)
            if term.clark_alpha is not None:
                alpha = complex(term.clark_alpha)
                if abs(alpha) >= 1.0 - 1e-12:
                    raise PoleOnCircle("clark fraction with |alpha| >= 1 has circle poles")
                if u_values is None:
                    u_values = space.u.evaluate(points)
                tv = tv / (1.0 - alpha * np.conj(u_values))
            vals = vals + tv
        return vals

    def values_on(self, space: ModelSpace) -> np.ndarray:
        """Symbol values on the space's quadrature grid."""
        return self.values_at(space, space.grid, space.u_values, space.basis_values)

    def to_json(self):
        def vec(v):
            return None if v is None else [[c.real, c.imag] for c in v.coords]

        return {
            "analytic": vec(self.analytic),
            "coanalytic": vec(self.coanalytic),
            "constant": [self.constant.real, self.constant.imag],
            "rational_terms": [
                {
                    "pair": t.pair.to_json(),
                    "clark_alpha": None
                    if t.clark_alpha is None
                    else [t.clark_alpha.real, t.clark_alpha.imag],
                }
                for t in self.rational_terms
            ],
        }


def analytic_symbol(f: ModelVector) -> SymbolExpr:
    return SymbolExpr(analytic=f)


def coanalytic_symbol(f: ModelVector) -> SymbolExpr:
    """Symbol conj(f) for f in K_u."""
    return SymbolExpr(coanalytic=f)


def symbol_from_json(space: ModelSpace, obj) -> SymbolExpr:
    def vec(key):
        raw = obj.get(key)
        if raw is None:
            return None
        return space.vector([complex(p[0], p[1]) for p in raw])

    const = obj.get("constant", [0.0, 0.0])
    terms = []
    for t in obj.get("rational_terms", []):
        ca = t.get("clark_alpha")
        terms.append(
            RationalTerm(
                RationalPair.from_json(t["pair"]),
                None if ca is None else complex(ca[0], ca[1]),
            )
        )
    return SymbolExpr(vec("analytic"), vec("coanalytic"),
                      complex(const[0], const[1]), tuple(terms))


# -- construction -------------------------------------------------------------


def build_from_grid_values(space: ModelSpace, values: np.ndarray) -> TTOMatrix:
    """Quadrature compression of a multiplication symbol given on the grid."""
    vals = np.asarray(values, dtype=complex)
    if vals.shape != space.grid.shape:
        raise ValueError("symbol values must be given on the space's grid")
    if not np.all(np.isfinite(vals)):
        raise ValueError("symbol values must be finite on the grid")
    basis = space.basis_values
    mat = basis.conj() @ (vals * basis).T / space.quad_points
    return TTOMatrix(mat, space)


def build_refined(space: ModelSpace, values_fn, rel_tol: float = 1e-12) -> TTOMatrix:
    """Compression of a symbol given as a callable values_fn(points, u_values).

    The quadrature grid doubles until the compressed matrix stabilizes.  The
    space's own grid is tuned to integrate basis products, which is not enough
    for symbols whose poles approach the circle (rational terms, fraction
    symbols whose level set sits near the boundary); the stopping rule
    measures exactly the error such symbols add.
    """
    num = space.quad_points
    prev = None
    while True:
        pts = circle_grid(num)
        u_vals = space.u.evaluate(pts)
        vals = np.asarray(values_fn(pts, u_vals), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("symbol values are not finite on a refinement grid")
        basis = space.basis_values_at(pts)
        mat = basis.conj() @ (vals * basis).T / num
        if prev is not None and spectral_norm(mat - prev) <= rel_tol * max(
                1.0, spectral_norm(mat)):
            return TTOMatrix(mat, space)
        if num >= MAX_QUAD_POINTS:
            raise QuadratureError(
                f"symbol compression still moving at {MAX_QUAD_POINTS} points")
        prev = mat
        num *= 2


def build_tto(space: ModelSpace, symbol: SymbolExpr) -> TTOMatrix:
    if symbol.rational_terms:
        return build_refined(space,
                             lambda pts, uv: symbol.values_at(space, pts, uv))
    return build_from_grid_values(space, symbol.values_on(space))


def compressed_shift(space: ModelSpace) -> TTOMatrix:
    """A_z, the compression of multiplication by z to K_u (cached per space)."""
    if "shift" not in space._op_cache:
        space._op_cache["shift"] = build_from_grid_values(space, space.grid)
    return space._op_cache["shift"]


def generalized_shift(space: ModelSpace, alpha) -> TTOMatrix:
    """S_alpha = S + alpha/(1 - alpha conj(u(0))) K_0 (x) conjugate-K_0, |alpha| <= 1."""
    alpha = complex(alpha)
    if abs(alpha) > 1.0 + 1e-12:
        raise ValueError("generalized shift requires |alpha| <= 1")
    u0 = space.u.evaluate(0.0)
    gain = alpha / (1.0 - alpha * np.conj(u0))
    mat = compressed_shift(space).mat + gain * outer(space.k0, space.kt0)
    return TTOMatrix(mat, space)


# -- membership ---------------------------------------------------------------


def defect(space: ModelSpace, operator) -> np.ndarray:
    """Shift defect A - S A S^*."""
    a = as_matrix(space, operator)
    s = compressed_shift(space).mat
    return a - s @ a @ s.conj().T


def _project_off_k0(space: ModelSpace, coords: np.ndarray) -> np.ndarray:
    k0 = space.k0.coords
    return coords - (np.vdot(k0, coords) / np.vdot(k0, k0)) * k0


@dataclass(frozen=True, eq=False)
class DefectDecomposition:
    """Membership verdict plus the canonical defect decomposition.

    ``phi`` and ``psi`` satisfy defect ~ phi (x) K_0 + K_0 (x) psi with the
    normalization psi(0) = 0, so A = A_{phi + conj(psi)} when ``passed``.
    ``residual`` is the spectral norm of the defect compressed off K_0 in both
    slots, and ``tol`` is the absolute threshold the verdict used.
    """

    passed: bool
    residual: float
    tol: float
    phi: ModelVector
    psi: ModelVector

    def __bool__(self):
        return self.passed


def is_tto(space: ModelSpace, operator, tol: float | None = None) -> DefectDecomposition:
    """Defect membership test: is ``operator`` a truncated Toeplitz operator on K_u."""
    a = as_matrix(space, operator)
    if tol is None:
        tol = DEFAULT_TOL_FACTOR * spectral_norm(a)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    d = defect(space, a)
    k0 = space.k0.coords
    nk2 = float(np.real(np.vdot(k0, k0)))
    pperp = np.eye(space.dim) - np.outer(k0, np.conj(k0)) / nk2
    residual = spectral_norm(pperp @ d @ pperp)
    phi = space.vector(d @ k0 / nk2)
    psi_raw = d.conj().T @ k0 / nk2
    psi = space.vector(_project_off_k0(space, psi_raw))
    return DefectDecomposition(bool(residual <= tol), residual, float(tol), phi, psi)


def extract_symbol(space: ModelSpace, operator, tol: float | None = None) -> SymbolExpr:
    """Canonical K_u + conj(K_u) symbol of a truncated Toeplitz operator.

    The coanalytic part is normalized to vanish at 0, which pins down the
    otherwise one-parameter (phi, psi) ambiguity.  Raises NotATTO when the
    membership residual exceeds the tolerance.
    """
    membership = is_tto(space, operator, tol)
    if not membership.passed:
        raise NotATTO(
            f"defect residual {membership.residual:.3e} exceeds {membership.tol:.3e}")
    return SymbolExpr(analytic=membership.phi, coanalytic=membership.psi)


def symbols_equivalent(space: ModelSpace, first: SymbolExpr, second: SymbolExpr,
                       tol_factor: float = DEFAULT_TOL_FACTOR) -> bool:
    """Do two symbols induce the same operator on K_u.

    Compares the built matrices; for standard-form symbols the structural
    criterion (the difference must be gamma*K_0 analytically and
    -conj(gamma)*K_0 coanalytically) is cross-checked, and a hard disagreement
    raises NumericalFailure since it would mean an internal inconsistency.
    """
    a1 = build_tto(space, first).mat
    a2 = build_tto(space, second).mat
    scale = max(spectral_norm(a1), spectral_norm(a2), 1.0)
    matrices_agree = spectral_norm(a1 - a2) <= tol_factor * scale
    if first.is_standard_form and second.is_standard_form:
        structural = _structural_equivalence(space, first, second, tol_factor)
        if structural != matrices_agree:
            from .errors import NumericalFailure

            residual = spectral_norm(a1 - a2) / scale
            raise NumericalFailure(
                f"symbol equivalence routes disagree (matrix residual {residual:.3e})")
    return matrices_agree


def _structural_equivalence(space, first, second, tol_factor) -> bool:
    k0 = space.k0.coords
    zero = np.zeros(space.dim, dtype=complex)

    def parts(sym):
        ana = zero if sym.analytic is None else sym.analytic.coords
        coa = zero if sym.coanalytic is None else sym.coanalytic.coords
        return ana + sym.constant * k0, coa

    a1, c1 = parts(first)
    a2, c2 = parts(second)
    d_ana = a1 - a2
    d_coa = c1 - c2
    scale = max(np.linalg.norm(a1) + np.linalg.norm(c1),
                np.linalg.norm(a2) + np.linalg.norm(c2), 1.0)
    gamma = np.vdot(k0, d_ana) / np.vdot(k0, k0)
    r1 = np.linalg.norm(d_ana - gamma * k0)
    r2 = np.linalg.norm(d_coa + np.conj(gamma) * k0)
    # generous factor: this guards conventions, not borderline tolerances
    return bool(max(r1, r2) <= 100 * tol_factor * scale)


# -- structural identities ----------------------------------------------------


def c_symmetry_residual(space: ModelSpace, operator) -> float:
    """Residual of C A C = A^*, as || M conj(A) - A^H M || with M the conjugation matrix."""
    a = as_matrix(space, operator)
    m = space.conj_matrix
    return spectral_norm(m @ a.conj() - a.conj().T @ m)


@dataclass(frozen=True)
class KernelShiftReport:
    """Residuals of the four kernel shift identities at one point lambda.

    backward_kernel:            S^* K_lam = conj(lam) K_lam - conj(u(lam)) Kt_0
    forward_conjugate_kernel:   S Kt_lam  = lam Kt_lam - u(lam) K_0
    forward_kernel (lam != 0):  S K_lam   = (K_lam - K_0)/conj(lam)
    backward_conjugate_kernel (lam != 0): S^* Kt_lam = (Kt_lam - Kt_0)/lam
    """

    lam: complex
    residuals: dict

    @property
    def max_residual(self) -> float:
        return max(v for v in self.residuals.values() if v is not None)


def kernel_shift_identities(space: ModelSpace, lam) -> KernelShiftReport:
    lam = complex(lam)
    s = compressed_shift(space).mat
    k = space.kernel(lam).coords
    kt = space.conjugate_kernel(lam).coords
    k0 = space.k0.coords
    kt0 = space.kt0.coords
    ul = space.u.evaluate(lam)
    res = {
        "backward_kernel": float(
            np.linalg.norm(s.conj().T @ k - (np.conj(lam) * k - np.conj(ul) * kt0))),
        "forward_conjugate_kernel": float(
            np.linalg.norm(s @ kt - (lam * kt - ul * k0))),
        "forward_kernel": None,
        "backward_conjugate_kernel": None,
    }
    if abs(lam) > 1e-8:
        res["forward_kernel"] = float(
            np.linalg.norm(s @ k - (k - k0) / np.conj(lam)))
        res["backward_conjugate_kernel"] = float(
            np.linalg.norm(s.conj().T @ kt - (kt - kt0) / lam))
    return KernelShiftReport(lam, res)
