"""Crofoot transforms between model spaces and Clark unitary spectral theory.

For |alpha| < 1 the disc automorphism tau_alpha(w) = (w - alpha)/(1 - conj(alpha) w)
turns u into another finite Blaschke product u_alpha = tau_alpha(u) whose zeros
are the solutions of u = alpha.  Multiplication by
(1 - |alpha|^2)^{-1/2} (1 - conj(alpha) u) is a unitary map K_{u_alpha} -> K_u
(the Crofoot transform); it intertwines the generalized shift S_alpha with the
plain compressed shift on K_{u_alpha} and transports every analytic symbol phi
to the fraction symbol phi/(1 - alpha conj(u)).

For |alpha| = 1 the generalized shift S_alpha is unitary with spectrum the n
distinct solutions of u = alpha on the circle, eigenvectors the normalized
boundary kernels, and spectral weights 1/|u'(zeta_j)| (the atoms of the Clark
measure).  Unitary truncated Toeplitz operators are exactly the functions of
one S_alpha that are unimodular at its spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from .blaschke import BlaschkeProduct
from .classification import classify_type
from .errors import (
    AlphaNotUnimodular,
    AlphaOnCircle,
    NotATTO,
    NumericalFailure,
    QuadratureError,
)
from .model_space import ModelSpace, ModelVector, circle_grid, same_space
from .tto import (
    DEFAULT_TOL_FACTOR,
    SymbolExpr,
    TTOMatrix,
    as_matrix,
    build_from_grid_values,
    build_refined,
    build_tto,
    compressed_shift,
    generalized_shift,
    is_tto,
    spectral_norm,
)


def disc_automorphism(w, alpha):
    alpha = complex(alpha)
    return (w - alpha) / (1.0 - np.conj(alpha) * w)


def level_set_blaschke(u: BlaschkeProduct, alpha) -> BlaschkeProduct:
    """The Blaschke product u_alpha = (u - alpha)/(1 - conj(alpha) u).

    Zeros are the preimages u = alpha; the rotation is fitted at a boundary
    anchor point well separated from the zeros and then normalized to modulus
    one.
    """
    alpha = complex(alpha)
    if abs(alpha) >= 1.0 - 1e-12:
        raise AlphaOnCircle("level_set_blaschke requires |alpha| < 1")
    zeros = u.solve_equals(alpha)
    anchors = np.exp(2j * np.pi * np.arange(7) / 7)
    gaps = np.min(np.abs(anchors[:, None] - zeros[None, :]), axis=1)
    anchor = anchors[int(np.argmax(gaps))]
    target = disc_automorphism(u.evaluate(anchor), alpha)
    tentative = BlaschkeProduct(tuple(zeros), 1.0)
    rho = target / tentative.evaluate(anchor)
    if abs(abs(rho) - 1.0) > 1e-6:
        raise NumericalFailure(f"level-set rotation modulus {abs(rho):.6f} is not 1")
    return BlaschkeProduct(tuple(zeros), rho / abs(rho))


@dataclass(frozen=True, eq=False)
class CrofootTransform:
    """Unitary multiplication operator T: K_{u_alpha} -> K_u as a matrix."""

    alpha: complex
    source: ModelSpace
    target: ModelSpace
    mat: np.ndarray

    def map_to_target(self, operator) -> TTOMatrix:
        """Conjugate an operator on K_{u_alpha} into one on K_u."""
        a = as_matrix(self.source, operator)
        return TTOMatrix(self.mat @ a @ self.mat.conj().T, self.target)

    def map_to_source(self, operator) -> TTOMatrix:
        a = as_matrix(self.target, operator)
        return TTOMatrix(self.mat.conj().T @ a @ self.mat, self.source)

    def apply(self, f: ModelVector) -> ModelVector:
        if not same_space(f.space, self.source):
            raise NumericalFailure("Crofoot transform applied to a foreign vector")
        return self.target.vector(self.mat @ f.coords)


def crofoot(space: ModelSpace, alpha) -> CrofootTransform:
    """Build the Crofoot transform of K_u at interior alpha.

    The matrix pairs the source and target bases on a common grid (the finer
    of the two cached grids) and is checked unitary to 1e-9; the constructed
    u_alpha is checked pointwise against tau_alpha(u) to 1e-10.
    """
    alpha = complex(alpha)
    if abs(alpha) >= 1.0 - 1e-12:
        raise AlphaOnCircle("crofoot requires |alpha| < 1")
    u_alpha = level_set_blaschke(space.u, alpha)
    source = ModelSpace(u_alpha)
    n_common = max(space.quad_points, source.quad_points)
    if n_common == space.quad_points:
        grid, u_vals, e_tgt = space.grid, space.u_values, space.basis_values
    else:
        grid = circle_grid(n_common)
        u_vals = space.u.evaluate(grid)
        e_tgt = space.basis_values_at(grid)
    e_src = source.basis_values_at(grid) if n_common != source.quad_points else source.basis_values
    drift = float(np.max(np.abs(u_alpha.evaluate(grid) - disc_automorphism(u_vals, alpha))))
    if drift > 1e-10:
        raise NumericalFailure(f"u_alpha drifts {drift:.3e} from tau_alpha(u)")
    weight = (1.0 - abs(alpha) ** 2) ** -0.5 * (1.0 - np.conj(alpha) * u_vals)
    mat = e_tgt.conj() @ (weight * e_src).T / n_common
    unitarity = spectral_norm(mat.conj().T @ mat - np.eye(space.dim))
    if unitarity > 1e-9:
        raise QuadratureError(f"Crofoot matrix unitarity residual {unitarity:.3e}")
    return CrofootTransform(alpha, source, space, mat)


# -- fraction symbols -----------------------------------------------------------


def _poly_coeffs(phi) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(phi, dtype=complex))
    if arr.ndim != 1:
        raise ValueError("polynomial symbols must be 1-d ascending coefficients")
    return arr


def build_clark_fraction_tto(space: ModelSpace, phi, alpha) -> TTOMatrix:
    """A_{phi/(1 - alpha conj(u))} for analytic phi and interior alpha.

    For phi given as a K_u vector the equivalent standard symbol
    phi + alpha conj(S C phi) is built exactly; for polynomial coefficients
    the fraction is compressed on self-refining quadrature grids (its poles,
    the level set u = alpha and the reflected zeros of u, stay off the circle
    but can sit close to it).
    """
    alpha = complex(alpha)
    if abs(alpha) >= 1.0 - 1e-12:
        raise AlphaOnCircle("fraction symbols need |alpha| < 1")
    if isinstance(phi, ModelVector):
        s = compressed_shift(space).mat
        sc_phi = space.vector(s @ space.conjugate(phi).coords)
        return build_tto(space, SymbolExpr(analytic=phi,
                                           coanalytic=np.conj(alpha) * sc_phi))
    coeffs = _poly_coeffs(phi)
    return build_refined(
        space,
        lambda pts, uv: npoly.polyval(pts, coeffs) / (1.0 - alpha * np.conj(uv)))


def reduce_mod_level_set(space: ModelSpace, phi, alpha) -> np.ndarray:
    """Canonical representative of phi modulo the fraction-symbol kernel.

    Two analytic polynomials give the same fraction operator iff u_alpha
    divides their difference, so the representative is the polynomial
    remainder modulo the numerator of u_alpha.
    """
    coeffs = _poly_coeffs(phi)
    zeros = space.u.solve_equals(alpha)
    modulus = npoly.polyfromroots(zeros)
    if coeffs.size < modulus.size:
        return coeffs
    return npoly.polydiv(coeffs, modulus)[1]


@dataclass(frozen=True)
class IntertwineReport:
    """Residuals of the Crofoot intertwining checks for one analytic symbol."""

    residual_analytic: float
    residual_conjugate: float
    norm_gap: float

    @property
    def max_residual(self) -> float:
        return max(self.residual_analytic, self.residual_conjugate, self.norm_gap)


def crofoot_intertwine_check(transform: CrofootTransform, phi) -> IntertwineReport:
    """Verify T A^{u_alpha}_phi T^* = A^u_{phi/(1 - alpha conj(u))} and its adjoint form.

    The adjoint residual is computed from an independent quadrature of
    conj(phi)/(1 - conj(alpha) u), not by transposing the first identity, and
    the norm gap compares the two unitarily equivalent operator norms.
    """
    coeffs = _poly_coeffs(phi)
    src = transform.source
    tgt = transform.target
    a_src = build_from_grid_values(src, npoly.polyval(src.grid, coeffs))
    lhs = transform.map_to_target(a_src).mat
    rhs = build_clark_fraction_tto(tgt, coeffs, transform.alpha).mat
    scale = max(spectral_norm(rhs), 1.0)
    residual_analytic = spectral_norm(lhs - rhs) / scale
    abar = np.conj(transform.alpha)
    rhs_conj = build_refined(
        tgt,
        lambda pts, uv: np.conj(npoly.polyval(pts, coeffs)) / (1.0 - abar * uv)).mat
    lhs_conj = transform.map_to_target(a_src.adjoint()).mat
    residual_conjugate = spectral_norm(lhs_conj - rhs_conj) / scale
    norm_gap = abs(spectral_norm(a_src.mat) - spectral_norm(rhs)) / scale
    return IntertwineReport(residual_analytic, residual_conjugate, norm_gap)


def multiplicativity_check(space: ModelSpace, phi, psi, alpha) -> float:
    """Relative residual of A_{phi/(1-a conj u)} A_{psi/(1-a conj u)} = A_{phi psi/(1-a conj u)}."""
    phi = _poly_coeffs(phi)
    psi = _poly_coeffs(psi)
    a = build_clark_fraction_tto(space, phi, alpha).mat
    b = build_clark_fraction_tto(space, psi, alpha).mat
    ab = build_clark_fraction_tto(space, npoly.polymul(phi, psi), alpha).mat
    return spectral_norm(a @ b - ab) / max(spectral_norm(ab), 1.0)


def invertibility_criterion(space: ModelSpace, phi, alpha) -> bool:
    """Is A_{phi/(1 - alpha conj(u))} invertible: phi must not vanish where u = alpha."""
    margin = fraction_invertibility_margin(space, phi, alpha)
    coeffs = _poly_coeffs(phi)
    return bool(margin > 1e-8 * max(1.0, float(np.linalg.norm(coeffs))))


def fraction_invertibility_margin(space: ModelSpace, phi, alpha) -> float:
    """min |phi| over the zeros of u_alpha, the exact spectral gap of the fraction operator."""
    coeffs = _poly_coeffs(phi)
    zeros = space.u.solve_equals(alpha)
    return float(np.min(np.abs(npoly.polyval(zeros, coeffs))))


# -- Clark theory ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClarkData:
    """Spectral data of the Clark unitary S_alpha for unimodular alpha.

    ``points`` are the n distinct circle solutions of u = alpha, ``weights``
    the Clark measure atoms 1/|u'(zeta_j)|, and ``eigenvectors`` the unitary
    matrix whose columns are the normalized boundary kernels (phases fixed by
    making the first nonnegligible coordinate positive real).
    """

    alpha: complex
    points: np.ndarray
    weights: np.ndarray
    eigenvectors: np.ndarray
    space: ModelSpace

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def to_json(self):
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "points": [[z.real, z.imag] for z in self.points],
            "weights": list(map(float, self.weights)),
            "total_mass": self.total_mass,
        }


def clark_data(space: ModelSpace, alpha) -> ClarkData:
    """Diagonalize the Clark unitary S_alpha at unimodular alpha.

    Construction checks: eigenvector orthonormality and the eigen-relation
    S_alpha v_j = zeta_j v_j to 1e-8, and the total mass against
    ||K_0||^2 / |1 - conj(u(0)) alpha|^2 to 1e-8.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-10:
        raise AlphaNotUnimodular(f"|alpha| = {abs(alpha):.12f}")
    alpha /= abs(alpha)
    points = space.u.solve_equals(alpha)
    derivs = space.u.derivative(points)
    if np.min(np.abs(derivs)) < 1e-12:
        raise NumericalFailure("angular derivative vanished at a Clark point")
    weights = 1.0 / np.abs(derivs)
    n = space.dim
    vecs = np.empty((n, n), dtype=complex)
    for j, zeta in enumerate(points):
        v = space.kernel(zeta).coords.copy()
        v /= np.linalg.norm(v)
        lead = np.flatnonzero(np.abs(v) > 1e-12)[0]
        v *= np.conj(v[lead]) / abs(v[lead])
        vecs[:, j] = v
    ortho = spectral_norm(vecs.conj().T @ vecs - np.eye(n))
    s_alpha = generalized_shift(space, alpha).mat
    eigen = spectral_norm(s_alpha @ vecs - vecs * points[None, :])
    if ortho > 1e-8 or eigen > 1e-8:
        raise NumericalFailure(
            f"Clark spectral residuals ortho={ortho:.3e} eigen={eigen:.3e}")
    u0 = space.u.evaluate(0.0)
    expected_mass = float(np.real(np.vdot(space.k0.coords, space.k0.coords))) / abs(
        1.0 - np.conj(u0) * alpha) ** 2
    if abs(float(np.sum(weights)) - expected_mass) > 1e-8 * max(1.0, expected_mass):
        raise NumericalFailure("Clark measure mass disagrees with the kernel identity")
    return ClarkData(alpha, points, weights, vecs, space)


def functional_calculus(data: ClarkData, values) -> TTOMatrix:
    """Operator with the given eigenvalues at the Clark points: V diag(values) V^*."""
    vals = np.atleast_1d(np.asarray(values, dtype=complex))
    if vals.shape != (data.space.dim,):
        raise ValueError("one value per Clark point is required")
    v = data.eigenvectors
    return TTOMatrix(v @ (vals[:, None] * v.conj().T), data.space)


@dataclass(frozen=True, eq=False)
class UnitaryClassification:
    """Verdict of the unitary classification: either not unitary, or the Clark data.

    For a unitary truncated Toeplitz operator ``alpha`` is the (unimodular)
    type, ``values`` the unimodular eigenvalues at the Clark points of
    S_alpha, and ``clark`` the spectral data used.  Scalars report
    ``scalar=True`` with the conventional alpha = 1 basis.
    """

    unitary: bool
    scalar: bool = False
    alpha: complex | None = None
    values: np.ndarray | None = None
    clark: ClarkData | None = None
    residual: float = 0.0


def classify_unitary(space: ModelSpace, operator,
                     tol_factor: float = DEFAULT_TOL_FACTOR) -> UnitaryClassification:
    """Classify a unitary truncated Toeplitz operator through Clark spectral data.

    Checks A^* A = I, classifies the type (which the unitary theorem forces to
    be unimodular or scalar), and reads off the eigenvalues in the Clark
    eigenbasis of S_alpha, asserting they are unimodular to 1e-8.
    """
    a = as_matrix(space, operator)
    if not is_tto(space, a).passed:
        raise NotATTO("classify_unitary input fails the membership test")
    gap = spectral_norm(a.conj().T @ a - np.eye(space.dim))
    if gap > tol_factor * max(1.0, spectral_norm(a) ** 2):
        return UnitaryClassification(False, residual=gap)
    tag = classify_type(space, a, tol_factor)
    if tag.kind == "none" or tag.kind == "infinity":
        raise NumericalFailure(f"unitary operator classified as {tag.kind}")
    if tag.is_scalar:
        if abs(abs(tag.value) - 1.0) > 1e-8:
            raise NumericalFailure("unitary scalar with non-unimodular value")
        alpha = 1.0 + 0j
    else:
        if abs(abs(tag.value) - 1.0) > 1e-6:
            raise NumericalFailure(
                f"unitary operator of non-unimodular type |alpha|={abs(tag.value):.8f}")
        alpha = tag.value / abs(tag.value)
    data = clark_data(space, alpha)
    diag = data.eigenvectors.conj().T @ a @ data.eigenvectors
    off = spectral_norm(diag - np.diag(np.diagonal(diag)))
    values = np.diagonal(diag).copy()
    if off > 1e-8 * max(1.0, spectral_norm(a)) or np.max(np.abs(np.abs(values) - 1.0)) > 1e-8:
        raise NumericalFailure("unitary operator failed to diagonalize unimodularly")
    return UnitaryClassification(True, tag.is_scalar, alpha, values, data, gap)
