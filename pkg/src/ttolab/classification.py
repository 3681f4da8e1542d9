"""Type classification of truncated Toeplitz operators and the product algebra.

An operator A = A_{phi_1 + conj(phi_2)} has type alpha when its symbol can be
rewritten as phi + alpha conj(S C phi) + c; equivalently when
conj(alpha) S C phi_1 - phi_2 is a multiple of K_0.  Types stratify the
non-scalar operators into NoType, exactly one finite or infinite type, or
(scalars) every type.  The product, inverse and commutant theorems verified
here all pivot on that stratification:

* A B is a truncated Toeplitz operator iff one factor is scalar or both share
  a type alpha, in which case the product has type alpha as well.
* An invertible operator's inverse is a truncated Toeplitz operator iff the
  operator has a type, and then the type is preserved.
* For |alpha| <= 1, having type alpha is the same as commuting with the
  generalized shift S_alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotATTO, NumericalFailure, OutsideClosedDisc, SingularMatrix
from .model_space import ModelSpace
from .tto import (
    DEFAULT_TOL_FACTOR,
    SymbolExpr,
    TTOMatrix,
    as_matrix,
    build_tto,
    compressed_shift,
    extract_symbol,
    generalized_shift,
    is_tto,
    outer,
    spectral_norm,
    _project_off_k0,
)


@dataclass(frozen=True)
class TypeTag:
    """Classification verdict: scalar, one type (finite alpha or infinity), or none.

    ``value`` holds alpha for kind "alpha" and the scalar constant for kind
    "scalar"; ``residual`` is the parallelism diagnostic of the membership
    test that produced the verdict.
    """

    kind: str
    value: complex | None = None
    residual: float = 0.0

    def __post_init__(self):
        if self.kind not in ("scalar", "alpha", "infinity", "none"):
            raise ValueError(f"unknown type kind {self.kind!r}")

    @property
    def is_scalar(self) -> bool:
        return self.kind == "scalar"

    @property
    def is_typed(self) -> bool:
        return self.kind in ("scalar", "alpha", "infinity")

    def compatible_with(self, other: "TypeTag", tol: float = 1e-6) -> bool:
        """Do the two verdicts admit a common type (scalars match anything typed)."""
        if not (self.is_typed and other.is_typed):
            return False
        if self.is_scalar or other.is_scalar:
            return True
        if self.kind != other.kind:
            return False
        if self.kind == "infinity":
            return True
        a, b = self.value, other.value
        return abs(a - b) <= tol * (1.0 + abs(a) + abs(b))

    def to_json(self):
        val = None if self.value is None else [self.value.real, self.value.imag]
        return {"type": self.kind, "value": val, "residuals": {"parallelism": self.residual}}


def scalar_tag(c) -> TypeTag:
    return TypeTag("scalar", complex(c))


def alpha_tag(alpha, residual: float = 0.0) -> TypeTag:
    return TypeTag("alpha", complex(alpha), residual)


def infinity_tag(residual: float = 0.0) -> TypeTag:
    return TypeTag("infinity", None, residual)


def no_type_tag(residual: float) -> TypeTag:
    return TypeTag("none", None, residual)


def _classification_data(space: ModelSpace, operator):
    """Shared preprocessing: canonical symbol parts and their K_0-quotient images."""
    membership = is_tto(space, operator, None)
    if not membership.passed:
        raise NotATTO(
            f"defect residual {membership.residual:.3e} exceeds {membership.tol:.3e}")
    phi1, phi2 = membership.phi, membership.psi
    s = compressed_shift(space).mat
    sc_phi1 = space.vector(s @ space.conjugate(phi1).coords)
    v1 = _project_off_k0(space, sc_phi1.coords)
    v2 = phi2.coords  # already normalized off K_0
    return phi1, phi2, v1, v2


def classify_type(space: ModelSpace, operator,
                  tol_factor: float = DEFAULT_TOL_FACTOR) -> TypeTag:
    """Classify a truncated Toeplitz operator by its type.

    Returns Scalar for multiples of the identity, Type(0) for purely analytic
    symbols, Type(infinity) for purely coanalytic ones, Type(alpha) when the
    K_0-quotient images of S C phi_1 and phi_2 are parallel with ratio
    conj(alpha), and NoType with the parallelism residual otherwise.  Raises
    NotATTO when the membership test fails.
    """
    if space.dim == 1:
        a = as_matrix(space, operator)
        return scalar_tag(a[0, 0])
    phi1, phi2, v1, v2 = _classification_data(space, operator)
    k0 = space.k0.coords
    scale = phi1.norm() + phi2.norm()
    if scale == 0.0:
        return scalar_tag(0.0)
    tol = tol_factor * scale
    off_k0 = np.linalg.norm(_project_off_k0(space, phi1.coords))
    if off_k0 <= tol and phi2.norm() <= tol:
        c = np.vdot(k0, phi1.coords) / np.vdot(k0, k0)
        return scalar_tag(c)
    n1 = float(np.linalg.norm(v1))
    n2 = float(np.linalg.norm(v2))
    if n1 <= tol:
        return infinity_tag(n1)
    if n2 <= tol:
        return alpha_tag(0.0, n2)
    alpha_bar = np.vdot(v1, v2) / np.vdot(v1, v1)
    residual = float(np.linalg.norm(v2 - alpha_bar * v1))
    if residual <= tol_factor * (n1 + n2):
        return alpha_tag(np.conj(alpha_bar), residual)
    return no_type_tag(residual)


def type_membership_residual(space: ModelSpace, operator, alpha) -> float:
    """Relative residual of the type-alpha membership test (alpha=None means infinity).

    Normalized by the total symbol scale, not by the tested components alone,
    so that an exactly satisfied constraint measured against rounding noise
    still reports as zero (an analytic symbol tested against alpha = 0 has
    both sides of the constraint at machine epsilon).
    """
    phi1, phi2, v1, v2 = _classification_data(space, operator)
    scale = phi1.norm() + phi2.norm() + 1e-300
    if alpha is None:
        return float(np.linalg.norm(v1)) / scale
    alpha = complex(alpha)
    return float(np.linalg.norm(np.conj(alpha) * v1 - v2)) / ((1.0 + abs(alpha)) * scale)


def type_of_adjoint(tag: TypeTag) -> TypeTag:
    """Type of A^* given the type of A: alpha maps to conj(1/alpha), 0 <-> infinity."""
    if tag.kind == "scalar":
        return scalar_tag(np.conj(tag.value))
    if tag.kind == "infinity":
        return alpha_tag(0.0, tag.residual)
    if tag.kind == "alpha":
        if tag.value == 0:
            return infinity_tag(tag.residual)
        return alpha_tag(np.conj(1.0 / tag.value), tag.residual)
    return tag


# -- products -----------------------------------------------------------------


def _standardize(space: ModelSpace, symbol: SymbolExpr) -> SymbolExpr:
    if symbol.is_standard_form:
        return symbol
    return extract_symbol(space, build_tto(space, symbol))


def product_rank2_residual(space: ModelSpace, first: SymbolExpr,
                           second: SymbolExpr) -> float:
    """Relative residual of the rank-two product test for A_first A_second.

    The product is a truncated Toeplitz operator iff
    phi_1 (x) psi_2 - (S C phi_2) (x) (S C psi_1) can be written
    Phi_0 (x) K_0 + K_0 (x) Psi_0, i.e. iff it vanishes after compressing
    both slots off K_0.  Constants fold into the analytic part as multiples
    of K_0, so the residual does not depend on the chosen representation.
    """
    first = _standardize(space, first)
    second = _standardize(space, second)
    k0 = space.k0
    zero = space.zero_vector()

    def parts(sym):
        ana = (sym.analytic or zero) + sym.constant * k0
        coa = sym.coanalytic or zero
        return ana, coa

    phi1, phi2 = parts(first)
    psi1, psi2 = parts(second)
    s = compressed_shift(space).mat
    sc_phi2 = space.vector(s @ space.conjugate(phi2).coords)
    sc_psi1 = space.vector(s @ space.conjugate(psi1).coords)
    m = outer(phi1, psi2) - outer(sc_phi2, sc_psi1)
    nk2 = float(np.real(np.vdot(k0.coords, k0.coords)))
    pperp = np.eye(space.dim) - np.outer(k0.coords, np.conj(k0.coords)) / nk2
    residual = spectral_norm(pperp @ m @ pperp)
    scale = phi1.norm() * psi2.norm() + sc_phi2.norm() * sc_psi1.norm() + 1.0
    return residual / scale


def product_rank2_condition(space: ModelSpace, first: SymbolExpr, second: SymbolExpr,
                            tol_factor: float = DEFAULT_TOL_FACTOR) -> bool:
    """Rank-two test deciding whether A_first A_second is a truncated Toeplitz operator."""
    return bool(product_rank2_residual(space, first, second) <= tol_factor)


@dataclass(frozen=True)
class ProductClassification:
    """Verdict of the product theorem for a pair of truncated Toeplitz operators.

    ``kind`` is "not_tto", "trivial" (a scalar factor), or "both_type" with
    ``alpha`` the shared type tag of the factors.
    """

    kind: str
    alpha: TypeTag | None
    left: TypeTag
    right: TypeTag
    product: TypeTag | None
    membership_residual: float


def product_classification(space: ModelSpace, left, right,
                           tol_factor: float = DEFAULT_TOL_FACTOR) -> ProductClassification:
    """Classify A B per the product theorem, cross-checking every branch.

    Raises NotATTO when either factor fails membership and NumericalFailure
    when the numerical verdicts contradict the theorem (a trivial or shared
    type product failing membership, or a products-of-distinct-types passing).
    """
    a = as_matrix(space, left)
    b = as_matrix(space, right)
    for mat, side in ((a, "left"), (b, "right")):
        if not is_tto(space, mat).passed:
            raise NotATTO(f"{side} factor fails the membership test")
    tag_a = classify_type(space, a, tol_factor)
    tag_b = classify_type(space, b, tol_factor)
    prod = a @ b
    membership = is_tto(space, prod)
    if membership.passed:
        tag_p = classify_type(space, prod, tol_factor)
        if tag_a.is_scalar or tag_b.is_scalar:
            return ProductClassification("trivial", None, tag_a, tag_b, tag_p,
                                         membership.residual)
        if not tag_a.compatible_with(tag_b):
            raise NumericalFailure(
                "product passed membership but factors share no type")
        shared = tag_a if not tag_a.is_scalar else tag_b
        if not (tag_p.is_scalar or tag_p.compatible_with(shared)):
            raise NumericalFailure("product type differs from the shared factor type")
        return ProductClassification("both_type", shared, tag_a, tag_b, tag_p,
                                     membership.residual)
    if tag_a.is_scalar or tag_b.is_scalar:
        raise NumericalFailure("scalar-factor product failed the membership test")
    if tag_a.compatible_with(tag_b):
        raise NumericalFailure("shared-type product failed the membership test")
    return ProductClassification("not_tto", None, tag_a, tag_b, None,
                                 membership.residual)


# -- commutant ----------------------------------------------------------------


def commutant_residual(space: ModelSpace, operator, alpha) -> float:
    """Relative norm of the commutator with the generalized shift S_alpha."""
    a = as_matrix(space, operator)
    s_alpha = generalized_shift(space, alpha).mat
    comm = spectral_norm(a @ s_alpha - s_alpha @ a)
    return comm / max(spectral_norm(a), 1e-300)


def commutant_check(space: ModelSpace, operator, alpha,
                    tol_factor: float = DEFAULT_TOL_FACTOR) -> bool:
    """Does the operator commute with the generalized shift S_alpha (|alpha| <= 1)."""
    return bool(commutant_residual(space, operator, alpha) <= tol_factor)


def commutant_symbol(space: ModelSpace, operator, alpha) -> SymbolExpr:
    """Symbol of an operator in the commutant of S_alpha.

    For A commuting with S_alpha the symbol is phi + alpha conj(S C phi) with
    phi = A K_0 / (1 - alpha conj(u(0))).
    """
    a = as_matrix(space, operator)
    alpha = complex(alpha)
    u0 = space.u.evaluate(0.0)
    phi = space.vector(a @ space.k0.coords / (1.0 - alpha * np.conj(u0)))
    s = compressed_shift(space).mat
    sc_phi = space.vector(s @ space.conjugate(phi).coords)
    return SymbolExpr(analytic=phi, coanalytic=np.conj(alpha) * sc_phi)


# -- rank one -----------------------------------------------------------------


def rank_one_interior(space: ModelSpace, lam) -> tuple[TTOMatrix, TypeTag]:
    """Rank-one operator Kt_lam (x) K_lam for interior lambda; it has type u(lambda).

    Its symbol is u/(z - lambda), and it squares to u'(lambda) times itself.
    """
    lam = complex(lam)
    if abs(lam) >= 1.0 - 1e-12:
        raise OutsideClosedDisc("rank_one_interior needs |lambda| < 1")
    kt = space.conjugate_kernel(lam)
    k = space.kernel(lam)
    op = TTOMatrix(outer(kt, k), space)
    tag = classify_type(space, op)
    _assert_rank_one_type(space, tag, space.u.evaluate(lam))
    return op, tag


def rank_one_boundary(space: ModelSpace, zeta) -> tuple[TTOMatrix, TypeTag]:
    """Self-adjoint rank-one operator K_zeta (x) K_zeta for |zeta| = 1; type u(zeta)."""
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-10:
        raise OutsideClosedDisc("rank_one_boundary needs |zeta| = 1")
    zeta /= abs(zeta)
    k = space.kernel(zeta)
    op = TTOMatrix(outer(k, k), space)
    tag = classify_type(space, op)
    _assert_rank_one_type(space, tag, space.u.evaluate(zeta))
    return op, tag


def _assert_rank_one_type(space, tag, expected):
    if space.dim == 1 or tag.is_scalar:
        return
    if tag.kind != "alpha" or abs(tag.value - expected) > 1e-6 * (1.0 + abs(expected)):
        raise NumericalFailure(
            f"rank-one operator classified {tag.kind}/{tag.value} instead of {expected}")


# -- inverses and algebras ------------------------------------------------------


@dataclass(frozen=True)
class InverseTypeReport:
    """Outcome of the inverse theorem check on one invertible operator."""

    input_tag: TypeTag
    inverse_is_tto: bool
    inverse_tag: TypeTag | None
    consistent: bool
    membership_residual: float


def inverse_type_check(space: ModelSpace, operator,
                       tol_factor: float = DEFAULT_TOL_FACTOR) -> InverseTypeReport:
    """Verify that the inverse is a truncated Toeplitz operator iff the input is typed.

    When both are typed the tags must agree.  Raises SingularMatrix when the
    smallest singular value is below 1e-8 times the norm, NotATTO when the
    input fails membership.
    """
    a = as_matrix(space, operator)
    svals = np.linalg.svd(a, compute_uv=False)
    if svals[-1] <= 1e-8 * svals[0]:
        raise SingularMatrix(f"condition {svals[0] / max(svals[-1], 1e-300):.3e}")
    if not is_tto(space, a).passed:
        raise NotATTO("inverse_type_check input fails the membership test")
    tag = classify_type(space, a, tol_factor)
    inv = np.linalg.inv(a)
    membership = is_tto(space, inv)
    if membership.passed:
        inv_tag = classify_type(space, inv, tol_factor)
        consistent = tag.is_typed and tag.compatible_with(inv_tag)
        if tag.kind == "alpha" and inv_tag.kind == "alpha":
            consistent = consistent and abs(tag.value - inv_tag.value) <= 1e-6 * (
                1.0 + abs(tag.value))
    else:
        inv_tag = None
        consistent = not tag.is_typed
    return InverseTypeReport(tag, membership.passed, inv_tag, consistent,
                             membership.residual)


@dataclass(frozen=True)
class AlgebraReport:
    """Containment verdict for a family of truncated Toeplitz operators.

    ``kind`` is "scalar_algebra" when every element is scalar, "subalgebra"
    when all non-scalar elements share type alpha and all pairwise products
    stay truncated Toeplitz, and "not_algebra_candidate" otherwise with the
    violating pair or element recorded.
    """

    kind: str
    alpha: TypeTag | None
    violation: str | None = None


def algebra_containment(space: ModelSpace, operators,
                        tol_factor: float = DEFAULT_TOL_FACTOR) -> AlgebraReport:
    """Check whether a family can sit inside one maximal algebra B_alpha."""
    mats = [as_matrix(space, op) for op in operators]
    tags = []
    for i, mat in enumerate(mats):
        if not is_tto(space, mat).passed:
            raise NotATTO(f"element {i} fails the membership test")
        tags.append(classify_type(space, mat, tol_factor))
    non_scalar = [(i, t) for i, t in enumerate(tags) if not t.is_scalar]
    if not non_scalar:
        return AlgebraReport("scalar_algebra", None)
    shared = non_scalar[0][1]
    if shared.kind == "none":
        return AlgebraReport("not_algebra_candidate", None,
                             f"element {non_scalar[0][0]} has no type")
    for i, t in non_scalar[1:]:
        if t.kind == "none" or not shared.compatible_with(t):
            return AlgebraReport("not_algebra_candidate", shared,
                                 f"element {i} has incompatible type {t.kind}")
    for i in range(len(mats)):
        for j in range(len(mats)):
            if not is_tto(space, mats[i] @ mats[j]).passed:
                return AlgebraReport("not_algebra_candidate", shared,
                                     f"product of elements {i} and {j} leaves the class")
    return AlgebraReport("subalgebra", shared)
