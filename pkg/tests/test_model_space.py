import numpy as np
import pytest

from ttolab import (
    BlaschkeProduct,
    GridMismatch,
    ModelSpace,
    OutsideClosedDisc,
    SpaceMismatch,
    circle_grid,
    circle_inner,
)


def test_monomial_basis_for_power_of_z(z3):
    # for u = z^3 the Takenaka-Malmquist basis is 1, z, z^2
    pts = np.array([0.3, 0.5j, -0.2 + 0.4j])
    vals = z3.basis_values_at(pts)
    for k in range(3):
        assert np.allclose(vals[k], pts**k, atol=1e-14)


def test_first_basis_function_is_normalized_kernel():
    # e_0(z) = sqrt(1-|a|^2)/(1 - conj(a) z)
    sp = ModelSpace(BlaschkeProduct((0.5,)))
    assert sp.tm_basis_value(0, 0.0) == pytest.approx(np.sqrt(0.75))
    assert sp.tm_basis_value(0, 0.5) == pytest.approx(np.sqrt(0.75) / 0.75)


def test_gram_matrix_against_independent_quadrature(pair_space):
    # re-do the inner products on a coarser unrelated grid size
    n = 3000
    grid = circle_grid(n)
    basis = pair_space.basis_values_at(grid)
    gram = basis.conj() @ basis.T / n
    assert np.max(np.abs(gram - np.eye(pair_space.dim))) < 1e-12


def test_gram_residual_is_small(pair_space, triple_space):
    assert pair_space.gram_residual < 1e-12
    assert triple_space.gram_residual < 1e-12


def test_quadrature_auto_doubles_for_near_boundary_zero():
    sp = ModelSpace(BlaschkeProduct((0.9,)))
    assert sp.quad_points == 512
    assert sp.gram_residual < 1e-12
    # the default for low degree stays at the floor
    assert ModelSpace(BlaschkeProduct((0.0, 0.0))).quad_points == 256


def test_reproducing_property(z2):
    f = z2.vector([1.0, 1.0])  # f(z) = 1 + z
    k = z2.kernel(0.4)
    assert f.inner(k) == pytest.approx(1.4)


def test_reproducing_property_random(pair_space, rng):
    for _ in range(25):
        coords = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        f = pair_space.vector(coords)
        lam = 0.85 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        assert f.inner(pair_space.kernel(lam)) == pytest.approx(f.evaluate(lam), abs=1e-10)


def test_kernel_coords_for_monomial(z2):
    # K_0 = 1 and conjugate kernel at 0.5 is (z^2 - 0.25)/(z - 0.5) = z + 0.5
    assert np.allclose(z2.k0.coords, [1.0, 0.0], atol=1e-14)
    assert np.allclose(z2.conjugate_kernel(0.5).coords, [0.5, 1.0], atol=1e-12)


def test_conjugate_kernel_difference_quotient(pair_space, rng):
    u = pair_space.u
    for _ in range(10):
        lam = 0.8 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        kt = pair_space.conjugate_kernel(lam)
        z = 0.7 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        expected = (u.evaluate(z) - u.evaluate(lam)) / (z - lam)
        assert kt.evaluate(z) == pytest.approx(expected, abs=1e-10)


def test_conjugation_on_monomials(z2):
    # C(e_k) = z^(1-k) on K_{z^2}: swaps the basis
    assert np.allclose(z2.conjugate(z2.vector([1, 0])).coords, [0, 1], atol=1e-13)
    assert np.allclose(z2.conjugate(z2.vector([0, 1])).coords, [1, 0], atol=1e-13)
    # antilinear: C(i f) = -i C(f)
    assert np.allclose(z2.conjugate(z2.vector([1j, 0])).coords, [0, -1j], atol=1e-13)


def test_conjugation_involution_and_isometry(triple_space, rng):
    for _ in range(20):
        f = triple_space.vector(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        cf = triple_space.conjugate(f)
        assert np.allclose(triple_space.conjugate(cf).coords, f.coords, atol=1e-11)
        assert cf.norm() == pytest.approx(f.norm())


def test_conjugation_matrix_symmetric_unitary(pair_space, triple_space):
    for sp in (pair_space, triple_space):
        m = sp.conj_matrix
        assert np.max(np.abs(m - m.T)) < 1e-11
        assert np.max(np.abs(m @ m.conj().T - np.eye(sp.dim))) < 1e-11


def test_conjugation_pairing(pair_space, rng):
    # (C f)(lam) = <conjugate_kernel(lam), f>
    for _ in range(10):
        f = pair_space.vector(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        lam = 0.8 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        cf = pair_space.conjugate(f)
        assert cf.evaluate(lam) == pytest.approx(
            pair_space.conjugate_kernel(lam).inner(f), abs=1e-10)


def test_boundary_kernel_norm_is_derivative_modulus(triple_space, rng):
    for _ in range(10):
        zeta = np.exp(2j * np.pi * rng.uniform())
        k = triple_space.kernel(zeta)
        assert k.norm() ** 2 == pytest.approx(abs(triple_space.u.derivative(zeta)), rel=1e-9)


def test_kernel_outside_disc_rejected(z2):
    with pytest.raises(OutsideClosedDisc):
        z2.kernel(1.5)


def test_grid_mismatch(z2):
    with pytest.raises(GridMismatch):
        circle_inner(np.ones(8), np.ones(16))


def test_vector_arithmetic(z2):
    f = z2.vector([1.0, 2.0])
    g = z2.vector([0.0, 1j])
    assert np.allclose((f + g).coords, [1.0, 2.0 + 1j])
    assert np.allclose((f - g).coords, [1.0, 2.0 - 1j])
    assert np.allclose((2j * f).coords, [2j, 4j])
    assert np.allclose((-f).coords, [-1.0, -2.0])
    assert f.norm() == pytest.approx(np.sqrt(5.0))


def test_space_mismatch(z2, z3):
    f = z2.vector([1.0, 0.0])
    g = z3.vector([1.0, 0.0, 0.0])
    with pytest.raises(SpaceMismatch):
        f.inner(g)
    with pytest.raises(SpaceMismatch):
        _ = f + g
    with pytest.raises(SpaceMismatch):
        z3.conjugate(f)


def test_vector_shape_validated(z2):
    with pytest.raises(ValueError):
        z2.vector([1.0, 0.0, 0.0])


def test_grid_values_match_pointwise_evaluation(pair_space):
    f = pair_space.vector([1.0, -2j])
    assert np.allclose(f.grid_values(), f.evaluate(pair_space.grid), atol=1e-13)
