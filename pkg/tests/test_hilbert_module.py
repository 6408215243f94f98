"""
Tests for free Hilbert C*-modules and φ-maps
"""
import unittest

import numpy as np
from numpy.testing import assert_allclose

from stinespring_dilator.core.cstar_algebra import (
    MatrixAlgebra,
    apply_cp,
    choi_rank,
    identity_map,
    is_completely_positive,
)
from stinespring_dilator.core.hilbert_module import (
    FreeModule,
    apply_phi,
    gen_cp_map,
    gen_phi_map,
    inner_product,
    module_action,
    module_norm,
    phi_morphism_check,
    verify_phi_map,
)
from stinespring_dilator.core.numerics import operator_norm
from stinespring_dilator.core.schur_example import schur_phi_map
from stinespring_dilator.errors import DimensionTooSmall, InvalidRank, ModuleMismatch, ShapeMismatch

A2 = MatrixAlgebra(2)
E = FreeModule(A2, 2)


def _unit(p, q):
    return A2.unit(p, q)


def _random_element(module, rng):
    n = module.n
    return module.element(*[
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(module.k)
    ])


class TestFreeModule(unittest.TestCase):
    def test_basis_indexing(self):
        self.assertEqual(E.basis_size, 8)
        self.assertEqual(E.basis_index(1, 0, 1), 5)
        self.assertEqual(E.basis_label(5), (1, 0, 1))
        x = E.basis_element(5)
        assert_allclose(x.components[0], np.zeros((2, 2)))
        assert_allclose(x.components[1], _unit(0, 1))

    def test_component_count_checked(self):
        with self.assertRaises(ShapeMismatch):
            E.element(np.eye(2))

    def test_invalid_rank(self):
        with self.assertRaises(ValueError):
            FreeModule(A2, 0)


class TestInnerProduct(unittest.TestCase):
    def test_examples(self):
        zero = np.zeros((2, 2))
        assert_allclose(inner_product(E.element(np.eye(2), zero), E.element(np.eye(2), zero)),
                        np.eye(2))
        x = E.element(_unit(0, 0), _unit(0, 0))
        assert_allclose(inner_product(x, x), 2 * _unit(0, 0))
        x = E.element(_unit(0, 1), zero)
        y = E.element(_unit(0, 0), zero)
        assert_allclose(inner_product(x, y), _unit(1, 0))

    def test_module_mismatch(self):
        other = FreeModule(A2, 1)
        with self.assertRaises(ModuleMismatch):
            inner_product(E.zero(), other.zero())

    def test_module_compatibility(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            x, y = _random_element(E, rng), _random_element(E, rng)
            a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            assert_allclose(inner_product(x, module_action(y, a)), inner_product(x, y) @ a,
                            atol=1e-9)
            assert_allclose(inner_product(module_action(x, a), y),
                            a.conj().T @ inner_product(x, y), atol=1e-9)
            assert_allclose(inner_product(x, y).conj().T, inner_product(y, x), atol=1e-12)

    def test_positivity(self):
        rng = np.random.default_rng(32)
        for _ in range(5):
            x = _random_element(E, rng)
            eigenvalues = np.linalg.eigvalsh(inner_product(x, x))
            self.assertGreaterEqual(eigenvalues[0], -1e-10 * max(1.0, eigenvalues[-1]))


class TestModuleAction(unittest.TestCase):
    def test_examples(self):
        rng = np.random.default_rng(4)
        x = _random_element(E, rng)
        for a, b in zip(module_action(x, np.eye(2)).components, x.components):
            assert_allclose(a, b)
        for c in module_action(x, np.zeros((2, 2))).components:
            assert_allclose(c, np.zeros((2, 2)))
        y = module_action(E.element(_unit(0, 0), _unit(1, 0)), _unit(0, 1))
        assert_allclose(y.components[0], _unit(0, 1))
        assert_allclose(y.components[1], _unit(1, 1))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeMismatch):
            module_action(E.zero(), np.eye(3))


class TestModuleNorm(unittest.TestCase):
    def test_examples(self):
        zero = np.zeros((2, 2))
        self.assertAlmostEqual(module_norm(E.element(np.eye(2), zero)), 1.0)
        self.assertEqual(module_norm(E.zero()), 0.0)
        self.assertAlmostEqual(module_norm(E.element(_unit(0, 0), _unit(0, 0))), np.sqrt(2))


class TestSchurPhiMap(unittest.TestCase):
    def setUp(self):
        self.phi_map = schur_phi_map()

    def test_apply_at_identity_component(self):
        out = apply_phi(self.phi_map, E.element(np.eye(2), np.zeros((2, 2))))
        expected = np.zeros((8, 2))
        expected[0:2] = np.sqrt(3) / 2 * np.eye(2)
        expected[4:6] = np.diag([0.5, -0.5])
        assert_allclose(out, expected, atol=1e-15)

    def test_apply_at_zero(self):
        assert_allclose(apply_phi(self.phi_map, E.zero()), np.zeros((8, 2)))

    def test_apply_at_second_component(self):
        out = apply_phi(self.phi_map, E.element(np.zeros((2, 2)), _unit(0, 0)))
        expected = np.zeros((8, 2))
        expected[2, 0] = np.sqrt(3) / 2
        expected[6, 0] = 0.5
        assert_allclose(out, expected, atol=1e-15)

    def test_module_mismatch(self):
        with self.assertRaises(ModuleMismatch):
            apply_phi(self.phi_map, FreeModule(A2, 1).zero())

    def test_is_phi_map(self):
        verdict = verify_phi_map(self.phi_map)
        self.assertTrue(verdict.verdict)
        self.assertLessEqual(verdict.max_residual, 1e-12)

    def test_perturbed_is_rejected(self):
        image = np.array(self.phi_map.basis_images[0])
        image[0, 0] += 0.1
        verdict = verify_phi_map(self.phi_map.with_image(0, image))
        self.assertFalse(verdict.verdict)
        self.assertGreater(verdict.max_residual, 0.1)

    def test_not_a_phi_morphism(self):
        # φ is a Schur multiplier, not a homomorphism
        self.assertFalse(phi_morphism_check(self.phi_map).phi_is_morphism)


class TestGenerators(unittest.TestCase):
    def test_scalar_cp_map(self):
        phi = gen_cp_map(1, 1, 1, seed=0)
        c = phi.images[0][0, 0]
        self.assertGreater(c.real, 0)
        self.assertAlmostEqual(c.imag, 0.0, delta=1e-15)

    def test_cp_map_is_cp_with_requested_rank(self):
        for seed in range(5):
            phi = gen_cp_map(2, 3, 3, seed)
            self.assertTrue(is_completely_positive(phi).verdict)
            self.assertEqual(choi_rank(phi), 3)

    def test_cp_map_deterministic(self):
        a, b = gen_cp_map(2, 2, 2, seed=42), gen_cp_map(2, 2, 2, seed=42)
        for x, y in zip(a.images, b.images):
            self.assertTrue(np.array_equal(x, y))

    def test_invalid_rank(self):
        with self.assertRaises(InvalidRank):
            gen_cp_map(2, 2, 5, seed=0)
        with self.assertRaises(InvalidRank):
            gen_cp_map(2, 2, 0, seed=0)

    def test_scalar_phi_map_is_unimodular(self):
        phi_map = gen_phi_map(identity_map(MatrixAlgebra(1)), 1, 1, seed=3)
        self.assertAlmostEqual(abs(phi_map.basis_images[0][0, 0]), 1.0, places=12)

    def test_phi_map_valid_and_deterministic(self):
        for seed in range(5):
            phi = gen_cp_map(2, 2, 2, seed)
            a = gen_phi_map(phi, 2, 9, seed)
            b = gen_phi_map(phi, 2, 9, seed)
            verdict = verify_phi_map(a)
            self.assertTrue(verdict.verdict)
            scale = max(1.0, max(operator_norm(m) ** 2 for m in a.basis_images))
            self.assertLessEqual(verdict.max_residual, 1e-9 * scale)
            for x, y in zip(a.basis_images, b.basis_images):
                self.assertTrue(np.array_equal(x, y))

    def test_dimension_too_small(self):
        phi = gen_cp_map(2, 2, 2, seed=0)
        with self.assertRaises(DimensionTooSmall) as ctx:
            gen_phi_map(phi, 2, 2, seed=0)
        self.assertIn("8", str(ctx.exception))

    def test_linearity_and_cauchy_schwarz(self):
        rng = np.random.default_rng(55)
        phi = gen_cp_map(2, 2, 2, seed=5)
        phi_map = gen_phi_map(phi, 2, 8, seed=6)
        bound = np.sqrt(operator_norm(apply_cp(phi, np.eye(2))))
        for _ in range(5):
            x, y = _random_element(phi_map.module, rng), _random_element(phi_map.module, rng)
            lhs = apply_phi(phi_map, x + y)
            assert_allclose(lhs, apply_phi(phi_map, x) + apply_phi(phi_map, y), atol=1e-9)
            self.assertLessEqual(operator_norm(apply_phi(phi_map, x)),
                                 module_norm(x) * bound + 1e-9)

    def test_identity_channel_gives_phi_morphism(self):
        phi_map = gen_phi_map(identity_map(MatrixAlgebra(2)), 1, 3, seed=1)
        verdict = phi_morphism_check(phi_map)
        self.assertTrue(verdict.phi_is_morphism)
        self.assertLessEqual(verdict.module_law_residual, 1e-9)


if __name__ == '__main__':
    unittest.main()
