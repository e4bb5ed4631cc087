import itertools
import random
from dataclasses import replace
from fractions import Fraction as F

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from circlegatherapp.algorithm import get_algorithm
from circlegatherapp.configuration import Configuration, is_rotationally_symmetric
from circlegatherapp.exceptions import (
    CertificateError,
    DerandomizationError,
    ForgeExhausted,
    ImpossibilityError,
)
from circlegatherapp.geometry import HALF_TURN, Angle, antipodal
from circlegatherapp.impossibility import (
    _bundle_search,
    CertificateVariant,
    DerandGrid,
    PerturbationCoefficients,
    build_frozen_certificate,
    build_lemma1_certificate,
    build_lemma2_certificate,
    check_certificate,
    check_line_bound,
    classify_sample,
    d_combination,
    derandomize,
    epsilon,
    find_compatible,
    forge,
    i_related,
    is_compatible,
    isomorphism_check,
    neighborhood_preserved,
    perturb,
    regular_configuration,
    sample_coefficients,
    semicircle_partition_holds,
    verify_certificate,
)

QUARTER = F(1, 4)


def brute_force_compatible(n: int, d: int) -> bool:
    """The three size conditions for theta = 1/d, in integer arithmetic over all pairs."""
    if n < 2:
        return False
    for i in range(n):
        near = sum(1 for j in range(n) if 4 * min((j - i) % n, (i - j) % n) < n)
        if 2 * near != n:
            return False
    distances = {min(k, n - k) for k in range(1, n)}
    if any(k * d == n for k in distances):
        return False
    return any(k * d < n for k in distances)


class CompatibilityTests(SimpleTestCase):
    def test_agrees_with_brute_force(self):
        for d in (4, 5, 6):
            for n in range(1, 201):
                self.assertEqual(is_compatible(n, F(1, d)), brute_force_compatible(n, d), f"n={n} theta=1/{d}")

    def test_examples(self):
        self.assertTrue(is_compatible(6, QUARTER))
        self.assertFalse(is_compatible(4, QUARTER))
        self.assertTrue(is_compatible(10, QUARTER))
        self.assertEqual(find_compatible(QUARTER, 2), 6)
        self.assertEqual(find_compatible(QUARTER, 7), 10)
        self.assertEqual(find_compatible(F(1, 5), 2), 6)

    def test_large_theta_rejected(self):
        with self.assertRaises(ImpossibilityError) as ctx:
            is_compatible(6, F(1, 3))
        self.assertIn("theta must be <= 1/4 turn", str(ctx.exception))

    def test_epsilon(self):
        self.assertEqual(epsilon(QUARTER, 6), F(1, 24))
        self.assertEqual(epsilon(QUARTER, 10), F(1, 40))
        with self.assertRaises(ImpossibilityError) as ctx:
            epsilon(QUARTER, 4)
        self.assertIn("not compatible", str(ctx.exception))


class PerturbationTests(SimpleTestCase):
    def test_coefficients(self):
        gamma = PerturbationCoefficients((0, F(1, 2), 1))
        self.assertTrue(gamma.distinct)
        self.assertFalse(gamma.with_coordinate(0, 1).distinct)
        with self.assertRaises(ImpossibilityError):
            PerturbationCoefficients((F(3, 2),))

    def test_i_related(self):
        self.assertTrue(i_related((0, F(1, 3), 1), (F(1, 2), F(1, 3), 1), 0))
        self.assertFalse(i_related((0, F(1, 3), 1), (F(1, 2), F(1, 3), 1), 1))
        self.assertFalse(i_related((0, 1), (0, 1, 1), 0))

    def test_perturb_moves_each_point_clockwise(self):
        p = perturb(6, F(1, 24), (1, 0, 0, 0, 0, F(1, 2)))
        self.assertEqual(p.copies[0], Angle(F(1, 24)))
        self.assertEqual(p.copies[5], Angle(F(5, 6) + F(1, 48)))
        self.assertEqual(p.configuration.n, 6)

    def test_perturb_validates_input(self):
        with self.assertRaises(ImpossibilityError):
            perturb(6, F(1, 6), (0,) * 6)
        with self.assertRaises(ImpossibilityError):
            perturb(6, F(1, 24), (0,) * 5)

    def test_sample_coefficients_distinct(self):
        gamma = sample_coefficients(10, random.Random(3))
        self.assertEqual(len(gamma), 10)
        self.assertTrue(gamma.distinct)

    @given(st.sampled_from([6, 10]), st.data())
    @settings(max_examples=200, deadline=None)
    def test_small_perturbations_keep_the_picture(self, n, data):
        """Property: with eps from epsilon(), semicircles and visibility are preserved."""
        gamma = data.draw(
            st.lists(st.fractions(min_value=0, max_value=1, max_denominator=1000), min_size=n, max_size=n)
        )
        perturbation = perturb(n, epsilon(QUARTER, n), gamma)
        self.assertTrue(semicircle_partition_holds(perturbation))
        self.assertTrue(neighborhood_preserved(perturbation, QUARTER))
        self.assertTrue(isomorphism_check(regular_configuration(n), perturbation, QUARTER))

    def test_large_perturbation_breaks_isomorphism(self):
        perturbation = perturb(6, F(1, 8), (1, 0, 0, 0, 0, 0))
        self.assertFalse(isomorphism_check(regular_configuration(6), perturbation, QUARTER))
        self.assertFalse(neighborhood_preserved(perturbation, QUARTER))

    def test_isomorphism_needs_correspondence(self):
        perturbation = perturb(6, F(1, 24), (0,) * 6)
        with self.assertRaises(ImpossibilityError) as ctx:
            isomorphism_check(regular_configuration(6), perturbation.configuration, QUARTER)
        self.assertIn("no recorded correspondence", str(ctx.exception))


class CombinationTests(SimpleTestCase):
    def test_combining_regular_set_with_itself(self):
        S = regular_configuration(6)
        self.assertEqual(d_combination(S, S, Angle(0)), S)

    def test_combination_mirrors_second_set(self):
        S1 = Configuration.from_points([0, F(1, 10), F(3, 5)])
        S2 = Configuration.from_points([F(1, 20), F(1, 2)])
        self.assertEqual(
            d_combination(S1, S2, Angle(0)),
            Configuration.from_points([0, F(1, 10), F(11, 20)]),
        )


class CertificateTests(SimpleTestCase):
    gamma = (F(1, 10), F(7, 10), F(3, 10), F(9, 10), F(1, 2), 0)

    def test_frozen_certificate(self):
        cert = build_frozen_certificate("stay", QUARTER, 6, self.gamma)
        self.assertEqual(cert.variant, CertificateVariant.FROZEN)
        self.assertTrue(cert.verified)
        self.assertEqual(dict(cert.checks), {"set": True, "asymmetric": True, "connected": True, "all_null": True})

    def test_frozen_rejects_moving_algorithm(self):
        with self.assertRaises(ImpossibilityError):
            build_frozen_certificate("midpoint", QUARTER, 6, self.gamma)

    def test_lemma1_certificate(self):
        cert = build_lemma1_certificate("midpoint", QUARTER, 6, self.gamma, 0)
        self.assertTrue(cert.verified)
        self.assertTrue(cert.successor.antipodal_closed())
        self.assertEqual(cert.successor.rotate(HALF_TURN), cert.successor)
        self.assertNotIn(cert.target, cert.configuration)
        self.assertFalse(is_rotationally_symmetric(cert.combined))

    def test_lemma1_inapplicable(self):
        with self.assertRaises(ImpossibilityError) as ctx:
            build_lemma1_certificate("stay", QUARTER, 6, self.gamma, 0)
        self.assertIn("lemma 1 inapplicable", str(ctx.exception))
        with self.assertRaises(ImpossibilityError):
            build_lemma1_certificate("nearest", QUARTER, 6, self.gamma, 0)

    def test_lemma2_certificate(self):
        other = PerturbationCoefficients(self.gamma).with_coordinate(2, F(3, 5))
        cert = build_lemma2_certificate("nearest", QUARTER, 6, self.gamma, other, 2)
        self.assertTrue(cert.verified)
        self.assertEqual(cert.target, perturb(6, F(1, 24), self.gamma).copies[3])
        self.assertIn(antipodal(cert.target), cert.successor)
        self.assertEqual(cert.successor.count(cert.target), 2)

    def test_lemma2_inapplicable(self):
        with self.assertRaises(ImpossibilityError) as ctx:
            build_lemma2_certificate("nearest", QUARTER, 6, self.gamma, self.gamma, 2)
        self.assertIn("lemma 2 inapplicable", str(ctx.exception))
        other = PerturbationCoefficients(self.gamma).with_coordinate(2, F(3, 5))
        with self.assertRaises(ImpossibilityError):
            build_lemma2_certificate("midpoint", QUARTER, 6, self.gamma, other, 2)

    def test_tampered_certificate_fails(self):
        """Test that verification recomputes everything instead of trusting stored data."""
        cert = build_lemma1_certificate("midpoint", QUARTER, 6, self.gamma, 0)
        with self.assertRaises(CertificateError) as ctx:
            verify_certificate(replace(cert, witness=Angle(QUARTER)))
        self.assertEqual(ctx.exception.failed, ["successor_symmetric"])
        frozen = build_frozen_certificate("stay", QUARTER, 6, self.gamma)
        checks = dict(check_certificate(frozen, "nearest"))
        self.assertFalse(checks["all_null"])

    def test_classify_sample(self):
        sample = classify_sample("nearest", QUARTER, 6, 1, self.gamma)
        self.assertFalse(sample.frozen)
        self.assertEqual(sample.to_empty, ())
        self.assertEqual([i for i, _ in sample.to_occupied], list(range(6)))


class ForgeTests(SimpleTestCase):
    def test_forge_variants(self):
        for algorithm, variant in [
            ("stay", CertificateVariant.FROZEN),
            ("midpoint", CertificateVariant.LEMMA1),
            ("nearest", CertificateVariant.LEMMA2),
        ]:
            cert = forge(algorithm, QUARTER, 6, seed=0)
            self.assertEqual(cert.variant, variant, algorithm)
            self.assertEqual(cert.sample, 1)
            self.assertTrue(cert.verified)

    def test_forge_against_gathering_algorithm(self):
        cert = forge("listing1", QUARTER, 6, seed=0)
        self.assertIn(cert.variant, {CertificateVariant.LEMMA1, CertificateVariant.LEMMA2})
        self.assertTrue(verify_certificate(cert).verified)

    def test_forge_is_deterministic_and_parallel_safe(self):
        self.assertEqual(forge("nearest", F(1, 5), 6, seed=4), forge("nearest", F(1, 5), 6, seed=4, jobs=2))

    def test_forge_input_errors(self):
        with self.assertRaises(ImpossibilityError):
            forge("stay", F(1, 3), 6)
        with self.assertRaises(ImpossibilityError):
            forge("stay", QUARTER, 8)
        with self.assertRaises(ForgeExhausted):
            forge("stay", QUARTER, 6, max_samples=0)

    def test_bundle_redraws_keep_coefficients_distinct(self):
        """Test that redrawn coordinates never repeat another robot's coefficient."""
        gamma = tuple(F(k, 12) for k in (1, 3, 5, 7, 9, 11))
        sample = classify_sample("nearest", QUARTER, 6, 1, gamma)
        self.assertTrue(sample.to_occupied)
        for seed in range(20):
            cert = _bundle_search(get_algorithm("nearest"), QUARTER, 6, sample, 12, seed)
            if cert is None:
                continue
            self.assertTrue(cert.gamma.distinct, seed)
            if cert.gamma_other is not None:
                self.assertTrue(cert.gamma_other.distinct, seed)


def solutions(grid: DerandGrid, X) -> set:
    return {
        point
        for point in grid.points()
        if all(point not in obstacles for obstacles in X)
    }


def random_obstacles(grid: DerandGrid, rng: random.Random) -> list[set]:
    """Random grid obstacles meeting every axis-parallel line in fewer than m points."""
    X = []
    for i in range(grid.n):
        lines, obstacles = {}, set()
        for point in grid.points():
            key = point[:i] + point[i + 1 :]
            if rng.random() < 0.4 and lines.get(key, 0) < grid.m - 1:
                lines[key] = lines.get(key, 0) + 1
                obstacles.add(point)
        X.append(obstacles)
    return X


class DerandomizeTests(SimpleTestCase):
    def test_grid(self):
        grid = DerandGrid(2, 2)
        self.assertEqual((grid.a(1), grid.a(2), grid.total), (2, 4, 6))
        self.assertEqual(grid.axis(1), (F(1, 6), F(1, 3)))
        self.assertEqual(grid.axis(2), (F(1, 2), F(2, 3), F(5, 6), F(1)))
        self.assertEqual(len(list(grid.points())), 8)

    def test_axes_are_disjoint(self):
        grid = DerandGrid(3, 2)
        self.assertFalse(set(grid.axis(1)) & set(grid.axis(2)))

    def test_without_obstacles(self):
        self.assertEqual(derandomize(1, 3, [[], [], []]), (F(1, 3), F(2, 3), F(1)))
        self.assertEqual(derandomize(2, 1, [[]]), (F(1, 2),))

    def test_agrees_with_exhaustive_search(self):
        """Test 50 random obstacle instances per grid against enumeration."""
        rng = random.Random(2024)
        for m, n in [(2, 2), (3, 2), (2, 3)]:
            grid = DerandGrid(m, n)
            for _ in range(50):
                X = random_obstacles(grid, rng)
                point = derandomize(m, n, X)
                self.assertIn(point, solutions(grid, X))
                self.assertEqual(len(set(point)), n)

    def test_line_bound_exceeded(self):
        X = [[(F(1, 6), F(1, 2)), (F(1, 3), F(1, 2))], []]
        with self.assertRaises(DerandomizationError) as ctx:
            derandomize(2, 2, X)
        self.assertIn("line bound exceeded", str(ctx.exception))

    def test_obstacle_shape_errors(self):
        with self.assertRaises(DerandomizationError):
            derandomize(2, 2, [[]])
        with self.assertRaises(DerandomizationError):
            derandomize(2, 2, [[(F(1, 2),)], []])
        with self.assertRaises(DerandomizationError):
            derandomize(2, 2, [[(F(3, 2), 0)], []])

    def test_line_bound_counts_lines_per_axis(self):
        same_column = [frozenset({(F(1, 6), F(1, 2)), (F(1, 6), F(2, 3))}), frozenset()]
        check_line_bound(2, same_column)
        with self.assertRaises(DerandomizationError):
            check_line_bound(2, [frozenset(), same_column[0]])

    def test_exhaustive_grid_small(self):
        for m, n in itertools.product([1, 2], [1, 2]):
            point = derandomize(m, n, [[]] * n)
            self.assertIn(point, set(DerandGrid(m, n).points()))
