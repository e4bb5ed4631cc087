from fractions import Fraction

from django.test import TestCase

from circlegatherapp.configuration import Configuration
from circlegatherapp.impossibility import CertificateVariant, build_frozen_certificate
from circlegatherapp.models import ForgeRecord, SimulationRun
from circlegatherapp.services import ForgeService, SimulationService


class SimulationRunModelTests(TestCase):
    def setUp(self):
        self.initial = SimulationService.initial_configuration("0/1,1/10,2/5")
        result = SimulationService.simulate(self.initial, "1/2", step_cap=100)
        self.run = SimulationService.save(
            self.initial,
            result,
            theta="1/2",
            algorithm="listing1",
            scheduler="full",
            seed=0,
            step_cap=100,
            monitor=False,
        )

    def test_str_returns_algorithm_size_and_outcome(self):
        """Test that __str__ names the algorithm, swarm size, theta and outcome."""
        self.assertEqual(str(self.run), "listing1 n=3 theta=1/2: gathered")

    def test_saved_outcome_fields(self):
        """Test that the stored outcome matches the engine result (positive path)."""
        self.assertEqual(self.run.outcome, "gathered")
        self.assertEqual(self.run.outcome_step, 2)
        self.assertEqual(self.run.gathered_point, "1/10")
        self.assertEqual(self.run.final_configuration, "1/10x3\n")
        self.assertEqual(self.run.initial(), self.initial)

    def test_rule_share(self):
        """Test the percentage of moves per rule (one rule 3 move out of six)."""
        self.assertEqual(self.run.rule_counts, {"3": 1, "5": 2, "1a": 3})
        self.assertEqual(self.run.rule_share("3"), 16.67)
        self.assertEqual(self.run.rule_share("1a"), 50.0)
        self.assertEqual(self.run.rule_share("4c"), 0.0)

    def test_rule_share_without_moves(self):
        """Test rule share when nothing moved (boundary condition)."""
        run = SimulationRun.objects.create(
            initial_configuration="1/3x2\n", theta="1/2", algorithm="listing1", scheduler="full",
            outcome="gathered",
        )
        self.assertEqual(run.rule_share("3"), 0.0)

    def test_replay_reproduces_trace(self):
        result = SimulationService.replay(self.run)
        self.assertEqual(len(result.trace), 2)
        self.assertEqual(result.final_configuration, Configuration.from_points([Fraction(1, 10)] * 3))

    def test_ordering_newest_first(self):
        second = SimulationService.save(
            self.initial,
            SimulationService.simulate(self.initial, "1/2", scheduler="round_robin"),
            theta="1/2",
            algorithm="listing1",
            scheduler="round_robin",
            seed=0,
            step_cap=None,
            monitor=False,
        )
        self.assertEqual(list(SimulationRun.objects.all()), [second, self.run])
        self.assertEqual(second.step_cap, 10000)


class ForgeRecordModelTests(TestCase):
    def setUp(self):
        gamma = (Fraction(1, 10), Fraction(7, 10), Fraction(3, 10), Fraction(9, 10), Fraction(1, 2), 0)
        self.cert = build_frozen_certificate("stay", Fraction(1, 4), 6, gamma, sample=1)
        self.record = ForgeService.save(self.cert, seed=3)

    def test_str(self):
        self.assertEqual(str(self.record), "frozen certificate against stay (n=6, theta=1/4)")

    def test_certificate_round_trip(self):
        """Test that the stored JSON document rebuilds the same certificate."""
        record = ForgeRecord.objects.get(pk=self.record.pk)
        self.assertEqual(record.certificate(), self.cert)
        self.assertEqual(record.certificate().variant, CertificateVariant.FROZEN)
        self.assertTrue(record.verified)
        self.assertEqual(record.seed, 3)
