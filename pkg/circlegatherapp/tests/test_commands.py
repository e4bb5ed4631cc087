import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from circlegatherapp.configuration import is_rotationally_symmetric, parse_configuration
from circlegatherapp.formats import load_certificate, parse_json, read_trace
from circlegatherapp.models import ForgeRecord, SimulationRun


def call(name, *args):
    out = StringIO()
    call_command(name, *args, stdout=out)
    return out.getvalue()


class SimulateCommandTests(TestCase):
    def test_gathers(self):
        """Test the success summary of a gathering run (positive path)."""
        out = call("simulate", "--config", "0/1,1/10,2/5")
        self.assertIn("gathered at 1/10 after 2 steps", out)

    def test_step_cap_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            call("simulate", "--config", "0/1,1/4,1/2,3/4", "--step-cap", "10")
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertIn("step cap exceeded after 10 steps", str(ctx.exception))

    def test_violation_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            call("simulate", "--config", "0/1,1/10,1/5,3/10", "--alg", "midpoint", "--monitor")
        self.assertEqual(ctx.exception.returncode, 4)
        self.assertIn("contract violation at step 1", str(ctx.exception))

    def test_usage_errors(self):
        """Test bad scheduler, theta and missing input (negative path)."""
        for args in [
            ("--config", "0/1,1/10", "--sched", "sometimes"),
            ("--config", "0/1,1/10", "--theta", "0.5"),
            ("--theta", "1/2"),
            ("--config", "0/1,1/10", "--alg", "spiral"),
            ("--config", "0/1,1/10,2/5", "--step-cap", "0"),
        ]:
            with self.assertRaises(CommandError, msg=args) as ctx:
                call("simulate", *args)
            self.assertEqual(ctx.exception.returncode, 2)

    def test_trace_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "run.jsonl"
            call("simulate", "--config", "0/1,1/10,2/5", "--trace", str(path), "--step-cap", "50")
            header, records = read_trace(path.read_bytes())
        self.assertEqual(header["n"], 3)
        self.assertEqual(header["step_cap"], 50)
        self.assertEqual(len(records), 2)

    def test_same_seed_gives_identical_traces(self):
        with tempfile.TemporaryDirectory() as tmp:
            traces = []
            for name in ("a.jsonl", "b.jsonl"):
                path = Path(tmp) / name
                call("simulate", "--n", "6", "--seed", "7", "--sched", "random:1/2", "--trace", str(path))
                traces.append(path.read_bytes())
        self.assertEqual(traces[0], traces[1])

    def test_config_file_and_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "three.txt"
            path.write_text("# three robots\n0/1\n1/10\n2/5\n", encoding="utf-8")
            call("simulate", "--config", str(path), "--save")
        run = SimulationRun.objects.get()
        self.assertEqual(run.outcome, "gathered")
        self.assertEqual(run.outcome_step, 2)

    def test_generated_configuration(self):
        out = call("simulate", "--n", "4", "--seed", "3", "--sched", "round_robin")
        self.assertIn("gathered at", out)


class ForgeCommandTests(TestCase):
    def test_forge_prints_checks(self):
        out = call("forge", "--alg", "stay", "--n", "6")
        lines = out.splitlines()
        self.assertEqual(lines[0], "frozen certificate (n=6, sample 1)")
        self.assertEqual(lines[1:], ["  set: ok", "  asymmetric: ok", "  connected: ok", "  all_null: ok"])

    def test_forge_midpoint_with_auto_n(self):
        out = call("forge", "--alg", "midpoint", "--theta", "1/4", "--auto-n")
        self.assertTrue(out.startswith("lemma1 certificate (n=6, sample 1)"), out)
        self.assertNotIn("FAILED", out)

    def test_forge_out_and_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "cert.json"
            call("forge", "--alg", "stay", "--auto-n", "--out", str(path), "--save")
            document = parse_json(path.read_bytes())
        self.assertEqual(document["variant"], "frozen")
        self.assertEqual(load_certificate(document), ForgeRecord.objects.get().certificate())

    def test_forge_exhausted_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            call("forge", "--alg", "stay", "--n", "6", "--max-samples", "0")
        self.assertEqual(ctx.exception.returncode, 5)

    def test_forge_usage_errors(self):
        """Test incompatible n and a large theta (negative path)."""
        for args in [("--alg", "stay", "--n", "8"), ("--alg", "stay", "--n", "6", "--theta", "1/2")]:
            with self.assertRaises(CommandError, msg=args) as ctx:
                call("forge", *args)
            self.assertEqual(ctx.exception.returncode, 2)


class ToolCommandTests(TestCase):
    def test_compat(self):
        self.assertEqual(call("compat", "--theta", "1/4").strip(), "6")
        self.assertEqual(call("compat", "--theta", "1/4", "--min", "7").strip(), "10")

    def test_gen_config(self):
        out = call("gen_config", "--n", "5", "--seed", "1")
        self.assertEqual(len(out.splitlines()), 5)
        self.assertEqual(out, call("gen_config", "--n", "5", "--seed", "1"))
        S = parse_configuration(out)
        self.assertEqual(S.n, 5)
        self.assertTrue(S.is_set)
        self.assertFalse(is_rotationally_symmetric(S))

    def test_gen_config_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "five.txt"
            out = call("gen_config", "--n", "5", "--out", str(path))
            self.assertEqual(out, "")
            self.assertEqual(path.read_text(encoding="utf-8"), call("gen_config", "--n", "5"))

    def test_gen_config_too_small(self):
        with self.assertRaises(CommandError) as ctx:
            call("gen_config", "--n", "1")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_derandomize(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "obstacles.txt"
            path.write_text("1 1/6 1/2\n", encoding="utf-8")
            out = call("derandomize", "--m", "2", "--n", "2", "--obstacles", str(path))
        self.assertEqual(out.strip(), "(1/6, 2/3)")

    def test_derandomize_without_obstacles(self):
        self.assertEqual(call("derandomize", "--m", "1", "--n", "3").strip(), "(1/3, 2/3, 1/1)")
