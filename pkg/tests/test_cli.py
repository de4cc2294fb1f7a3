#!/usr/bin/env python3
"""End-to-end tests for the spanfact command line."""

import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stdout

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli import SpanFactCLI
from cpcount import mu
from errors import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION
from factorization import WordList
from schedule import Schedule
from serialization import load_json, load_words, save_json, save_schedule, save_words


class CLITestCase(unittest.TestCase):
    """Runs commands with JSON output into a scratch directory."""

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def run_cli(self, *argv):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = SpanFactCLI().run(["--format", "json", "--no-color", "--out", self.tmp, *argv])
        output = buffer.getvalue()
        payload = json.loads(output) if output.strip() else {}
        return code, payload


class TestBuildAndVerify(CLITestCase):
    """build, words, schedule, verify and simulate on G(2,2)."""

    def test_build_cp(self):
        """build writes the graph, the factors and a manifest."""
        code, payload = self.run_cli("build", "cp", "--d", "2", "--D", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["n"], 6)
        self.assertEqual(payload["diameter"], 2)
        for name in ("graph.json", "factorization.json", "manifest.json"):
            self.assertTrue(os.path.exists(self.path(name)), name)
        manifest = load_json(self.path("manifest.json"))
        self.assertEqual(manifest["summary"]["exit_code"], 0)
        self.assertIn(self.path("graph.json"), manifest["outputs"])

    def test_pipeline(self):
        """build, words, schedule, verify and simulate chain through the artifact files."""
        self.assertEqual(self.run_cli("build", "cp", "--d", "2", "--D", "2")[0], EXIT_OK)
        self.assertEqual(self.run_cli("words", "cp", "--d", "2", "--D", "2")[0], EXIT_OK)
        code, payload = self.run_cli("schedule", "--words", self.path("words.json"), "--method", "diam2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["T"], 5)
        self.assertTrue(os.path.exists(self.path("schedule_metrics.json")))

        code, payload = self.run_cli("verify", "--graph", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"),
                                     "--words", self.path("words.json"),
                                     "--schedule", self.path("schedule.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["spanning"], "ok")

        code, payload = self.run_cli("simulate", "--graph", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"),
                                     "--words", self.path("words.json"),
                                     "--schedule", self.path("schedule.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["packets_delivered"], 30)
        self.assertTrue(os.path.exists(self.path("report.json")))

        manifest = load_json(self.path("manifest.json"))
        self.assertEqual(len(manifest["inputs"]), 4)

    def test_verify_reports_bad_schedule(self):
        """Two occurrences of a factor at one time exit with code 1."""
        self.run_cli("build", "cp", "--d", "2", "--D", "2")
        self.run_cli("words", "cp", "--d", "2", "--D", "2")
        wl = load_words(self.path("words.json"))
        bad = self.path("bad_schedule.json")
        save_schedule(bad, Schedule({(i, p): p + 1 for i, p in wl.occurrences()}))
        code, payload = self.run_cli("verify", "--graph", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"),
                                     "--words", self.path("words.json"), "--schedule", bad)
        self.assertEqual(code, EXIT_VERIFICATION)
        self.assertEqual(payload["violation"]["kind"], "DuplicateFactorTime")

    def test_cp_min(self):
        """cp-min reaches makespan mu on G(3,2)."""
        self.run_cli("words", "cp", "--d", "3", "--D", "2")
        code, payload = self.run_cli("schedule", "--words", self.path("words.json"), "--method", "cp-min")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["T"], mu(3, 2))

    def test_cp_min_rejects_other_words(self):
        """cp-min only accepts the cycle-prefix tree words."""
        save_json(self.path("words.json"), {"d": 2, "words": [[], [2], [1], [2, 1], [1, 2], [2, 2]]})
        code, payload = self.run_cli("schedule", "--words", self.path("words.json"), "--method", "cp-min")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(payload["error"], "WordsMismatch")


class TestUsageErrors(CLITestCase):

    def test_bad_params(self):
        """D > d is a usage error with exit code 2."""
        code, payload = self.run_cli("build", "cp", "--d", "2", "--D", "3")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(payload["error"], "BadParams")
        self.assertEqual(payload["exit_code"], EXIT_USAGE)

    def test_bad_arguments(self):
        """Missing, malformed and unknown arguments are usage errors."""
        for argv in ((), ("build", "cp", "--d", "x", "--D", "2"), ("frobnicate",)):
            with self.subTest(argv=argv):
                code, payload = self.run_cli(*argv)
                self.assertEqual(code, EXIT_USAGE)
                self.assertEqual(payload["error"], "BadArguments")

    def test_bad_field_order(self):
        """q = 7 is not 1 mod 4."""
        code, payload = self.run_cli("build", "mms", "--q", "7")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(payload["error"], "BadOrder")

    def test_missing_input(self):
        """A missing input file is an invalid artifact."""
        code, payload = self.run_cli("factorize", self.path("nope.json"))
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(payload["error"], "InvalidArtifact")


class TestAnalysisCommands(CLITestCase):
    """counts, metrics, relations, bounds, export-dot, exhaustive, search."""

    def test_counts(self):
        """counts --check writes the agreement table."""
        code, payload = self.run_cli("counts", "cp", "--d", "3", "--D", "3", "--check")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload["all_agree"])
        self.assertTrue(os.path.exists(self.path("counts.csv")))

    def test_metrics(self):
        """Usage counts and broadcast tree counts for G(2,2)."""
        self.run_cli("build", "cp", "--d", "2", "--D", "2")
        self.run_cli("words", "cp", "--d", "2", "--D", "2")
        code, payload = self.run_cli("metrics", "--graph", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"),
                                     "--words", self.path("words.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["counts"], [3, 5])
        self.assertEqual(payload["broadcast_tree_counts"], [2, 3])
        self.assertTrue(os.path.exists(self.path("metrics.csv")))

    def test_metrics_rejects_non_spanning_words(self):
        """A word list with a repeated word fails the spanning check before any scoring."""
        self.run_cli("build", "cp", "--d", "2", "--D", "2")
        save_words(self.path("dup.json"), WordList(2, ((), (1,), (2,), (1, 1), (1, 2), (1, 1))))
        code, payload = self.run_cli("metrics", "--graph", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"),
                                     "--words", self.path("dup.json"))
        self.assertEqual(code, EXIT_VERIFICATION)
        self.assertEqual(payload["spanning"], "fail")
        self.assertIn("witness", payload)
        self.assertFalse(os.path.exists(self.path("metrics.json")))

    def test_relations(self):
        """relations adopts the (-1)^r sign and writes its report."""
        code, payload = self.run_cli("relations", "mms", "--q", "5")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload["ok"])
        self.assertEqual(payload["choices"]["g_sign"], "(-1)^r")
        self.assertTrue(os.path.exists(self.path("relations.json")))

    def test_bounds(self):
        """bounds reports the BFS bound 13 next to the printed 14."""
        code, payload = self.run_cli("bounds", "mms", "--q", "5")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["oracle"], 13)
        self.assertEqual(payload["printed"], 14)

    def test_build_mms_extension_field(self):
        """--poly builds H_9 and records the polynomial."""
        code, payload = self.run_cli("build", "mms", "--q", "9", "--poly", "1,0,1")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["n"], 162)
        self.assertEqual(load_json(self.path("field.json"))["poly"], [1, 0, 1])

    def test_export_dot(self):
        """The DOT file matches the printed source."""
        self.run_cli("build", "cp", "--d", "2", "--D", "2")
        code, payload = self.run_cli("export-dot", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"))
        self.assertEqual(code, EXIT_OK)
        with open(self.path("graph.dot")) as f:
            self.assertEqual(f.read(), payload["dot"])

    def test_exhaustive(self):
        """No 4-step schedule exists for G(2,2)."""
        self.run_cli("words", "cp", "--d", "2", "--D", "2")
        code, payload = self.run_cli("exhaustive", "--words", self.path("words.json"), "--time", "4")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload, {"T": 4, "feasible": False})

    def test_factorize(self):
        """factorize splits G(3,2) into three factors."""
        self.run_cli("build", "cp", "--d", "3", "--D", "2")
        os.remove(self.path("factorization.json"))
        code, payload = self.run_cli("factorize", self.path("graph.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload, {"d": 3, "n": 12})
        self.assertTrue(os.path.exists(self.path("factorization.json")))

    def test_search(self):
        """search finds spanning words for G(2,2)."""
        self.run_cli("build", "cp", "--d", "2", "--D", "2")
        code, payload = self.run_cli("search", "--graph", self.path("graph.json"),
                                     "--factors", self.path("factorization.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["n"], 6)
        self.assertEqual(load_words(self.path("words.json")).n, 6)

    def test_cayley_group_file(self):
        """A 1-based group file builds S3 and its tree words."""
        group = self.path("group.json")
        save_json(group, {"degree": 3, "generators": {"a": [2, 1, 3], "b": [2, 3, 1]}})
        code, payload = self.run_cli("build", "cayley", "--group", group)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["n"], 6)
        code, payload = self.run_cli("words", "cayley", "--group", group)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["max_length"], 2)


if __name__ == '__main__':
    unittest.main()
