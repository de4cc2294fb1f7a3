#!/usr/bin/env python3
"""Tests for 1-factorizations, word lists and the spanning check."""

import os
import random
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cpgraph import build_cp, cp_factorization, grow_tree
from digraph import Digraph, distance_profile
from errors import (BadFactorIndex, EXIT_INTERNAL, EXIT_VERIFICATION, FactorNotPermutation,
                    InvalidArtifact, SpanningSearchFailed, UsageError)
from factorization import (Factorization, WordList, apply_word, bfs_tree, bfs_tree_words,
                           broadcast_tree_counts, check_covers, decompose_into_factors, endpoint_table,
                           factor_counts, is_hierarchical, search_spanning, usage_metrics, verify_spanning)


def random_regular(n: int, d: int, seed: int) -> Digraph:
    """Union of d random derangements, so loops never occur but parallel edges may."""
    rng = random.Random(seed)
    edges = []
    for _ in range(d):
        while True:
            perm = list(range(n))
            rng.shuffle(perm)
            if all(perm[v] != v for v in range(n)):
                break
        edges.extend((v, perm[v]) for v in range(n))
    rng.shuffle(edges)
    return Digraph(n, tuple(edges))


class TestFactorizationTypes(unittest.TestCase):
    """Validation of factorizations and word lists."""

    def test_fixed_point_rejected(self):
        """A factor may not fix a vertex."""
        with self.assertRaises(FactorNotPermutation) as ctx:
            Factorization(1, ((0, 2, 1),))
        self.assertEqual(ctx.exception.exit_code, EXIT_INTERNAL)

    def test_repeated_head_rejected(self):
        """A factor must be a bijection."""
        with self.assertRaises(FactorNotPermutation):
            Factorization(1, ((1, 0, 0),))

    def test_factor_count_must_match(self):
        """d rows are required."""
        with self.assertRaises(InvalidArtifact):
            Factorization(2, ((1, 0),))

    def test_first_word_must_be_empty(self):
        """words[0] is the empty word."""
        with self.assertRaises(UsageError) as ctx:
            WordList(2, ((1,), ()))
        self.assertEqual(ctx.exception.kind, "InvalidWords")

    def test_letter_out_of_range(self):
        """Factor indices are 1-based and at most d."""
        with self.assertRaises(BadFactorIndex):
            WordList(2, ((), (3,)))
        with self.assertRaises(BadFactorIndex):
            WordList(2, ((), (0,)))

    def test_occurrences_order(self):
        """Occurrences are listed by word, then position."""
        wl = WordList(2, ((), (1, 2), (2,)))
        self.assertEqual(wl.occurrences(), [(1, 0), (1, 1), (2, 0)])
        self.assertEqual(wl.max_length, 2)


class TestDecomposition(unittest.TestCase):
    """Splitting regular digraphs into permutations."""

    def test_cp22(self):
        """Matching-based decomposition of G(2,2) covers its edges."""
        g = build_cp(2, 2)
        f = decompose_into_factors(g)
        self.assertEqual(f.d, 2)
        check_covers(g, f)

    def test_multigraph(self):
        """Parallel edges end up in different factors."""
        g = Digraph(2, ((0, 1), (0, 1), (1, 0), (1, 0)))
        f = decompose_into_factors(g)
        self.assertEqual(f.succ, ((1, 0), (1, 0)))

    def test_random_regular_graphs(self):
        """Several random regular digraphs split exactly."""
        for seed in range(10):
            with self.subTest(seed=seed):
                rng = random.Random(1000 + seed)
                g = random_regular(rng.randint(3, 60), rng.randint(1, 5), seed)
                f = decompose_into_factors(g)
                check_covers(g, f)

    def test_check_covers_mismatch(self):
        """Factors of another graph do not cover a doubled cycle."""
        f = cp_factorization(2, 2)
        doubled_cycle = Digraph(6, tuple((v, (v + 1) % 6) for v in range(6) for _ in range(2)))
        with self.assertRaises(InvalidArtifact):
            check_covers(doubled_cycle, f)


class TestSpanning(unittest.TestCase):
    """Endpoints, the spanning check and usage metrics on G(2,2)."""

    def setUp(self):
        self.g = build_cp(2, 2)
        self.f = cp_factorization(2, 2)
        self.wl = grow_tree(2, 2).words

    def test_tree_words(self):
        """G(2,2) tree words in breadth-first order."""
        self.assertEqual(self.wl.words, ((), (1,), (2,), (1, 2), (2, 1), (2, 2)))

    def test_apply_word(self):
        """12 -F1-> 21 -F2-> 32."""
        self.assertEqual(apply_word(self.f, 0, (1, 2)), [0, 2, 5])
        with self.assertRaises(BadFactorIndex):
            apply_word(self.f, 0, (4,))

    def test_endpoint_table(self):
        """Endpoints from vertex 0 are six distinct vertices."""
        table = endpoint_table(self.f, self.wl)
        self.assertEqual(table[:, 0].tolist(), [0, 2, 4, 5, 1, 3])
        self.assertEqual(table.shape, (6, 6))

    def test_spanning(self):
        """The G(2,2) tree words span with no collisions."""
        result = verify_spanning(self.f, self.wl)
        self.assertTrue(result.ok)
        self.assertEqual(result.to_dict(), {"spanning": "ok", "collisions": 0})

    def test_spanning_witness(self):
        """F1 is an involution, so F1F1 lands back on the source."""
        bad = WordList(2, ((), (1,), (2,), (1, 2), (2, 1), (1, 1)))
        result = verify_spanning(self.f, bad)
        self.assertFalse(result.ok)
        self.assertEqual(result.witness, (0, 0, 5))
        self.assertEqual(result.collisions, 6)

    def test_spanning_threaded(self):
        """Worker threads give the same verdict."""
        self.assertTrue(verify_spanning(self.f, self.wl, workers=3).ok)

    def test_word_count_mismatch(self):
        """Exactly n words are required."""
        with self.assertRaises(UsageError) as ctx:
            verify_spanning(self.f, WordList(2, ((), (1,))))
        self.assertEqual(ctx.exception.kind, "WordCountMismatch")

    def test_usage_metrics(self):
        """Counts (3, 5) against theta 4."""
        m = usage_metrics(self.wl, distance_profile(self.g), 2)
        self.assertEqual(factor_counts(self.wl), (3, 5))
        self.assertEqual(m.max_count, 5)
        self.assertEqual(m.avg_ceiling, 4)
        self.assertEqual(m.theta, 4)
        self.assertFalse(m.balanced)
        self.assertTrue(m.short)
        self.assertFalse(m.optimal)
        self.assertTrue(m.ordered)
        self.assertEqual(m.to_frame()["count"].tolist(), [3, 5])

    def test_hierarchical(self):
        """Prefix-closed lists yield broadcast tree counts; gappy ones do not."""
        self.assertTrue(is_hierarchical(self.wl))
        self.assertEqual(broadcast_tree_counts(self.wl), (2, 3))
        gappy = WordList(2, ((), (1,), (2, 1)))
        self.assertFalse(is_hierarchical(gappy))
        self.assertIsNone(broadcast_tree_counts(gappy))

    def test_bfs_tree(self):
        """The breadth-first tree from vertex 0 gives the cycle-prefix words."""
        tree = bfs_tree(self.f, [0, 1])
        self.assertEqual(len(tree), 6)
        self.assertEqual(tree[5], (1, 2))
        self.assertEqual(bfs_tree_words(self.f, [0, 1]).words, self.wl.words)


class TestSearchSpanning(unittest.TestCase):
    """Randomized search for spanning tree word lists."""

    def test_first_attempt_succeeds_on_cp22(self):
        """The unshuffled first attempt already spans on G(2,2)."""
        wl = search_spanning(build_cp(2, 2), cp_factorization(2, 2))
        self.assertEqual(wl.words, grow_tree(2, 2).words.words)

    def test_zero_budget_fails(self):
        """No attempts means SpanningSearchFailed, exit code 1."""
        with self.assertRaises(SpanningSearchFailed) as ctx:
            search_spanning(build_cp(2, 2), cp_factorization(2, 2), budget=0)
        self.assertEqual(ctx.exception.exit_code, EXIT_VERIFICATION)

    def test_same_seed_same_result(self):
        """Reruns are deterministic."""
        g = build_cp(3, 2)
        f = cp_factorization(3, 2)

        def run():
            try:
                return search_spanning(g, f, budget=8, seed=7).words
            except SpanningSearchFailed as e:
                return e.witness
        self.assertEqual(run(), run())


if __name__ == '__main__':
    unittest.main()
