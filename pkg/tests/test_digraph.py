#!/usr/bin/env python3
"""Tests for digraph construction, regularity and distance profiles."""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cpgraph import build_cp
from digraph import (Digraph, ceil_div, check_regular, diameter2_bound, distance_profile, relabel,
                     theta, theta_from_profile)
from errors import BadParams, Disconnected, EXIT_USAGE, EXIT_VERIFICATION, NotRegular, UsageError


def directed_cycle(n: int) -> Digraph:
    return Digraph(n, tuple((v, (v + 1) % n) for v in range(n)))


class TestDigraph(unittest.TestCase):
    """Digraph validation and basic queries."""

    def test_ceil_div(self):
        """Exact integer ceilings."""
        self.assertEqual(ceil_div(48, 12), 4)
        self.assertEqual(ceil_div(49, 12), 5)
        self.assertEqual(ceil_div(0, 3), 0)

    def test_rejects_self_loop(self):
        """Self-loops are not allowed."""
        with self.assertRaises(UsageError) as ctx:
            Digraph(2, ((0, 0), (1, 0)))
        self.assertEqual(ctx.exception.kind, "InvalidGraph")
        self.assertEqual(ctx.exception.exit_code, EXIT_USAGE)

    def test_rejects_edge_out_of_range(self):
        """Edges must stay inside the vertex range."""
        with self.assertRaises(UsageError):
            Digraph(2, ((0, 2),))

    def test_rejects_label_count(self):
        """One label per vertex."""
        with self.assertRaises(UsageError):
            Digraph(2, ((0, 1), (1, 0)), ("a",))

    def test_multigraph_is_not_elementary(self):
        """Parallel edges are allowed but flagged."""
        g = Digraph(2, ((0, 1), (0, 1), (1, 0), (1, 0)))
        self.assertFalse(g.is_elementary)
        self.assertEqual(check_regular(g), 2)
        self.assertTrue(directed_cycle(4).is_elementary)

    def test_labels(self):
        """Cycle-prefix vertices carry their string labels."""
        g = build_cp(2, 2)
        self.assertEqual(g.label(0), "12")
        self.assertEqual(g.label(2), "21")

    def test_not_regular(self):
        """The first offending vertex is named."""
        g = Digraph(3, ((0, 1), (0, 2), (1, 0), (2, 0)))
        with self.assertRaises(NotRegular) as ctx:
            check_regular(g)
        self.assertEqual(ctx.exception.exit_code, EXIT_VERIFICATION)
        self.assertEqual(ctx.exception.details["vertex"], 1)

    def test_relabel_keeps_structure(self):
        """Relabeling moves labels and keeps the distance profile."""
        g = build_cp(2, 2)
        perm = [5, 4, 3, 2, 1, 0]
        h = relabel(g, perm)
        self.assertEqual(h.m, g.m)
        self.assertEqual(h.label(5), g.label(0))
        self.assertEqual(distance_profile(h).counts, distance_profile(g).counts)
        with self.assertRaises(BadParams):
            relabel(g, [0, 0, 1, 2, 3, 4])


class TestDistanceProfile(unittest.TestCase):
    """Breadth-first distance counts and the distance-sum bound."""

    def setUp(self):
        self.g22 = build_cp(2, 2)

    def test_cp22_profile(self):
        """G(2,2): 12 pairs at distance 1, 18 at distance 2."""
        profile = distance_profile(self.g22, per_vertex=True)
        self.assertEqual(profile.counts, (12, 18))
        self.assertEqual(profile.diameter, 2)
        self.assertEqual(profile.distance_sum, 48)
        self.assertEqual(profile.count(3), 0)
        self.assertEqual(profile.per_vertex.shape, (6, 3))
        self.assertEqual(int(profile.per_vertex[0].sum()), 6)

    def test_threaded_profile_matches(self):
        """Worker count never changes the result."""
        single = distance_profile(self.g22, workers=1)
        threaded = distance_profile(self.g22, workers=4)
        self.assertEqual(single.counts, threaded.counts)

    def test_theta(self):
        """theta is 4 for G(2,2) and 10 for the 5-cycle."""
        self.assertEqual(theta(self.g22), 4)
        self.assertEqual(theta(directed_cycle(5)), 10)
        self.assertEqual(theta_from_profile(distance_profile(self.g22), 2), 4)

    def test_theta_single_vertex(self):
        """One vertex and no edges: no packets, so the bound is 0."""
        self.assertEqual(theta(Digraph(1, ())), 0)

    def test_disconnected(self):
        """Two separate 2-cycles are reported as disconnected."""
        g = Digraph(4, ((0, 1), (1, 0), (2, 3), (3, 2)))
        with self.assertRaises(Disconnected) as ctx:
            distance_profile(g)
        self.assertEqual(ctx.exception.details["source"], 0)
        self.assertEqual(ctx.exception.details["unreachable_vertex"], 2)

    def test_diameter2_bound(self):
        """The diameter-2 distance-sum bound for H_5 and H_13."""
        self.assertEqual(diameter2_bound(50, 7), 13)
        self.assertEqual(diameter2_bound(338, 19), 35)
        with self.assertRaises(BadParams):
            diameter2_bound(1, 3)

    def test_diameter2_bound_matches_bfs(self):
        """G(2,2) has diameter 2, so the closed bound equals theta."""
        self.assertEqual(diameter2_bound(6, 2), theta(self.g22))


if __name__ == '__main__':
    unittest.main()
