#!/usr/bin/env python3
"""Tests for cycle-prefix graphs, their shortest-path tree and minimum schedule."""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cpgraph import (build_cp, cp_factorization, cp_label, cp_min_schedule, cp_successor, cp_vertices,
                     cyclic_complement, grow_tree, rotate, shift)
from cpcount import mu
from digraph import check_regular, distance_profile
from errors import BadParams
from factorization import check_covers, factor_counts, verify_spanning
from schedule import simulate_exchange, verify_schedule


class TestCPVertices(unittest.TestCase):
    """Vertex set, labels and the two edge operations."""

    def test_vertex_count(self):
        """G(d,D) has (d+1)_D vertices in lexicographic order."""
        self.assertEqual(len(cp_vertices(2, 2)), 6)
        self.assertEqual(len(cp_vertices(4, 3)), 60)
        self.assertEqual(cp_vertices(2, 2)[:3], [(1, 2), (1, 3), (2, 1)])

    def test_bad_params(self):
        """D must lie in 2..d."""
        for d, D in ((2, 1), (2, 3), (0, 0)):
            with self.subTest(d=d, D=D):
                with self.assertRaises(BadParams):
                    build_cp(d, D)

    def test_labels(self):
        """Single-digit symbols print without separators."""
        self.assertEqual(cp_label((1, 2, 3)), "123")
        self.assertEqual(cp_label((1, 10, 3)), "1,10,3")

    def test_rotate_and_shift(self):
        """rotate brings the k-th symbol to the front; shift pushes a new one."""
        self.assertEqual(rotate((1, 2, 3), 3), (3, 1, 2))
        self.assertEqual(rotate((1, 2, 3), 1), (1, 2, 3))
        self.assertEqual(shift((1, 2, 3), 4), (4, 1, 2))

    def test_cyclic_complement(self):
        """Unused symbols start just after the last symbol."""
        self.assertEqual(cyclic_complement((1, 2), 2), [3])
        self.assertEqual(cyclic_complement((1, 3), 3), [4, 2])

    def test_successors(self):
        """Successors follow the rotate and shift rules."""
        self.assertEqual(cp_successor((1, 2), 1, 2), (2, 1))
        self.assertEqual(cp_successor((1, 2), 2, 2), (3, 1))
        self.assertEqual(cp_successor((1, 3), 3, 3), (2, 1))


class TestCPGraph(unittest.TestCase):
    """Structure of G(d, D)."""

    def test_edges_in_factor_order(self):
        """Edges are listed per vertex in factor order."""
        g = build_cp(2, 2)
        self.assertEqual(g.edges[:2], ((0, 2), (0, 4)))
        self.assertEqual(g.m, 12)

    def test_regular_with_diameter_D(self):
        """G(d,D) is d-regular with diameter D."""
        for d, D in ((2, 2), (3, 2), (3, 3), (4, 3)):
            with self.subTest(d=d, D=D):
                g = build_cp(d, D)
                self.assertEqual(check_regular(g), d)
                self.assertEqual(distance_profile(g).diameter, D)

    def test_factorization_covers(self):
        """The rotate/shift factors cover the edges of G(4,3)."""
        g = build_cp(4, 3)
        f = cp_factorization(4, 3)
        check_covers(g, f)
        self.assertEqual(f.d, 4)


class TestCPTree(unittest.TestCase):
    """The labeled shortest-path tree and its words."""

    def test_depth_counts(self):
        """n_k = (d+1)_{k-1} (d+1-k) nodes at depth k."""
        self.assertEqual(grow_tree(3, 3).depth_counts(), [1, 3, 8, 12])
        self.assertEqual(grow_tree(2, 2).depth_counts(), [1, 2, 3])

    def test_tree_reaches_every_vertex(self):
        """The labeled tree reaches all 60 vertices of G(4,3)."""
        tree = grow_tree(4, 3)
        self.assertEqual(sorted(node.vertex for node in tree.nodes), list(range(60)))

    def test_root_and_labels(self):
        """The root has label (0,0); depth one is (c,1) for every c."""
        tree = grow_tree(3, 2)
        root = tree.nodes[0]
        self.assertEqual((root.c, root.t, root.word), (0, 0, ()))
        first_level = [(n.c, n.t) for n in tree.nodes if n.t == 1]
        self.assertEqual(first_level, [(1, 1), (2, 1), (3, 1)])

    def test_children(self):
        """Each node's children follow the labeling rule."""
        tree = grow_tree(2, 2)
        children = tree.children()
        self.assertEqual(set(children[0]), {1, 2})
        # node (1,1) never takes F_1 again
        self.assertEqual(set(children[1]), {2})

    def test_words_spanning(self):
        """Tree words span the cycle-prefix factorization."""
        for d, D in ((2, 2), (3, 3), (4, 3), (5, 2)):
            with self.subTest(d=d, D=D):
                tree = grow_tree(d, D)
                self.assertTrue(verify_spanning(cp_factorization(d, D), tree.words).ok)

    def test_fd_is_the_heaviest_factor(self):
        """F_d carries the most letters."""
        counts = factor_counts(grow_tree(4, 3).words)
        self.assertEqual(max(counts), counts[-1])
        self.assertEqual(counts[-1], 47)


class TestCPMinSchedule(unittest.TestCase):
    """Schedules whose makespan equals the F_d count."""

    def test_small_cases(self):
        """cp_min_schedule verifies with makespan mu."""
        for d, D in ((2, 2), (3, 2), (4, 3), (5, 3)):
            with self.subTest(d=d, D=D):
                tree = grow_tree(d, D)
                s = cp_min_schedule(d, D, tree)
                check = verify_schedule(tree.words, s)
                self.assertTrue(check.ok)
                self.assertTrue(check.is_minimum)
                self.assertEqual(s.T, mu(d, D))

    def test_exchange_on_g43(self):
        """The G(4,3) schedule delivers every packet."""
        tree = grow_tree(4, 3)
        report = simulate_exchange(build_cp(4, 3), cp_factorization(4, 3), tree.words,
                                   cp_min_schedule(4, 3, tree))
        self.assertTrue(report.ok)
        self.assertEqual(report.packets_delivered, 60 * 59)


if __name__ == '__main__':
    unittest.main()
