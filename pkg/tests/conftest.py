"""Shared fixtures and small map constructors used across the suite."""

from __future__ import annotations

import math
import random

import pytest

from surfmulticut.embed import EmbeddedGraph


def sphere_loop(sign=1, terminals=(), pairs=()):
    """One vertex, one loop; sphere for sign +1, projective plane for -1."""
    return EmbeddedGraph(1, [(0, 0, 1)], [[0, 1]], signs=[sign],
                         terminals=terminals, pairs=pairs)


def torus_two_loops():
    """One vertex, two interleaved loops a, b: rotation (a, b, abar, bbar)."""
    return EmbeddedGraph(1, [(0, 0, 1), (0, 0, 1)], [[0, 2, 1, 3]])


def cube_graph(weights=None, terminals=(), pairs=()):
    """The cube with its standard planar (genus 0) rotation system.

    Vertices 0..3 are the bottom square, 4..7 the top square (i above i-4).
    """
    edges = []
    # bottom cycle 0-1-2-3, top cycle 4-5-6-7, verticals i-(i+4)
    bottom = [(0, 1), (1, 2), (2, 3), (3, 0)]
    top = [(4, 5), (5, 6), (6, 7), (7, 4)]
    vert = [(0, 4), (1, 5), (2, 6), (3, 7)]
    all_pairs = bottom + top + vert
    if weights is None:
        weights = [1] * 12
    for (u, v), w in zip(all_pairs, weights):
        edges.append((u, v, w))

    # Build rotations from 3D coordinates projected suitably per vertex:
    # use a Schlegel-style planar drawing (outer face = one square).
    coords = {
        0: (-2.0, -2.0), 1: (2.0, -2.0), 2: (2.0, 2.0), 3: (-2.0, 2.0),
        4: (-1.0, -1.0), 5: (1.0, -1.0), 6: (1.0, 1.0), 7: (-1.0, 1.0),
    }
    incident = {v: [] for v in range(8)}
    for e, (u, v) in enumerate(all_pairs):
        incident[u].append((2 * e, v))
        incident[v].append((2 * e + 1, u))
    rotations = []
    for v in range(8):
        def angle(item):
            d, w = item
            dx = coords[w][0] - coords[v][0]
            dy = coords[w][1] - coords[v][1]
            return math.atan2(dy, dx)
        rotations.append([d for d, _ in sorted(incident[v], key=angle)])
    return EmbeddedGraph(8, edges, rotations, terminals=terminals, pairs=pairs)


def path_on_sphere(n=3, weights=None, terminals=(), pairs=()):
    """A path with n vertices embedded on the sphere (single face)."""
    if weights is None:
        weights = [1] * (n - 1)
    edges = [(i, i + 1, weights[i]) for i in range(n - 1)]
    rotations = []
    for v in range(n):
        rot = []
        if v > 0:
            rot.append(2 * (v - 1) + 1)
        if v < n - 1:
            rot.append(2 * v)
        rotations.append(rot)
    return EmbeddedGraph(n, edges, rotations, terminals=terminals, pairs=pairs)


def triangle(weights=(1, 2, 3), terminals=(), pairs=()):
    """Triangle a-b-c on the sphere; edges ab, bc, ca."""
    edges = [(0, 1, weights[0]), (1, 2, weights[1]), (2, 0, weights[2])]
    rotations = [[0, 5], [1, 2], [3, 4]]
    return EmbeddedGraph(3, edges, rotations, terminals=terminals, pairs=pairs)


def toroidal_grid(rows=2, cols=2, weights=None, terminals=(), pairs=()):
    """rows x cols grid with wraparound in both directions; Euler genus 2."""
    n = rows * cols

    def vid(r, c):
        return (r % rows) * cols + (c % cols)

    edges = []
    right = {}
    down = {}
    for r in range(rows):
        for c in range(cols):
            right[(r, c)] = len(edges)
            edges.append((vid(r, c), vid(r, c + 1), 1))
    for r in range(rows):
        for c in range(cols):
            down[(r, c)] = len(edges)
            edges.append((vid(r, c), vid(r + 1, c), 1))
    if weights is not None:
        edges = [(u, v, w) for (u, v, _), w in zip(edges, weights)]
    rotations = [[] for _ in range(n)]
    for r in range(rows):
        for c in range(cols):
            v = vid(r, c)
            e_right = right[(r, c)]
            e_left = right[(r, c - 1) if c > 0 else (r, cols - 1)]
            e_down = down[(r, c)]
            e_up = down[(r - 1, c) if r > 0 else (rows - 1, c)]
            # counterclockwise: east, north, west, south
            rotations[v] = [2 * e_right, 2 * e_up + 1, 2 * e_left + 1, 2 * e_down]
    return EmbeddedGraph(n, edges, rotations, terminals=terminals, pairs=pairs)


def random_orientable_map(rng: random.Random, max_vertices=6, max_extra_edges=5,
                          max_weight=10):
    """Random connected map with all-positive signs (orientable surface).

    Any rotation system is a valid cellular embedding of its graph in some
    orientable surface, so this samples maps of varying genus.
    """
    n = rng.randint(1, max_vertices)
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, rng.randint(1, max_weight)))
    for _ in range(rng.randint(0, max_extra_edges)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        edges.append((u, v, rng.randint(1, max_weight)))
    incident = [[] for _ in range(n)]
    for e, (u, v, _) in enumerate(edges):
        incident[u].append(2 * e)
        incident[v].append(2 * e + 1)
    rotations = []
    for v in range(n):
        rot = incident[v][:]
        rng.shuffle(rot)
        rotations.append(rot)
    return EmbeddedGraph(n, edges, rotations)


@pytest.fixture
def rng():
    return random.Random(12345)
