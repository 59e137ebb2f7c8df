import random

import pytest

from surfmulticut.embed import (
    EmbeddedGraph, trace_faces, dual_graph, maps_isomorphic, normalize_signs,
)
from surfmulticut.errors import StructuralInputError

from conftest import (
    sphere_loop, torus_two_loops, cube_graph, path_on_sphere, triangle,
    toroidal_grid, random_orientable_map,
)


def test_cube_has_six_faces_genus_zero():
    faces = cube_graph().faces()
    assert faces.num_faces == 6
    assert faces.genus == 0
    assert faces.orientable


def test_single_loop_sphere():
    faces = sphere_loop(sign=1).faces()
    assert faces.num_faces == 2
    assert faces.genus == 0


def test_single_loop_projective_plane():
    faces = sphere_loop(sign=-1).faces()
    assert faces.num_faces == 1
    assert faces.genus == 1
    assert not faces.orientable


def test_two_interleaved_loops_torus():
    faces = torus_two_loops().faces()
    assert faces.num_faces == 1
    assert faces.genus == 2
    assert faces.orientable


def test_toroidal_grid_genus_two():
    g = toroidal_grid(2, 2)
    faces = g.faces()
    assert g.num_edges == 8
    assert faces.genus == 2
    assert faces.num_faces == 4
    assert faces.orientable


def test_path_single_face():
    faces = path_on_sphere(4).faces()
    assert faces.num_faces == 1
    assert faces.genus == 0


def test_isolated_vertex_map():
    g = EmbeddedGraph(1, [], [[]])
    faces = g.faces()
    assert faces.num_faces == 1
    assert faces.genus == 0


def test_euler_formula_on_random_maps():
    rng = random.Random(7)
    for _ in range(150):
        g = random_orientable_map(rng)
        faces = g.faces()
        assert g.num_vertices - g.num_edges + faces.num_faces == 2 - faces.genus
        assert faces.genus >= 0
        assert faces.genus % 2 == 0  # orientable
        # each edge side appears exactly once over all facial walks
        assert sum(len(w) for w in faces.walks) == g.num_darts


def test_malformed_rotation_duplicate_dart():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(2, [(0, 1, 1)], [[0, 0], [1]])


def test_malformed_rotation_missing_dart():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(2, [(0, 1, 1)], [[0], []])


def test_dart_at_wrong_vertex():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(2, [(0, 1, 1)], [[1], [0]])


def test_negative_weight_rejected():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(2, [(0, 1, -3)], [[0], [1]])


def test_disconnected_rejected():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(3, [(0, 1, 1)], [[0], [1], []])


def test_cube_dual_is_octahedron():
    g = cube_graph()
    d = dual_graph(g)
    assert d.num_vertices == 6
    assert d.num_edges == 12
    df = d.faces()
    assert df.num_faces == 8
    assert df.genus == 0
    assert sorted(len(r) for r in d.rotations) == [4] * 6


def test_loop_dual_two_vertices_one_edge():
    d = dual_graph(sphere_loop(sign=1))
    assert d.num_vertices == 2
    assert d.num_edges == 1
    assert d.faces().num_faces == 1
    assert d.faces().genus == 0


def test_dual_preserves_genus_and_weights():
    rng = random.Random(99)
    for _ in range(100):
        g = random_orientable_map(rng)
        d = dual_graph(g)
        assert d.faces().genus == g.faces().genus
        assert sorted(d.weights) == sorted(g.weights)
        assert d.num_vertices == g.faces().num_faces
        assert d.faces().num_faces == g.num_vertices


def test_projective_loop_dual():
    d = dual_graph(sphere_loop(sign=-1))
    assert d.num_vertices == 1
    assert d.num_edges == 1
    assert d.faces().genus == 1
    assert d.faces().num_faces == 1


def test_double_dual_isomorphic_random_maps():
    rng = random.Random(2024)
    count = 0
    while count < 100:
        g = random_orientable_map(rng, max_vertices=5, max_extra_edges=4)
        if g.num_edges == 0:
            continue
        count += 1
        dd = dual_graph(dual_graph(g))
        assert maps_isomorphic(g, dd), f"double dual mismatch at map {count}"


def test_double_dual_isomorphic_specific():
    for g in (cube_graph(), torus_two_loops(), sphere_loop(1), triangle()):
        assert maps_isomorphic(g, dual_graph(dual_graph(g)))


def test_isomorphism_rejects_different_weights():
    a = triangle(weights=(1, 2, 3))
    b = triangle(weights=(1, 2, 4))
    assert not maps_isomorphic(a, b)
    assert maps_isomorphic(a, b, check_weights=False)


def test_isomorphism_distinguishes_torus_from_sphere_bouquet():
    # two loops at one vertex: interleaved = torus, nested = sphere
    torus = torus_two_loops()
    sphere = EmbeddedGraph(1, [(0, 0, 1), (0, 0, 1)], [[0, 1, 2, 3]])
    assert sphere.faces().genus == 0
    assert not maps_isomorphic(torus, sphere)


def test_isomorphism_up_to_vertex_flip():
    # same triangle but one vertex rotation reversed with signs flipped
    a = triangle()
    b = EmbeddedGraph(3, [(0, 1, 1), (1, 2, 2), (2, 0, 3)],
                      [[5, 0], [1, 2], [3, 4]], signs=[-1, 1, -1])
    assert maps_isomorphic(a, b)
    assert b.faces().genus == a.faces().genus


def test_normalize_signs_detects_orientability():
    _, ok = normalize_signs(sphere_loop(sign=-1))
    assert not ok
    _, ok = normalize_signs(cube_graph())
    assert ok
    # sign on a tree edge is removable by a flip
    g = EmbeddedGraph(2, [(0, 1, 1)], [[0], [1]], signs=[-1])
    _, ok = normalize_signs(g)
    assert ok
    assert g.faces().genus == 0


def test_trace_deterministic():
    g = cube_graph()
    f1 = trace_faces(g)
    f2 = trace_faces(g)
    assert f1.walks == f2.walks
    assert f1.corners == f2.corners
