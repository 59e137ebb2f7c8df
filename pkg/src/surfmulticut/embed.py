"""Graphs embedded on surfaces, stored as signed rotation systems.

An embedded graph is stored combinatorially.  Every edge ``e`` owns two
darts (half-edges) ``2*e`` and ``2*e + 1``, anchored at its two endpoints;
every vertex carries the cyclic order of its incident darts; every edge
carries a sign.  All-positive signs describe an embedding in an orientable
surface; a ``-1`` sign marks an edge whose band reverses the local frames
of its endpoints, which suffices to represent embeddings in non-orientable
surfaces too.

Faces are recovered by walking the boundary of the ribbon-graph thickening
of the map.  The walk operates on *dart sides*: dart ``d`` has a left side
(state ``2*d``) and a right side (state ``2*d + 1``) relative to the local
frame of its origin vertex, giving ``4*e`` states.  Each boundary circle is
traced once per direction, so two walk orbits correspond to one face, and
the chosen representatives cover each edge side exactly once.

Euler genus is ``2 - v + e - f``; it is 0 for the sphere, 2 for the torus,
1 for the projective plane, and so on.  Weights are nonnegative integers
and every comparison in the package is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralInputError

LEFT, RIGHT = 0, 1


def _check_weight(w) -> int:
    if not isinstance(w, int) or isinstance(w, bool):
        raise StructuralInputError(f"edge weight {w!r} is not an integer")
    if w < 0 or w >= 1 << 63:
        raise StructuralInputError(f"edge weight {w} outside [0, 2^63)")
    return w


class EmbeddedGraph:
    """A weighted graph with a signed rotation system and terminal data.

    Parameters
    ----------
    num_vertices:
        Vertices are ``0 .. num_vertices - 1``.
    edges:
        Sequence of ``(u, v, weight)`` triples.  Loops and parallel edges
        are allowed.  Edge ``i`` owns darts ``2*i`` (anchored at ``u``) and
        ``2*i + 1`` (anchored at ``v``).
    rotations:
        Per vertex, the cyclic order of incident darts.  Every dart must
        appear exactly once, at its anchor vertex.
    signs:
        Optional per-edge signs in ``{+1, -1}``; defaults to all ``+1``.
    terminals:
        Distinguished vertices.
    pairs:
        Unordered pairs of distinct terminals to be separated.
    """

    __slots__ = (
        "num_vertices", "edge_u", "edge_v", "weights", "signs",
        "rotations", "terminals", "pairs",
        "_dart_pos", "_succ", "_pred", "_faces",
    )

    def __init__(self, num_vertices, edges, rotations, signs=None,
                 terminals=(), pairs=()):
        self.num_vertices = int(num_vertices)
        self.edge_u = []
        self.edge_v = []
        self.weights = []
        for (u, v, w) in edges:
            self.edge_u.append(int(u))
            self.edge_v.append(int(v))
            self.weights.append(_check_weight(w))
        ne = len(self.edge_u)
        if signs is None:
            self.signs = [1] * ne
        else:
            self.signs = [int(s) for s in signs]
        self.rotations = [list(r) for r in rotations]
        self.terminals = tuple(sorted(set(int(t) for t in terminals)))
        self.pairs = tuple(sorted(tuple(sorted(p)) for p in set(
            tuple(sorted((int(a), int(b)))) for (a, b) in pairs)))
        self._faces = None
        self._validate()
        self._index_darts()

    # -- basic structure ---------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edge_u)

    @property
    def num_darts(self) -> int:
        return 2 * len(self.edge_u)

    def dart_edge(self, d: int) -> int:
        return d >> 1

    def dart_origin(self, d: int) -> int:
        return self.edge_u[d >> 1] if (d & 1) == 0 else self.edge_v[d >> 1]

    def dart_head(self, d: int) -> int:
        return self.edge_v[d >> 1] if (d & 1) == 0 else self.edge_u[d >> 1]

    @staticmethod
    def rev(d: int) -> int:
        return d ^ 1

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        return self.edge_u[e], self.edge_v[e]

    def is_loop(self, e: int) -> bool:
        return self.edge_u[e] == self.edge_v[e]

    def total_weight(self) -> int:
        return sum(self.weights)

    def _validate(self):
        ne = len(self.edge_u)
        if len(self.signs) != ne:
            raise StructuralInputError("signs length does not match edge count")
        if any(s not in (1, -1) for s in self.signs):
            raise StructuralInputError("edge signs must be +1 or -1")
        if len(self.rotations) != self.num_vertices:
            raise StructuralInputError("one rotation per vertex required")
        for e in range(ne):
            for x in (self.edge_u[e], self.edge_v[e]):
                if not (0 <= x < self.num_vertices):
                    raise StructuralInputError(f"edge {e} touches unknown vertex {x}")
        seen = {}
        for v, rot in enumerate(self.rotations):
            for d in rot:
                if not (0 <= d < 2 * ne):
                    raise StructuralInputError(f"rotation of vertex {v} lists unknown dart {d}")
                if d in seen:
                    raise StructuralInputError(f"dart {d} appears twice in rotations")
                seen[d] = v
                if self.dart_origin(d) != v:
                    raise StructuralInputError(
                        f"dart {d} of edge {d >> 1} listed at vertex {v}, "
                        f"but is anchored at {self.dart_origin(d)}")
        if len(seen) != 2 * ne:
            missing = [d for d in range(2 * ne) if d not in seen]
            raise StructuralInputError(f"darts missing from rotations: {missing[:8]}")
        for (a, b) in self.pairs:
            if a == b:
                raise StructuralInputError(f"terminal pair ({a}, {b}) is not a pair of distinct vertices")
            if a not in self.terminals or b not in self.terminals:
                raise StructuralInputError(f"pair ({a}, {b}) uses a non-terminal vertex")
        if not self._connected():
            raise StructuralInputError("graph is not connected")

    def _connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        seen = {0}
        stack = [0]
        adj = [[] for _ in range(self.num_vertices)]
        for e in range(self.num_edges):
            adj[self.edge_u[e]].append(self.edge_v[e])
            adj[self.edge_v[e]].append(self.edge_u[e])
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.num_vertices

    def _index_darts(self):
        self._dart_pos = {}
        nd = self.num_darts
        self._succ = [0] * nd
        self._pred = [0] * nd
        for v, rot in enumerate(self.rotations):
            k = len(rot)
            for i, d in enumerate(rot):
                self._dart_pos[d] = (v, i)
                self._succ[d] = rot[(i + 1) % k]
                self._pred[d] = rot[(i - 1) % k]

    def dart_position(self, d: int) -> tuple[int, int]:
        """Vertex and index of ``d`` within its rotation."""
        return self._dart_pos[d]

    # -- face tracing ------------------------------------------------------

    def faces(self) -> "FaceStructure":
        if self._faces is None:
            self._faces = trace_faces(self)
        return self._faces


@dataclass(frozen=True)
class FaceStructure:
    """Facial walks of an embedded graph, plus derived surface data.

    ``walks[i]`` is the i-th face as a tuple of states (``2*dart + side``);
    ``corners[i][j]`` is the vertex corner crossed between step ``j`` and
    step ``j + 1`` of walk ``i``, encoded as ``(vertex, gap_index)`` where
    ``gap_index`` is the rotation position of the dart the gap follows.
    Each face is listed once; its walk covers each traversed edge side once.
    """

    walks: tuple
    corners: tuple
    genus: int
    orientable: bool
    state_face: dict
    gap_face: dict
    edge_states: dict

    @property
    def num_faces(self) -> int:
        return len(self.walks)

    def face_of_state(self, state: int) -> int:
        return self.state_face[state]

    def face_of_gap(self, vertex: int, gap_index: int) -> int:
        return self.gap_face[(vertex, gap_index)]


def next_state(g, state: int) -> int:
    """One step of the ribbon-boundary walk."""
    d, s = state >> 1, state & 1
    dbar = d ^ 1
    sbar = s ^ 1 if g.signs[d >> 1] > 0 else s
    if sbar == LEFT:
        return (g._succ[dbar] << 1) | RIGHT
    return (g._pred[dbar] << 1) | LEFT


def crossed_corner(g, state: int) -> tuple[int, int]:
    """Corner crossed after traversing ``state``, as ``(vertex, gap_index)``."""
    d, s = state >> 1, state & 1
    dbar = d ^ 1
    sbar = s ^ 1 if g.signs[d >> 1] > 0 else s
    v, pos = g._dart_pos[dbar]
    if sbar == LEFT:
        return (v, pos)
    return (v, (pos - 1) % len(g.rotations[v]))


def reverse_state(g, state: int) -> int:
    """The same edge side, traversed in the opposite direction."""
    d, s = state >> 1, state & 1
    sbar = s ^ 1 if g.signs[d >> 1] > 0 else s
    return ((d ^ 1) << 1) | sbar


def trace_faces(g) -> FaceStructure:
    """Decompose the ribbon boundary into faces.

    Raises :class:`StructuralInputError` earlier, at construction, if the
    rotation data is malformed; here the map is assumed valid.
    """
    nd = g.num_darts
    if nd == 0:
        # A single vertex on the sphere: one face, by convention.
        return FaceStructure(walks=((),), corners=((),), genus=0,
                             orientable=True, state_face={}, gap_face={},
                             edge_states={})
    orbit_of = {}
    orbits = []
    for start in range(2 * nd):
        if start in orbit_of:
            continue
        walk = []
        s = start
        while True:
            orbit_of[s] = len(orbits)
            walk.append(s)
            s = next_state(g, s)
            if s == start:
                break
        orbits.append(tuple(walk))

    # Pair each orbit with its reverse traversal; keep the lexicographically
    # smaller representative so face ids are deterministic.
    chosen = []
    paired = set()
    for i, walk in enumerate(orbits):
        if i in paired:
            continue
        j = orbit_of[reverse_state(g, walk[0])]
        if j == i:
            raise StructuralInputError("face walk is its own reverse; malformed map")
        paired.add(i)
        paired.add(j)
        other = orbits[j]
        chosen.append(walk if min(walk) < min(other) else other)
    chosen.sort(key=min)

    state_face = {}
    gap_face = {}
    corners_all = []
    edge_states = {}
    total_sides = 0
    for fid, walk in enumerate(chosen):
        corner_row = []
        for st in walk:
            state_face[st] = fid
            corner = crossed_corner(g, st)
            if corner in gap_face:
                raise StructuralInputError("corner crossed twice; malformed map")
            gap_face[corner] = fid
            corner_row.append(corner)
            edge_states.setdefault(st >> 2, []).append(st)
            total_sides += 1
        corners_all.append(tuple(corner_row))
    if total_sides != nd:
        raise StructuralInputError("face walks do not cover each edge side once")
    for e, sts in edge_states.items():
        if len(sts) != 2:
            raise StructuralInputError(f"edge {e} covered {len(sts)} times by face walks")
        edge_states[e] = tuple(sorted(sts))

    f = len(chosen)
    genus = 2 - g.num_vertices + g.num_edges - f
    _, orientable = normalize_signs(g)
    return FaceStructure(walks=tuple(chosen), corners=tuple(corners_all),
                         genus=genus, orientable=orientable,
                         state_face=state_face, gap_face=gap_face,
                         edge_states=edge_states)


def normalize_signs(g) -> tuple[list[int], bool]:
    """Vertex flips making a spanning tree all-positive.

    Returns ``(flips, orientable)``: ``flips[v]`` in ``{+1, -1}``, and
    whether the flipped sign vector is all-positive (loops keep their sign
    under flips, so a ``-1`` loop always witnesses non-orientability).
    """
    n = g.num_vertices
    flips = [0] * n
    flips[0] = 1
    order = [0]
    adj = [[] for _ in range(n)]
    for e in range(g.num_edges):
        adj[g.edge_u[e]].append((g.edge_v[e], e))
        adj[g.edge_v[e]].append((g.edge_u[e], e))
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for (y, e) in adj[x]:
            if flips[y] == 0:
                flips[y] = flips[x] * g.signs[e]
                order.append(y)
    orientable = True
    for e in range(g.num_edges):
        s = g.signs[e] * flips[g.edge_u[e]] * flips[g.edge_v[e]]
        if s < 0:
            orientable = False
            break
    return flips, orientable


def dual_graph(g, faces: FaceStructure | None = None) -> EmbeddedGraph:
    """The dual map: one vertex per face, one edge crossing each primal edge.

    Dual edge ``e*`` inherits the weight of ``e``.  The rotation at a dual
    vertex is the facial walk order, and the sign of ``e*`` records whether
    the two facial traversals of ``e`` run antiparallel (``+1``) or parallel
    (``-1``) along the edge band, which keeps the dual on the same surface.
    """
    if faces is None:
        faces = g.faces()
    f = faces.num_faces
    edges = []
    signs = []
    dual_dart_of_state = {}
    for e in range(g.num_edges):
        st1, st2 = faces.edge_states[e]
        f1 = faces.state_face[st1]
        f2 = faces.state_face[st2]
        edges.append((f1, f2, g.weights[e]))
        # Both covered states on the same dart: the band is traversed twice
        # in the same direction, so the dual band is twisted.
        signs.append(-1 if (st1 >> 1) == (st2 >> 1) else 1)
        dual_dart_of_state[st1] = 2 * e
        dual_dart_of_state[st2] = 2 * e + 1
    rotations = []
    for walk in faces.walks:
        rotations.append([dual_dart_of_state[st] for st in walk])
    return EmbeddedGraph(f, edges, rotations, signs=signs)


def maps_isomorphic(a: EmbeddedGraph, b: EmbeddedGraph,
                    check_weights: bool = True) -> bool:
    """Equivalence of embedded maps.

    Allows relabeling of vertices, edges and darts, and independent local
    frame flips at vertices (a flip reverses one rotation and toggles the
    signs of the non-loop edges there).  The search fixes the image of one
    root dart and the root frame, then propagates; it runs in
    O(edges^2) which is fine at the scales this package targets.
    """
    if a.num_vertices != b.num_vertices or a.num_edges != b.num_edges:
        return False
    if a.num_edges == 0:
        return True
    if sorted(len(r) for r in a.rotations) != sorted(len(r) for r in b.rotations):
        return False
    if check_weights and sorted(a.weights) != sorted(b.weights):
        return False

    root = 0
    for d0 in range(b.num_darts):
        for root_flip in (1, -1):
            if _try_map_iso(a, b, root, d0, root_flip, check_weights):
                return True
    return False


def _try_map_iso(a, b, root_dart, image_dart, root_flip, check_weights) -> bool:
    dart_map = {root_dart: image_dart}
    flip = {a.dart_origin(root_dart): root_flip}
    stack = [root_dart]
    processed_vertices = set()
    while stack:
        d = stack.pop()
        v = a.dart_origin(d)
        if v in processed_vertices:
            continue
        processed_vertices.add(v)
        rot_a = a.rotations[v]
        if len(rot_a) != len(b.rotations[a_img_vertex := b.dart_origin(dart_map[d])]):
            return False
        # Walk the rotation at v in parallel with the image rotation.
        cur_a, cur_b = d, dart_map[d]
        fv = flip[v]
        for _ in range(len(rot_a)):
            nxt_a = a._succ[cur_a]
            nxt_b = b._succ[cur_b] if fv > 0 else b._pred[cur_b]
            if nxt_a in dart_map:
                if dart_map[nxt_a] != nxt_b:
                    return False
            else:
                dart_map[nxt_a] = nxt_b
            cur_a, cur_b = nxt_a, nxt_b
        # Cross every dart at v to seed neighbours.
        cur_a, cur_b = d, dart_map[d]
        for _ in range(len(rot_a)):
            ea, eb = cur_a >> 1, cur_b >> 1
            if check_weights and a.weights[ea] != b.weights[eb]:
                return False
            ra, rb = cur_a ^ 1, cur_b ^ 1
            if ra in dart_map:
                if dart_map[ra] != rb:
                    return False
            else:
                dart_map[ra] = rb
            w = a.dart_origin(ra)
            wf = a.signs[ea] * b.signs[eb] * flip[v]
            if w in flip:
                if flip[w] != wf:
                    return False
            else:
                flip[w] = wf
                stack.append(ra)
            cur_a = a._succ[cur_a]
            cur_b = b._succ[cur_b] if fv > 0 else b._pred[cur_b]
    if len(dart_map) != a.num_darts:
        return False
    return True
