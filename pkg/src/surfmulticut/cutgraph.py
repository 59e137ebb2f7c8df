"""Cut graphs through the terminals, and the disk obtained by cutting.

The cut graph K is a family of curves anchored at the terminals whose
complement in the surface is a single open disk.  It is built in two
stages: a tree of shortest curves spanning the terminals (grown like
Prim's algorithm over exact cross-metric distances), then, on positive
genus surfaces, greedily shortest extra curves that each merge a handle
or cross-cap into the disk (tree-cotree style).  Every routed curve stays
disjoint from the ones already inserted because routing only crosses host
edges.

Cutting the surface along K yields the disk schema: the cyclic boundary
of corners (terminal copies) and sides (paired copies of the curves),
plus the arrangement faces as the disk's interior.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

from .embed import EmbeddedGraph, dual_graph, trace_faces
from .crossmetric import (
    Curve, Overlay, OverlayBuilder, RouteLabels, build_overlay, route_faces,
)
from .errors import (
    CurveError, InternalInvariantError, StructuralInputError, TopologyError,
)


@dataclass(frozen=True)
class CutGraph:
    """A cut graph: curves through the terminals cutting the surface open."""

    curves: tuple
    total_length: int

    @property
    def num_edges(self) -> int:
        return len(self.curves)


@dataclass(frozen=True)
class SideRecord:
    """One side of the disk: a boundary copy of one cut-graph curve.

    ``states`` and ``pieces`` run along the boundary walk; ``pieces`` are
    overlay edge ids of the curve's fragments.
    """

    curve: int
    states: tuple
    pieces: tuple


@dataclass(frozen=True)
class CornerRecord:
    """One corner of the disk: a boundary copy of a cut-graph vertex."""

    vertex: int
    interior_darts: tuple


@dataclass(frozen=True)
class DiskSchema:
    """The disk obtained by cutting the surface along the cut graph.

    ``boundary`` is the cyclic walk as ``('corner', i)`` / ``('side', j)``
    elements; ``pairing[j]`` names the partner side of ``j`` and whether
    the two copies run parallel along the curve; regluing the sides per the
    pairing restores the arrangement.
    """

    overlay: Overlay
    boundary: tuple
    sides: tuple
    corners: tuple
    pairing: dict
    state_side_pos: dict

    @property
    def num_sides(self) -> int:
        return len(self.sides)

    def side_length(self, j: int) -> int:
        return len(self.sides[j].pieces)

    def partner(self, j: int) -> int:
        return self.pairing[j][0]

    def parallel(self, j: int) -> bool:
        return self.pairing[j][1]

    def glue_position(self, j: int, pos: int) -> tuple[int, int]:
        """The boundary point identified with position ``pos`` of side ``j``."""
        pj, par = self.pairing[j]
        m = self.side_length(j)
        return (pj, pos if par else m - 1 - pos)

    def side_faces(self, j: int) -> tuple:
        """Arrangement face along side ``j`` at each piece position."""
        fs = self.overlay.faces
        return tuple(fs.state_face[st] for st in self.sides[j].states)


# -- shortest cross-metric paths (public primitive) --------------------------


@dataclass
class ShortestPathLabels:
    """Exact cross-metric distances from a source vertex anchor.

    ``face_distance`` labels every face of the host graph;
    ``anchor_distance`` labels every vertex (the cheapest incident face,
    since entering or leaving an anchor is free).
    """

    source: int
    face_distance: dict
    anchor_distance: dict
    _builder: object
    _labels: RouteLabels

    def extract_curve(self, target: int) -> Curve:
        """A curve from the source anchor realizing ``anchor_distance``."""
        after = self._labels.anchor_gap[target]
        face = self._builder.face_of_corner(target, after)
        (sv, sa), pieces = self._labels.route_to_face(face)
        trial = copy.deepcopy(self._builder)
        trial.insert_curve(sv, sa, pieces, target, after)
        return trial.freeze().curves[0]


def cross_metric_shortest_paths(g: EmbeddedGraph, source: int) -> ShortestPathLabels:
    """Distances from a vertex anchor to every face, measured by crossings.

    A curve leaving the anchor enters any incident face at cost 0, then
    pays the weight of each edge it crosses.
    """
    builder = OverlayBuilder(g)
    labels = route_faces(builder, [source])
    return ShortestPathLabels(source=source,
                              face_distance=dict(labels.dist),
                              anchor_distance=dict(labels.anchor_dist),
                              _builder=builder, _labels=labels)


# -- cut graph construction ---------------------------------------------------


def build_cut_graph(g: EmbeddedGraph) -> tuple[CutGraph, Overlay]:
    """A cut graph whose vertices contain the terminals.

    On the sphere this is a shortest spanning tree of the terminals under
    cross-metric distances; in positive genus, greedily shortest essential
    curves (each two tree-shortest routes plus one crossing) complete the
    tree until the complement is a single disk.
    """
    if not g.terminals:
        raise StructuralInputError("cut graph needs at least one terminal")
    surface_genus = g.faces().genus
    builder = OverlayBuilder(g)
    root = g.terminals[0]
    in_tree = [root]
    remaining = [t for t in g.terminals if t != root]
    total = 0
    while remaining:
        labels = route_faces(builder, in_tree)
        best = min(remaining, key=lambda t: (labels.anchor_dist[t], t))
        after = labels.anchor_gap[best]
        face = builder.face_of_corner(best, after)
        (sv, sa), pieces = labels.route_to_face(face)
        builder.insert_curve(sv, sa, pieces, best, after)
        total += labels.anchor_dist[best]
        in_tree.append(best)
        remaining.remove(best)

    while True:
        km_faces, km_genus = _k_map_shape(builder)
        if km_faces == 1 and km_genus == surface_genus:
            break
        if km_faces != 1 or km_genus > surface_genus:
            raise InternalInvariantError(
                f"cut graph construction out of course: "
                f"{km_faces} faces, genus {km_genus}")
        builder, added = _add_essential_curve(builder, list(g.terminals))
        total += added

    overlay = builder.freeze()
    cut = CutGraph(curves=overlay.curves, total_length=total)
    return cut, overlay


def _k_map_shape(builder: OverlayBuilder) -> tuple[int, int]:
    """Face count and genus of the cut-graph-only map."""
    if not builder.k_chains:
        return 1, 0
    fs = builder.freeze().k_map().faces()
    return fs.num_faces, fs.genus


def _add_essential_curve(builder: OverlayBuilder, anchors):
    """Insert the shortest curve that merges a handle into the disk.

    Candidates run from one anchor to a face, cross one more host edge,
    and return to an anchor along the shortest-route forest.  A candidate
    is essential exactly when the cut-graph-only map keeps a single face
    after insertion.
    """
    labels = route_faces(builder, anchors)
    tr = builder.faces()
    cands = []
    for p in builder.live_pieces():
        if not builder.is_g_piece(p):
            continue
        st1, st2 = tr.edge_states[p]
        f1, f2 = tr.state_face[st1], tr.state_face[st2]
        if f1 not in labels.dist or f2 not in labels.dist:
            continue
        length = labels.dist[f1] + builder.piece_weight(p) + labels.dist[f2]
        cands.append((length, p, f1, f2))
    cands.sort()
    for (length, p, f1, f2) in cands:
        (sv, sa), pieces_a = labels.route_to_face(f1)
        (ev_, ea), pieces_b = labels.route_to_face(f2)
        route = pieces_a + [p] + pieces_b[::-1]
        trial = copy.deepcopy(builder)
        try:
            trial.insert_curve(sv, sa, route, ev_, ea)
        except (CurveError, InternalInvariantError):
            continue
        faces_after, _ = _k_map_shape(trial)
        if faces_after == 1:
            return trial, length
    raise InternalInvariantError(
        "no essential curve found although the complement is not a disk")


# -- cutting along the cut graph ----------------------------------------------


def cut_to_disk(g: EmbeddedGraph, cut: CutGraph,
                overlay: Overlay | None = None) -> tuple[Overlay, DiskSchema]:
    """Cut the surface along the cut graph, yielding the disk schema.

    Raises :class:`TopologyError` if the curves are not a cut graph (their
    complement is disconnected or not a disk).
    """
    if overlay is None:
        overlay = build_overlay(g, cut.curves)
    km = overlay.k_map().faces()
    if km.num_faces != 1 or km.genus != g.faces().genus:
        raise TopologyError(
            f"not a cut graph: complement has {km.num_faces} faces on a "
            f"genus {km.genus} shape (surface genus {g.faces().genus})")
    schema = build_disk_schema(overlay)
    return overlay, schema


def build_disk_schema(overlay: Overlay) -> DiskSchema:
    """Walk the boundary of the cut-open surface and record its structure."""
    g = overlay.graph
    is_k = [overlay.ekind[e][0] == "k" for e in range(g.num_edges)]
    k_states = set()
    for e in range(g.num_edges):
        if is_k[e]:
            k_states.update(overlay.faces.edge_states[e])
    if not k_states:
        raise TopologyError("overlay has no cut-graph curves")

    def next_boundary(state):
        d, s = state >> 1, state & 1
        dbar = d ^ 1
        sbar = s ^ 1 if g.signs[d >> 1] > 0 else s
        v = g.dart_origin(dbar)
        cur = dbar
        skipped = []
        while True:
            nxt = g._succ[cur] if sbar == 0 else g._pred[cur]
            if is_k[nxt >> 1]:
                out_state = (nxt << 1) | (1 if sbar == 0 else 0)
                return out_state, v, tuple(skipped)
            skipped.append(nxt)
            cur = nxt

    start = min(k_states)
    walk = []
    state = start
    while True:
        out_state, v, skipped = next_boundary(state)
        walk.append((state, v, skipped))
        state = out_state
        if state == start:
            break
    if len(walk) != len(k_states):
        raise TopologyError("cut-graph complement boundary is not one circle")

    # Group runs of states between terminal corners into sides.
    boundary = []
    sides = []
    corners = []
    run = []
    run_start_offset = None
    # rotate so the walk starts right after a terminal corner
    corner_positions = [i for i, (_st, v, _sk) in enumerate(walk)
                        if overlay.vkind[v][0] == "g"]
    if not corner_positions:
        raise TopologyError("boundary walk never meets a cut-graph vertex")
    shift = (corner_positions[0] + 1) % len(walk)
    walk = walk[shift:] + walk[:shift]

    state_side_pos = {}
    for (st, v, skipped) in walk:
        run.append(st)
        if overlay.vkind[v][0] == "g":
            curve_ids = {overlay.ekind[s >> 2][1] for s in run}
            if len(curve_ids) != 1:
                raise InternalInvariantError("side mixes curves")
            j = len(sides)
            pieces = tuple(s >> 2 for s in run)
            sides.append(SideRecord(curve=curve_ids.pop(), states=tuple(run),
                                    pieces=pieces))
            for pos, s in enumerate(run):
                state_side_pos[s] = (j, pos)
            boundary.append(("side", j))
            boundary.append(("corner", len(corners)))
            corners.append(CornerRecord(vertex=v, interior_darts=skipped))
            run = []
    if run:
        raise InternalInvariantError("boundary walk ended inside a side")

    by_curve = {}
    for j, rec in enumerate(sides):
        by_curve.setdefault(rec.curve, []).append(j)
    pairing = {}
    for curve, js in sorted(by_curve.items()):
        if len(js) != 2:
            raise InternalInvariantError(
                f"curve {curve} appears on {len(js)} sides")
        a, b = js
        if sides[a].pieces == tuple(reversed(sides[b].pieces)):
            par = False
        elif sides[a].pieces == sides[b].pieces:
            par = True
        else:
            raise InternalInvariantError(f"sides of curve {curve} disagree")
        pairing[a] = (b, par)
        pairing[b] = (a, par)

    schema = DiskSchema(overlay=overlay, boundary=tuple(boundary),
                        sides=tuple(sides), corners=tuple(corners),
                        pairing=pairing, state_side_pos=state_side_pos)
    _check_disk_euler(overlay, schema)
    return schema


def _check_disk_euler(overlay: Overlay, schema: DiskSchema):
    """The cut-open surface must have the Euler characteristic of a disk."""
    g = overlay.graph
    n_cross = sum(1 for vk in overlay.vkind if vk[0] == "x")
    k_dart_count = {}
    interior_g = 0
    for v in range(g.num_vertices):
        if overlay.vkind[v][0] != "g":
            continue
        kd = sum(1 for d in g.rotations[v] if overlay.ekind[d >> 1][0] == "k")
        if kd == 0:
            interior_g += 1
        else:
            k_dart_count[v] = kd
    num_k_pieces = sum(len(ch) for ch in overlay.k_pieces.values())
    num_g_pieces = sum(len(ch) for ch in overlay.g_pieces.values())
    v_cnt = interior_g + sum(k_dart_count.values()) + 2 * n_cross
    e_cnt = num_g_pieces + 2 * num_k_pieces
    f_cnt = overlay.num_faces
    if v_cnt - e_cnt + f_cnt != 1:
        raise InternalInvariantError(
            f"cut-open surface has Euler characteristic "
            f"{v_cnt - e_cnt + f_cnt}, expected 1 (disk)")


def reglue(schema: DiskSchema) -> EmbeddedGraph:
    """Rebuild the arrangement from the disk data and the side pairing.

    The faces of the disk, together with the pairing of edge sides (host
    pieces pair internally; curve pieces pair through the schema), encode
    the arrangement as the dual of a face-incidence map.  Taking the dual
    of that reconstruction returns a map isomorphic to the overlay exactly
    when the schema is consistent.
    """
    overlay = schema.overlay
    g = overlay.graph
    fs = overlay.faces
    f = fs.num_faces
    edges = []
    signs = []
    dual_dart_of_state = {}
    for e in range(g.num_edges):
        st1, st2 = fs.edge_states[e]
        if overlay.ekind[e][0] == "k":
            # Pair through the schema: a boundary point and its glued twin.
            j1, p1 = schema.state_side_pos[st1]
            j2, p2 = schema.glue_position(j1, p1)
            side2 = schema.sides[j2]
            if side2.states[p2] != st2:
                raise InternalInvariantError(
                    "schema gluing does not pair the two copies of a piece")
            curve_sides_parallel = schema.parallel(j1)
            sign = -1 if curve_sides_parallel else 1
        else:
            sign = -1 if (st1 >> 1) == (st2 >> 1) else 1
        f1, f2 = fs.state_face[st1], fs.state_face[st2]
        edges.append((f1, f2, overlay.piece_weight(e)))
        signs.append(sign)
        dual_dart_of_state[st1] = 2 * e
        dual_dart_of_state[st2] = 2 * e + 1
    rotations = [[dual_dart_of_state[st] for st in w] for w in fs.walks]
    face_map = EmbeddedGraph(f, edges, rotations, signs=signs)
    return dual_graph(face_map)
