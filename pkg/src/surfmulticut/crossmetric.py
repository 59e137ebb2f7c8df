"""Curves measured against an embedded graph, and arrangement overlays.

A curve is recorded purely combinatorially: its endpoints sit at vertex
anchors (a vertex plus the corner of the rotation it occupies) and its
interior is an ordered list of transversal crossings with graph edges.
The length of a curve is the weighted count of its crossings; anchors are
free.  The arrangement of the graph together with a family of curves is
itself an embedded graph (the overlay), built here by inserting curves one
at a time: every crossing subdivides an edge and every curve segment is a
chord splitting a face, so the combinatorics stay unambiguous throughout.

Positions along an edge are indices into the crossing order, never
coordinates.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, insort
from dataclasses import dataclass

from .embed import EmbeddedGraph, crossed_corner
from .errors import CurveError, InternalInvariantError


@dataclass(frozen=True)
class Anchor:
    """A curve endpoint: a vertex, the corner it occupies, and its slot.

    ``after_dart`` is the dart of the host graph whose corner the endpoint
    sits in (the corner follows that dart in the rotation); ``slot`` orders
    multiple curve ends sharing one corner, 0 lying closest to
    ``after_dart``.
    """

    vertex: int
    after_dart: int
    slot: int = 0


@dataclass(frozen=True)
class Curve:
    """An embedded curve in general position with the host graph.

    ``events`` lists transversal crossings in curve order as
    ``(edge, index, orientation)``: ``index`` positions the crossing among
    all crossings on that edge (a total order shared by all curves of an
    arrangement) and ``orientation`` records on which local side of the
    edge the curve arrives.
    """

    start: Anchor
    end: Anchor
    events: tuple


def curve_length(curve: Curve, g: EmbeddedGraph) -> int:
    """Total weight of crossed edges, counted with multiplicity."""
    total = 0
    for (e, _idx, _orient) in curve.events:
        if not (0 <= e < g.num_edges):
            raise CurveError(f"curve crosses unknown edge {e}")
        total += g.weights[e]
    return total


@dataclass(frozen=True)
class _BuilderTrace:
    num_faces: int
    genus: int
    walks: tuple
    corners: tuple
    state_face: dict
    gap_face: dict
    edge_states: dict


class OverlayBuilder:
    """Mutable arrangement of a host graph and inserted curves.

    Vertices ``0 .. n-1`` are the host graph's vertices; crossing vertices
    are appended as curves are inserted.  Edges are pieces, each a fragment
    of a host edge or of a curve.  Pieces die when subdivided; ids are
    never reused, and descendant maps let stale references be resolved.
    """

    def __init__(self, g: EmbeddedGraph):
        self.host = g
        self.vkind = [("g", v) for v in range(g.num_vertices)]
        self.eu = list(g.edge_u)
        self.ev = list(g.edge_v)
        self.esign = list(g.signs)
        self.ekind = [("g", e) for e in range(g.num_edges)]
        self.alive = [True] * g.num_edges
        self.rotations = [list(r) for r in g.rotations]
        self.g_chains = {e: [e] for e in range(g.num_edges)}
        self.k_chains: dict[int, list[int]] = {}
        self.k_anchors: dict[int, tuple] = {}
        self.dart_descend: dict[int, int] = {}
        self.piece_descend: dict[int, tuple] = {}
        self._trace = None

    # -- structure helpers --------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vkind)

    def piece_weight(self, p: int) -> int:
        kind, payload = self.ekind[p]
        return self.host.weights[payload] if kind == "g" else 0

    def is_g_piece(self, p: int) -> bool:
        return self.ekind[p][0] == "g"

    def resolve_dart(self, d: int) -> int:
        while d in self.dart_descend:
            d = self.dart_descend[d]
        return d

    def resolve_pieces(self, p: int) -> list[int]:
        if self.alive[p]:
            return [p]
        a, b = self.piece_descend[p]
        return self.resolve_pieces(a) + self.resolve_pieces(b)

    def _invalidate(self):
        self._trace = None

    def live_pieces(self) -> list[int]:
        return [p for p in range(len(self.eu)) if self.alive[p]]

    # -- face tracing (via a dense snapshot) ----------------------------------

    def snapshot(self):
        """Dense :class:`EmbeddedGraph` of the current arrangement.

        Returns ``(graph, dense_of_piece, live)``.  Construction re-runs
        the full structural validation, so every mutation is checked.
        """
        live = self.live_pieces()
        dense_of_piece = {p: i for i, p in enumerate(live)}
        edges = [(self.eu[p], self.ev[p], self.piece_weight(p)) for p in live]
        signs = [self.esign[p] for p in live]

        def dmap(d):
            return (dense_of_piece[d >> 1] << 1) | (d & 1)

        rotations = [[dmap(d) for d in rot] for rot in self.rotations]
        graph = EmbeddedGraph(self.num_vertices, edges, rotations, signs=signs)
        return graph, dense_of_piece, live

    def faces(self) -> _BuilderTrace:
        if self._trace is None:
            graph, _dense_of_piece, live = self.snapshot()
            fs = graph.faces()

            def pmap(state):
                dense_dart = state >> 1
                p = live[dense_dart >> 1]
                return (((p << 1) | (dense_dart & 1)) << 1) | (state & 1)

            state_face = {pmap(st): f for st, f in fs.state_face.items()}
            edge_states = {live[e]: tuple(sorted(pmap(st) for st in sts))
                           for e, sts in fs.edge_states.items()}
            walks = tuple(tuple(pmap(st) for st in w) for w in fs.walks)
            self._trace = _BuilderTrace(
                num_faces=fs.num_faces, genus=fs.genus, walks=walks,
                corners=fs.corners, state_face=state_face,
                gap_face=dict(fs.gap_face), edge_states=edge_states)
        return self._trace

    def gap_index(self, v: int, after_dart: int) -> int:
        return self.rotations[v].index(after_dart)

    def face_of_corner(self, v: int, after_dart: int) -> int:
        return self.faces().gap_face[(v, self.gap_index(v, after_dart))]

    # -- surgery ----------------------------------------------------------------

    def _new_edge(self, u, v, sign, kind) -> int:
        p = len(self.eu)
        self.eu.append(u)
        self.ev.append(v)
        self.esign.append(sign)
        self.ekind.append(kind)
        self.alive.append(True)
        return p

    def _chain_of(self, p: int) -> list:
        kind, payload = self.ekind[p]
        return self.g_chains[payload] if kind == "g" else self.k_chains[payload]

    def split_piece(self, p: int, curve_id: int):
        """Subdivide piece ``p`` at a new crossing vertex.

        Returns ``(m, first, second)`` with ``first`` on the original
        u-side.  Faces are preserved: the first half inherits the piece's
        sign and the second half carries +1, which leaves the frames of
        the old endpoints untouched.
        """
        if not self.alive[p]:
            raise InternalInvariantError(f"piece {p} is dead")
        before = self.faces()
        u, v = self.eu[p], self.ev[p]
        m = len(self.vkind)
        _, payload = self.ekind[p]
        self.vkind.append(("x", payload, curve_id))
        self.rotations.append([])
        p1 = self._new_edge(u, m, self.esign[p], self.ekind[p])
        p2 = self._new_edge(m, v, 1, self.ekind[p])
        self.alive[p] = False
        ru = self.rotations[u]
        ru[ru.index(2 * p)] = 2 * p1
        rv = self.rotations[v]
        rv[rv.index(2 * p + 1)] = 2 * p2 + 1
        self.rotations[m] = [2 * p1 + 1, 2 * p2]
        self.dart_descend[2 * p] = 2 * p1
        self.dart_descend[2 * p + 1] = 2 * p2 + 1
        self.piece_descend[p] = (p1, p2)
        chain = self._chain_of(p)
        i = chain.index(p)
        chain[i:i + 1] = [p1, p2]
        self._invalidate()
        after = self.faces()
        if after.num_faces != before.num_faces or after.genus != before.genus:
            raise InternalInvariantError("subdivision changed the surface")
        return m, p1, p2

    def insert_chord(self, v1: int, after1: int, v2: int, after2: int,
                     kind) -> int:
        """Add an edge through the face shared by the two corners.

        The sign is chosen so the face splits in two (an untwisted band);
        the twisted alternative keeps the face count and raises the genus,
        which the retrace detects, so the choice is forced.
        """
        after1 = self.resolve_dart(after1)
        after2 = self.resolve_dart(after2)
        before = self.faces()
        c = self._new_edge(v1, v2, 1, kind)
        r1 = self.rotations[v1]
        r1.insert(r1.index(after1) + 1, 2 * c)
        r2 = self.rotations[v2]
        if v2 == v1 and after2 == after1:
            r2.insert(r2.index(2 * c) + 1, 2 * c + 1)
        else:
            r2.insert(r2.index(after2) + 1, 2 * c + 1)
        self._invalidate()
        after = self.faces()
        if after.num_faces != before.num_faces + 1:
            self.esign[c] = -1
            self._invalidate()
            after = self.faces()
            if after.num_faces != before.num_faces + 1:
                raise InternalInvariantError(
                    "chord endpoints do not share a face")
        return c

    # -- curve insertion ----------------------------------------------------------

    def insert_curve(self, start_vertex: int, start_after: int,
                     crossings: list[int], end_vertex: int,
                     end_after: int) -> int:
        """Insert a curve given as corner-to-corner crossings of pieces.

        ``crossings`` lists pieces (stale ids are resolved through their
        subdivision descendants); consecutive crossings must be reachable
        through a common face, which also pins down the side of every
        crossing.  Returns the new curve id.
        """
        k_id = len(self.k_chains)
        self.k_chains[k_id] = []
        chain = self.k_chains[k_id]

        start_after = self.resolve_dart(start_after)
        cur_face = self.face_of_corner(start_vertex, start_after)
        prev_vertex, prev_after = start_vertex, start_after

        for p_req in crossings:
            tr = self.faces()
            cands = []
            for q in self.resolve_pieces(p_req):
                for st in tr.edge_states[q]:
                    if tr.state_face[st] == cur_face:
                        cands.append((q, st))
            if not cands:
                raise CurveError(
                    f"crossing of piece {p_req} unreachable from the "
                    f"curve's current face")
            q, entry_state = min(cands)
            entry_dart = entry_state >> 1
            entry_side = entry_state & 1
            m, q1, q2 = self.split_piece(q, k_id)
            # The corner of m adjacent to the entry side: map the entry
            # state onto the matching half and read the crossed corner.
            if (entry_dart & 1) == 0:
                half_state = ((2 * q1) << 1) | entry_side
            else:
                half_state = ((2 * q2 + 1) << 1) | entry_side
            graph, dense_of_piece, _live = self.snapshot()

            def to_dense(st):
                d = st >> 1
                return (((dense_of_piece[d >> 1] << 1) | (d & 1)) << 1) | (st & 1)

            mv, gap = crossed_corner(graph, to_dense(half_state))
            if mv != m:
                raise InternalInvariantError(
                    "entry corner not at the crossing vertex")
            entry_after = self.rotations[m][gap]
            chord = self.insert_chord(prev_vertex, prev_after, m, entry_after,
                                      ("k", k_id))
            chain.append(chord)
            far_after = (2 * q2) if entry_after == (2 * q1 + 1) else (2 * q1 + 1)
            prev_vertex, prev_after = m, far_after
            cur_face = self.face_of_corner(m, far_after)

        end_after = self.resolve_dart(end_after)
        # The recorded end corner may have been subdivided by this curve's
        # own strands; scan forward in the rotation for the copy bounding
        # the face the curve arrives through.
        rot = self.rotations[end_vertex]
        i0 = rot.index(end_after)
        for k in range(len(rot)):
            cand = rot[(i0 + k) % len(rot)]
            if self.face_of_corner(end_vertex, cand) == cur_face:
                end_after = cand
                break
        else:
            raise CurveError("curve cannot reach its end anchor")
        chord = self.insert_chord(prev_vertex, prev_after, end_vertex,
                                  end_after, ("k", k_id))
        chain.append(chord)
        self.k_anchors[k_id] = ((start_vertex, start_after),
                                (end_vertex, end_after))
        return k_id

    # -- derived data ----------------------------------------------------------------

    def curve_events(self, k_id: int) -> tuple:
        """Crossing events of a curve, with positions along host edges.

        Positions are current chain positions; they are final once no
        further curves are inserted.
        """
        order = {}
        for e, chn in self.g_chains.items():
            for idx, p in enumerate(chn[:-1]):
                order[self.ev[p]] = (e, idx)
        events = []
        chain = self.k_chains[k_id]
        for c_in, c_out in zip(chain, chain[1:]):
            m = self.ev[c_in]
            if self.eu[c_out] != m:
                raise InternalInvariantError("curve chain is not contiguous")
            e, idx = order[m]
            events.append((e, idx, self._crossing_orientation(m, c_in)))
        return tuple(events)

    def _crossing_orientation(self, m: int, c_in: int) -> int:
        """0 if the incoming strand follows the early-side host dart at ``m``."""
        rot = self.rotations[m]
        if len(rot) != 4:
            raise InternalInvariantError("crossing vertex is not 4-valent")
        g_darts = [d for d in rot if self.is_g_piece(d >> 1)]
        toward_u = min(g_darts,
                       key=lambda d: self._chain_of(d >> 1).index(d >> 1))
        i = rot.index(toward_u)
        return 0 if rot[(i + 1) % 4] == (2 * c_in + 1) else 1

    def anchor_of(self, v: int, after_dart: int) -> Anchor:
        """Express a corner in terms of the host graph's own corners."""
        after_dart = self.resolve_dart(after_dart)
        rot = self.rotations[v]
        i = rot.index(after_dart)
        slot = 0
        while not self.is_g_piece(rot[i % len(rot)] >> 1):
            slot += 1
            i -= 1
            if slot > len(rot):
                raise InternalInvariantError("corner has no host dart")
        piece_dart = rot[i % len(rot)]
        p = piece_dart >> 1
        _, host_edge = self.ekind[p]
        chn = self.g_chains[host_edge]
        if (piece_dart & 1) == 0 and chn[0] == p:
            host_dart = 2 * host_edge
        elif (piece_dart & 1) == 1 and chn[-1] == p:
            host_dart = 2 * host_edge + 1
        else:
            raise InternalInvariantError("interior piece dart at a host vertex")
        return Anchor(v, host_dart, slot)

    def freeze(self) -> "Overlay":
        graph, dense_of_piece, live = self.snapshot()
        fs = graph.faces()
        ekind = tuple(self.ekind[p] for p in live)
        vkind = tuple(self.vkind)
        g_pieces = {e: tuple(dense_of_piece[p] for p in chn)
                    for e, chn in self.g_chains.items()}
        k_pieces = {k: tuple(dense_of_piece[p] for p in chn)
                    for k, chn in self.k_chains.items()}
        curves = []
        for k in sorted(self.k_chains):
            (sv, sa), (ev_, ea) = self.k_anchors[k]
            curves.append(Curve(start=self.anchor_of(sv, sa),
                                end=self.anchor_of(ev_, ea),
                                events=self.curve_events(k)))
        graph.terminals = self.host.terminals
        graph.pairs = self.host.pairs
        overlay = Overlay(host=self.host, graph=graph, faces=fs,
                          vkind=vkind, ekind=ekind,
                          g_pieces=g_pieces, k_pieces=k_pieces,
                          curves=tuple(curves))
        if fs.genus != self.host.faces().genus:
            raise InternalInvariantError("overlay changed the surface genus")
        return overlay


@dataclass(frozen=True)
class Overlay:
    """Frozen arrangement of the host graph with a family of curves.

    ``vkind[v]`` is ``('g', host_vertex)`` or ``('x', host_edge, curve)``;
    ``ekind[e]`` is ``('g', host_edge)`` or ``('k', curve)``.  Pieces of
    each host edge and of each curve are listed end to end, so crossing
    order along any element is explicit.
    """

    host: EmbeddedGraph
    graph: EmbeddedGraph
    faces: object
    vkind: tuple
    ekind: tuple
    g_pieces: dict
    k_pieces: dict
    curves: tuple

    @property
    def num_faces(self) -> int:
        return self.faces.num_faces

    def piece_host_edge(self, p: int) -> int | None:
        kind, payload = self.ekind[p]
        return payload if kind == "g" else None

    def piece_weight(self, p: int) -> int:
        e = self.piece_host_edge(p)
        return 0 if e is None else self.host.weights[e]

    def g_map(self) -> EmbeddedGraph:
        """Delete curve pieces and dissolve crossings; restores the host map."""
        return _restrict(self, keep="g")

    def k_map(self) -> EmbeddedGraph:
        """Delete host pieces and dissolve crossings: the curves' own map.

        Vertices are the curve anchor vertices in increasing host order;
        edge ``i`` is curve ``i``.  Raises if there are no curves.
        """
        if not self.k_pieces:
            raise InternalInvariantError("overlay has no curves")
        return _restrict(self, keep="k")


def _restrict(overlay: Overlay, keep: str) -> EmbeddedGraph:
    g = overlay.graph
    keep_edge = [overlay.ekind[e][0] == keep for e in range(g.num_edges)]
    chains = overlay.g_pieces if keep == "g" else overlay.k_pieces
    if keep == "g":
        kept_vertices = {v for v in range(g.num_vertices)
                         if overlay.vkind[v][0] == "g"}
    else:
        kept_vertices = set()
        for chn in chains.values():
            kept_vertices.add(g.edge_u[chn[0]])
            kept_vertices.add(g.edge_v[chn[-1]])
    vmap = {v: i for i, v in enumerate(sorted(kept_vertices))}
    edges = []
    signs = []
    dart_map = {}
    for cid in sorted(chains):
        chn = chains[cid]
        u = g.edge_u[chn[0]]
        v = g.edge_v[chn[-1]]
        sign = 1
        for p in chn:
            sign *= g.signs[p]
        e = len(edges)
        w = overlay.host.weights[cid] if keep == "g" else 0
        edges.append((vmap[u], vmap[v], w))
        signs.append(sign)
        dart_map[2 * chn[0]] = 2 * e
        dart_map[2 * chn[-1] + 1] = 2 * e + 1
    rotations = [[] for _ in vmap]
    for v in sorted(kept_vertices):
        for d in g.rotations[v]:
            if keep_edge[d >> 1]:
                if d not in dart_map:
                    raise InternalInvariantError(
                        "interior chain dart at a kept vertex")
                rotations[vmap[v]].append(dart_map[d])
    return EmbeddedGraph(len(vmap), edges, rotations, signs=signs)


# -- routing -----------------------------------------------------------------


@dataclass
class RouteLabels:
    """Multi-source shortest-route labels over the faces of an arrangement.

    Distances are exact integers.  Predecessors carry enough to rebuild a
    curve realizing each label: a source corner for the first step and the
    crossed piece afterwards.
    """

    dist: dict
    pred: dict
    anchor_dist: dict
    anchor_gap: dict

    def route_to_face(self, face: int):
        """(start corner, crossed pieces) from the nearest source."""
        pieces = []
        f = face
        while True:
            step = self.pred[f]
            if step[0] == "start":
                _, v, after = step
                return (v, after), pieces[::-1]
            _, p, prev_f = step
            pieces.append(p)
            f = prev_f


def route_faces(builder: OverlayBuilder, sources, crossable=None) -> RouteLabels:
    """Dijkstra over arrangement faces from vertex anchors.

    A curve leaves an anchor into any incident corner at cost 0 and pays
    the host weight of every piece it crosses.  ``crossable`` filters
    pieces; the default admits host pieces only, which keeps routed curves
    disjoint from previously inserted ones.  Ties break on (distance,
    face id, insertion order) so routes are reproducible.
    """
    if crossable is None:
        crossable = builder.is_g_piece
    tr = builder.faces()
    dist: dict[int, int] = {}
    pred: dict[int, tuple] = {}
    heap = []
    counter = 0
    for v in sorted(sources):
        rot = builder.rotations[v]
        for gi in range(len(rot)):
            f = tr.gap_face[(v, gi)]
            counter += 1
            heapq.heappush(heap, (0, f, counter, ("start", v, rot[gi])))
    adj: dict[int, list] = {}
    for p in builder.live_pieces():
        if not crossable(p):
            continue
        st1, st2 = tr.edge_states[p]
        f1, f2 = tr.state_face[st1], tr.state_face[st2]
        if f1 == f2:
            continue
        w = builder.piece_weight(p)
        adj.setdefault(f1, []).append((w, f2, p))
        adj.setdefault(f2, []).append((w, f1, p))
    for k in adj:
        adj[k].sort()
    while heap:
        d, f, _, how = heapq.heappop(heap)
        if f in dist:
            continue
        dist[f] = d
        pred[f] = how
        for (w, f2, p) in adj.get(f, ()):
            if f2 not in dist:
                counter += 1
                heapq.heappush(heap, (d + w, f2, counter, ("cross", p, f)))
    anchor_dist = {}
    anchor_gap = {}
    for v in range(builder.num_vertices):
        if builder.vkind[v][0] != "g":
            continue
        rot = builder.rotations[v]
        best = None
        for gi in range(len(rot)):
            f = tr.gap_face[(v, gi)]
            if f in dist and (best is None or dist[f] < best[0]):
                best = (dist[f], gi)
        if best is not None:
            anchor_dist[v] = best[0]
            anchor_gap[v] = rot[best[1]]
    return RouteLabels(dist=dist, pred=pred, anchor_dist=anchor_dist,
                       anchor_gap=anchor_gap)


# -- public overlay construction ------------------------------------------------


def build_overlay(g: EmbeddedGraph, curves) -> Overlay:
    """Insert the given curves into ``g`` and freeze the arrangement.

    Curves are replayed in order from their recorded anchors and events;
    inconsistent data (unreachable crossings, duplicated positions,
    mismatched sides) raises :class:`CurveError`.
    """
    builder = OverlayBuilder(g)
    replay_curves(builder, curves)
    return builder.freeze()


def replay_curves(builder: OverlayBuilder, curves) -> list[int]:
    """Insert recorded curves into a builder; returns their new ids."""
    committed: dict[int, list[int]] = {}
    ids = []
    for n, curve in enumerate(curves):
        own: dict[int, list[int]] = {}
        route = []
        for (e, idx, _orient) in curve.events:
            if not (0 <= e < builder.host.num_edges):
                raise CurveError(f"curve {n} crosses unknown edge {e}")
            prior = committed.get(e, [])
            if idx in prior or idx in own.get(e, []):
                raise CurveError(
                    f"two crossings share position {idx} on edge {e}")
            own.setdefault(e, []).append(idx)
            route.append(builder.g_chains[e][bisect_left(prior, idx)])
        try:
            start_after = _anchor_after_dart(builder, curve.start)
            end_after = _anchor_after_dart(builder, curve.end)
            k_id = builder.insert_curve(curve.start.vertex, start_after,
                                        route, curve.end.vertex, end_after)
        except InternalInvariantError as exc:
            raise CurveError(f"curve {n} is inconsistent: {exc}") from exc
        for e, vals in own.items():
            lst = committed.setdefault(e, [])
            for x in vals:
                insort(lst, x)
        # The rebuilt events must agree with the record: crossing sides
        # verbatim, and positions up to the shared total order.
        got = builder.curve_events(k_id)
        if len(got) != len(curve.events):
            raise CurveError(f"curve {n}: crossing count changed on replay")
        for (ge, gi, go), (we, wi, wo) in zip(got, curve.events):
            if ge != we or go != wo:
                raise CurveError(
                    f"curve {n}: recorded crossing sides do not match the "
                    f"arrangement")
            if gi != committed[we].index(wi):
                raise CurveError(
                    f"curve {n}: crossing order along edge {we} is "
                    f"inconsistent")
        ids.append(k_id)
    return ids


def _anchor_after_dart(builder: OverlayBuilder, anchor: Anchor) -> int:
    host_dart = builder.resolve_dart(anchor.after_dart)
    v = anchor.vertex
    rot = builder.rotations[v]
    i = rot.index(host_dart)
    return rot[(i + anchor.slot) % len(rot)]
