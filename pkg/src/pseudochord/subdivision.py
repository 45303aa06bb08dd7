"""Embedded pseudochord arrangements as half-edge planar subdivisions.

The disk is bounded by a cycle through the ``2k`` endpoint slots in
counter-clockwise label order.  Half-edge ``2i`` runs from slot ``i`` to slot
``i+1`` on the inner side, ``2i+1`` is its twin on the outer face.  Every face
is traversed with the face on the left of its half-edges.  Face 0 is always
the outer face.

Records are kept in parallel integer lists (one entry per half-edge) because
enumeration copies millions of embeddings and list copies are cheap.
"""
from __future__ import annotations

from typing import Iterator, NamedTuple

from .matching import Matching


class SubdivisionError(RuntimeError):
    """Invalid use of an embedding (bad chord, stale route, incomplete state)."""


class Route(NamedTuple):
    """Crossed segments of one insertion, in order from start to end slot.

    ``edges[j]`` is the half-edge crossed at step ``j``, seen from the face the
    new chord is in before crossing; ``chords[j]`` is the chord it belongs to.
    """

    edges: tuple[int, ...]
    chords: tuple[int, ...]


class Embedding:
    __slots__ = (
        "matching", "n_slots", "origin", "twin", "nxt", "prv", "chord",
        "face", "face_edge", "cross_pair", "inserted", "chord_start", "_adj",
    )

    def __init__(self, matching: Matching):
        n = 2 * matching.k
        self.matching = matching
        self.n_slots = n
        self.origin: list[int] = []
        self.twin: list[int] = []
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.chord: list[int] = []
        for i in range(n):
            j = (i + 1) % n
            self.origin += [i, j]
            self.twin += [2 * i + 1, 2 * i]
            self.nxt += [2 * j, 2 * ((i - 1) % n) + 1]
            self.prv += [2 * ((i - 1) % n), 2 * j + 1]
            self.chord += [-1, -1]
        # crossing vertex 2k+t joins the chords cross_pair[t]
        self.cross_pair: list[tuple[int, int]] = []
        self.inserted = 0
        self.chord_start = [-1] * matching.k
        self.face: list[int] = []
        self.face_edge: list[int] = []
        self._adj = None
        if n:
            self._rebuild_faces()
        else:
            self.face_edge = [-1]

    # -- structure -------------------------------------------------------

    def copy(self) -> "Embedding":
        e = Embedding.__new__(Embedding)
        e.matching = self.matching
        e.n_slots = self.n_slots
        e.origin = self.origin[:]
        e.twin = self.twin[:]
        e.nxt = self.nxt[:]
        e.prv = self.prv[:]
        e.chord = self.chord[:]
        e.face = self.face
        e.face_edge = self.face_edge
        e.cross_pair = self.cross_pair[:]
        e.inserted = self.inserted
        e.chord_start = self.chord_start[:]
        e._adj = None
        return e

    def __getstate__(self):
        return {s: getattr(self, s) for s in self.__slots__ if s != "_adj"}

    def __setstate__(self, state):
        for s, v in state.items():
            setattr(self, s, v)
        self._adj = None

    def _rebuild_faces(self) -> None:
        nxt = self.nxt
        face = [-1] * len(nxt)
        reps = []
        # half-edge 1 lies on the outer face; visit it first so it gets id 0
        for h in [1] + list(range(len(nxt))):
            if face[h] != -1:
                continue
            f = len(reps)
            reps.append(h)
            g = h
            while face[g] == -1:
                face[g] = f
                g = nxt[g]
        self.face = face
        self.face_edge = reps
        self._adj = None

    @property
    def n_vertices(self) -> int:
        return self.n_slots + len(self.cross_pair)

    @property
    def n_edges(self) -> int:
        return len(self.nxt) // 2

    @property
    def n_faces(self) -> int:
        return len(self.face_edge)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def is_inserted(self, c: int) -> bool:
        return bool(self.inserted >> c & 1)

    def face_cycle(self, f: int) -> Iterator[int]:
        h0 = self.face_edge[f]
        h = h0
        while True:
            yield h
            h = self.nxt[h]
            if h == h0:
                return

    def face_adjacency(self) -> list[list[tuple[int, int, int]]]:
        """Per face: ``(chord, half-edge, face across)`` for each chord edge."""
        if self._adj is None:
            chord, twin, face = self.chord, self.twin, self.face
            adj: list[list[tuple[int, int, int]]] = [[] for _ in self.face_edge]
            for h, c in enumerate(chord):
                if c >= 0:
                    adj[face[h]].append((c, h, face[twin[h]]))
            self._adj = adj
        return self._adj

    def start_face(self, c: int) -> int:
        return self.face[2 * self.matching.pairs[c][0]]

    def end_face(self, c: int) -> int:
        return self.face[2 * self.matching.pairs[c][1]]

    # -- chord chains ----------------------------------------------------

    def chord_chain(self, c: int) -> list[int]:
        """Half-edges of chord ``c`` from its lower to its higher endpoint."""
        h = self.chord_start[c]
        if h < 0:
            raise SubdivisionError(f"chord {c} is not inserted")
        chain = [h]
        end = self.matching.pairs[c][1]
        twin, nxt, chord, origin = self.twin, self.nxt, self.chord, self.origin
        while origin[twin[h]] != end:
            e = nxt[h]
            while chord[e] != c:
                e = nxt[twin[e]]
            h = e
            chain.append(h)
        return chain

    def crossing_sequence(self, c: int) -> list[int]:
        """Chords crossed by ``c``, in order along its orientation."""
        n = self.n_slots
        out = []
        for h in self.chord_chain(c)[1:]:
            p, q = self.cross_pair[self.origin[h] - n]
            out.append(q if p == c else p)
        return out

    def check(self) -> None:
        """Verify structural invariants; raises ``SubdivisionError``."""
        nxt, prv, twin, origin = self.nxt, self.prv, self.twin, self.origin
        for h in range(len(nxt)):
            if prv[nxt[h]] != h or twin[twin[h]] != h or origin[nxt[h]] != origin[twin[h]]:
                raise SubdivisionError(f"broken half-edge links at {h}")
        if self.euler_characteristic() != 2:
            raise SubdivisionError(f"Euler characteristic {self.euler_characteristic()} != 2")
        pairs_seen: set[tuple[int, int]] = set()
        for p, q in self.cross_pair:
            key = (min(p, q), max(p, q))
            if key in pairs_seen:
                raise SubdivisionError(f"chords {key} cross twice")
            pairs_seen.add(key)
        degree = [0] * self.n_vertices
        for v in origin:
            degree[v] += 1
        for x in range(self.n_slots, self.n_vertices):
            if degree[x] != 4:
                raise SubdivisionError(f"crossing vertex {x} has degree {degree[x]}")
        for c in range(self.matching.k):
            if self.is_inserted(c):
                seq = self.crossing_sequence(c)
                allowed = self.matching.crossing_masks[c] & self.inserted
                got = 0
                for d in seq:
                    got |= 1 << d
                if got != allowed or len(seq) != bin(allowed).count("1"):
                    raise SubdivisionError(f"chord {c} crosses {seq}, expected mask {allowed:b}")


def boundary_embedding(matching: Matching) -> Embedding:
    """The empty disk: the bounding cycle through all endpoint slots."""
    return Embedding(matching)


def _required(e: Embedding, c: int) -> int:
    m = e.matching
    if not 0 <= c < m.k:
        raise SubdivisionError(f"invalid chord id {c}")
    if e.is_inserted(c):
        raise SubdivisionError(f"chord {c} is already inserted")
    return m.crossing_masks[c] & e.inserted


def route_edges(e: Embedding, c: int) -> list[tuple[int, ...]]:
    """All insertion routes of ``c`` as tuples of crossed half-edges."""
    req = _required(e, c)
    adj = e.face_adjacency()
    end = e.end_face(c)
    out: list[tuple[int, ...]] = []
    path: list[int] = []

    def walk(f: int, mask: int) -> None:
        if mask == req:
            if f == end:
                out.append(tuple(path))
            return
        for ch, h, g in adj[f]:
            bit = 1 << ch
            if req & bit and not mask & bit:
                path.append(h)
                walk(g, mask | bit)
                path.pop()

    walk(e.start_face(c), 0)
    return out


def insertion_routes(e: Embedding, c: int) -> list[Route]:
    return [Route(r, tuple(e.chord[h] for h in r)) for r in route_edges(e, c)]


def count_insertions(e: Embedding, c: int) -> int:
    """Number of insertion routes for ``c``, by memoized path counting."""
    req = _required(e, c)
    adj = e.face_adjacency()
    end = e.end_face(c)
    memo: dict[tuple[int, int], int] = {}

    def count(f: int, mask: int) -> int:
        if mask == req:
            return 1 if f == end else 0
        key = (f, mask)
        if key in memo:
            return memo[key]
        total = 0
        for ch, _h, g in adj[f]:
            bit = 1 << ch
            if req & bit and not mask & bit:
                total += count(g, mask | bit)
        memo[key] = total
        return total

    return count(e.start_face(c), 0)


def _apply(e: Embedding, c: int, edges: tuple[int, ...]) -> Embedding:
    """Insert chord ``c`` along ``edges`` (unchecked); returns a new embedding."""
    out = e.copy()
    origin, twin, nxt, prv, chord = out.origin, out.twin, out.nxt, out.prv, out.chord
    n = out.n_slots
    a, b = out.matching.pairs[c]
    p_in, p_out = 2 * ((a - 1) % n), 2 * a
    p_vertex = a
    first = -1

    def segment(p_in: int, p_out: int, p_vertex: int, q_in: int, q_out: int, q_vertex: int) -> int:
        s = len(nxt)
        t = s + 1
        origin.extend((p_vertex, q_vertex))
        twin.extend((t, s))
        chord.extend((c, c))
        nxt.extend((q_out, p_out))
        prv.extend((p_in, q_in))
        nxt[p_in] = s
        prv[q_out] = s
        nxt[q_in] = t
        prv[p_out] = t
        return s

    for h in edges:
        g = twin[h]
        x = n + len(out.cross_pair)
        out.cross_pair.append((chord[h], c))
        h2 = len(nxt)
        g2 = h2 + 1
        origin.extend((x, x))
        twin.extend((g, h))
        chord.extend((chord[h], chord[g]))
        nxt.extend((nxt[h], nxt[g]))
        prv.extend((h, g))
        prv[nxt[h]] = h2
        prv[nxt[g]] = g2
        nxt[h] = h2
        nxt[g] = g2
        twin[h] = g2
        twin[g] = h2
        s = segment(p_in, p_out, p_vertex, h, h2, x)
        if first < 0:
            first = s
        p_in, p_out, p_vertex = g, g2, x
    s = segment(p_in, p_out, p_vertex, 2 * ((b - 1) % n), 2 * b, b)
    if first < 0:
        first = s
    out.chord_start[c] = first
    out.inserted |= 1 << c
    out._rebuild_faces()
    return out


def apply_route(e: Embedding, c: int, route: Route | tuple[int, ...]) -> Embedding:
    """Insert chord ``c`` along ``route`` into a copy of ``e``."""
    edges = route.edges if isinstance(route, Route) else tuple(route)
    req = _required(e, c)
    f = e.start_face(c)
    mask = 0
    for h in edges:
        if not 0 <= h < len(e.nxt) or e.face[h] != f or e.chord[h] < 0:
            raise SubdivisionError(f"stale route: half-edge {h} is not on the current face")
        bit = 1 << e.chord[h]
        if not req & bit or mask & bit:
            raise SubdivisionError(f"stale route: chord {e.chord[h]} may not be crossed here")
        mask |= bit
        f = e.face[e.twin[h]]
    if mask != req or f != e.end_face(c):
        raise SubdivisionError("stale route: does not reach the end slot with all crossings")
    if isinstance(route, Route) and tuple(e.chord[h] for h in edges) != route.chords:
        raise SubdivisionError("stale route: crossed chords do not match")
    return _apply(e, c, edges)


class Chirotope:
    """Sign map on ordered chord triples; ``None`` stands for "no crossing"."""

    __slots__ = ("k", "signs")

    def __init__(self, k: int, signs: dict[tuple[int, int, int], int]):
        self.k = k
        self.signs = signs

    def __call__(self, c1: int, c2: int, c3: int):
        return self.signs.get((c1, c2, c3))

    def key(self) -> tuple:
        return tuple(sorted(self.signs.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Chirotope) and self.signs == other.signs

    def __hash__(self) -> int:
        return hash(self.key())

    def dump(self) -> str:
        return "".join(f"{a} {b} {c} {s:+d}\n" for (a, b, c), s in sorted(self.signs.items()))


def _left_of(pair: tuple[int, int], label: int) -> bool:
    # Boundary runs CCW, so labels strictly between a and b are to the right of a->b.
    a, b = pair
    return not a < label < b


def chirotope(e: Embedding) -> Chirotope:
    """Chirotope of a complete embedding; +1 means left of the oriented chord."""
    m = e.matching
    k = m.k
    if e.inserted != (1 << k) - 1:
        raise SubdivisionError("chirotope needs every chord inserted")
    signs: dict[tuple[int, int, int], int] = {}
    seqs = [e.crossing_sequence(c) for c in range(k)]
    for c1 in range(k):
        start = m.pairs[c1][0]
        for pos, c2 in enumerate(seqs[c1]):
            before = set(seqs[c1][:pos])
            for c3 in range(k):
                if c3 == c1 or c3 == c2:
                    continue
                left = _left_of(m.pairs[c3], start) ^ (c3 in before)
                signs[(c1, c2, c3)] = 1 if left else -1
    return Chirotope(k, signs)
