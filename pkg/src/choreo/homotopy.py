"""Loop topology around the rotation axes of a polyhedral group.

The unit sphere minus the rotation poles carries the free-homotopy data of
satellite loops: chambers of the reflection tessellation encode classes as
cyclic triangle words, while the edge graph of an equal-edge solid inscribed
in the sphere gives concrete piecewise-linear representatives.  This module
builds those edge graphs, translates vertex paths into triangle words,
evaluates the winding diagnostics used by the partial-collision criteria,
and computes minimal total angles for circular-arc limit loops.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .action import LoopPath
from .groups import RotationGroup, builtin_group, full_group_tessellation, matrix_key
from .reference_tables import catalog_entry, catalog_rows

_KEY_TOL = 1e-9
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Archimedean edge graphs


class ArchimedeanPolyhedron:
    """Equal-edge solid inscribed in the unit sphere, stored as a graph.

    vertices is the orbit of the base point q in deterministic group-element
    order; edges maps index pairs (i, j) with i < j to the side type 1 or 2.
    The base point sits on the triangle side joining the two higher-order
    poles of the base tessellation triangle, equidistant from the planes of
    the other two sides, so that both reflected copies q1, q2 are at the
    same chord distance ell.
    """

    def __init__(self, group, tessellation, vertices, edges, base_points):
        self.group = group
        self.tessellation = tessellation
        self.vertices = np.array(vertices, dtype=float)
        self.vertices.setflags(write=False)
        self.edges = dict(edges)
        self.base_points = tuple(np.array(p, dtype=float) for p in base_points)
        lengths = [
            np.linalg.norm(self.vertices[i] - self.vertices[j]) for (i, j) in self.edges
        ]
        spread = max(lengths) - min(lengths)
        if spread > 1e-10:
            raise ValueError(f"edge lengths are not uniform (spread {spread:.2e})")
        self.edge_length = float(np.mean(lengths))
        adj = {i: [] for i in range(len(self.vertices))}
        for (i, j), typ in self.edges.items():
            adj[i].append((j, typ))
            adj[j].append((i, typ))
        self._adjacency = {i: tuple(sorted(pairs)) for i, pairs in adj.items()}
        self._vertex_index = {matrix_key(v): i for i, v in enumerate(self.vertices)}
        self._vperm_cache = {}

    @property
    def vertex_count(self):
        return len(self.vertices)

    def neighbors(self, i):
        return self._adjacency[i]

    def edge_type(self, i, j):
        """Side type of the edge {i, j}, or None if the pair is not an edge."""
        return self.edges.get((min(i, j), max(i, j)))

    def vertex_permutation(self, R):
        """How the group element R permutes the vertex indices."""
        key = matrix_key(R)
        perm = self._vperm_cache.get(key)
        if perm is None:
            perm = tuple(
                self._vertex_index[matrix_key(R @ v)] for v in self.vertices
            )
            self._vperm_cache[key] = perm
        return perm

    def __repr__(self):
        return (
            f"ArchimedeanPolyhedron({self.group.tag!r}, vertices={self.vertex_count}, "
            f"edges={len(self.edges)}, ell={self.edge_length:.6f})"
        )


@lru_cache(maxsize=None)
def _build_archimedean_cached(tag):
    group = builtin_group(tag)
    tess = full_group_tessellation(group)
    pts = tess.points
    ia, ib, ic = tess.triangles[0]
    a, b, c = pts[ia], pts[ib], pts[ic]

    n1 = np.cross(b, c)
    n1 /= np.linalg.norm(n1)
    n2 = np.cross(a, c)
    n2 /= np.linalg.norm(n2)

    def along(t):
        v = (1.0 - t) * a + t * b
        return v / np.linalg.norm(v)

    def gap(t):
        v = along(t)
        return abs(v @ n1) - abs(v @ n2)

    lo, hi = 0.0, 1.0
    glo = gap(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) * glo > 0.0:
            lo = mid
        else:
            hi = mid
    q = along(0.5 * (lo + hi))
    q1 = q - 2.0 * (q @ n1) * n1
    q2 = q - 2.0 * (q @ n2) * n2

    verts = []
    index = {}
    for R in group.elements:
        v = R @ q
        key = matrix_key(v)
        if key not in index:
            index[key] = len(verts)
            verts.append(v)

    edges = {}
    for R in group.elements:
        vq = index[matrix_key(R @ q)]
        for typ, qq in ((1, q1), (2, q2)):
            vr = index[matrix_key(R @ qq)]
            e = (min(vq, vr), max(vq, vr))
            prev = edges.get(e)
            if prev is not None and prev != typ and tag != "T":
                raise ValueError(f"edge {e} received conflicting side types")
            edges.setdefault(e, typ)
    if tag == "T":
        # The two base segments are exchanged by the full symmetry group, so a
        # single side type is used for the tetrahedral graph.
        edges = {e: 1 for e in edges}

    expected = {"T": (12, 24), "O": (24, 48), "I": (60, 120)}[tag]
    if (len(verts), len(edges)) != expected:
        raise ValueError(
            f"unexpected graph size {(len(verts), len(edges))} for tag {tag!r}"
        )
    return ArchimedeanPolyhedron(group, tess, verts, edges, (q, q1, q2))


def build_archimedean(group):
    """Edge graph of the equal-edge solid for a polyhedral rotation group.

    Accepts a RotationGroup or one of the tags "T", "O", "I".  The result is
    cached per tag.
    """
    tag = group if isinstance(group, str) else group.tag
    tag = str(tag).upper()
    if tag not in ("T", "O", "I"):
        raise ValueError(f"no Archimedean edge graph for group tag {tag!r}")
    return _build_archimedean_cached(tag)


# ---------------------------------------------------------------------------
# Vertex numberings


def canonical_numbering(polyhedron):
    """Label i+1 for vertex i (deterministic group-element orbit order)."""
    return {i + 1: i for i in range(polyhedron.vertex_count)}


def load_numbering(path, polyhedron=None):
    """Read a vertex numbering from a JSON file {label: vertex_index}."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    numbering = {}
    for label, vid in raw.items():
        numbering[int(label)] = int(vid)
    values = list(numbering.values())
    if len(set(values)) != len(values):
        raise ValueError("numbering maps two labels to the same vertex")
    if polyhedron is not None:
        nv = polyhedron.vertex_count
        if any(v < 0 or v >= nv for v in values):
            raise ValueError("numbering contains an out-of-range vertex index")
    return numbering


def reconstruct_numbering(polyhedron, rows, node_cap=5_000_000):
    """Assign vertex indices to published labels from sequence data alone.

    rows is an iterable of (labels, M, k1, k2) where labels repeats the
    starting label at the end.  The search places each row as a closed edge
    path, prunes on side-type counts, and requires for each row a group
    element R with R^M = identity that shifts the cycle by steps/M
    positions.  Labels not used by any row are assigned to the remaining
    vertices in sorted order, so the result is a bijection.  Raises
    ValueError if the rows cannot be realized.
    """
    nv = polyhedron.vertex_count
    group = polyhedron.group
    perms = [polyhedron.vertex_permutation(R) for R in group.elements]
    powers = {}

    def element_power_is_identity(idx, M):
        key = (idx, M)
        if key not in powers:
            P = np.linalg.matrix_power(group.elements[idx], M)
            powers[key] = np.allclose(P, np.eye(3), atol=1e-9)
        return powers[key]

    prepared = []
    for labels, M, k1, k2 in rows:
        labels = list(labels)
        if labels[0] != labels[-1]:
            raise ValueError("each row must repeat its starting label at the end")
        per = labels[:-1]
        if len(per) % M:
            raise ValueError("row length is not divisible by its stated M")
        prepared.append((per, M, len(per) // M, int(k1), int(k2)))

    assign = {}
    used = [False] * nv
    nodes = 0

    def place_rows(ri):
        if ri == len(prepared):
            return True
        per, M, shift, k1, k2 = prepared[ri]
        L = len(per)
        cands0 = [
            p
            for idx, p in enumerate(perms)
            if element_power_is_identity(idx, M)
        ]

        def pair_filter(cands, upto):
            out = []
            for p in cands:
                ok = True
                for i in range(upto + 1):
                    la, lb = per[i], per[(i + shift) % L]
                    if la in assign and lb in assign and p[assign[la]] != assign[lb]:
                        ok = False
                        break
                if ok:
                    out.append(p)
            return out

        def place(pos, c1, c2, cands):
            nonlocal nodes
            nodes += 1
            if nodes > node_cap:
                raise RuntimeError("numbering reconstruction exceeded its search budget")
            if pos == L:
                a, b = assign[per[-1]], assign[per[0]]
                typ = polyhedron.edge_type(a, b)
                if typ is None:
                    return False
                n1, n2 = c1 + (typ == 1), c2 + (typ == 2)
                if n1 != k1 or n2 != k2:
                    return False
                final = [
                    p
                    for p in cands
                    if all(p[assign[per[i]]] == assign[per[(i + shift) % L]] for i in range(L))
                ]
                if not final:
                    return False
                return place_rows(ri + 1)

            label = per[pos]
            prev = assign[per[pos - 1]] if pos > 0 else None

            def advance(vid):
                n1, n2 = c1, c2
                if pos > 0:
                    typ = polyhedron.edge_type(prev, vid)
                    if typ is None:
                        return None
                    n1, n2 = c1 + (typ == 1), c2 + (typ == 2)
                    if n1 > k1 or n2 > k2:
                        return None
                filtered = pair_filter(cands, pos)
                if not filtered:
                    return None
                return n1, n2, filtered

            if label in assign:
                step = advance(assign[label])
                if step is None:
                    return False
                return place(pos + 1, step[0], step[1], step[2])

            options = range(nv) if pos == 0 else [w for w, _ in polyhedron.neighbors(prev)]
            for vid in sorted(set(options)):
                if used[vid]:
                    continue
                assign[label] = vid
                used[vid] = True
                step = advance(vid)
                if step is not None and place(pos + 1, step[0], step[1], step[2]):
                    return True
                del assign[label]
                used[vid] = False
            return False

        return place(0, 0, 0, cands0)

    if not place_rows(0):
        raise ValueError("the given rows admit no consistent vertex numbering")

    numbering = dict(assign)
    free_labels = sorted(set(range(1, nv + 1)) - set(numbering))
    free_vids = sorted(set(range(nv)) - set(numbering.values()))
    numbering.update(dict(zip(free_labels, free_vids)))
    return numbering


@lru_cache(maxsize=None)
def published_numbering(tag):
    """Vertex numbering consistent with every self-consistent catalog row.

    Rows whose stated side counts disagree with their own step count are
    skipped when building the numbering; they can still be evaluated against
    it afterwards.
    """
    tag = str(tag).upper()
    poly = build_archimedean(tag)
    rows = []
    for e in catalog_rows(tag):
        k2 = e.k2 or 0
        if e.steps != e.k1 + k2:
            continue
        rows.append((e.labels, e.M, e.k1, k2))
    return reconstruct_numbering(poly, rows)


# ---------------------------------------------------------------------------
# Vertex sequences


@dataclass(frozen=True, eq=False)
class VertexSequence:
    """Cyclic edge path on an Archimedean graph, one period of vertex ids.

    A trailing repeat of the first vertex is stripped.  Consecutive entries
    (including the wrap-around pair) must be joined by an edge.
    """

    polyhedron: ArchimedeanPolyhedron
    vertex_ids: tuple

    def __post_init__(self):
        ids = [int(i) for i in self.vertex_ids]
        if len(ids) > 1 and ids[0] == ids[-1]:
            ids = ids[:-1]
        if len(ids) < 2:
            raise ValueError("a vertex sequence needs at least two distinct stops")
        nv = self.polyhedron.vertex_count
        for i in ids:
            if not 0 <= i < nv:
                raise ValueError(f"vertex id {i} out of range")
        for k in range(len(ids)):
            i, j = ids[k], ids[(k + 1) % len(ids)]
            if self.polyhedron.edge_type(i, j) is None:
                raise ValueError(f"vertices {i} and {j} are not joined by an edge")
        object.__setattr__(self, "vertex_ids", tuple(ids))

    @classmethod
    def from_labels(cls, polyhedron, labels, numbering):
        try:
            ids = [numbering[int(l)] for l in labels]
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]} missing from the numbering") from exc
        return cls(polyhedron, tuple(ids))

    @property
    def steps(self):
        return len(self.vertex_ids)

    @property
    def k_nu(self):
        """Minimal cyclic period of the id listing."""
        ids = self.vertex_ids
        L = len(ids)
        for d in range(1, L + 1):
            if L % d == 0 and all(ids[i] == ids[i % d] for i in range(L)):
                return d
        return L

    @property
    def points(self):
        return self.polyhedron.vertices[list(self.vertex_ids)]

    def transformed(self, R):
        """The image sequence under a group element R."""
        perm = self.polyhedron.vertex_permutation(R)
        return VertexSequence(self.polyhedron, tuple(perm[i] for i in self.vertex_ids))

    def __repr__(self):
        return f"VertexSequence({self.polyhedron.group.tag!r}, {list(self.vertex_ids)})"


def sequence_counts(nu, polyhedron=None):
    """(k_nu, k1, k2): minimal period and side-type counts per period."""
    poly = polyhedron if polyhedron is not None else nu.polyhedron
    k = nu.k_nu
    per = nu.vertex_ids[:k]
    k1 = k2 = 0
    for i in range(k):
        typ = poly.edge_type(per[i], per[(i + 1) % k])
        if typ is None:
            raise ValueError(f"vertices {per[i]} and {per[(i + 1) % k]} are not adjacent")
        if typ == 1:
            k1 += 1
        else:
            k2 += 1
    return k, k1, k2


def find_extra_symmetry(nu, M):
    """Group elements R with R^M = identity realizing the cyclic shift by steps/M.

    Returns the matching matrices in deterministic element order (possibly
    empty).
    """
    poly = nu.polyhedron
    S = nu.steps
    if M < 1 or S % M:
        return []
    shift = S // M
    ids = nu.vertex_ids
    eye = np.eye(3)
    found = []
    for R in poly.group.elements:
        if not np.allclose(np.linalg.matrix_power(R, M), eye, atol=1e-9):
            continue
        perm = poly.vertex_permutation(R)
        if all(perm[ids[j]] == ids[(j + shift) % S] for j in range(S)):
            found.append(R)
    return found


# ---------------------------------------------------------------------------
# Tessellation geometry helpers


class _TessGeometry:
    """Located chambers, wall normals, and pole fans for one tessellation."""

    def __init__(self, tess):
        self.tess = tess
        self.points = tess.points
        self.points.setflags(write=False)
        self.triangles = [tuple(t) for t in tess.triangles]
        self.pole_order = [p.order for p in tess.poles]
        ntri = len(self.triangles)

        normals = np.empty((ntri, 3, 3))
        for ti, (a, b, c) in enumerate(self.triangles):
            pa, pb, pc = self.points[a], self.points[b], self.points[c]
            for k, (u, v, w) in enumerate(((pa, pb, pc), (pb, pc, pa), (pc, pa, pb))):
                n = np.cross(u, v)
                n /= np.linalg.norm(n)
                if n @ w < 0.0:
                    n = -n
                normals[ti, k] = n
        self._normals = normals
        self._tri_index = {frozenset(t): ti for ti, t in enumerate(self.triangles)}

        walls = []
        for Rf in tess.reflections:
            w, V = np.linalg.eigh(Rf)
            n = V[:, int(np.argmin(w))]
            for comp in n:
                if abs(comp) > 1e-9:
                    if comp < 0.0:
                        n = -n
                    break
            walls.append(n / np.linalg.norm(n))
        self.wall_normals = np.array(walls)

        self._pole_index = {matrix_key(p): i for i, p in enumerate(self.points)}
        self.fan = {}
        for pid in range(len(self.points)):
            incident = [ti for ti, t in enumerate(self.triangles) if pid in t]
            p = self.points[pid]
            seed = np.array([1.0, 0.0, 0.0])
            if abs(p @ seed) > 0.9:
                seed = np.array([0.0, 1.0, 0.0])
            e1 = seed - (seed @ p) * p
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(p, e1)

            def around(ti):
                cen = self.points[list(self.triangles[ti])].mean(axis=0)
                flat = cen - (cen @ p) * p
                return math.atan2(flat @ e2, flat @ e1)

            incident.sort(key=around)
            if len(incident) != 2 * self.pole_order[pid]:
                raise ValueError("pole fan size does not match twice the pole order")
            self.fan[pid] = incident
        self._perm_cache = {}

    def locate(self, x):
        """Index of the chamber containing the unit vector x (best margin)."""
        v = np.asarray(x, dtype=float)
        v = v / np.linalg.norm(v)
        margins = np.einsum("tks,s->tk", self._normals, v).min(axis=1)
        ti = int(np.argmax(margins))
        if margins[ti] < -1e-9:
            raise ValueError("point does not lie in any chamber")
        return ti

    def pole_permutation(self, R):
        return tuple(
            self._pole_index[matrix_key(R @ p)] for p in self.points
        )

    def triangle_permutation(self, R):
        key = matrix_key(R)
        perm = self._perm_cache.get(key)
        if perm is None:
            pperm = self.pole_permutation(R)
            perm = tuple(
                self._tri_index[frozenset(pperm[v] for v in t)] for t in self.triangles
            )
            self._perm_cache[key] = perm
        return perm


_GEOMETRY_CACHE = {}


def _geometry(tess):
    geom = _GEOMETRY_CACHE.get(id(tess))
    if geom is None or geom.tess is not tess:
        geom = _TessGeometry(tess)
        _GEOMETRY_CACHE[id(tess)] = geom
    return geom


# ---------------------------------------------------------------------------
# Triangle sequences and cyclic words


@dataclass(frozen=True, eq=False)
class TriangleSequence:
    """Cyclic itinerary of tessellation chambers, consecutive ones adjacent."""

    tessellation: object
    triangles: tuple

    def __post_init__(self):
        tris = tuple(int(t) for t in self.triangles)
        if len(tris) < 2:
            raise ValueError("a triangle sequence needs at least two chambers")
        for k in range(len(tris)):
            a, b = tris[k], tris[(k + 1) % len(tris)]
            if a == b or b not in self.tessellation.neighbors[a]:
                raise ValueError(f"chambers {a} and {b} are not adjacent")
        object.__setattr__(self, "triangles", tris)

    def __len__(self):
        return len(self.triangles)

    def __repr__(self):
        return f"TriangleSequence({list(self.triangles)})"


def merge_consecutive(word):
    """Collapse consecutive repeats of an open (non-cyclic) word."""
    out = []
    for c in word:
        if not out or out[-1] != c:
            out.append(c)
    return out


def merge_cyclic_duplicates(word):
    """Collapse consecutive repeats, including across the wrap-around."""
    out = merge_consecutive(word)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def reduce_cyclic_word(word):
    """Cyclically reduced chamber word (backtracks removed); () if contractible.

    Adjacent chambers share exactly one wall, so an immediate return crosses
    the same wall twice and cancels.
    """
    w = merge_cyclic_duplicates(list(word))
    changed = True
    while changed and len(w) > 2:
        changed = False
        n = len(w)
        for i in range(n):
            if w[i] == w[(i + 2) % n]:
                for k in sorted(((i + 1) % n, (i + 2) % n), reverse=True):
                    del w[k]
                w = merge_cyclic_duplicates(w)
                changed = True
                break
    if len(w) <= 2:
        return ()
    return tuple(w)


def canonical_cyclic_word(word):
    """Lexicographically minimal rotation; canonical form for comparisons."""
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def cyclic_words_equal(a, b):
    return canonical_cyclic_word(reduce_cyclic_word(a)) == canonical_cyclic_word(
        reduce_cyclic_word(b)
    )


def triangles_from_vertices(nu, tessellation=None):
    """Chamber itinerary of the vertex path radially projected to the sphere.

    Each graph edge crosses exactly one wall at its midpoint, so the two
    half-edges sample the two chambers; a vertex where the path touches a
    wall without crossing contributes no chamber change.
    """
    poly = nu.polyhedron
    tess = tessellation if tessellation is not None else poly.tessellation
    geom = _geometry(tess)
    ids = nu.vertex_ids
    S = len(ids)
    pts = poly.vertices
    pole_pts = geom.points

    raw = []
    for i in range(S):
        a, b = pts[ids[i]], pts[ids[(i + 1) % S]]
        for s in (0.25, 0.75):
            x = (1.0 - s) * a + s * b
            nx = np.linalg.norm(x)
            if nx < 1e-9:
                raise ValueError("path passes through the origin: degenerate projection")
            x /= nx
            if np.max(pole_pts @ x) > 1.0 - 1e-12:
                raise ValueError("path passes through a pole: degenerate projection")
            raw.append(geom.locate(x))
    merged = merge_cyclic_duplicates(raw)
    return TriangleSequence(tess, tuple(merged))


# ---------------------------------------------------------------------------
# Winding diagnostics


def is_alpha_simple(t_seq, alpha):
    """True iff no winding string exceeds the deflection budget of alpha.

    The forbidden pattern around a pole p of order o is a string of
    2*floor(1/(2-alpha))*o + 1 consecutive chambers whose closed intersection
    is exactly {p}: all of them contain p and at least three distinct
    chambers occur (with one or two distinct chambers the intersection is a
    whole chamber or a shared side, which strictly contains {p}).  Windows
    wrap around the cyclic sequence, repeating it as needed.
    """
    if not 1.0 <= alpha < 2.0:
        raise ValueError("alpha must lie in [1, 2)")
    geom = _geometry(t_seq.tessellation)
    tris = list(t_seq.triangles)
    L = len(tris)
    kappa = math.floor(1.0 / (2.0 - alpha))
    touched = sorted({v for t in tris for v in geom.triangles[t]})
    for pid in touched:
        o = geom.pole_order[pid]
        W = 2 * kappa * o + 1
        member = [pid in geom.triangles[t] for t in tris]
        reps = 1 + (W + L - 1) // L
        ext_m = member * reps
        ext_t = tris * reps
        for start in range(L):
            if not ext_m[start]:
                continue
            window = ext_m[start : start + W]
            if all(window) and len(set(ext_t[start : start + W])) >= 3:
                return False
    return True


def is_tied_to_two_coboundary_axes(t_seq):
    """True iff the word splits into full turns around two poles of one chamber.

    Condition (i): the cyclic sequence partitions into consecutive blocks,
    each of length 2*n*o_p for some n >= 1, whose chambers all contain the
    block's pole p (with at least three distinct chambers, so the closed
    intersection is exactly {p}), where p ranges over a fixed pair {p1, p2}
    and both poles are used.  Condition (ii): some tessellation chamber has
    both p1 and p2 as vertices.
    """
    geom = _geometry(t_seq.tessellation)
    tris = list(t_seq.triangles)
    L = len(tris)

    pairs = sorted(
        {
            tuple(sorted(pair))
            for t in geom.triangles
            for pair in itertools.combinations(t, 2)
        }
    )

    member = {}

    def member_row(pid):
        row = member.get(pid)
        if row is None:
            row = [pid in geom.triangles[t] for t in tris]
            member[pid] = row
        return row

    for p1, p2 in pairs:
        m1, m2 = member_row(p1), member_row(p2)
        if not all(a or b for a, b in zip(m1, m2)):
            continue
        o1, o2 = geom.pole_order[p1], geom.pole_order[p2]
        for offset in range(L):
            rot = [tris[(offset + i) % L] for i in range(L)]
            r1 = [m1[(offset + i) % L] for i in range(L)]
            r2 = [m2[(offset + i) % L] for i in range(L)]
            # states: position -> set of (used p1, used p2)
            states = {0: {(False, False)}}
            for pos in range(L):
                flags = states.get(pos)
                if not flags:
                    continue
                for mrow, o, which in ((r1, o1, 0), (r2, o2, 1)):
                    block = 2 * o
                    n = 1
                    while pos + n * block <= L:
                        end = pos + n * block
                        if not all(mrow[pos:end]):
                            break
                        if len(set(rot[pos:end])) >= 3:
                            bucket = states.setdefault(end, set())
                            for u1, u2 in flags:
                                bucket.add((u1 or which == 0, u2 or which == 1))
                        n += 1
            if (True, True) in states.get(L, ()):
                return True
    return False


# ---------------------------------------------------------------------------
# Test loops


def test_loop(nu, period, samples):
    """Constant-speed piecewise-linear loop along the sequence's edges.

    samples must be divisible by the number of steps; the speed is then
    ell * steps / period at every node.
    """
    S = nu.steps
    if samples % S:
        raise ValueError(f"samples ({samples}) must be divisible by the step count ({S})")
    if period <= 0:
        raise ValueError("period must be positive")
    m = samples // S
    pts = nu.points
    nxt = np.roll(pts, -1, axis=0)
    frac = (np.arange(m) / m)[None, :, None]
    pieces = pts[:, None, :] * (1.0 - frac) + nxt[:, None, :] * frac
    return LoopPath(points=pieces.reshape(samples, 3), period=float(period))


# ---------------------------------------------------------------------------
# Cone specifications


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """A symmetry-and-homotopy constrained minimization problem.

    For the polyhedral tags the class is given by nu; extra_symmetry is an
    optional pair (R, M) with R in the group, R^M = identity, shifting nu by
    steps/M positions.  For the tags Z4 and KLEIN the loop class is implied
    by the symmetry constraints and nu must be None.
    """

    group: RotationGroup
    nu: VertexSequence | None
    alpha: float
    extra_symmetry: tuple | None
    period: float
    central_mass: float

    def __post_init__(self):
        if not 1.0 <= self.alpha < 2.0:
            raise ValueError("alpha must lie in [1, 2)")
        if self.period <= 0.0:
            raise ValueError("period must be positive")
        if self.central_mass < 0.0:
            raise ValueError("central_mass must be nonnegative")
        tag = self.group.tag
        if tag in ("Z4", "KLEIN"):
            if self.nu is not None:
                raise ValueError(f"tag {tag!r} carries its loop class implicitly; nu must be None")
            if self.extra_symmetry is not None:
                raise ValueError(f"tag {tag!r} does not take an extra symmetry")
            return
        if tag not in ("T", "O", "I"):
            raise ValueError(f"cones are not defined for group tag {tag!r}")
        if self.nu is None:
            raise ValueError("polyhedral cones need a vertex sequence")
        if self.nu.polyhedron.group.tag != tag:
            raise ValueError("vertex sequence belongs to a different group")
        if self.extra_symmetry is not None:
            R, M = self.extra_symmetry
            R = np.array(R, dtype=float)
            M = int(M)
            if M < 1:
                raise ValueError("extra symmetry order M must be a positive integer")
            keyset = {matrix_key(g) for g in self.group.elements}
            if matrix_key(R) not in keyset:
                raise ValueError("extra symmetry element is not in the group")
            if not np.allclose(np.linalg.matrix_power(R, M), np.eye(3), atol=1e-9):
                raise ValueError("extra symmetry element does not have order dividing M")
            S = self.nu.steps
            if S % M:
                raise ValueError("sequence length is not divisible by M")
            shift = S // M
            perm = self.nu.polyhedron.vertex_permutation(R)
            ids = self.nu.vertex_ids
            if any(perm[ids[j]] != ids[(j + shift) % S] for j in range(S)):
                raise ValueError("extra symmetry does not shift the sequence by steps/M")
            object.__setattr__(self, "extra_symmetry", (R, M))
        word = self.reduced_word
        if not word:
            raise ValueError("the loop class is contractible; the cone is not coercive")
        geom = _geometry(self.nu.polyhedron.tessellation)
        common = set(geom.triangles[word[0]])
        for t in word[1:]:
            common &= set(geom.triangles[t])
        if common:
            raise ValueError(
                "the loop class winds around a single rotation axis; the cone is excluded"
            )

    @cached_property
    def triangle_sequence(self):
        if self.nu is None:
            return None
        return triangles_from_vertices(self.nu)

    @cached_property
    def reduced_word(self):
        if self.nu is None:
            return ()
        return reduce_cyclic_word(self.triangle_sequence.triangles)

    @cached_property
    def canonical_word(self):
        return canonical_cyclic_word(self.reduced_word)

    def to_config(self):
        """Plain-dict form; round-trips bit-exactly through JSON."""
        extra = None
        if self.extra_symmetry is not None:
            R, M = self.extra_symmetry
            key = matrix_key(R)
            idx = next(
                i for i, g in enumerate(self.group.elements) if matrix_key(g) == key
            )
            extra = {"element_index": idx, "M": M}
        return {
            "group": self.group.tag,
            "nu": list(self.nu.vertex_ids) if self.nu is not None else None,
            "alpha": float(self.alpha),
            "extra_symmetry": extra,
            "period": float(self.period),
            "central_mass": float(self.central_mass),
        }


def cone_from_config(config):
    """Inverse of ConeSpec.to_config."""
    group = builtin_group(config["group"])
    nu = None
    if config.get("nu") is not None:
        poly = build_archimedean(group)
        nu = VertexSequence(poly, tuple(config["nu"]))
    extra = None
    if config.get("extra_symmetry") is not None:
        spec = config["extra_symmetry"]
        extra = (group.elements[int(spec["element_index"])], int(spec["M"]))
    return ConeSpec(
        group=group,
        nu=nu,
        alpha=float(config["alpha"]),
        extra_symmetry=extra,
        period=float(config["period"]),
        central_mass=float(config["central_mass"]),
    )


def save_cone(cone, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cone.to_config(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_cone(path):
    with open(path, "r", encoding="utf-8") as fh:
        return cone_from_config(json.load(fh))


def catalog_cone(tag, name, *, period=TWO_PI, central_mass=0.0, alpha=None, numbering=None):
    """ConeSpec for a published catalog row under the reconstructed numbering."""
    entry = catalog_entry(str(tag).upper(), name)
    poly = build_archimedean(entry.tag)
    if numbering is None:
        numbering = published_numbering(entry.tag)
    nu = VertexSequence.from_labels(poly, entry.labels, numbering)
    matches = find_extra_symmetry(nu, entry.M)
    if not matches:
        raise ValueError(
            f"catalog row {entry.tag}/{entry.name} admits no symmetry of order {entry.M} "
            "under this numbering"
        )
    return ConeSpec(
        group=poly.group,
        nu=nu,
        alpha=float(entry.alpha if alpha is None else alpha),
        extra_symmetry=(matches[0], entry.M),
        period=float(period),
        central_mass=float(central_mass),
    )


# ---------------------------------------------------------------------------
# Minimal total angle


@dataclass(frozen=True)
class MinimalAngleResult:
    """Minimal total angle and the circular-arc skeleton realizing it.

    semi_axes lists the junction directions in traversal order; arc i joins
    semi_axes[i] to semi_axes[i+1] (cyclically) sweeping arc_angles[i];
    times[i] is the junction passage time under the constant angular speed
    total_angle / period.
    """

    total_angle: float
    semi_axes: np.ndarray
    arc_angles: np.ndarray
    times: np.ndarray
    centrality: str
    word: tuple


def _fibonacci_directions(n):
    k = np.arange(n)
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * k + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    ang = TWO_PI * k / phi
    return np.stack([r * np.cos(ang), r * np.sin(ang), z], axis=1)


def _circle_word(geom, axis):
    """Cyclic chamber word of the full great circle with the given unit normal."""
    seed = np.array([1.0, 0.0, 0.0])
    if abs(axis @ seed) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    u = seed - (seed @ axis) * axis
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    events = []
    for n in geom.wall_normals:
        A, B = n @ u, n @ v
        if math.hypot(A, B) < 1e-12:
            return None
        base = math.atan2(-A, B)
        for k in (0, 1, 2):
            phi = base + k * math.pi
            phi %= TWO_PI
            events.append(phi)
    events = sorted(set(round(e, 12) for e in events))
    word = []
    bounds = events + [events[0] + TWO_PI]
    for a, b in zip(bounds[:-1], bounds[1:]):
        mid = 0.5 * (a + b)
        word.append(geom.locate(math.cos(mid) * u + math.sin(mid) * v))
    return merge_cyclic_duplicates(word)


def _central_circle_exists(geom, target_word, samples=300):
    """Search sampled great circles for a planar representative of the class."""
    target = canonical_cyclic_word(target_word)
    if not target:
        return False
    pole_pts = geom.points
    for axis in _fibonacci_directions(samples):
        axis = axis / np.linalg.norm(axis)
        if np.min(np.abs(pole_pts @ axis)) < 5e-3:
            continue
        word = _circle_word(geom, axis)
        if not word:
            continue
        reduced = reduce_cyclic_word(word)
        if not reduced:
            continue
        reps = max(1, -(-len(target) // len(reduced)) + 1)
        for direction in (list(reduced), list(reversed(reduced))):
            for r in range(1, reps + 1):
                if r * len(direction) > 4 * len(target) + 8:
                    break
                if canonical_cyclic_word(reduce_cyclic_word(direction * r)) == target:
                    return True
    return False


def _arc_geometry(za, zb):
    c = float(np.clip(za @ zb, -1.0, 1.0))
    theta = math.acos(c)
    w = zb - c * za
    w /= np.linalg.norm(w)
    return theta, w


def _pole_inside_arc(points, za, zb):
    """True if some pole lies strictly inside the open short arc."""
    theta, w = _arc_geometry(za, zb)
    normal = np.cross(za, w)
    coplanar = np.abs(points @ normal) < 1e-9
    phi = np.arctan2(points @ w, points @ za)
    inside = (phi > 1e-7) & (phi < theta - 1e-7)
    return bool(np.any(coplanar & inside))


def _arc_wall(geom, za, zb):
    """Index of the wall whose great circle carries the whole arc, or None."""
    hits = [
        wi
        for wi, n in enumerate(geom.wall_normals)
        if abs(n @ za) < 1e-9 and abs(n @ zb) < 1e-9
    ]
    if not hits:
        return None
    if len(hits) > 1:
        raise ValueError("arc endpoints lie on two common walls")
    return hits[0]


def _off_wall_itinerary(geom, za, zb):
    theta, w = _arc_geometry(za, zb)
    events = []
    for n in geom.wall_normals:
        A, B = n @ za, n @ w
        base = math.atan2(-A, B)
        for k in (-1, 0, 1, 2):
            phi = base + k * math.pi
            if 1e-9 < phi < theta - 1e-9:
                events.append(phi)
    bounds = [0.0] + sorted(events) + [theta]
    word = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        mid = 0.5 * (a + b)
        word.append(geom.locate(math.cos(mid) * za + math.sin(mid) * w))
    return merge_consecutive(word)


def _on_wall_itinerary(geom, za, zb, wall, side):
    theta, w = _arc_geometry(za, zb)
    mid = math.cos(0.5 * theta) * za + math.sin(0.5 * theta) * w
    nudged = mid + side * 1e-7 * geom.wall_normals[wall]
    return [geom.locate(nudged)]

def _junction_route(geom, pid, c_in, c_out, direction, turns):
    """Chambers strictly between c_in and c_out going around the pole fan."""
    fan = geom.fan[pid]
    L = len(fan)
    i_in, i_out = fan.index(c_in), fan.index(c_out)
    steps = (direction * (i_out - i_in)) % L
    total = steps + turns * L
    return [fan[(i_in + direction * s) % L] for s in range(1, total)]


def _skeleton_realizes(geom, target, fund_axes, tri_perm_pows, M, turn_cap, combo_cap):
    """Try junction/side resolutions of the arc skeleton against the class word.

    fund_axes = (s_0, ..., s_f) with s_f the symmetry image of s_0; the full
    loop is the concatenation of M symmetry-translated copies of the
    fundamental block.  Returns the realized full word or None.
    """
    f = len(fund_axes) - 1
    pts = geom.points
    arc_choices = []
    for i in range(f):
        za, zb = pts[fund_axes[i]], pts[fund_axes[i + 1]]
        wall = _arc_wall(geom, za, zb)
        if wall is None:
            arc_choices.append([_off_wall_itinerary(geom, za, zb)])
        else:
            arc_choices.append(
                [_on_wall_itinerary(geom, za, zb, wall, s) for s in (1.0, -1.0)]
            )

    tried = 0
    tri_perm = tri_perm_pows[1 % M] if M > 1 else tri_perm_pows[0]
    for arc_sel in itertools.product(*arc_choices):
        specs = []
        for j in range(1, f):
            specs.append((fund_axes[j], arc_sel[j - 1][-1], arc_sel[j][0]))
        specs.append((fund_axes[f], arc_sel[f - 1][-1], tri_perm[arc_sel[0][0]]))

        option_lists = []
        for pid, c_in, c_out in specs:
            opts, seen = [], set()
            for direction in (1, -1):
                for turns in range(turn_cap + 1):
                    route = tuple(_junction_route(geom, pid, c_in, c_out, direction, turns))
                    if route not in seen:
                        seen.add(route)
                        opts.append(list(route))
            option_lists.append(opts)

        for junc_sel in itertools.product(*option_lists):
            tried += 1
            if tried > combo_cap:
                raise RuntimeError(
                    "minimal-angle realization search exhausted its resolution budget"
                )
            block = []
            for i in range(f):
                if i > 0:
                    block += junc_sel[i - 1]
                block += arc_sel[i]
            block += junc_sel[f - 1]
            word = []
            for k in range(M):
                perm = tri_perm_pows[k]
                word += [perm[c] for c in block]
            if canonical_cyclic_word(reduce_cyclic_word(word)) == target:
                return tuple(word)
    return None


def min_total_angle(cone, *, max_pops=2_000_000, turn_cap=2, combo_cap=500_000):
    """Minimal total angle of circular-arc loops through rotation semi-axes
    realizing the cone's loop class, with the realizing skeleton.

    Runs a uniform-cost search over symmetry-periodic junction sequences;
    the first closed skeleton whose chamber word (over junction and
    wall-side resolutions) matches the class is optimal.  Raises ValueError
    for central cones and RuntimeError on search exhaustion.
    """
    tag = cone.group.tag
    T = cone.period
    if tag == "Z4":
        raise ValueError(
            "central cone: the antiperiodic class has planar representatives through the origin"
        )
    if tag == "KLEIN":
        axes = np.array(
            [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]
        )
        return MinimalAngleResult(
            total_angle=TWO_PI,
            semi_axes=axes,
            arc_angles=np.full(4, 0.5 * math.pi),
            times=np.array([0.0, 0.25 * T, 0.5 * T, 0.75 * T]),
            centrality="non-central",
            word=(),
        )

    nu = cone.nu
    geom = _geometry(nu.polyhedron.tessellation)
    target = cone.canonical_word
    if _central_circle_exists(geom, target):
        raise ValueError("central cone: a planar loop through the origin represents this class")
    centrality = "centrality unknown (no planar representative found among sampled circles)"

    if cone.extra_symmetry is not None:
        R, M = cone.extra_symmetry
    else:
        R, M = np.eye(3), 1
    pole_perm = geom.pole_permutation(R)
    tri_perm_pows = [tuple(range(len(geom.triangles)))]
    for _ in range(1, M):
        prev = tri_perm_pows[-1]
        step = geom.triangle_permutation(R)
        tri_perm_pows.append(tuple(step[p] for p in prev))
    pole_perm_pows = [tuple(range(len(geom.points)))]
    for _ in range(1, M):
        prev = pole_perm_pows[-1]
        pole_perm_pows.append(tuple(pole_perm[p] for p in prev))

    pts = geom.points
    P = len(pts)
    cosines = np.clip(pts @ pts.T, -1.0, 1.0)
    angles = np.arccos(cosines)
    allowed = {}
    for i in range(P):
        row = []
        for j in range(P):
            if j == i:
                continue
            th = angles[i, j]
            if th < 1e-7 or th > math.pi - 1e-6:
                continue
            if _pole_inside_arc(pts, pts[i], pts[j]):
                continue
            row.append((j, float(th)))
        allowed[i] = row

    fmax = max(2, math.ceil(4 * nu.steps / M))
    heap = []
    serial = itertools.count()
    for s0 in range(P):
        heapq.heappush(heap, (0.0, next(serial), (s0,), False))
    seen_skeletons = set()
    pops = 0
    while heap:
        pops += 1
        if pops > max_pops:
            raise RuntimeError("minimal-angle search exhausted its pop budget")
        cost, _, axes, closed = heapq.heappop(heap)
        if closed:
            full = []
            f = len(axes) - 1
            for k in range(M):
                perm = pole_perm_pows[k]
                full.extend(perm[a] for a in axes[:-1])
            canon = min(tuple(full[i:] + full[:i]) for i in range(len(full)))
            if canon in seen_skeletons:
                continue
            seen_skeletons.add(canon)
            word = _skeleton_realizes(
                geom, target, axes, tri_perm_pows, M, turn_cap, combo_cap
            )
            if word is None:
                continue
            m = len(full)
            semi_axes = pts[full]
            arc_angles = np.array(
                [angles[full[i], full[(i + 1) % m]] for i in range(m)]
            )
            total = float(arc_angles.sum())
            times = np.concatenate(([0.0], np.cumsum(arc_angles)[:-1])) * (T / total)
            return MinimalAngleResult(
                total_angle=total,
                semi_axes=semi_axes,
                arc_angles=arc_angles,
                times=times,
                centrality=centrality,
                word=word,
            )
        narcs = len(axes) - 1
        if narcs >= fmax:
            continue
        last = axes[-1]
        close_target = pole_perm[axes[0]]
        for j, th in allowed[last]:
            new_cost = cost + M * th
            heapq.heappush(heap, (new_cost, next(serial), axes + (j,), False))
            if j == close_target:
                heapq.heappush(heap, (new_cost, next(serial), axes + (j,), True))
    raise RuntimeError("minimal-angle search exhausted all candidates without a realization")
