"""Finite orthogonal symmetry groups and their sphere tessellations.

A symmetry group here is a finite set of 3x3 orthogonal matrices acting on
the trajectory of a single body; the remaining bodies are the orbit of that
trajectory under the group.  The built-in groups are the vertical
rotoreflection group Z4, its order-2N generalizations, the Klein group of
half turns about the coordinate axes, and the rotation groups of the
tetrahedron, octahedron and icosahedron.

For the three polyhedral groups the rotation axes cut the unit sphere into
2N spherical triangles (N the group order).  That tessellation, together
with the reflections across its walls, drives the homotopy bookkeeping in
the rest of the package.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

KEY_DECIMALS = 9
_IDENTITY_ATOL = 1e-9


def matrix_key(M):
    """Hashable identity for a matrix: entries rounded to 9 decimals.

    The +0.0 sweeps away negative zeros so -0.0 and 0.0 collide.
    """
    r = np.round(np.asarray(M, dtype=float), KEY_DECIMALS) + 0.0
    return tuple(r.ravel())


def is_orthogonal(M, tol=1e-9):
    M = np.asarray(M, dtype=float)
    return M.shape == (3, 3) and np.allclose(M.T @ M, np.eye(3), atol=tol)


def rotation_matrix(axis, angle):
    """Rotation by `angle` about `axis` (Rodrigues formula)."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    K = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


@dataclass
class Pole:
    """A unit direction fixed by some non-identity proper rotation.

    order: size of the cyclic stabilizer, i.e. the largest n such that the
    rotation by 2*pi/n about this axis belongs to the group.
    """

    point: np.ndarray
    order: int

    def __repr__(self):
        p = np.round(self.point, 6)
        return f"Pole(({p[0]:+.6f}, {p[1]:+.6f}, {p[2]:+.6f}), order={self.order})"


@dataclass
class RotationGroup:
    """A finite group of orthogonal matrices with a stable element order.

    Elements are sorted lexicographically on their rounded entries, so two
    constructions of the same group list the elements identically.  Despite
    the name, elements of determinant -1 are allowed (the vertical groups
    are generated by rotoreflections); the polyhedral groups are proper.
    """

    tag: str
    elements: list = field(repr=False)
    generators: list = field(default_factory=list, repr=False)

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity_index(self):
        for i, R in enumerate(self.elements):
            if np.allclose(R, np.eye(3), atol=_IDENTITY_ATOL):
                return i
        raise ValueError("group has no identity element")

    def proper_elements(self):
        return [R for R in self.elements if np.linalg.det(R) > 0]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"RotationGroup({self.tag!r}, order={self.order})"


def generate_group(generators, cap=200):
    """Close a set of orthogonal matrices under products.

    Breadth-first closure; matrices are identified by their entries rounded
    to 9 decimals.  Raises if the closure exceeds `cap` elements (a
    non-finite or numerically drifting generating set).  The result is
    sorted lexicographically on rounded entries.
    """
    gens = [np.asarray(G, dtype=float) for G in generators]
    for G in gens:
        if not is_orthogonal(G):
            raise ValueError("generator is not orthogonal")
    elements = {matrix_key(np.eye(3)): np.eye(3)}
    frontier = [np.eye(3)]
    while frontier:
        fresh = []
        for A in frontier:
            for G in gens:
                B = G @ A
                k = matrix_key(B)
                if k not in elements:
                    if len(elements) >= cap:
                        raise ValueError(
                            f"group closure exceeded cap of {cap} elements"
                        )
                    elements[k] = B
                    fresh.append(B)
        frontier = fresh
    ordered = [elements[k] for k in sorted(elements.keys())]
    return ordered


_GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0

# 2*pi/3 rotation about (1,1,1): cyclic permutation of coordinates.
_C3 = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
_RZ90 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
_RZ180 = np.diag([-1.0, -1.0, 1.0])
_R5 = rotation_matrix([0.0, 1.0, _GOLDEN], 2.0 * np.pi / 5.0)

# Quarter turn about e3 composed with the z-flip.  Its square is the half
# turn about e3, so the closure is cyclic of order 4.
_Z4_GEN = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])


def _z2n_generator(n):
    c, s = np.cos(np.pi / n), np.sin(np.pi / n)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, -1.0]])


def builtin_group(tag, n=None):
    """Construct one of the named symmetry groups.

    Tags (case-insensitive): Z4, Z2N (requires n >= 2), KLEIN, T, O, I.
    Z2N with n = 2 coincides with Z4.
    """
    t = str(tag).upper()
    if t == "Z4":
        gens = [_Z4_GEN]
    elif t == "Z2N":
        if n is None or int(n) < 2:
            raise ValueError("Z2N requires an integer n >= 2")
        gens = [_z2n_generator(int(n))]
    elif t == "KLEIN":
        gens = [np.diag([1.0, -1.0, -1.0]), np.diag([-1.0, 1.0, -1.0])]
    elif t == "T":
        gens = [_RZ180, _C3]
    elif t == "O":
        gens = [_RZ90, _C3]
    elif t == "I":
        gens = [_R5, _C3]
    else:
        raise ValueError(f"unknown group tag {tag!r}")
    return RotationGroup(tag=t, elements=generate_group(gens), generators=gens)


def _rotation_axis(R):
    """Unit axis of a proper rotation (eigenvector for eigenvalue 1)."""
    tr = np.trace(R)
    if abs(tr + 1.0) < 1e-9:
        # Half turn: R + I = 2 p p^T, any nonzero column is the axis.
        M = R + np.eye(3)
        j = int(np.argmax(np.linalg.norm(M, axis=0)))
        a = M[:, j]
    else:
        a = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    return a / np.linalg.norm(a)


def poles(group):
    """All poles of a group: unit axes of its proper rotations, both signs.

    Returns a list of Pole sorted lexicographically on rounded coordinates.
    The order of a pole counts the group rotations fixing it (identity
    included), i.e. the size of its cyclic stabilizer.
    """
    elements = group.elements if isinstance(group, RotationGroup) else list(group)
    seen = {}
    for R in elements:
        if np.linalg.det(R) < 0 or np.allclose(R, np.eye(3), atol=_IDENTITY_ATOL):
            continue
        a = _rotation_axis(R)
        for s in (1.0, -1.0):
            seen[matrix_key(s * a)] = s * a
    out = []
    for k in sorted(seen.keys()):
        p = seen[k]
        stab = sum(
            1
            for R in elements
            if np.linalg.det(R) > 0 and np.linalg.norm(R @ p - p) < 1e-9
        )
        out.append(Pole(point=p, order=stab))
    return out


def pole_orbits(group, pole_list=None):
    """Partition the poles into group orbits.

    Returns a list of sorted index lists into `pole_list` (computed if not
    given).  Orbits are ordered by their smallest member index.
    """
    if pole_list is None:
        pole_list = poles(group)
    index = {matrix_key(p.point): i for i, p in enumerate(pole_list)}
    seen = set()
    orbits = []
    for i, p in enumerate(pole_list):
        if i in seen:
            continue
        orb = set()
        for R in group:
            orb.add(index[matrix_key(R @ p.point)])
        seen |= orb
        orbits.append(sorted(orb))
    return orbits


def _fixed_space(R, tol=1e-9):
    """Orthonormal basis of the eigenspace of R for eigenvalue 1."""
    _, s, Vt = np.linalg.svd(R - np.eye(3))
    return Vt[s < tol]


def fixed_point_sets(group):
    """Fixed sets of the non-identity elements, merged by subspace.

    Returns (lines, planes, has_origin_only): unit direction vectors of
    fixed lines, unit normals of fixed (mirror) planes, and whether some
    element fixes only the origin.  For every built-in group the planes
    list is empty and the fixed set is a union of lines through 0.
    """
    lines = {}
    planes = {}
    origin_only = False
    for R in group:
        if np.allclose(R, np.eye(3), atol=_IDENTITY_ATOL):
            continue
        basis = _fixed_space(R)
        if len(basis) == 0:
            origin_only = True
        elif len(basis) == 1:
            d = basis[0] / np.linalg.norm(basis[0])
            if d[np.argmax(np.abs(d))] < 0:
                d = -d
            lines[matrix_key(d)] = d
        elif len(basis) == 2:
            nrm = np.cross(basis[0], basis[1])
            nrm = nrm / np.linalg.norm(nrm)
            if nrm[np.argmax(np.abs(nrm))] < 0:
                nrm = -nrm
            planes[matrix_key(nrm)] = nrm
        else:
            raise ValueError("non-identity element fixes all of R^3")
    line_list = [lines[k] for k in sorted(lines.keys())]
    plane_list = [planes[k] for k in sorted(planes.keys())]
    return line_list, plane_list, origin_only


def collision_distance(x, group):
    """Distance from x to the collision set of the group.

    The collision set is the union of fixed sets of the non-identity
    elements: a body on it collides with one of its symmetry copies (or
    the central mass).  Accepts a single point (3,) or an array (..., 3)
    and returns a float or an array of the leading shape.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    lines, planes, origin_only = fixed_point_sets(group)
    if not lines and not planes and not origin_only:
        raise ValueError("trivial group has no collision set")
    dists = []
    for d in lines:
        proj = pts @ d
        dists.append(np.linalg.norm(pts - np.outer(proj, d), axis=-1))
    for nrm in planes:
        dists.append(np.abs(pts @ nrm))
    if origin_only:
        dists.append(np.linalg.norm(pts, axis=-1))
    out = np.min(dists, axis=0)
    return float(out[0]) if single else out.reshape(x.shape[:-1])


@dataclass
class Tessellation:
    """The sphere cut by the rotation axes of a polyhedral group.

    triangles[i] = (a, b, c) indexes into poles; vertex orders are
    non-increasing along the tuple and the right angle sits at c (the
    order-2 pole).  neighbors[i] lists the three triangles sharing an edge
    with triangle i.  reflections are the wall reflections (Householder
    matrices) of the full symmetry group.
    """

    group: RotationGroup
    poles: list
    triangles: list
    neighbors: list
    reflections: list
    orbit_of_pole: list
    vertex_orbits: tuple  # (a_orbit, b_orbit, c_orbit) indices into pole_orbits

    @property
    def points(self):
        return np.array([p.point for p in self.poles])

    def triangle_points(self, i):
        a, b, c = self.triangles[i]
        return self.points[[a, b, c]]


def spherical_triangle_area(p1, p2, p3):
    """Area of a geodesic triangle on the unit sphere (angle excess)."""

    def corner(a, b, c):
        u = b - (a @ b) * a
        v = c - (a @ c) * a
        cosang = u @ v / (np.linalg.norm(u) * np.linalg.norm(v))
        return np.arccos(np.clip(cosang, -1.0, 1.0))

    return corner(p1, p2, p3) + corner(p2, p3, p1) + corner(p3, p1, p2) - np.pi


def full_group_tessellation(group):
    """Tessellation of the sphere by the axes of a polyhedral group.

    Builds the 2N spherical triangles whose vertices are one pole from
    each of the three orbits, with the right angle at the order-2 pole.
    Only the tags T, O, I are accepted.
    """
    if group.tag not in ("T", "O", "I"):
        raise ValueError("tessellation is defined for the polyhedral groups T, O, I")
    pole_list = poles(group)
    pts = np.array([p.point for p in pole_list])
    orders = np.array([p.order for p in pole_list])
    orbits = pole_orbits(group, pole_list)
    orbit_of = {}
    for oi, orb in enumerate(orbits):
        for i in orb:
            orbit_of[i] = oi

    c_candidates = [oi for oi, orb in enumerate(orbits) if orders[orb[0]] == 2]
    if len(c_candidates) != 1:
        raise ValueError("expected exactly one orbit of order-2 poles")
    c_orb = c_candidates[0]
    ab = [oi for oi in range(len(orbits)) if oi != c_orb]
    if len(ab) != 2:
        raise ValueError("expected exactly three pole orbits")
    oa, ob = ab
    if orders[orbits[oa][0]] < orders[orbits[ob][0]]:
        oa, ob = ob, oa

    triangles = []
    for ci in orbits[c_orb]:
        c = pts[ci]
        near_a = sorted(orbits[oa], key=lambda i: -pts[i] @ c)[:2]
        near_b = sorted(orbits[ob], key=lambda i: -pts[i] @ c)[:2]
        for ia in near_a:
            for ib in near_b:
                triangles.append((ia, ib, ci))
    if len(triangles) != 2 * group.order:
        raise ValueError(
            f"built {len(triangles)} triangles, expected {2 * group.order}"
        )

    # Edge-sharing neighbors: every edge must be shared by exactly two.
    by_edge = {}
    for t, (ia, ib, ic) in enumerate(triangles):
        for e in ((ia, ib), (ib, ic), (ia, ic)):
            by_edge.setdefault(frozenset(e), []).append(t)
    neighbors = [[] for _ in triangles]
    for e, ts in by_edge.items():
        if len(ts) != 2:
            raise ValueError("tessellation edge not shared by exactly two triangles")
        neighbors[ts[0]].append(ts[1])
        neighbors[ts[1]].append(ts[0])
    neighbors = [tuple(sorted(ns)) for ns in neighbors]

    # Wall reflections: Householder matrices across the great-circle planes
    # spanned by triangle edges, kept when they preserve the pole set.
    pole_keys = {matrix_key(p) for p in pts}
    refl = {}
    for ia, ib, ic in triangles:
        for i, j in ((ia, ib), (ib, ic), (ia, ic)):
            nrm = np.cross(pts[i], pts[j])
            norm = np.linalg.norm(nrm)
            if norm < 1e-12:
                continue
            nrm = nrm / norm
            S = np.eye(3) - 2.0 * np.outer(nrm, nrm)
            if all(matrix_key(S @ p) in pole_keys for p in pts):
                refl[matrix_key(S)] = S
    reflections = [refl[k] for k in sorted(refl.keys())]

    tess = Tessellation(
        group=group,
        poles=pole_list,
        triangles=triangles,
        neighbors=neighbors,
        reflections=reflections,
        orbit_of_pole=[orbit_of[i] for i in range(len(pole_list))],
        vertex_orbits=(oa, ob, c_orb),
    )
    total = sum(
        spherical_triangle_area(*tess.triangle_points(i)) for i in range(len(triangles))
    )
    if abs(total - 4.0 * np.pi) > 1e-9:
        raise ValueError("tessellation triangle areas do not cover the sphere")
    return tess


def pole_census(group):
    """Counter mapping pole order to how many poles have it."""
    return Counter(p.order for p in poles(group))
