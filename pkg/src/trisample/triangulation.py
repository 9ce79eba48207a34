"""Embedded planar triangulations.

A triangulation is given by a rotation system: for every vertex the cyclic
counterclockwise list of its neighbours.  The three external vertices are
stored as the ordered triple ``(s_red, s_green, s_blue)``, which must appear
in counterclockwise order around the outer triangle.  Finite faces are traced
with the rule ``next(u -> v) = (v, w)`` where ``w`` precedes ``u`` in the
rotation at ``v``; this yields every finite face in counterclockwise order
and the outer face in clockwise order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .errors import (
    InconsistentRotation,
    NonTriangularFace,
    NotSimple,
    TooSmall,
    ValidationError,
    WrongExternalCount,
)

__all__ = [
    "Face",
    "Triangle",
    "Triangulation",
    "build_triangulation",
    "enumerate_faces",
    "find_triangles",
    "decompose_by_separating_triangles",
    "Piece",
    "build_slow_gadget",
    "hexagonal_patch",
    "stacked_triangulation",
    "random_triangulation",
]

ROLES = ("red", "green", "blue")


def _canonical_cycle(tri):
    """Rotate a cyclic triple so that its smallest vertex comes first."""
    i = tri.index(min(tri))
    return tri[i:] + tri[:i]


@dataclass(frozen=True)
class Face:
    vertices: tuple
    index: int

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class Triangle:
    vertices: tuple  # sorted
    facial: bool
    face_index: int | None = None


class Triangulation:
    """An immutable embedded planar triangulation.

    Parameters
    ----------
    rotation : mapping
        ``vertex -> sequence of neighbours`` in counterclockwise order.
    external : sequence of 3 vertex ids
        ``(s_red, s_green, s_blue)``, counterclockwise around the outer face.
    check : bool
        Validate all invariants (default).  Only internal constructors that
        already guarantee validity pass ``False``.
    """

    __slots__ = (
        "rotation", "external", "vertices", "internal_vertices", "_ext_set",
        "edges", "internal_edges", "edge_index", "faces", "_dart_face",
        "_pos", "_triangles", "_cache",
    )

    def __init__(self, rotation, external, check=True):
        try:
            rot = {int(v): tuple(int(u) for u in nbrs) for v, nbrs in rotation.items()}
            ext = tuple(int(v) for v in external)
        except (TypeError, ValueError, AttributeError) as exc:
            raise ValidationError(f"malformed rotation system: {exc}") from exc
        self.rotation = rot
        self.external = ext
        if check:
            self._check_local()
        self._ext_set = frozenset(ext)
        self.vertices = tuple(sorted(rot))
        self.internal_vertices = tuple(v for v in self.vertices if v not in self._ext_set)
        self._pos = {v: {u: i for i, u in enumerate(nbrs)} for v, nbrs in rot.items()}
        self.edges = tuple(sorted((u, v) for u in rot for v in rot[u] if u < v))
        outer = {tuple(sorted(p)) for p in combinations(ext, 2)}
        self.internal_edges = tuple(e for e in self.edges if e not in outer)
        self.edge_index = {e: i for i, e in enumerate(self.internal_edges)}
        self._trace_faces(check)
        self._triangles = None
        self._cache = {}
        if check:
            self._check_global()

    # ------------------------------------------------------------------
    # validation
    def _check_local(self):
        rot, ext = self.rotation, self.external
        if len(ext) != 3 or len(set(ext)) != 3:
            raise WrongExternalCount(f"need exactly 3 distinct external vertices, got {ext}",
                                     field="external")
        for v in ext:
            if v not in rot:
                raise WrongExternalCount(f"external vertex {v} missing from rotation", field=v)
        for v, nbrs in rot.items():
            if v in nbrs:
                raise NotSimple(f"loop at vertex {v}", field=v)
            if len(set(nbrs)) != len(nbrs):
                raise NotSimple(f"parallel edges at vertex {v}", field=v)
            for u in nbrs:
                if u not in rot:
                    raise InconsistentRotation(f"neighbour {u} of {v} is not a vertex", field=u)
                if v not in rot[u]:
                    raise InconsistentRotation(
                        f"{u} is in the rotation of {v} but not vice versa", field=v)
        for a, b in combinations(ext, 2):
            if b not in rot[a]:
                raise WrongExternalCount(f"external vertices {a} and {b} are not adjacent",
                                         field=a)

    def _trace_faces(self, check):
        rot, pos = self.rotation, self._pos
        seen = {}
        traced = []
        for u in rot:
            for v in rot[u]:
                if (u, v) in seen:
                    continue
                cycle = []
                a, b = u, v
                while (a, b) not in seen:
                    seen[(a, b)] = len(traced)
                    cycle.append(a)
                    nb = rot[b]
                    w = nb[pos[b][a] - 1]
                    a, b = b, w
                    if len(cycle) > 3 * len(rot) + 3:
                        break
                if (a, b) != (u, v) and check:
                    raise InconsistentRotation(f"face starting at dart {u}->{v} does not close",
                                               field=u)
                traced.append(tuple(cycle))
        r, g, b = self.external
        outer_ids = [i for i, c in enumerate(traced) if len(c) == 3 and set(c) == self._ext_set
                     and _canonical_cycle(c) == _canonical_cycle((r, b, g))]
        if check:
            for c in traced:
                if len(c) != 3:
                    raise NonTriangularFace(f"face {c} has {len(c)} sides", field=c)
            if len(outer_ids) != 1:
                raise WrongExternalCount(
                    "external triple must bound the outer face in counterclockwise order "
                    f"(s_red, s_green, s_blue); got {self.external}", field="external")
        outer = outer_ids[0] if outer_ids else -1
        faces = sorted(_canonical_cycle(c) for i, c in enumerate(traced) if i != outer)
        self.faces = tuple(Face(c, i) for i, c in enumerate(faces))
        index = {c: i for i, c in enumerate(faces)}
        dart_face = {}
        for (a, b), tid in seen.items():
            dart_face[(a, b)] = -1 if tid == outer else index[_canonical_cycle(traced[tid])]
        self._dart_face = dart_face

    def _check_global(self):
        n = len(self.internal_vertices)
        if n < 1:
            raise TooSmall("a triangulation needs at least one internal vertex", field="n_internal")
        nv, ne, nf = len(self.vertices), len(self.edges), len(self.faces) + 1
        # connectivity
        start = self.vertices[0]
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in self.rotation[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != nv:
            missing = min(set(self.vertices) - seen)
            raise InconsistentRotation(f"graph is disconnected (vertex {missing})", field=missing)
        if nv - ne + nf != 2:
            raise InconsistentRotation(f"rotation system is not planar: V-E+F={nv - ne + nf}",
                                       field="rotation")
        if ne != 3 * n + 3 or len(self.faces) != 2 * n + 1:
            raise InconsistentRotation("edge/face counts do not match a triangulation",
                                       field="rotation")

    # ------------------------------------------------------------------
    @property
    def n_internal(self):
        return len(self.internal_vertices)

    @property
    def s_red(self):
        return self.external[0]

    @property
    def s_green(self):
        return self.external[1]

    @property
    def s_blue(self):
        return self.external[2]

    def is_external(self, v):
        return v in self._ext_set

    def is_internal_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edge_index

    def has_edge(self, u, v):
        return v in self._pos.get(u, ())

    def degree(self, v):
        return len(self.rotation[v])

    def neighbors(self, v):
        return self.rotation[v]

    def ccw_next(self, v, u):
        """Neighbour of ``v`` following ``u`` counterclockwise."""
        nb = self.rotation[v]
        return nb[(self._pos[v][u] + 1) % len(nb)]

    def ccw_prev(self, v, u):
        nb = self.rotation[v]
        return nb[self._pos[v][u] - 1]

    def face_left(self, u, v):
        """Index of the face to the left of the dart ``u -> v`` (-1 for the outer face)."""
        return self._dart_face[(u, v)]

    def edge_faces(self, u, v):
        return self._dart_face[(u, v)], self._dart_face[(v, u)]

    def face_edges(self, f):
        a, b, c = self.faces[f].vertices
        return ((a, b), (b, c), (c, a))

    def adjacent_faces(self, f):
        a, b, c = self.faces[f].vertices
        return tuple(self._dart_face[(y, x)] for x, y in ((a, b), (b, c), (c, a)))

    def triangles(self):
        if self._triangles is None:
            self._triangles = find_triangles(self)
        return self._triangles

    def __eq__(self, other):
        return (isinstance(other, Triangulation) and self.external == other.external
                and self.rotation == other.rotation)

    def __hash__(self):
        return hash((self.external, tuple(sorted(self.rotation.items()))))

    def __repr__(self):
        return f"Triangulation(n_internal={self.n_internal}, external={self.external})"

    # ------------------------------------------------------------------
    # serialisation
    def to_dict(self):
        return {
            "n_internal": self.n_internal,
            "external": list(self.external),
            "rotation": {str(v): list(self.rotation[v]) for v in self.vertices},
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        return build_triangulation(data)

    def to_dot(self, orientation=None, colors=None):
        """Graphviz DOT text; external vertices are drawn as boxes."""
        lines = ["graph triangulation {" if orientation is None else "digraph triangulation {"]
        for v in self.vertices:
            if self.is_external(v):
                role = ROLES[self.external.index(v)]
                lines.append(f'  {v} [shape=box, label="{v} (s_{role})"];')
            else:
                lines.append(f"  {v};")
        arrow = "--" if orientation is None else "->"
        for u, v in self.edges:
            attrs = []
            if not self.is_internal_edge(u, v):
                attrs.append("style=bold")
                if orientation is not None:
                    attrs.append("dir=none")
            elif orientation is not None:
                u, v = orientation.direction(u, v)
                if colors is not None:
                    attrs.append(f"color={colors[(u, v)]}")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f"  {u} {arrow} {v}{suffix};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_faces(cls, faces, external):
        """Build from an (unoriented) list of finite triangular faces.

        Face orientations are made coherent by propagation across shared
        edges and then flipped globally so that ``external`` is ccw.
        """
        faces = [tuple(f) for f in faces]
        if len(set(map(frozenset, faces))) != len(faces):
            raise NonTriangularFace("duplicate face in face list", field="faces")
        by_edge = {}
        for i, f in enumerate(faces):
            if len(set(f)) != 3:
                raise NonTriangularFace(f"degenerate face {f}", field=f)
            for a, b in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                by_edge.setdefault(frozenset((a, b)), []).append(i)
        oriented = [None] * len(faces)
        for root in range(len(faces)):
            if oriented[root] is not None:
                continue
            oriented[root] = faces[root]
            queue = deque([root])
            while queue:
                i = queue.popleft()
                f = oriented[i]
                for a, b in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                    for j in by_edge[frozenset((a, b))]:
                        if j == i:
                            continue
                        g = faces[j]
                        darts = {(g[0], g[1]), (g[1], g[2]), (g[2], g[0])}
                        want = g if (b, a) in darts else g[::-1]
                        if oriented[j] is None:
                            oriented[j] = want
                            queue.append(j)
                        elif _canonical_cycle(oriented[j]) != _canonical_cycle(want):
                            raise InconsistentRotation("face list is not orientable", field=g)
        r, g_, b_ = external
        darts = {d for f in oriented for d in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0]))}
        if (g_, r) in darts and (r, g_) not in darts:
            oriented = [f[::-1] for f in oriented]
        succ = {}
        for f in oriented:
            for k in range(3):
                v, p, q = f[k], f[(k + 1) % 3], f[(k + 2) % 3]
                succ.setdefault(v, {})[p] = q
        # the outer face contributes the ccw steps between external vertices
        for v, p, q in ((r, g_, b_), (g_, b_, r), (b_, r, g_)):
            succ.setdefault(v, {})[q] = p
        rotation = {}
        for v, nxt in succ.items():
            start = min(nxt)
            cyc = [start]
            cur = nxt[start]
            while cur != start:
                cyc.append(cur)
                if cur not in nxt or len(cyc) > len(nxt):
                    raise InconsistentRotation(f"faces around vertex {v} do not close", field=v)
                cur = nxt[cur]
            if len(cyc) != len(nxt):
                raise InconsistentRotation(f"vertex {v} is not a manifold vertex", field=v)
            rotation[v] = cyc
        return cls(rotation, external)


def build_triangulation(data):
    """Validate a rotation-system description and return a Triangulation.

    ``data`` is either a Triangulation (returned unchanged), a mapping in the
    JSON layout ``{"n_internal", "external", "rotation"}``, or a JSON string.
    """
    if isinstance(data, Triangulation):
        return data
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "rotation" not in data or "external" not in data:
        raise ValidationError("triangulation needs 'rotation' and 'external'", field="triangulation")
    tri = Triangulation(data["rotation"], data["external"])
    declared = data.get("n_internal")
    if declared is not None and int(declared) != tri.n_internal:
        raise ValidationError(
            f"n_internal is {declared} but rotation has {tri.n_internal} internal vertices",
            field="n_internal")
    return tri


def enumerate_faces(tri):
    return list(tri.faces)


def find_triangles(tri):
    """All 3-cycles except the outer triangle, tagged facial or not."""
    face_of = {tuple(sorted(f.vertices)): f.index for f in tri.faces}
    outer = tuple(sorted(tri.external))
    out = []
    for u in tri.vertices:
        nu = [w for w in tri.rotation[u] if w > u]
        for v in nu:
            for w in tri.rotation[v]:
                if w > v and tri.has_edge(u, w):
                    key = (u, v, w)
                    if key == outer:
                        continue
                    fi = face_of.get(key)
                    out.append(Triangle(key, fi is not None, fi))
    out.sort(key=lambda t: t.vertices)
    return out


# ----------------------------------------------------------------------
# separating-triangle decomposition

def _inside_faces(tri, cycle):
    """Face indices strictly inside the 3-cycle ``cycle`` (the side away from the outer face)."""
    a, b, c = cycle
    cyc_edges = {frozenset(e) for e in ((a, b), (b, c), (c, a))}
    side = []
    for x, y in ((a, b), (b, a)):
        start = tri.face_left(x, y)
        seen = {start}
        queue = deque([start])
        hit_outer = start == -1
        while queue and not hit_outer:
            f = queue.popleft()
            for p, q in tri.face_edges(f):
                if frozenset((p, q)) in cyc_edges:
                    continue
                g = tri.face_left(q, p)
                if g == -1:
                    hit_outer = True
                    break
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
        side.append((hit_outer, seen))
    inner = [s for hit, s in side if not hit]
    if len(inner) != 1:
        raise InconsistentRotation(f"cannot determine interior of triangle {cycle}", field=cycle)
    return inner[0]


def interior_vertices(tri, cycle):
    """Vertices strictly inside the separating 3-cycle ``cycle``."""
    verts = set()
    for f in _inside_faces(tri, cycle):
        verts.update(tri.faces[f].vertices)
    return verts - set(cycle)


@dataclass
class Piece:
    """A 4-connected piece bounded by ``boundary`` (a 3-cycle of the parent).

    ``faces`` lists the parent faces owned by the piece; ``triangulation``
    is the piece itself, where each maximal nested separating triangle is
    collapsed to a single face.
    """

    boundary: tuple
    faces: tuple
    triangulation: Triangulation
    n_internal: int


def decompose_by_separating_triangles(tri):
    sep = [t.vertices for t in tri.triangles() if not t.facial]
    if not sep:
        return [Piece(tri.external, tuple(f.index for f in tri.faces), tri, tri.n_internal)]
    inside = {c: _inside_faces(tri, c) for c in sep}
    all_faces = frozenset(f.index for f in tri.faces)
    regions = [(tri.external, all_faces)] + [(c, frozenset(inside[c])) for c in sep]
    owner = {}
    for f in all_faces:
        best = min((r for r in regions if f in r[1]), key=lambda r: len(r[1]))
        owner[f] = best[0]
    pieces = []
    for boundary, region in regions:
        owned = tuple(sorted(f for f in region if owner[f] == boundary))
        verts = set(boundary)
        for f in owned:
            verts.update(tri.faces[f].vertices)
        # maximal nested triangles survive as collapsed faces
        kids = [c for c in sep if inside[c] < region]
        for c in kids:
            if not any(inside[c] < inside[d] < region for d in kids):
                verts.update(c)
        rotation = {v: [u for u in tri.rotation[v] if u in verts] for v in verts}
        if boundary == tri.external:
            ext = tri.external
        else:
            ext = _ccw_from_inside(tri, boundary, region)
        sub = Triangulation(rotation, ext)
        pieces.append(Piece(tuple(ext), owned, sub, sub.n_internal))
    return pieces


def _ccw_from_inside(tri, cycle, region):
    a, b, c = cycle
    # the inside face on dart a->b is to its left iff (a, b, c) is ccw seen from inside
    if tri.face_left(a, b) in region:
        return (a, b, c)
    return (a, c, b)


# ----------------------------------------------------------------------
# generators

def build_slow_gadget(t):
    """The high-degree triangulation with an exponentially small cut for triangle reversal.

    Vertices ``v_0 .. v_{4t-2}`` keep their indices as ids; the external
    vertices are ``s_red = 4t - 1``, ``s_green = 4t``, ``s_blue = 4t + 1``.
    ``v_0`` is joined to ``s_blue, s_red`` and the path ``v_1 .. v_{2t+1}``;
    ``v_{t+1}`` has degree 4; ``v_t`` fans over the chain
    ``v_{3t+1} .. v_{4t-2}, v_{3t}``; ``v_{3t}`` is joined to ``s_red``.
    """
    t = int(t)
    if t < 2:
        raise TooSmall(f"gadget needs t >= 2, got {t}", field="t")
    R, G, B = 4 * t - 1, 4 * t, 4 * t + 1
    v3t = 3 * t
    W = [3 * t + j for j in range(1, t - 1)] + [v3t]        # W_1 .. W_{t-1}
    V = [2 * t + 1 + j for j in range(1, t - 1)] + [v3t]    # V_1 .. V_{t-1}
    faces = []
    # star of v_0
    faces += [(0, i + 1, i) for i in range(1, 2 * t + 1)]
    faces += [(0, 1, B), (0, B, R), (0, R, 2 * t + 1)]
    # right strip between v_{t+1}..v_{2t+1} and W, closed off by v_{3t}
    faces.append((t + 1, W[0], t))
    faces += [(t + j, t + j + 1, W[j - 1]) for j in range(1, t)]
    faces += [(t + j + 1, W[j], W[j - 1]) for j in range(1, t - 1)]
    faces += [(2 * t, 2 * t + 1, v3t), (2 * t + 1, R, v3t)]
    # fan of v_t over W
    faces += [(t, W[j - 1], W[j]) for j in range(1, t - 1)]
    faces.append((t, v3t, t - 1))
    # left strip between v_1..v_t and V
    faces += [(j, j + 1, V[j - 1]) for j in range(1, t - 1)]
    faces += [(j + 1, V[j], V[j - 1]) for j in range(1, t - 1)]
    # outer layer
    faces += [(B, 1, G), (1, V[0], G), (V[0], R, G)]
    faces += [(V[j - 1], V[j], R) for j in range(1, t - 1)]
    return Triangulation.from_faces(faces, (R, G, B))


def hexagonal_patch():
    """Centre vertex with a hexagonal ring: 7 internal vertices, all degrees <= 6."""
    c, h = 0, list(range(1, 7))
    R, G, B = 7, 8, 9
    faces = [(c, h[i], h[(i + 1) % 6]) for i in range(6)]
    # ring edges attach to external vertices: R gets h5,h0,h1; G h1,h2,h3; B h3,h4,h5
    faces += [(h[5], h[0], R), (h[0], h[1], R), (h[1], h[2], G), (h[2], h[3], G),
              (h[3], h[4], B), (h[4], h[5], B)]
    faces += [(h[1], R, G), (h[3], G, B), (h[5], B, R)]
    return Triangulation.from_faces(faces, (R, G, B))


def stacked_triangulation(insertions):
    """Start from K4 and insert a new vertex into face ``insertions[k]`` (by index)."""
    R, G, B = 0, 1, 2
    faces = [(3, R, G), (3, G, B), (3, B, R)]
    nxt = 4
    for k in insertions:
        a, b, c = faces.pop(k % len(faces))
        faces += [(nxt, a, b), (nxt, b, c), (nxt, c, a)]
        nxt += 1
    return Triangulation.from_faces(faces, (R, G, B))


def insert_vertex(tri, face_index):
    """Stack a new vertex into a finite face; the face becomes a separating triangle."""
    a, b, c = tri.faces[face_index].vertices
    x = max(tri.vertices) + 1
    rot = {w: list(nb) for w, nb in tri.rotation.items()}
    # face (a, b, c) is ccw, so c follows b at a, a follows c at b, b follows a at c
    rot[a].insert(rot[a].index(b) + 1, x)
    rot[b].insert(rot[b].index(c) + 1, x)
    rot[c].insert(rot[c].index(a) + 1, x)
    rot[x] = [a, b, c]
    return Triangulation(rot, tri.external)


def nest_triangulation(outer, face_index, inner):
    """Glue ``inner`` into a finite face of ``outer``, external triangle onto the face."""
    a, b, c = outer.faces[face_index].vertices
    offset = max(outer.vertices) + 1
    relabel = dict(zip(inner.external, (a, b, c)))
    for v in inner.internal_vertices:
        relabel[v] = offset + v
    faces = [f.vertices for f in outer.faces if f.index != face_index]
    faces += [tuple(relabel[v] for v in f.vertices) for f in inner.faces]
    return Triangulation.from_faces(faces, outer.external)


def flip_edge(tri, u, v):
    """Diagonal flip of internal edge ``uv``; returns None if it would create a multi-edge."""
    a = tri.ccw_prev(v, u)
    b = tri.ccw_prev(u, v)
    if not tri.is_internal_edge(u, v) or tri.has_edge(a, b):
        return None
    rot = {w: list(nb) for w, nb in tri.rotation.items()}
    rot[u].remove(v)
    rot[v].remove(u)
    rot[a].insert(rot[a].index(u) + 1, b)
    rot[b].insert(rot[b].index(v) + 1, a)
    return Triangulation(rot, tri.external)


def random_triangulation(n, rng, n_flips=None):
    """Stacked insertion followed by random simple diagonal flips."""
    insertions = [int(rng.integers(0, 1 + 2 * k)) for k in range(n - 1)]
    tri = stacked_triangulation(insertions)
    for _ in range(3 * n if n_flips is None else n_flips):
        u, v = tri.internal_edges[int(rng.integers(len(tri.internal_edges)))]
        new = flip_edge(tri, u, v)
        if new is not None:
            tri = new
    return tri
