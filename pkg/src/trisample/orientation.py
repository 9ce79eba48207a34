"""3-orientations and Schnyder woods of a fixed triangulation.

An :class:`Orientation3` stores one direction bit per internal edge of its
triangulation: for the edge ``(u, v)`` with ``u < v`` a clear bit means
``u -> v`` and a set bit means ``v -> u``.  The integer ``bits`` doubles as
the canonical state key used by enumeration.

Colours follow the vertex condition: counterclockwise around an internal
vertex we meet outgoing green, incoming red, outgoing blue, incoming green,
outgoing red, incoming blue (each incoming block possibly empty).  The tree
of colour ``c`` is rooted at the external vertex with role ``c``.
"""

from __future__ import annotations

from enum import IntEnum

from .errors import ExternalVertex, Infeasible, InvalidOrientation, NoValidColoring

__all__ = [
    "Color",
    "Orientation3",
    "SchnyderWood",
    "construct_initial_orientation",
    "derive_schnyder_coloring",
    "check_vertex_condition",
    "validate_potential",
    "schnyder_colors",
]


class Color(IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2

    def __str__(self):
        return self.name.lower()

    @classmethod
    def parse(cls, value):
        if isinstance(value, Color):
            return value
        return cls[str(value).upper()]


# counterclockwise succession of the three outgoing edges at an internal vertex
_NEXT_OUT = {Color.GREEN: Color.BLUE, Color.BLUE: Color.RED, Color.RED: Color.GREEN}
# colour of an incoming edge that follows (ccw) the outgoing edge of the key colour
_IN_AFTER = {Color.GREEN: Color.RED, Color.BLUE: Color.GREEN, Color.RED: Color.BLUE}


class Orientation3:
    """Directions of the internal edges of ``tri``."""

    __slots__ = ("tri", "bits")

    def __init__(self, tri, bits, check=True):
        self.tri = tri
        self.bits = int(bits)
        if check and not self.is_valid():
            bad = self.first_violation()
            raise InvalidOrientation(f"vertex {bad} has wrong out-degree", field=bad)

    @classmethod
    def from_arcs(cls, tri, arcs, check=True):
        bits = 0
        seen = set()
        for tail, head in arcs:
            key = (min(tail, head), max(tail, head))
            i = tri.edge_index.get(key)
            if i is None:
                raise InvalidOrientation(f"{tail}-{head} is not an internal edge",
                                         field=(tail, head))
            if i in seen:
                raise InvalidOrientation(f"edge {key} given twice", field=key)
            seen.add(i)
            if tail > head:
                bits |= 1 << i
        if len(seen) != len(tri.internal_edges):
            raise InvalidOrientation("not every internal edge has a direction", field="arcs")
        return cls(tri, bits, check=check)

    def direction(self, u, v):
        """Return the edge ``{u, v}`` as a ``(tail, head)`` pair."""
        a, b = (u, v) if u < v else (v, u)
        i = self.tri.edge_index[(a, b)]
        return (b, a) if (self.bits >> i) & 1 else (a, b)

    def is_arc(self, u, v):
        return self.direction(u, v) == (u, v)

    def arcs(self):
        bits = self.bits
        return [((b, a) if (bits >> i) & 1 else (a, b))
                for i, (a, b) in enumerate(self.tri.internal_edges)]

    def out_neighbors(self):
        outs = {v: [] for v in self.tri.vertices}
        for t, h in self.arcs():
            outs[t].append(h)
        return outs

    def out_degrees(self):
        deg = {v: 0 for v in self.tri.vertices}
        for t, _ in self.arcs():
            deg[t] += 1
        return deg

    def first_violation(self):
        deg = self.out_degrees()
        for v in self.tri.vertices:
            want = 0 if self.tri.is_external(v) else 3
            if deg[v] != want:
                return v
        return None

    def is_valid(self):
        return self.first_violation() is None

    def flip(self, mask):
        """New orientation with the edges in ``mask`` reversed (no validation)."""
        return Orientation3(self.tri, self.bits ^ mask, check=False)

    def __eq__(self, other):
        return isinstance(other, Orientation3) and other.tri == self.tri and other.bits == self.bits

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return f"Orientation3(n_internal={self.tri.n_internal}, bits={self.bits:#x})"

    def to_dict(self, colors=None):
        if colors is None:
            colors = derive_schnyder_coloring(self).colors
        return {"edges": [{"tail": t, "head": h, "color": str(colors[(t, h)])}
                          for t, h in self.arcs()]}

    @classmethod
    def from_dict(cls, tri, data):
        return cls.from_arcs(tri, [(e["tail"], e["head"]) for e in data["edges"]])


def construct_initial_orientation(tri):
    """A deterministic 3-orientation found by augmenting paths.

    Each internal edge is assigned to the endpoint that becomes its tail;
    every internal vertex must receive exactly three edges and external
    vertices none.
    """
    edges = tri.internal_edges
    load = {v: 0 for v in tri.internal_vertices}
    tail_of = [None] * len(edges)
    incident = {v: [] for v in tri.internal_vertices}
    for i, (a, b) in enumerate(edges):
        for x in (a, b):
            if not tri.is_external(x):
                incident[x].append(i)

    def augment(i, visited):
        for x in edges[i]:
            if tri.is_external(x) or x in visited:
                continue
            visited.add(x)
            if load[x] < 3:
                if tail_of[i] is not None:
                    load[tail_of[i]] -= 1
                tail_of[i] = x
                load[x] += 1
                return True
            for j in incident[x]:
                if tail_of[j] == x and j != i and augment(j, visited):
                    if tail_of[i] is not None:
                        load[tail_of[i]] -= 1
                    tail_of[i] = x
                    load[x] += 1
                    return True
        return False

    for i in range(len(edges)):
        if not augment(i, set()):
            raise Infeasible(f"no 3-orientation found while placing edge {edges[i]}",
                             field=edges[i])
    bits = 0
    for i, (a, b) in enumerate(edges):
        if tail_of[i] == b:
            bits |= 1 << i
    o = Orientation3(tri, bits, check=False)
    if not o.is_valid():
        raise Infeasible("augmenting-path assignment left an unbalanced vertex",
                         field=o.first_violation())
    return o


def _ccw_outs(rotation, outs, v):
    out_set = set(outs[v])
    return [u for u in rotation[v] if u in out_set]


def schnyder_colors(rotation, outs, external):
    """Colour the arcs of a 3-orientation given as plain data.

    ``outs`` maps every vertex to its out-neighbours.  Returns a dict
    ``(tail, head) -> Color``.  Raises :class:`NoValidColoring` if the
    propagated colours are inconsistent.
    """
    role = {v: Color(i) for i, v in enumerate(external)}
    ins = {v: [] for v in rotation}
    for t, hs in outs.items():
        for h in hs:
            ins[h].append(t)
    out_color = {}

    def assign(v, u, c):
        # fix the colours of v's outgoing edges given that v -> u has colour c
        order = _ccw_outs(rotation, outs, v)
        if len(order) != 3:
            raise NoValidColoring(f"vertex {v} does not have out-degree 3", field=v)
        k = order.index(u)
        want = {order[k]: c, order[(k + 1) % 3]: _NEXT_OUT[c],
                order[(k + 2) % 3]: _NEXT_OUT[_NEXT_OUT[c]]}
        have = out_color.get(v)
        if have is None:
            out_color[v] = want
            return True
        if have != want:
            raise NoValidColoring(f"conflicting colours at vertex {v}", field=v)
        return False

    queue = []
    for v in rotation:
        if v in role:
            continue
        for u in outs[v]:
            if u in role and assign(v, u, role[u]):
                queue.append(v)
    while queue:
        v = queue.pop()
        nbrs = rotation[v]
        cols = out_color[v]
        # walk ccw; each incoming edge takes its colour from the preceding outgoing edge
        start = next(i for i, u in enumerate(nbrs) if u in cols)
        last = None
        for k in range(len(nbrs)):
            u = nbrs[(start + k) % len(nbrs)]
            if u in cols:
                last = cols[u]
            elif v in outs.get(u, ()):
                if u in role:
                    raise NoValidColoring(f"external vertex {u} has an outgoing edge", field=u)
                if assign(u, v, _IN_AFTER[last]):
                    queue.append(u)
    colors = {}
    for v in rotation:
        if v in role:
            continue
        if v not in out_color:
            raise NoValidColoring(f"vertex {v} was never reached by colour propagation", field=v)
        for u, c in out_color[v].items():
            colors[(v, u)] = c
    for (t, h), c in colors.items():
        if h in role and role[h] != c:
            raise NoValidColoring(f"edge {t}->{h} into s_{role[h]} coloured {c}", field=(t, h))
    return colors


class SchnyderWood:
    """A 3-orientation together with its Schnyder colouring."""

    __slots__ = ("orientation", "colors")

    def __init__(self, orientation, colors):
        self.orientation = orientation
        self.colors = dict(colors)

    @property
    def tri(self):
        return self.orientation.tri

    def color(self, u, v):
        return self.colors[self.orientation.direction(u, v)]

    def parent(self, v, color):
        """Head of the outgoing edge of ``v`` with the given colour."""
        color = Color.parse(color)
        for (t, h), c in self.colors.items():
            if t == v and c == color:
                return h
        return None

    def parents(self, color):
        color = Color.parse(color)
        return {t: h for (t, h), c in self.colors.items() if c == color}

    def forget(self):
        return self.orientation

    def trees_valid(self):
        """Each colour class is a tree on the internal vertices rooted at its external vertex."""
        tri = self.tri
        for color in Color:
            par = self.parents(color)
            root = tri.external[color]
            if set(par) != set(tri.internal_vertices):
                return False
            for v in tri.internal_vertices:
                seen = set()
                x = v
                while x != root:
                    if x in seen or x not in par:
                        return False
                    seen.add(x)
                    x = par[x]
        return True

    def is_valid(self):
        return (self.orientation.is_valid() and self.trees_valid()
                and all(check_vertex_condition(self, v) for v in self.tri.internal_vertices))

    def to_dict(self):
        return self.orientation.to_dict(self.colors)


def derive_schnyder_coloring(o):
    tri = o.tri
    colors = schnyder_colors(tri.rotation, o.out_neighbors(), tri.external)
    return SchnyderWood(o, colors)


def _vertex_condition(rotation, colors, v):
    """Check the ccw pattern out-G, in-R*, out-B, in-G*, out-R, in-B* at ``v``."""
    seq = []
    for u in rotation[v]:
        if (v, u) in colors:
            seq.append((True, colors[(v, u)]))
        elif (u, v) in colors:
            seq.append((False, colors[(u, v)]))
        else:
            return False  # edge to an external vertex must be an arc here
    outs = [c for is_out, c in seq if is_out]
    if sorted(outs) != [Color.RED, Color.GREEN, Color.BLUE]:
        return False
    start = next(i for i, (is_out, c) in enumerate(seq) if is_out and c == Color.GREEN)
    seq = seq[start:] + seq[:start]
    last = None
    for is_out, c in seq:
        if is_out:
            if last is not None and c != _NEXT_OUT[last]:
                return False
            last = c
        elif c != _IN_AFTER[last]:
            return False
    return True


def check_vertex_condition(w, v):
    tri = w.tri
    if tri.is_external(v):
        raise ExternalVertex(f"vertex {v} is external", field=v)
    return _vertex_condition(tri.rotation, w.colors, v)


def validate_potential(tri, potential):
    """Is ``potential`` (face index -> natural number) a valid potential on ``tri``?"""
    if isinstance(potential, dict):
        x = potential
    else:
        x = dict(enumerate(potential))
    if set(x) != {f.index for f in tri.faces}:
        return False
    for f, val in x.items():
        if int(val) != val or val < 0:
            return False
    for f in tri.faces:
        nbrs = tri.adjacent_faces(f.index)
        if -1 in nbrs and x[f.index] != 0:
            return False
        for g in nbrs:
            if g != -1 and abs(x[f.index] - x[g]) > 1:
                return False
    return True
