"""Edge-flip chain on the 3-orientations of all triangulations with n internal vertices.

A proposal is a uniform internal arc ``x -> y`` together with a uniform
choice among the four boundary edges of the quadrilateral formed by the two
faces at ``xy``.  The choice is a valid move when it is an arc ``z -> x``
into the tail of ``x -> y`` and the other diagonal ``zw`` is not already an
edge; the move then replaces the path ``z -> x -> y`` by ``x -> z -> w``
with probability 1/2.  Every valid move has the same probability
``1 / (3n * 4 * 2)`` and its inverse is a valid move of the same kind, so
the proposal is symmetric.
"""

from __future__ import annotations

from fractions import Fraction

from .orientation import Orientation3, derive_schnyder_coloring, schnyder_colors
from .triangulation import Triangulation

__all__ = ["FlipState", "enumerate_flip_moves", "apply_flip_move", "mef_step",
           "mef_transitions", "initial_flip_state"]


class FlipState:
    """A triangulation with a 3-orientation, stored as rotation + arc list.

    ``arcs`` keeps a stable order so that uniform edge draws are
    reproducible; a flip replaces the flipped arc in place.
    """

    __slots__ = ("rotation", "external", "arcs", "_outs", "_tri", "_colors")

    def __init__(self, rotation, external, arcs):
        self.rotation = {v: tuple(nb) for v, nb in rotation.items()}
        self.external = tuple(external)
        self.arcs = tuple(tuple(a) for a in arcs)
        outs = {v: set() for v in self.rotation}
        for t, h in self.arcs:
            outs[t].add(h)
        self._outs = outs
        self._tri = None
        self._colors = None

    @classmethod
    def from_orientation(cls, o):
        return cls(o.tri.rotation, o.tri.external, o.arcs())

    @property
    def n_internal(self):
        return len(self.rotation) - 3

    @property
    def triangulation(self):
        if self._tri is None:
            self._tri = Triangulation(self.rotation, self.external)
        return self._tri

    @property
    def orientation(self):
        return Orientation3.from_arcs(self.triangulation, self.arcs)

    @property
    def colors(self):
        if self._colors is None:
            outs = {v: sorted(h) for v, h in self._outs.items()}
            self._colors = schnyder_colors(self.rotation, outs, self.external)
        return self._colors

    def schnyder_wood(self):
        return derive_schnyder_coloring(self.orientation)

    def is_arc(self, u, v):
        return v in self._outs[u]

    def pred(self, v, u):
        nb = self.rotation[v]
        return nb[nb.index(u) - 1]

    def is_valid(self):
        """Full validation: triangulation, out-degrees, vertex condition, colour trees."""
        try:
            return self.schnyder_wood().is_valid()
        except Exception:  # noqa: BLE001 - any structural failure means invalid
            return False

    def canonical_code(self):
        """Label-independent code of the embedded oriented map rooted at s_red -> s_green."""
        r, g, _ = self.external
        label = {r: 0}
        order = [r]
        start_of = {r: g}
        code = []
        k = 0
        while k < len(order):
            v = order[k]
            nb = self.rotation[v]
            i0 = nb.index(start_of[v])
            for j in range(len(nb)):
                u = nb[(i0 + j) % len(nb)]
                if u not in label:
                    label[u] = len(order)
                    order.append(u)
                    start_of[u] = v
                code.append((label[u], 1 if u in self._outs[v] else 0))
            code.append((-1, 0))
            k += 1
        return tuple(code)

    def to_dict(self):
        tri = self.triangulation
        return {"triangulation": tri.to_dict(),
                "orientation": {"edges": [{"tail": t, "head": h, "color": str(self.colors[(t, h)])}
                                          for t, h in self.arcs]}}

    @classmethod
    def from_dict(cls, data):
        tri = Triangulation(data["triangulation"]["rotation"], data["triangulation"]["external"])
        o = Orientation3.from_dict(tri, data["orientation"])
        return cls.from_orientation(o)

    def __repr__(self):
        return f"FlipState(n_internal={self.n_internal})"


def _quad(s, x, y):
    """Apexes of the faces left and right of the arc ``x -> y``."""
    a = s.pred(y, x)  # face (x, y, a)
    b = s.pred(x, y)  # face (y, x, b)
    return a, b


def _candidate(s, edge_pos, slot):
    """The move for proposal (arc index, boundary slot), or None if invalid."""
    x, y = s.arcs[edge_pos]
    a, b = _quad(s, x, y)
    boundary = ((x, a), (a, y), (y, b), (b, x))
    p, q = boundary[slot]
    # the drawn boundary edge must be an arc z -> x
    if q == x and s.is_arc(p, x):
        z = p
    elif p == x and s.is_arc(q, x):
        z = q
    else:
        return None
    w = b if z == a else a
    if w in s.rotation[z]:
        return None
    return (x, y, z, w)


def enumerate_flip_moves(s):
    """All valid moves as ``(shared arc (x, y), boundary arc (z, x))`` pairs."""
    moves = []
    for pos in range(len(s.arcs)):
        for slot in range(4):
            mv = _candidate(s, pos, slot)
            if mv is not None:
                x, y, z, _ = mv
                moves.append(((x, y), (z, x)))
    return moves


def apply_flip_move(s, xy, zx):
    x, y = xy
    z, _ = zx
    a, b = _quad(s, x, y)
    w = b if z == a else a
    rot = {v: list(nb) for v, nb in s.rotation.items()}
    rot[x].remove(y)
    rot[y].remove(x)
    # new diagonal a-b: b goes right after x at a, a right after y at b
    rot[a].insert(rot[a].index(x) + 1, b)
    rot[b].insert(rot[b].index(y) + 1, a)
    arcs = list(s.arcs)
    arcs[arcs.index((x, y))] = (z, w)
    arcs[arcs.index((z, x))] = (x, z)
    return FlipState(rot, s.external, arcs)


def mef_step(s, rng):
    pos = int(rng.integers(len(s.arcs)))
    slot = int(rng.integers(4))
    accept = rng.random() < 0.5
    mv = _candidate(s, pos, slot)
    if mv is None or not accept:
        return s
    x, y, z, _ = mv
    return apply_flip_move(s, (x, y), (z, x))


def mef_transitions(s, key):
    """Exact one-step law as ``{key(next_state): Fraction}``; ``key`` maps states to keys."""
    m = len(s.arcs)
    p = Fraction(1, m * 4 * 2)
    out = {}
    stay = Fraction(1)
    own = key(s)
    for pos in range(m):
        for slot in range(4):
            mv = _candidate(s, pos, slot)
            if mv is None:
                continue
            x, y, z, _ = mv
            k = key(apply_flip_move(s, (x, y), (z, x)))
            out[k] = out.get(k, 0) + p
            stay -= p
    out[own] = out.get(own, 0) + stay
    return out


def initial_flip_state(n):
    """The stacked triangulation nested towards s_red with its unique 3-orientation."""
    from .triangulation import stacked_triangulation
    from .orientation import construct_initial_orientation

    tri = stacked_triangulation([0] * (n - 1))
    return FlipState.from_orientation(construct_initial_orientation(tri))
