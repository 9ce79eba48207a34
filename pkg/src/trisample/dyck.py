"""Non-crossing pairs of Dyck paths and their bijection with 3-oriented triangulations.

The bottom path is the contour of the blue tree, visited clockwise; the top
path encodes red in-degrees in the same vertex order.  The inverse rebuilds
all three trees with one stack pass over the bottom path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache

from .chain_flip import FlipState
from .errors import InvalidDyckPair
from .orientation import Color

__all__ = [
    "DyckPath",
    "DyckPair",
    "orientation_to_dyck",
    "dyck_to_orientation",
    "enumerate_dyck_paths",
    "enumerate_dyck_pairs",
    "mdk_step",
    "mdk_transitions",
    "catalan",
    "count_pairs",
]

RED, GREEN, BLUE = 0, 1, 2  # vertex ids of the external vertices in decoded states


def catalan(n):
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


def count_pairs(n):
    """Number of non-crossing pairs of semilength ``n``."""
    return catalan(n + 2) * catalan(n) - catalan(n + 1) ** 2


class DyckPath:
    __slots__ = ("steps",)

    def __init__(self, steps, check=True):
        self.steps = tuple(int(a) for a in steps)
        if check:
            self.validate()

    def validate(self):
        h = 0
        if not self.steps:
            raise InvalidDyckPair("empty path", field="steps")
        for i, a in enumerate(self.steps):
            if a not in (1, -1):
                raise InvalidDyckPair(f"step {i} is {a}, expected +1 or -1", field=i)
            h += a
            if h < 0:
                raise InvalidDyckPair(f"prefix sum negative at step {i}", field=i)
        if h != 0:
            raise InvalidDyckPair("path does not return to zero", field="steps")

    @property
    def n(self):
        return len(self.steps) // 2

    def heights(self):
        """Heights at points 0..2n."""
        out = [0]
        for a in self.steps:
            out.append(out[-1] + a)
        return out

    def __len__(self):
        return len(self.steps)

    def __eq__(self, other):
        return isinstance(other, DyckPath) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __str__(self):
        return "".join("+" if a > 0 else "-" for a in self.steps)

    def __repr__(self):
        return f"DyckPath('{self}')"

    @classmethod
    def from_string(cls, text):
        return cls([1 if c == "+" else -1 if c == "-" else 0 for c in text])


class DyckPair:
    """Top and bottom path of equal length; top dominates bottom pointwise."""

    __slots__ = ("top", "bottom")

    def __init__(self, top, bottom, check=True):
        self.top = top if isinstance(top, DyckPath) else DyckPath(top, check=check)
        self.bottom = bottom if isinstance(bottom, DyckPath) else DyckPath(bottom, check=check)
        if check:
            self.validate()

    def validate(self):
        self.top.validate()
        self.bottom.validate()
        if len(self.top) != len(self.bottom):
            raise InvalidDyckPair("paths have different lengths", field="bottom")
        for i, (a, b) in enumerate(zip(self.top.heights(), self.bottom.heights())):
            if a < b:
                raise InvalidDyckPair(f"top path below bottom path at point {i}", field=i)

    def is_valid(self):
        try:
            self.validate()
        except InvalidDyckPair:
            return False
        return True

    @property
    def n(self):
        return self.top.n

    @property
    def key(self):
        return f"{self.top}|{self.bottom}"

    @classmethod
    def from_key(cls, key):
        top, bottom = key.split("|")
        return cls(DyckPath.from_string(top), DyckPath.from_string(bottom))

    def to_dict(self):
        return {"top": list(self.top.steps), "bottom": list(self.bottom.steps)}

    @classmethod
    def from_dict(cls, data):
        if "top" not in data or "bottom" not in data:
            raise InvalidDyckPair("expected keys 'top' and 'bottom'", field="top")
        return cls(data["top"], data["bottom"])

    def to_json(self):
        return json.dumps(self.to_dict())

    def __eq__(self, other):
        return isinstance(other, DyckPair) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"DyckPair('{self.key}')"


def _blue_order(s, colors):
    """Clockwise DFS of the blue tree: preorder list and the bottom path steps."""
    r, g, b = s.external
    children = {v: [] for v in s.rotation}
    for (t, h), c in colors.items():
        if c == Color.BLUE:
            children[h].append(t)
    order, steps = [], []

    def cw_children(v, first):
        nb = s.rotation[v]
        i = nb.index(first)
        kids = set(children[v])
        return [nb[(i - k) % len(nb)] for k in range(len(nb)) if nb[(i - k) % len(nb)] in kids]

    stack = [(b, iter(cw_children(b, g)))]
    while stack:
        v, it = stack[-1]
        u = next(it, None)
        if u is None:
            stack.pop()
            if v != b:
                steps.append(-1)
            continue
        order.append(u)
        steps.append(1)
        stack.append((u, iter(cw_children(u, v))))
    return order, steps


def orientation_to_dyck(s):
    """Encode a :class:`FlipState` (or an ``Orientation3``) as a :class:`DyckPair`."""
    if not isinstance(s, FlipState):
        s = FlipState.from_orientation(s)
    colors = s.colors
    order, bottom = _blue_order(s, colors)
    red_in = {v: 0 for v in s.rotation}
    for (_, h), c in colors.items():
        if c == Color.RED:
            red_in[h] += 1
    degs = [red_in[v] for v in order[1:]] + [red_in[s.external[0]]]
    top = []
    for d in degs:
        top.append(1)
        top.extend([-1] * d)
    return DyckPair(top, bottom)


def dyck_to_orientation(p):
    """Decode a :class:`DyckPair` into the :class:`FlipState` it encodes.

    External vertices get ids 0, 1, 2 (red, green, blue role); internal
    vertices get ids 3.. in clockwise blue-DFS order.
    """
    if not isinstance(p, DyckPair):
        p = DyckPair(*p)
    n = p.n
    # red in-degrees d_2..d_n and r, read from the top path
    blocks = []
    for a in p.top.steps:
        if a == 1:
            blocks.append(0)
        else:
            blocks[-1] += 1
    indeg = [0] + blocks[:-1]       # indeg[k] for vertex k (0-based); first vertex has none
    r = blocks[-1]

    blue_parent, children = {}, {BLUE: []}
    opened, closed = {}, {}
    red_parent, green_parent = {}, {}
    stack = []                       # closed vertices still waiting for a red parent
    path = []
    k = 0
    for pos, a in enumerate(p.bottom.steps):
        if a == 1:
            v = 3 + k
            par = path[-1] if path else BLUE
            blue_parent[v] = par
            children[par].append(v)
            children[v] = []
            opened[v] = pos
            d = indeg[k]
            if d > len(stack):
                raise InvalidDyckPair("top path crosses below bottom path", field=pos)
            for _ in range(d):
                red_parent[stack.pop()] = v
            green_parent[v] = stack[-1] if stack else GREEN
            path.append(v)
            k += 1
        else:
            v = path.pop()
            closed[v] = pos
            stack.append(v)
    if len(stack) != r:
        raise InvalidDyckPair("red in-degree of the red root does not match", field="top")
    red_ins_root = list(stack)
    for v in stack:
        red_parent[v] = RED

    internal = list(range(3, 3 + n))
    green_ins = {v: [] for v in internal + [GREEN]}
    red_ins = {v: [] for v in internal}
    for v in internal:
        green_ins[green_parent[v]].append(v)
        if red_parent[v] != RED:
            red_ins[red_parent[v]].append(v)
    rotation = {}
    for v in internal:
        rotation[v] = ([blue_parent[v]]
                       + sorted(green_ins[v], key=opened.get)
                       + [red_parent[v]]
                       + children[v][::-1]
                       + [green_parent[v]]
                       + sorted(red_ins[v], key=closed.get))
    rotation[BLUE] = [RED] + children[BLUE][::-1] + [GREEN]
    rotation[RED] = [GREEN] + red_ins_root + [BLUE]
    rotation[GREEN] = [BLUE] + sorted(green_ins[GREEN], key=opened.get) + [RED]
    arcs = []
    for v in internal:
        arcs += [(v, blue_parent[v]), (v, red_parent[v]), (v, green_parent[v])]
    return FlipState(rotation, (RED, GREEN, BLUE), arcs)


@lru_cache(maxsize=None)
def enumerate_dyck_paths(n):
    """All Dyck paths of semilength ``n`` as step tuples, lexicographically (+1 first)."""
    out = []

    def rec(prefix, h, ups):
        if len(prefix) == 2 * n:
            out.append(tuple(prefix))
            return
        if ups < n:
            prefix.append(1)
            rec(prefix, h + 1, ups + 1)
            prefix.pop()
        if h > 0:
            prefix.append(-1)
            rec(prefix, h - 1, ups)
            prefix.pop()

    rec([], 0, 0)
    return tuple(out)


def _heights(steps):
    h, out = 0, []
    for a in steps:
        h += a
        out.append(h)
    return out


def enumerate_dyck_pairs(n):
    """All non-crossing pairs of semilength ``n``, sorted by key."""
    paths = enumerate_dyck_paths(n)
    hs = [_heights(pth) for pth in paths]
    out = []
    for i, top in enumerate(paths):
        for j, bottom in enumerate(paths):
            if all(a >= b for a, b in zip(hs[i], hs[j])):
                out.append(DyckPair(DyckPath(top, check=False), DyckPath(bottom, check=False),
                                    check=False))
    out.sort(key=lambda q: q.key)
    return out


def _swap(steps, i):
    s = list(steps)
    s[i - 1], s[i] = s[i], s[i - 1]
    return s


def _dk_move(p, point):
    """Result of pushing the chosen interior point (before the coin), or None."""
    m = len(p.top.steps) - 1        # interior points per path
    on_top = point < m
    i = (point if on_top else point - m) + 1
    top, bottom = p.top.steps, p.bottom.steps
    ht, hb = p.top.heights(), p.bottom.heights()
    mine, other = (top, bottom) if on_top else (bottom, top)
    peak = mine[i - 1] == 1 and mine[i] == -1
    valley = mine[i - 1] == -1 and mine[i] == 1
    if not (peak or valley):
        return None
    new_mine = _swap(mine, i)
    new_top, new_bottom = (new_mine, bottom) if on_top else (top, new_mine)
    cand = DyckPair(new_top, new_bottom, check=False)
    if cand.is_valid():
        return cand
    # blocked by the other path: move both when its extremum coincides
    same = (other[i - 1] == mine[i - 1] and other[i] == mine[i] and ht[i] == hb[i])
    if same and ((on_top and peak) or (not on_top and valley)):
        cand = DyckPair(_swap(top, i), _swap(bottom, i), check=False)
        if cand.is_valid():
            return cand
    return None


def mdk_step(p, rng):
    n_points = 2 * (len(p.top.steps) - 1)
    point = int(rng.integers(n_points))
    accept = rng.random() < 0.5
    if not accept:
        return p
    q = _dk_move(p, point)
    return p if q is None else q


def mdk_transitions(p):
    """Exact one-step law as ``{key: Fraction}``."""
    n_points = 2 * (len(p.top.steps) - 1)
    w = Fraction(1, 2 * n_points)
    out = {}
    stay = Fraction(1)
    for point in range(n_points):
        q = _dk_move(p, point)
        if q is None:
            continue
        out[q.key] = out.get(q.key, 0) + w
        stay -= w
    out[p.key] = out.get(p.key, 0) + stay
    return out
