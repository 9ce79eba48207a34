"""Exact enumeration, transition matrices, total variation, diameter and conductance.

Everything here is exhaustive and meant for small instances.  Transition
matrices are built from the chains' own exact one-step laws and kept as
sparse rows of :class:`fractions.Fraction` when the space has at most
``EXACT_LIMIT`` states, floats otherwise.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import shortest_path

from .chain_fixed import kernel, mcr_transitions, mtr_transitions
from .chain_flip import initial_flip_state, mef_transitions
from .dyck import dyck_to_orientation, enumerate_dyck_pairs, mdk_transitions, orientation_to_dyck
from .errors import CapExceeded, EmptySide, HorizonTooShort, IncompleteSpace, TooLarge
from .orientation import Color, Orientation3, construct_initial_orientation, derive_schnyder_coloring

__all__ = [
    "StateSpace",
    "TransitionMatrix",
    "enumerate_reachable",
    "brute_force_orientations",
    "enumerate_flip_space",
    "dyck_space",
    "build_transition_matrix",
    "tv_curve",
    "mixing_time",
    "tv_curve_and_mixing",
    "empirical_tv",
    "conductance_of_cut",
    "diameter",
    "state_graph",
    "separates",
    "gadget_report",
    "distinct_triangulations",
    "interior_points_inward",
    "write_csv",
    "EXACT_LIMIT",
    "WORST_CASE_LIMIT",
]

EXACT_LIMIT = 1000
WORST_CASE_LIMIT = 500
DEFAULT_CAP = 10 ** 6


class StateSpace:
    """Ordered, duplicate-free state keys.

    ``kind`` is ``"fixed"`` (keys are direction bits on ``tri``) or
    ``"psi"`` (keys are Dyck pair strings).  ``states`` optionally maps keys
    to state objects.
    """

    def __init__(self, keys, kind, tri=None, n=None, states=None):
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise ValueError("duplicate state keys")
        self.kind = kind
        self.tri = tri
        self.n = n if n is not None else (tri.n_internal if tri is not None else None)
        self.states = states or {}

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return key in self.index

    def __iter__(self):
        return iter(self.keys)

    def as_set(self):
        return set(self.keys)

    def orientation(self, key):
        return Orientation3(self.tri, key, check=False)

    def state(self, key):
        if self.kind == "fixed":
            return self.orientation(key)
        s = self.states.get(key)
        return s if s is not None else dyck_to_orientation(key_to_pair(key))


def key_to_pair(key):
    from .dyck import DyckPair

    return DyckPair.from_key(key)


class TransitionMatrix:
    """Row-stochastic matrix over a :class:`StateSpace`, stored as sparse rows."""

    def __init__(self, rows, space, chain, exact):
        self.rows = rows            # list of {column: value}
        self.space = space
        self.chain = chain
        self.exact = exact

    @property
    def size(self):
        return len(self.rows)

    def to_sparse(self):
        r, c, v = [], [], []
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                r.append(i)
                c.append(j)
                v.append(float(x))
        n = self.size
        return sparse.csr_matrix((v, (r, c)), shape=(n, n))

    def to_dense(self):
        return self.to_sparse().toarray()

    def row_sums(self):
        return [sum(row.values()) for row in self.rows]

    def column_sums(self):
        zero = Fraction(0) if self.exact else 0.0
        cols = [zero] * self.size
        for row in self.rows:
            for j, x in row.items():
                cols[j] += x
        return cols

    def stationarity_error(self):
        """max |(uP)_j - u_j| for uniform u, times |space| (column sums minus 1)."""
        return max(abs(c - 1) for c in self.column_sums())

    def is_uniform_stationary(self, tol=1e-10):
        err = self.stationarity_error()
        return err == 0 if self.exact else err < tol * self.size

    def is_symmetric(self, tol=1e-12):
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                y = self.rows[j].get(i, 0)
                if self.exact and x != y:
                    return False
                if not self.exact and abs(x - y) > tol:
                    return False
        return True

    def is_stochastic(self, tol=1e-12):
        for s in self.row_sums():
            if self.exact and s != 1:
                return False
            if not self.exact and abs(s - 1) > tol:
                return False
        return True


def _fixed_neighbors(tri, bits):
    kern = kernel(tri)
    return [bits ^ kern.tri_mask[i] for i in range(kern.n_triangles)
            if kern.triangle_directed(bits, i)]


def enumerate_reachable(tri, o0=None, chain="tr", cap=DEFAULT_CAP):
    """BFS closure of ``o0`` under single triangle reversals (keys sorted)."""
    if chain not in ("tr", "cr"):
        raise ValueError(f"chain must be 'tr' or 'cr', got {chain!r}")
    if o0 is None:
        o0 = construct_initial_orientation(tri)
    start = o0.bits if isinstance(o0, Orientation3) else int(o0)
    seen = {start}
    queue = deque([start])
    while queue:
        bits = queue.popleft()
        if chain == "tr":
            nxt = _fixed_neighbors(tri, bits)
        else:
            nxt = [k for k in mcr_transitions(tri, bits) if k != bits]
        for b in nxt:
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise CapExceeded(f"more than {cap} states reachable", partial_count=len(seen),
                                      field="cap")
                queue.append(b)
    return StateSpace(sorted(seen), "fixed", tri=tri)


def brute_force_orientations(tri, max_edges=24, chunk=1 << 18):
    """Every direction assignment of the internal edges with the right out-degrees."""
    edges = tri.internal_edges
    m = len(edges)
    if m > max_edges:
        raise TooLarge(f"{m} internal edges exceed the brute-force limit {max_edges}",
                       field="n_internal")
    verts = list(tri.vertices)
    vid = {v: i for i, v in enumerate(verts)}
    want = np.array([0 if tri.is_external(v) else 3 for v in verts], dtype=np.int64)
    low = np.zeros((len(verts), m), dtype=np.int64)   # edge i counts for its low end when bit clear
    high = np.zeros((len(verts), m), dtype=np.int64)
    for i, (a, b) in enumerate(edges):
        low[vid[a], i] = 1
        high[vid[b], i] = 1
    shifts = np.arange(m, dtype=np.int64)
    found = []
    total = 1 << m
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        bits = (codes[:, None] >> shifts) & 1
        deg = (1 - bits) @ low.T + bits @ high.T
        ok = np.all(deg == want, axis=1)
        found.extend(int(c) for c in codes[ok])
    return StateSpace(sorted(found), "fixed", tri=tri)


def dyck_space(n):
    pairs = enumerate_dyck_pairs(n)
    return StateSpace([p.key for p in pairs], "psi", n=n)


def enumerate_flip_space(n, cap=DEFAULT_CAP):
    """BFS closure under edge flips from a stacked start, keyed by Dyck pair."""
    from .chain_flip import apply_flip_move, enumerate_flip_moves

    start = initial_flip_state(n)
    k0 = orientation_to_dyck(start).key
    states = {k0: start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for xy, zx in enumerate_flip_moves(s):
            t = apply_flip_move(s, xy, zx)
            k = orientation_to_dyck(t).key
            if k not in states:
                states[k] = t
                if len(states) > cap:
                    raise CapExceeded(f"more than {cap} states reachable",
                                      partial_count=len(states), field="cap")
                queue.append(t)
    return StateSpace(sorted(states), "psi", n=n, states=states)


def distinct_triangulations(n):
    """One representative per rooted triangulation with ``n`` internal vertices.

    Obtained by decoding every Dyck pair and merging states whose embedded
    maps coincide once directions are forgotten.
    """
    reps = {}
    for p in enumerate_dyck_pairs(n):
        s = dyck_to_orientation(p)
        code = tuple(label for label, _ in s.canonical_code())
        if code not in reps:
            reps[code] = s.triangulation
    return list(reps.values())


def interior_points_inward(space):
    """Share of states in which, for every separating triangle, each edge joining
    its interior to its boundary points at the boundary vertex."""
    from .triangulation import interior_vertices

    tri = space.tri
    checks = []
    for t in tri.triangles():
        if t.facial:
            continue
        inner = interior_vertices(tri, t.vertices)
        checks += [(x, c) for c in t.vertices for x in tri.rotation[c] if x in inner]
    good = sum(all(space.orientation(k).is_arc(x, c) for x, c in checks) for k in space.keys)
    return Fraction(good, len(space))


def _dyck_key(s):
    return orientation_to_dyck(s).key


def _one_step(chain, space, key):
    if chain == "tr":
        return mtr_transitions(space.tri, key)
    if chain == "cr":
        return mcr_transitions(space.tri, key)
    if chain == "ef":
        s = space.states.get(key)
        if s is None:
            s = dyck_to_orientation(key_to_pair(key))
        return mef_transitions(s, _dyck_key)
    if chain == "dk":
        return mdk_transitions(key_to_pair(key))
    raise ValueError(f"unknown chain {chain!r}")


def build_transition_matrix(chain, space, exact=None):
    """Exact one-step matrix of ``chain`` ('tr', 'cr', 'ef', 'dk') on ``space``."""
    if chain in ("tr", "cr") and space.kind != "fixed":
        raise ValueError(f"chain {chain!r} needs a fixed-triangulation space")
    if chain in ("ef", "dk") and space.kind != "psi":
        raise ValueError(f"chain {chain!r} needs a Dyck-keyed space")
    if exact is None:
        exact = len(space) <= EXACT_LIMIT
    rows = []
    for key in space.keys:
        row = {}
        for nxt, p in _one_step(chain, space, key).items():
            j = space.index.get(nxt)
            if j is None:
                raise IncompleteSpace(f"move from {key!r} leaves the state space", field=nxt)
            row[j] = p if exact else float(p)
        rows.append(row)
    return TransitionMatrix(rows, space, chain, exact)


def tv_curve(P, start=0, tmax=1000):
    """Total variation to uniform for t = 0..tmax as a numpy array.

    ``start`` is a state index, or ``"worst"`` for the maximum over all
    starts (only when the space has at most ``WORST_CASE_LIMIT`` states,
    otherwise index 0 is used).
    """
    M = P.to_sparse().T.tocsr()     # columns evolve as distributions
    n = P.size
    if start == "worst" and n <= WORST_CASE_LIMIT:
        dist = np.eye(n)
    else:
        s = 0 if start == "worst" else int(start)
        dist = np.zeros((n, 1))
        dist[s, 0] = 1.0
    u = 1.0 / n
    tv = np.empty(tmax + 1)
    for t in range(tmax + 1):
        tv[t] = 0.5 * np.abs(dist - u).sum(axis=0).max()
        if t < tmax:
            dist = M @ dist
    return tv


def mixing_time(tv, eps):
    """First t after which the series stays at or below ``eps``; None if it never settles."""
    above = np.nonzero(np.asarray(tv) > eps)[0]
    if len(above) == 0:
        return 0
    if above[-1] == len(tv) - 1:
        return None
    return int(above[-1]) + 1


def tv_curve_and_mixing(P, start=0, tmax=1000, eps=0.25):
    """TV series and tau(eps); raises HorizonTooShort if the horizon is too short."""
    tv = tv_curve(P, start, tmax)
    tau = mixing_time(tv, eps)
    if tau is None:
        raise HorizonTooShort(f"TV is still {tv[-1]:.4g} > {eps} at t={tmax}", field="tmax")
    return tv, tau


def empirical_tv(samples, space):
    """Sampled-histogram estimate of TV to uniform; biased upward for few samples."""
    counts = {}
    for k in samples:
        counts[k] = counts.get(k, 0) + 1
    m = len(samples)
    u = 1.0 / len(space)
    seen = sum(abs(c / m - u) for c in counts.values())
    unseen = (len(space) - len(counts)) * u
    return 0.5 * (seen + unseen)


def conductance_of_cut(P, cut):
    """Exact escape probability of the lighter side of ``cut`` under uniform weights.

    ``cut`` is a predicate on state keys or a collection of keys.  Returns a
    :class:`Fraction` in exact mode.
    """
    if not P.is_uniform_stationary():
        raise ValueError("uniform distribution is not stationary for this matrix")
    keys = P.space.keys
    if callable(cut):
        inside = {i for i, k in enumerate(keys) if cut(k)}
    else:
        inside = {P.space.index[k] for k in cut}
    n = len(keys)
    if not inside or len(inside) == n:
        raise EmptySide("one side of the cut is empty", field="cut")
    side = inside if 2 * len(inside) <= n else set(range(n)) - inside
    flow = sum((x for i in side for j, x in P.rows[i].items() if j not in side),
               Fraction(0) if P.exact else 0.0)
    return flow / len(side)


def state_graph(space, chain="tr"):
    """Undirected adjacency (scipy CSR) of single moves within ``space``."""
    r, c = [], []
    for i, key in enumerate(space.keys):
        if chain == "tr":
            nxt = _fixed_neighbors(space.tri, key)
        else:
            nxt = [k for k in _one_step(chain, space, key) if k != key]
        for k in nxt:
            j = space.index.get(k)
            if j is None:
                raise IncompleteSpace(f"move from {key!r} leaves the state space", field=k)
            r.append(i)
            c.append(j)
    n = len(space)
    return sparse.csr_matrix((np.ones(len(r)), (r, c)), shape=(n, n))


def diameter(space, chain="tr"):
    """Largest shortest-path distance between two states under single moves."""
    if len(space) == 1:
        return 0
    dist = shortest_path(state_graph(space, chain), unweighted=True, directed=False)
    if np.isinf(dist).any():
        raise IncompleteSpace("state graph is disconnected", field="space")
    return int(dist.max())


def separates(graph, cut_vertex, left, right):
    """True when every path from ``left`` to ``right`` passes through ``cut_vertex``."""
    adj = graph.tolil().rows
    seen = {cut_vertex}
    queue = deque(i for i in left if i != cut_vertex)
    seen.update(queue)
    right = set(right)
    while queue:
        v = queue.popleft()
        if v in right:
            return False
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return True


def gadget_report(t, eps=0.25, tmax=None, cap=DEFAULT_CAP):
    """Bottleneck analysis of the slow-mixing gadget with parameter ``t``.

    Colours of the edge between the hub ``v_0`` and ``v_{t+1}`` split the
    states into red, green and blue classes; ``D`` is red plus green.
    """
    from .triangulation import build_slow_gadget

    tri = build_slow_gadget(t)
    space = enumerate_reachable(tri, cap=cap)
    hub, rim = 0, t + 1
    color_of = {}
    for k in space.keys:
        w = derive_schnyder_coloring(space.orientation(k))
        color_of[k] = w.color(hub, rim)
    red = [k for k in space.keys if color_of[k] == Color.RED]
    green = [k for k in space.keys if color_of[k] == Color.GREEN]
    blue = [k for k in space.keys if color_of[k] == Color.BLUE]
    d_side = set(red) | set(green)
    P = build_transition_matrix("tr", space)
    phi = conductance_of_cut(P, d_side)
    graph = state_graph(space)
    cut_ok = (len(green) == 1
              and separates(graph, space.index[green[0]],
                            [space.index[k] for k in red], [space.index[k] for k in blue]))
    n = tri.n_internal
    if tmax is None:
        tmax = 200 * len(space)
    tv, tau = tv_curve_and_mixing(P, start="worst", tmax=tmax, eps=eps)
    return {
        "t": t,
        "n_internal": n,
        "states": len(space),
        "red": len(red),
        "green": len(green),
        "blue": len(blue),
        "D": len(d_side),
        "D_complement": len(blue),
        "conductance": phi,
        "conductance_bound": 2.0 ** (-(n - 6) / 4),
        "green_cut_vertex": cut_ok,
        "tau": tau,
        "tau_lower_bound": 1.0 / (4 * float(phi)) - 0.5 if phi else float("inf"),
        "eps": eps,
    }


def write_csv(rows, header, handle=None):
    """Write rows to ``handle`` (or return the CSV text)."""
    buf = handle if handle is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    if handle is None:
        return buf.getvalue()
    return None
