"""Triangle-reversing and tower chains on the 3-orientations of a fixed triangulation.

Both chains work on the integer direction bits of :class:`Orientation3`.
Each step draws a uniform index first and then a uniform acceptance
variate, always in that order, so a seeded generator fully determines the
trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidTower
from .orientation import Orientation3
from .triangulation import Face

__all__ = [
    "Tower",
    "FixedKernel",
    "kernel",
    "mtr_step",
    "mcr_step",
    "find_tower",
    "reverse_tower",
    "mtr_transitions",
    "mcr_transitions",
    "tower_acceptance",
]


@dataclass(frozen=True)
class Tower:
    faces: tuple          # face indices f_1 .. f_k
    cycle: tuple          # arcs (tail, head) of the surrounding directed cycle

    @property
    def k(self):
        return len(self.faces)


class FixedKernel:
    """Bit-level move tables for one triangulation (cached on the triangulation)."""

    def __init__(self, tri):
        self.tri = tri
        eidx = tri.edge_index
        self.triangles = tri.triangles()
        tmask, tpat = [], []
        for t in self.triangles:
            a, b, c = t.vertices
            m, p = self._cycle_mask(eidx, ((a, b), (b, c), (c, a)))
            tmask.append(m)
            tpat.append(p)
        self.tri_mask, self.tri_pat = tmask, tpat
        fmask, fpat, fedges = [], [], []
        for f in tri.faces:
            a, b, c = f.vertices
            darts = ((a, b), (b, c), (c, a))
            m, p = self._cycle_mask(eidx, darts)
            fmask.append(m)
            fpat.append(p)
            fedges.append(tuple(
                (eidx.get((min(x, y), max(x, y))), x, y, tri.face_left(y, x)) for x, y in darts))
        self.face_mask, self.face_pat, self.face_edges = fmask, fpat, fedges
        self.face_verts = [frozenset(f.vertices) for f in tri.faces]

    @staticmethod
    def _cycle_mask(eidx, darts):
        mask = pat = 0
        for x, y in darts:
            i = eidx.get((min(x, y), max(x, y)))
            if i is None:
                return None, None
            mask |= 1 << i
            if x > y:
                pat |= 1 << i
        return mask, pat

    @property
    def n_triangles(self):
        return len(self.triangles)

    @property
    def n_faces(self):
        return len(self.face_mask)

    def triangle_directed(self, bits, i):
        m = self.tri_mask[i]
        if m is None:
            return False
        s = bits & m
        p = self.tri_pat[i]
        return s == p or s == p ^ m

    def face_directed(self, bits, f):
        m = self.face_mask[f]
        if m is None:
            return False
        s = bits & m
        p = self.face_pat[f]
        return s == p or s == p ^ m

    def disagreeing(self, bits, f):
        """The (edge index, neighbouring face) of the disagreeing edge of face ``f``, or None."""
        agree = []
        for i, x, y, g in self.face_edges[f]:
            if i is None:
                return None
            forward = ((bits >> i) & 1) == (1 if x > y else 0)
            agree.append(forward)
        if agree[0] == agree[1] == agree[2]:
            return None
        for k in range(3):
            if agree[k] != agree[(k + 1) % 3] and agree[k] != agree[(k + 2) % 3]:
                i, _, _, g = self.face_edges[f][k]
                return i, g
        return None

    def tower_faces(self, bits, f):
        path = [f]
        seen = {f}
        cur = f
        while not self.face_directed(bits, cur):
            d = self.disagreeing(bits, cur)
            if d is None:
                return None
            _, nxt = d
            if nxt == -1 or nxt in seen:
                return None
            path.append(nxt)
            seen.add(nxt)
            if len(path) >= 4:
                common = (self.face_verts[path[-1]] & self.face_verts[path[-2]]
                          & self.face_verts[path[-3]] & self.face_verts[path[-4]])
                if common:
                    return None
            cur = nxt
        return tuple(path)

    def tower_mask(self, faces):
        mask = 0
        for f in faces:
            mask ^= self.face_mask[f]
        return mask

    def apply_tower(self, bits, faces):
        for f in reversed(faces):
            if not self.face_directed(bits, f):
                return None
            bits ^= self.face_mask[f]
        return bits


def kernel(tri):
    k = tri._cache.get("fixed_kernel")
    if k is None:
        k = tri._cache["fixed_kernel"] = FixedKernel(tri)
    return k


def tower_acceptance(k):
    return Fraction(1, 2) if k == 1 else Fraction(1, 6 * k)


def find_tower(o, f):
    kern = kernel(o.tri)
    f = f.index if isinstance(f, Face) else int(f)
    faces = kern.tower_faces(o.bits, f)
    if faces is None:
        return None
    mask = kern.tower_mask(faces)
    cycle = tuple(o.direction(*o.tri.internal_edges[i])
                  for i in range(len(o.tri.internal_edges)) if (mask >> i) & 1)
    return Tower(faces, cycle)


def reverse_tower(o, tw):
    kern = kernel(o.tri)
    if not tw.faces or kern.tower_faces(o.bits, tw.faces[0]) != tuple(tw.faces):
        raise InvalidTower(f"{tw.faces} is not the tower beginning at its first face",
                           field=tw.faces)
    bits = kern.apply_tower(o.bits, tw.faces)
    if bits is None:
        raise InvalidTower("tower faces do not become directed in turn", field=tw.faces)
    return Orientation3(o.tri, bits, check=False)


def mtr_step(o, rng):
    """One step of the triangle-reversing chain."""
    kern = kernel(o.tri)
    i = int(rng.integers(kern.n_triangles))
    accept = rng.random() < 0.5
    if accept and kern.triangle_directed(o.bits, i):
        return Orientation3(o.tri, o.bits ^ kern.tri_mask[i], check=False)
    return o


def mcr_step(o, rng):
    """One step of the tower chain."""
    kern = kernel(o.tri)
    f = int(rng.integers(kern.n_faces))
    u = rng.random()
    faces = kern.tower_faces(o.bits, f)
    if faces is None or u >= float(tower_acceptance(len(faces))):
        return o
    return Orientation3(o.tri, kern.apply_tower(o.bits, faces), check=False)


def mtr_transitions(tri, bits):
    """Exact one-step law from ``bits`` as ``{next_bits: Fraction}``."""
    kern = kernel(tri)
    m = kern.n_triangles
    out = {}
    stay = Fraction(1)
    for i in range(m):
        if kern.triangle_directed(bits, i):
            p = Fraction(1, 2 * m)
            nxt = bits ^ kern.tri_mask[i]
            out[nxt] = out.get(nxt, 0) + p
            stay -= p
    out[bits] = out.get(bits, 0) + stay
    return out


def mcr_transitions(tri, bits):
    kern = kernel(tri)
    nf = kern.n_faces
    out = {}
    stay = Fraction(1)
    for f in range(nf):
        faces = kern.tower_faces(bits, f)
        if faces is None:
            continue
        p = tower_acceptance(len(faces)) / nf
        nxt = kern.apply_tower(bits, faces)
        out[nxt] = out.get(nxt, 0) + p
        stay -= p
    out[bits] = out.get(bits, 0) + stay
    return out
