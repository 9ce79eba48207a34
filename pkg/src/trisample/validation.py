"""Input coercion and validation shared by the estimators and the CLI."""

from __future__ import annotations

import json
from numbers import Integral

import numpy as np

from .dyck import DyckPair
from .errors import ValidationError
from .orientation import Orientation3
from .triangulation import Triangulation, build_triangulation

__all__ = ["check_triangulation", "check_orientation", "check_dyck_pair",
           "check_positive_int", "check_rng", "spawn_rngs"]


def check_triangulation(X):
    """Accept a Triangulation, a dict, a JSON string or a path to a JSON file."""
    if isinstance(X, Triangulation):
        return X
    if isinstance(X, str) and not X.lstrip().startswith("{"):
        with open(X) as fh:
            X = fh.read()
    return build_triangulation(X)


def check_orientation(tri, o):
    if isinstance(o, Orientation3):
        if o.tri != tri:
            raise ValidationError("orientation belongs to a different triangulation",
                                  field="orientation")
        return o
    if isinstance(o, Integral):
        return Orientation3(tri, int(o))
    if isinstance(o, str):
        o = json.loads(o)
    return Orientation3.from_dict(tri, o)


def check_dyck_pair(p):
    """Accept a DyckPair, a ``{"top", "bottom"}`` dict, a ``top|bottom`` key or a 2-tuple."""
    if isinstance(p, DyckPair):
        return p
    if isinstance(p, dict):
        return DyckPair.from_dict(p)
    if isinstance(p, str):
        if p.lstrip().startswith("{"):
            return DyckPair.from_dict(json.loads(p))
        return DyckPair.from_key(p)
    top, bottom = p
    return DyckPair(top, bottom)


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, Integral) or value < minimum:
        raise ValidationError(f"{name} must be an integer >= {minimum}, got {value!r}", field=name)
    return int(value)


def check_rng(seed):
    """A numpy Generator (PCG64) from None, an int, a SeedSequence or a Generator."""
    return np.random.default_rng(seed)


def spawn_rngs(seed, k):
    """``k`` independent generators split from one seed, one per trajectory."""
    if isinstance(seed, np.random.Generator):
        return seed.spawn(k)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in ss.spawn(k)]
