"""Estimator-style front ends for the samplers and the exact analyser."""

from __future__ import annotations

from numbers import Integral

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chain_fixed import mcr_step, mtr_step
from .chain_flip import FlipState, initial_flip_state, mef_step
from .dyck import DyckPair, dyck_to_orientation, mdk_step, orientation_to_dyck
from .errors import ValidationError
from .oracle import (DEFAULT_CAP, build_transition_matrix, diameter, dyck_space,
                     enumerate_flip_space, enumerate_reachable, tv_curve_and_mixing)
from .orientation import construct_initial_orientation
from .validation import (check_dyck_pair, check_orientation, check_positive_int,
                         check_triangulation, spawn_rngs)

__all__ = ["FixedOrientationSampler", "FlipSampler", "DyckEncoder", "ExactChainAnalyzer"]

_FIXED_STEPS = {"tr": mtr_step, "cr": mcr_step}


def run_chain(step, state, n_steps, rng):
    for _ in range(n_steps):
        state = step(state, rng)
    return state


class FixedOrientationSampler(BaseEstimator):
    """Run the triangle (``tr``) or tower (``cr``) chain on the 3-orientations of one triangulation.

    ``fit`` takes the triangulation (object, dict, JSON text or path).
    ``sample(k)`` returns the end states of ``k`` independent trajectories
    of ``n_steps`` steps, each on its own generator split from
    ``random_state``.
    """

    def __init__(self, chain="tr", n_steps=1000, random_state=None):
        self.chain = chain
        self.n_steps = n_steps
        self.random_state = random_state

    def fit(self, X, y=None, start=None):
        if self.chain not in _FIXED_STEPS:
            raise ValidationError(f"chain must be 'tr' or 'cr', got {self.chain!r}", field="chain")
        check_positive_int(self.n_steps, "n_steps", minimum=0)
        self.triangulation_ = check_triangulation(X)
        self.start_ = (construct_initial_orientation(self.triangulation_) if start is None
                       else check_orientation(self.triangulation_, start))
        return self

    def sample(self, n_samples=1):
        check_is_fitted(self, "start_")
        step = _FIXED_STEPS[self.chain]
        return [run_chain(step, self.start_, self.n_steps, rng)
                for rng in spawn_rngs(self.random_state, n_samples)]


class FlipSampler(BaseEstimator):
    """Run the edge-flip (``ef``) or Dyck-pair (``dk``) chain on states with ``n_internal`` vertices.

    Samples are :class:`FlipState` objects either way; the Dyck-pair chain runs on Dyck
    pairs and decodes at the end.
    """

    def __init__(self, n_internal=3, chain="ef", n_steps=1000, random_state=None):
        self.n_internal = n_internal
        self.chain = chain
        self.n_steps = n_steps
        self.random_state = random_state

    def fit(self, X=None, y=None):
        if self.chain not in ("ef", "dk"):
            raise ValidationError(f"chain must be 'ef' or 'dk', got {self.chain!r}", field="chain")
        check_positive_int(self.n_internal, "n_internal")
        check_positive_int(self.n_steps, "n_steps", minimum=0)
        if X is None:
            self.start_ = initial_flip_state(self.n_internal)
        elif isinstance(X, FlipState):
            self.start_ = X
        else:
            self.start_ = dyck_to_orientation(check_dyck_pair(X))
        if self.start_.n_internal != self.n_internal:
            raise ValidationError("start state has the wrong number of internal vertices",
                                  field="n_internal")
        return self

    def sample(self, n_samples=1):
        check_is_fitted(self, "start_")
        out = []
        for rng in spawn_rngs(self.random_state, n_samples):
            if self.chain == "ef":
                out.append(run_chain(mef_step, self.start_, self.n_steps, rng))
            else:
                p = run_chain(mdk_step, orientation_to_dyck(self.start_), self.n_steps, rng)
                out.append(dyck_to_orientation(p))
        return out


class DyckEncoder(TransformerMixin, BaseEstimator):
    """Stateless transformer between oriented triangulations and Dyck pairs."""

    def fit(self, X=None, y=None):
        self.fitted_ = True
        return self

    def transform(self, X):
        return [orientation_to_dyck(s) for s in X]

    def inverse_transform(self, X):
        return [dyck_to_orientation(check_dyck_pair(p)) for p in X]


class ExactChainAnalyzer(BaseEstimator):
    """Exact state space, transition matrix, TV curve and diameter of one chain.

    ``fit`` takes a triangulation for ``'tr'``/``'cr'`` and an integer
    ``n`` for ``'ef'``/``'dk'``.
    """

    def __init__(self, chain="tr", eps=0.25, tmax=1000, start="worst", cap=DEFAULT_CAP):
        self.chain = chain
        self.eps = eps
        self.tmax = tmax
        self.start = start
        self.cap = cap

    def fit(self, X, y=None):
        if self.chain in ("tr", "cr"):
            tri = check_triangulation(X)
            self.space_ = enumerate_reachable(tri, cap=self.cap)
        elif self.chain in ("ef", "dk"):
            if not isinstance(X, Integral):
                raise ValidationError("expected the number of internal vertices", field="n")
            n = check_positive_int(X, "n")
            self.space_ = enumerate_flip_space(n, self.cap) if self.chain == "ef" else dyck_space(n)
        else:
            raise ValidationError(f"unknown chain {self.chain!r}", field="chain")
        self.matrix_ = build_transition_matrix(self.chain, self.space_)
        self.tv_, self.mixing_time_ = tv_curve_and_mixing(self.matrix_, self.start,
                                                          self.tmax, self.eps)
        self.diameter_ = diameter(self.space_, self.chain)
        return self

    def predict(self, X):
        """Canonical state keys for the given states (bits or Dyck keys)."""
        check_is_fitted(self, "space_")
        out = []
        for s in X:
            if self.space_.kind == "fixed":
                out.append(check_orientation(self.space_.tri, s).bits)
            elif isinstance(s, FlipState):
                out.append(orientation_to_dyck(s).key)
            else:
                out.append(check_dyck_pair(s).key if not isinstance(s, DyckPair) else s.key)
        return out
