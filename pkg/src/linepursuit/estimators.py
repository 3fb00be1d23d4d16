"""Scikit-learn style wrappers.

:class:`PursuitSimulator` treats a strategy as a fitted model whose "inputs" are
target instances ``(d, v, side)`` and whose predictions are catch times.
:class:`ExpansionRatioSearch` fits the zig-zag expansion ratio for a speed.
Exact rational results are kept on the side (``predict_exact``) since sklearn
arrays are float.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_instances, exact
from .kinematics import DEFAULT_ROUND_CAP, Direction, Instance, NoCatch, first_catch, optimal_offline_time
from .optimizer import empirical_best_a, minimize_toward_bound
from .strategies import spec_from_dict


class PursuitSimulator(BaseEstimator):
    """Simulate one strategy against many instances.

    Parameters mirror the CLI flags; ``direction`` may be omitted for models
    designed for one direction. Strategies told ``v`` or ``d`` are rebuilt
    per instance with the instance's values; the rest are built once in ``fit``.
    """

    def __init__(self, model="zigzag", direction=None, a=2, first="R", seq=None,
                 round_cap=DEFAULT_ROUND_CAP):
        self.model = model
        self.direction = direction
        self.a = a
        self.first = first
        self.seq = seq
        self.round_cap = round_cap

    def fit(self, X=None, y=None):
        # placeholder v and d (valid for every model); informed specs are rebuilt per instance
        self.spec_ = spec_from_dict({"model": self.model, "a": self.a, "first": self.first, "seq": self.seq,
                                     "v": "1/2", "d": 1})
        if self.direction is None:
            if self.spec_.direction is None:
                raise ValueError(f"direction is required for model {self.spec_.model}")
            self.direction_ = self.spec_.direction
        else:
            self.direction_ = Direction.parse(self.direction)
            if self.spec_.direction not in (None, self.direction_):
                raise ValueError(f"direction {self.direction_.value} conflicts with model {self.spec_.model}")
        self._shared = None if self.spec_.knows else self.spec_.build()
        return self

    def _catches(self, X):
        check_is_fitted(self, "spec_")
        out = []
        for d, v, side in check_instances(X):
            inst = Instance(d, v, side, self.direction_)
            traj = self._shared or self.spec_.with_knowledge(v=v, d=d).build()
            out.append((inst, first_catch(traj, inst, self.round_cap)))
        return out

    def predict_exact(self, X) -> list:
        """Catch times as Fractions (``None`` for instances never caught)."""
        return [None if isinstance(r, NoCatch) else r.time for _, r in self._catches(X)]

    def predict(self, X) -> np.ndarray:
        """Catch times as floats; NaN where the target is never caught."""
        return np.array([math.nan if t is None else float(t) for t in self.predict_exact(X)])

    def transform(self, X) -> np.ndarray:
        """Competitive ratio per instance (inf where never caught)."""
        out = []
        for inst, res in self._catches(X):
            out.append(math.inf if isinstance(res, NoCatch) else float(res.time / optimal_offline_time(inst)))
        return np.array(out)

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)

    def score(self, X, y=None) -> float:
        """Negative worst ratio over ``X`` (higher is better, as sklearn expects)."""
        return -float(np.max(self.transform(X)))


class ExpansionRatioSearch(BaseEstimator):
    """Best zig-zag expansion ratio for a target speed.

    ``method='analytic'`` minimizes the closed-form toward bound;
    ``method='empirical'`` minimizes the exact worst case over ``d`` in
    ``[1, d_max]``.
    """

    def __init__(self, direction="toward", method="analytic", d_max=10 ** 6, round_cap=512):
        self.direction = direction
        self.method = method
        self.d_max = d_max
        self.round_cap = round_cap

    def fit(self, X, y=None):
        """``X`` holds a single speed (scalar, ``[v]`` or ``[[v]]``)."""
        v = exact(np.asarray(X, dtype=object).ravel()[0]) if not isinstance(X, (str, Fraction)) else exact(X)
        direction = Direction.parse(self.direction)
        if self.method == "analytic":
            if direction is not Direction.TOWARD:
                raise ValueError("the analytic objective is the toward-target bound")
            res = minimize_toward_bound(v)
        elif self.method == "empirical":
            res = empirical_best_a(direction, v, d_family=(1, self.d_max), round_cap=self.round_cap)
        else:
            raise ValueError(f"method must be 'analytic' or 'empirical', got {self.method!r}")
        self.v_ = v
        self.result_ = res
        self.a_ = res.argmin
        self.value_ = res.value
        return self

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "result_")
        return -float(self.value_)
