"""Input checks for the estimator layer."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.utils.validation import check_array

from .kinematics import Side


def exact(value) -> Fraction:
    """Rational from an exact input or from the shortest decimal form of a float.

    ``0.1`` becomes ``1/10`` here (not its binary expansion), which is what a user
    typing decimals into an array means.
    """
    if isinstance(value, (Fraction, int, np.integer)):
        return Fraction(int(value)) if isinstance(value, np.integer) else Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(repr(float(value)))


def check_instances(X) -> list[tuple[Fraction, Fraction, Side]]:
    """Rows of ``(d, v, side)``; side is any of -1/1, 'L'/'R'.

    Arrays of numbers go through :func:`sklearn.utils.validation.check_array`;
    lists holding Fractions or strings are read as-is so exact inputs stay exact.
    """
    if isinstance(X, np.ndarray) and X.dtype.kind in "biuf":
        arr = check_array(X, ensure_2d=True, dtype="numeric")
        rows = arr.tolist()
    else:
        rows = [list(r) for r in X]
        if not rows:
            raise ValueError("no instances given")
    out = []
    for k, row in enumerate(rows):
        if len(row) != 3:
            raise ValueError(f"instance row {k} has {len(row)} columns; expected (d, v, side)")
        d, v, side = row
        if isinstance(side, float):
            side = int(side)
        out.append((exact(d), exact(v), Side.parse(side)))
    return out
