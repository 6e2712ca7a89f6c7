"""Finite graded bases and sparse vectors over them.

Vectors are plain dicts label -> Fraction with no stored zeros; the helper
functions keep that invariant so equality of dicts is equality of vectors.
"""

from __future__ import annotations

from fractions import Fraction


class GradedBasis:
    """An ordered list of hashable labels with integer degrees."""

    __slots__ = ("labels", "degrees", "index")

    def __init__(self, labels, degrees):
        labels = tuple(labels)
        degrees = tuple(degrees)
        if len(labels) != len(degrees):
            raise ValueError("labels and degrees differ in length")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate basis label")
        self.labels = labels
        self.degrees = degrees
        self.index = {lab: i for i, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def degree_of(self, label):
        return self.degrees[self.index[label]]

    def __repr__(self):
        return f"GradedBasis({len(self.labels)} labels)"


# -- sparse vector helpers (dict label -> Fraction, zero-free) -------------

def vec(*pairs):
    out = {}
    for lab, val in pairs:
        if not isinstance(val, Fraction):
            val = Fraction(val)
        if val:
            out[lab] = out.get(lab, Fraction(0)) + val
    return {k: v for k, v in out.items() if v}


def vadd_into(acc, other, scale=1):
    """acc += scale * other, in place; returns acc."""
    if scale == 0:
        return acc
    for lab, val in other.items():
        w = acc.get(lab, 0) + scale * val
        if w:
            acc[lab] = w
        else:
            acc.pop(lab, None)
    return acc


def vscale(v, scale):
    if scale == 0:
        return {}
    return {lab: scale * val for lab, val in v.items()}


def vsub(a, b):
    out = dict(a)
    return vadd_into(out, b, -1)
