"""Deterministic lattice enumeration and compensated summation helpers.

All lattice sums in this package follow one ordering convention: points are
grouped into sup-norm shells max_i |v_i| = 1, 2, ... and listed
lexicographically inside each shell.  Per-shell partial sums use a fixed
left-to-right order and shells are combined with compensated (Neumaier)
addition, so results do not depend on chunking or thread count.
"""

import math

import numpy as np


class Accumulator:
    """Neumaier compensated accumulator for a running sum of floats."""

    def __init__(self, value=0.0):
        self._s = float(value)
        self._c = 0.0

    def add(self, x):
        x = float(x)
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self):
        return self._s + self._c


def csum(values):
    """Compensated sum of an iterable of real numbers."""
    return math.fsum(values)


def csum_complex(values):
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def shell_points(d, m):
    """Integer points with sup-norm exactly m (m >= 1), in lexicographic order.

    Returns an array of shape (count, d).
    """
    if m < 1:
        raise ValueError("shell index must be >= 1")
    rng = np.arange(-m, m + 1)
    grids = np.meshgrid(*([rng] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    mask = np.abs(pts).max(axis=1) == m
    return pts[mask]


def box_points(d, radius, include_origin=False):
    """All integer points with sup-norm <= radius, shells ascending.

    Within a shell the order is lexicographic; the origin (shell 0) is
    prepended when requested.  Deterministic by construction.
    """
    parts = []
    if include_origin:
        parts.append(np.zeros((1, d), dtype=np.int64))
    for m in range(1, radius + 1):
        parts.append(shell_points(d, m))
    if not parts:
        return np.zeros((0, d), dtype=np.int64)
    return np.concatenate(parts, axis=0)


def shell_sums(term_fn, d, radius):
    """Sum term_fn(points) shell by shell with compensated combination.

    term_fn maps an (N, d) integer array to an (N,) float/complex array.
    Returns (total, last_shell_abs) where last_shell_abs is the absolute
    value of the final shell's contribution (used for tail heuristics).
    """
    acc_re = Accumulator()
    acc_im = Accumulator()
    last = 0.0
    for m in range(1, radius + 1):
        pts = shell_points(d, m)
        vals = np.asarray(term_fn(pts))
        s = complex(vals.sum())
        acc_re.add(s.real)
        acc_im.add(s.imag)
        last = abs(s)
    total = complex(acc_re.value, acc_im.value)
    return total, last
