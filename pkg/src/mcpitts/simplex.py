"""Exact phase-one simplex for ``B u = b, u >= 0`` with a Farkas certificate.

The tableau is kept in fraction-free integer form (Edmonds/Bareiss integer
pivoting): every entry is an integer and the true tableau is ``T / D`` where
``D`` is the last pivot element. Each pivot is

    T[i] <- (p * T[i] - T[i, c] * T[r]) / D_prev      for i != r

and the divisions are exact. Entries stay in ``int64`` while they are small
and move to Python integers (``object`` arrays) as soon as a product could
overflow, so results are exact either way.

Entering column: most negative reduced cost. Leaving row: lexicographic
minimum ratio over (rhs, rows of B^-1). The starting rows (b_i, e_i) are
lexicographically positive and stay so, the objective row decreases
lexicographically at every pivot, and therefore no basis can repeat even on
the heavily degenerate systems produced by separability tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

_SMALL = 1 << 30


@dataclass(frozen=True)
class PhaseOneResult:
    feasible: bool
    primal: tuple[Fraction, ...] | None
    """u with B u = b, u >= 0 (only when feasible)."""
    farkas: tuple[Fraction, ...] | None
    """pi with B^T pi <= 0 and b^T pi > 0 (only when infeasible)."""
    pivots: int


class _Tableau:
    def __init__(self, B: Sequence[Sequence[int]], b: Sequence[int]):
        rows = len(B)
        cols = len(B[0]) if rows else 0
        A = np.array(B, dtype=object).reshape(rows, cols)
        rhs = np.array(b, dtype=object)
        neg = rhs < 0
        A[neg] *= -1
        rhs[neg] *= -1
        self.flipped = neg
        self.rows, self.cols = rows, cols
        # columns: structural 0..cols-1, artificial cols..cols+rows-1, rhs last
        T = np.zeros((rows + 1, cols + rows + 1), dtype=object)
        T[:rows, :cols] = A
        T[:rows, cols:cols + rows] = np.eye(rows, dtype=int)
        T[:rows, -1] = rhs
        T[rows, :cols] = -A.sum(axis=0) if rows else 0
        T[rows, -1] = -rhs.sum() if rows else 0
        self.T = T
        self.D = 1
        self.basis = list(range(cols, cols + rows))
        self._demote_if_small()

    def _demote_if_small(self):
        T = self.T
        if T.dtype == object:
            m = max(abs(int(T.max())), abs(int(T.min())), abs(self.D))
            if m < _SMALL:
                self.T = T.astype(np.int64)
        else:
            m = max(int(np.abs(T).max()), abs(self.D))
            if m >= _SMALL:
                self.T = T.astype(object)

    def pivot(self, r: int, c: int):
        T = self.T
        p = T[r, c]
        col = T[:, c].copy()
        col[r] = 0
        rowr = T[r]
        new = (T * p - np.outer(col, rowr)) // self.D
        new[r] = rowr
        self.T = new
        self.D = int(p)
        self.basis[r] = c
        self._demote_if_small()


def _entering(obj: np.ndarray, ncols: int) -> int | None:
    d = obj[:ncols]
    j = int(np.argmin(d))
    return j if d[j] < 0 else None


def _argmin_ratio(v: np.ndarray, a: np.ndarray) -> int:
    """Index of the smallest v[i] / a[i] (all a[i] > 0), exactly."""
    j = int(np.argmin(v.astype(float) / a.astype(float)))
    diff = v * a[j] - v[j] * a
    if (diff < 0).any():
        # floating point picked the wrong one; settle it exactly
        j = 0
        for i in range(1, len(v)):
            if int(v[i]) * int(a[j]) < int(v[j]) * int(a[i]):
                j = i
    return j


def _lex_smallest(M: np.ndarray, a: np.ndarray, j: int) -> bool:
    """Is row j of M / a lexicographically smaller than every other row?"""
    diff = M * a[j] - M[j] * a[:, None]
    nz = diff != 0
    first = nz.argmax(axis=1)
    lead = diff[np.arange(len(M)), first]
    others = np.arange(len(M)) != j
    return bool(np.all(nz.any(axis=1)[others]) and np.all(lead[others] > 0))


def _leaving(T: np.ndarray, c: int, rows: int, cols: int) -> int | None:
    """Lexicographic minimum-ratio row.

    Ties in ``rhs / a`` are broken by comparing the rows of B^-1 (the
    artificial block) divided by ``a``; no two rows of B^-1 are
    proportional, so the choice is unique and no basis repeats.
    """
    cand = np.flatnonzero(T[:rows, c] > 0)
    if cand.size == 0:
        return None
    if cand.size == 1:
        return int(cand[0])
    a = T[cand, c]
    v = T[cand, -1]
    j = _argmin_ratio(v, a)
    keep = (v * a[j] - v[j] * a) == 0
    cand, a = cand[keep], a[keep]
    if cand.size == 1:
        return int(cand[0])
    keys = [T.shape[1] - 1, *range(cols, cols + rows)]
    M = T[np.ix_(cand, keys)]
    # propose with floats, confirm exactly
    approx = M.astype(float) / a.astype(float)[:, None]
    j = int(np.lexsort(approx.T[::-1])[0])
    if _lex_smallest(M, a, j):
        return int(cand[j])
    for key in range(M.shape[1]):  # pragma: no cover - float proposal was wrong
        if cand.size == 1:
            break
        v = M[:, key]
        j = _argmin_ratio(v, a)
        keep = (v * a[j] - v[j] * a) == 0
        cand, a, M = cand[keep], a[keep], M[keep]
    return int(cand[0])


def phase_one(B: Sequence[Sequence[int]], b: Sequence[int], max_pivots: int = 1_000_000) -> PhaseOneResult:
    """Decide feasibility of ``B u = b, u >= 0`` exactly.

    ``B`` and ``b`` must be integers. Returns either a feasible ``u`` or a
    Farkas vector ``pi`` with ``B^T pi <= 0`` and ``b^T pi > 0``.
    """
    tab = _Tableau(B, b)
    rows, cols = tab.rows, tab.cols
    ncols = cols + rows
    pivots = 0
    while True:
        T = tab.T
        obj = T[rows]
        c = _entering(obj, ncols)
        if c is None:
            break
        r = _leaving(T, c, rows, cols)
        if r is None:
            # the phase-one objective is bounded below by 0
            raise AssertionError("unbounded phase-one problem")
        tab.pivot(r, c)
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")

    T, D = tab.T, tab.D
    # objective row holds -D * (sum of artificials)
    if T[rows, -1] == 0:
        u = [Fraction(0)] * cols
        for i, j in enumerate(tab.basis):
            if j < cols:
                u[j] = Fraction(int(T[i, -1]), D)
        return PhaseOneResult(True, tuple(u), None, pivots)
    # reduced cost of artificial k is 1 - pi_k
    pi = [Fraction(D - int(T[rows, cols + k]), D) for k in range(rows)]
    pi = [-v if f else v for v, f in zip(pi, tab.flipped)]
    return PhaseOneResult(False, None, tuple(pi), pivots)
