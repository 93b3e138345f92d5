"""Dense two-phase simplex with Bland's rule.

Meant for the tiny programs of the mixing problem (a handful of variables
and at most a few dozen constraints).  When every input is an ``int`` or
``Fraction`` the tableau is kept as exact rationals and the pivoting uses
exact comparisons; otherwise it runs in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from gdspec.errors import Infeasible, Unbounded

FLOAT_EPS = 1e-11
MAX_PIVOTS = 10_000


@dataclass(frozen=True, eq=False)
class LPResult:
    x: np.ndarray
    fun: object
    exact: bool
    pivots: int


def _is_exact(*arrays) -> bool:
    for arr in arrays:
        if arr is None:
            continue
        for v in np.asarray(arr, dtype=object).ravel():
            if not isinstance(v, (int, Fraction)) or isinstance(v, bool):
                return False
    return True


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int], eps) -> None:
        self.T = T
        self.basis = basis
        self.eps = eps
        self.pivots = 0

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        cb = cost[self.basis]
        return cost - cb @ self.T[:, :-1]

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] = T[row] / T[row, col]
        for r in range(T.shape[0]):
            if r != row and T[r, col] != 0:
                T[r] = T[r] - T[r, col] * T[row]
        self.basis[row] = col
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise RuntimeError("simplex exceeded the pivot limit")

    def optimize(self, cost: np.ndarray, allowed: int) -> None:
        """Minimize ``cost`` over columns ``< allowed`` (Bland's rule)."""
        eps = self.eps
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in range(allowed) if red[j] < -eps), None)
            if entering is None:
                return
            col = self.T[:, entering]
            best = None
            for i in range(self.T.shape[0]):
                if col[i] > eps:
                    ratio = self.T[i, -1] / col[i]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded below")
            self.pivot(best[1], entering)


def linprog(
    c: Sequence,
    A_ub: Optional[Sequence[Sequence]] = None,
    b_ub: Optional[Sequence] = None,
    A_eq: Optional[Sequence[Sequence]] = None,
    b_eq: Optional[Sequence] = None,
) -> LPResult:
    """Minimize c @ x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0."""
    exact = _is_exact(c, A_ub, b_ub, A_eq, b_eq)
    dtype = object if exact else float
    conv = Fraction if exact else float
    zero, one = conv(0), conv(1)
    eps = zero if exact else FLOAT_EPS

    c = np.array([conv(v) for v in c], dtype=dtype)
    nvar = c.size
    rows: list[tuple[list, object, str]] = []
    for A, b, kind in ((A_ub, b_ub, "ub"), (A_eq, b_eq, "eq")):
        if A is None:
            continue
        for arow, bv in zip(A, b):
            if len(arow) != nvar:
                raise ValueError("constraint row length does not match c")
            rows.append(([conv(v) for v in arow], conv(bv), kind))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2] == "ub")

    # columns: [x | slacks | artificials | rhs]
    need_art = []
    slack_col = {}
    s = nvar
    for i, (_, _, kind) in enumerate(rows):
        if kind == "ub":
            slack_col[i] = s
            s += 1
    for i, (arow, bv, kind) in enumerate(rows):
        flip = bv < 0
        if kind == "eq" or flip:
            need_art.append(i)
    n_art = len(need_art)
    ncols = nvar + n_slack + n_art
    T = np.full((m, ncols + 1), zero, dtype=dtype)
    basis = [0] * m
    art_col = {i: nvar + n_slack + j for j, i in enumerate(need_art)}
    for i, (arow, bv, kind) in enumerate(rows):
        sign = -one if bv < 0 else one
        T[i, :nvar] = [sign * v for v in arow]
        T[i, -1] = sign * bv
        if kind == "ub":
            T[i, slack_col[i]] = sign
        if i in art_col:
            T[i, art_col[i]] = one
            basis[i] = art_col[i]
        else:
            basis[i] = slack_col[i]

    tab = _Tableau(T, basis, eps)
    if n_art:
        cost1 = np.full(ncols, zero, dtype=dtype)
        cost1[nvar + n_slack:] = one
        tab.optimize(cost1, ncols)
        infeas = sum(tab.T[i, -1] for i in range(m) if tab.basis[i] >= nvar + n_slack)
        if infeas > (eps if exact else 1e-9):
            raise Infeasible("no feasible point")
        # drive remaining artificials out of the basis
        keep = []
        for i in range(m):
            if tab.basis[i] >= nvar + n_slack:
                j = next((j for j in range(nvar + n_slack) if abs(tab.T[i, j]) > eps), None)
                if j is None:
                    continue  # redundant row
                tab.pivot(i, j)
            keep.append(i)
        T2 = np.concatenate([tab.T[keep, : nvar + n_slack], tab.T[keep, -1:]], axis=1)
        tab = _Tableau(T2, [tab.basis[i] for i in keep], eps)
        tab.pivots = 0

    cost2 = np.full(nvar + n_slack, zero, dtype=dtype)
    cost2[:nvar] = c
    tab.optimize(cost2, nvar + n_slack)
    x = np.full(nvar + n_slack, zero, dtype=dtype)
    for i, j in enumerate(tab.basis):
        x[j] = tab.T[i, -1]
    x = x[:nvar]
    fun = sum((ci * xi for ci, xi in zip(c, x)), zero)
    return LPResult(x=x, fun=fun, exact=exact, pivots=tab.pivots)
