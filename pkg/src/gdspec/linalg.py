"""Small dense eigensolvers.

Two routines live here and they are deliberately unrelated:

* ``tridiagonal_eigenvalues`` runs implicit-shift QL on a symmetric
  tridiagonal matrix.  It is used on the (d+1)x(d+1) quotient matrix.
* ``jacobi_eigenvalues`` runs cyclic Jacobi rotations on a full symmetric
  matrix.  It is the brute-force route used by the explicit-graph oracle.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from gdspec.errors import NoConvergence


def tridiagonal_eigenvalues(
    diag: Sequence[float], off: Sequence[float], max_iter: int = 60
) -> np.ndarray:
    """Eigenvalues of the symmetric tridiagonal matrix ``(diag, off)``.

    Implicit QL with Wilkinson-type shifts.  Returned in descending order.
    """
    d = [float(x) for x in diag]
    n = len(d)
    if len(off) != max(n - 1, 0):
        raise ValueError("off-diagonal must have length len(diag) - 1")
    e = [float(x) for x in off] + [0.0]

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise NoConvergence(f"QL did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(sorted(d, reverse=True))


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint (p, q) pairings covering every index pair once per sweep."""
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for j in range(size // 2):
            p, q = players[j], players[size - 1 - j]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(
    M: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100
) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, using a round-robin
    ordering so that the n/2 rotations of a round act on disjoint index
    pairs and can be applied together.  Iterates until the off-diagonal
    Frobenius norm is below ``tol * ||M||_F``.

    Returns the eigenvalues in descending order.
    """
    A = np.array(M, dtype=float, copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return np.zeros(0)
    A = 0.5 * (A + A.T)
    scale = np.linalg.norm(A)
    if scale == 0.0 or n == 1:
        return np.sort(np.diag(A))[::-1]
    target = tol * scale
    rounds = _round_robin(n)
    offmask = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        if np.sqrt(np.sum(A[offmask] ** 2)) < target:
            return np.sort(np.diag(A))[::-1]
        for p, q in rounds:
            apq = A[p, q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (A[q, q] - A[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(th) + np.sqrt(th**2 + 1.0))
            # theta^2 would overflow; t ~ 1/(2 theta)
            t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
            c = 1.0 / np.sqrt(t**2 + 1.0)
            s = t * c
            rp, rq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * rp - s[:, None] * rq
            A[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = cp * c - cq * s
            A[:, q] = cp * s + cq * c
            A[p, q] = 0.0
            A[q, p] = 0.0
        A = 0.5 * (A + A.T)
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
