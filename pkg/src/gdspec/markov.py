"""Fastest-mixing multi-step Markov chains on distance-regular graphs.

A chain that jumps distance k with total probability mu_k (split evenly
over the n_k vertices at that distance) has transition matrix
M(f;G) with f_k = mu_k / n_k, so its nonprincipal eigenvalues are

    1 + sum_k D[i][k] mu_k,    D[i][k] = lambda_{i,k} / n_k - 1 <= 0.

Minimising the largest modulus over mu is a linear program in d'+1
variables whatever the size of the graph.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from gdspec.drg import SpectralTable
from gdspec.errors import OutOfRange, SolverTolerance
from gdspec.simplex import linprog

log = logging.getLogger(__name__)

CROSS_CHECK_MAX_DPRIME = 6
CROSS_CHECK_TOL = 1e-8
MAX_VERTEX_SUBSETS = 3_000_000


@dataclass(frozen=True)
class StepDistribution:
    """mu (discrete time, mu_0 = holding) or rho (continuous time, rho_0 unused)."""

    weights: tuple
    kind: str = "dtmc"

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.weights])


@dataclass(frozen=True)
class MarkovSolution:
    kind: str
    d_prime: int
    value: object  # nu_max (dtmc) or spectral gap (ctmc); Fraction when exact
    weights: StepDistribution
    active_eigenrows: tuple[int, ...]
    exact: bool
    per_vertex: tuple = ()  # mu_k / n_k

    @property
    def nu_max(self) -> float:
        return float(self.value)

    @property
    def gap(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class TopTwoCheck:
    weights: StepDistribution
    top_two_value: object
    lp_value: object
    agrees: bool


def mixing_coefficients(table: SpectralTable) -> np.ndarray:
    """D[i][k] = lambda_{i,k} / n_k - 1 (an object array of Fractions when exact)."""
    n = table.shells.n
    if table.is_exact():
        D = np.array([[Fraction(v) / n[k] - 1 for k, v in enumerate(row)]
                      for row in table.exact_coeff], dtype=object)
        worst = max(float(x) for x in D.ravel())
    else:
        D = table.coeff / np.array(n, dtype=float)[None, :] - 1.0
        worst = float(D.max())
    if worst > 1e-12:
        raise AssertionError(f"mixing coefficient {worst} is positive")
    return D


def _check_dprime(table: SpectralTable, d_prime: int) -> None:
    if not 1 <= d_prime <= table.d:
        raise OutOfRange(f"d' must be in 1..{table.d}, got {d_prime}")


def dtmc_objective(table: SpectralTable, mu: Sequence) -> object:
    """max_{i>=1} |lambda_i| for the chain with step distribution ``mu``.

    ``mu`` may be shorter than d+1 (missing entries are zero).  Exact when
    the table and ``mu`` are both rational.
    """
    D = mixing_coefficients(table)
    mu = list(mu) + [0] * (table.d + 1 - len(mu))
    if abs(float(sum(mu)) - 1) > 1e-9:
        raise ValueError(f"step distribution sums to {float(sum(mu))}, not 1")
    vals = [1 + sum(D[i][k] * mu[k] for k in range(1, table.d + 1)) for i in range(1, table.d + 1)]
    return max(abs(v) for v in vals)


def _dedupe(rows: list[list], rhs: list) -> tuple[list[list], list]:
    seen = {}
    for r, b in zip(rows, rhs):
        key = tuple(float(x) for x in r) + (float(b),)
        seen.setdefault(key, (r, b))
    out = list(seen.values())
    return [r for r, _ in out], [b for _, b in out]


def _dtmc_lp(D, d_prime: int, d: int):
    A, b = [], []
    for i in range(1, d + 1):
        row = [D[i][k] for k in range(1, d_prime + 1)]
        A.append(row + [-1])
        b.append(-1)
        A.append([-x for x in row] + [-1])
        b.append(1)
    A.append([1] * d_prime + [0])
    b.append(1)
    return _dedupe(A, b)


def _vertex_enumeration(A_ub, b_ub, c, A_eq=None, b_eq=None) -> float:
    """Best objective over all basic feasible points of {x >= 0, A_ub x <= b_ub, A_eq x = b_eq}."""
    A_ub = np.array(A_ub, dtype=float)
    b_ub = np.array(b_ub, dtype=float)
    nv = A_ub.shape[1]
    G = np.vstack([A_ub, -np.eye(nv)])
    h = np.concatenate([b_ub, np.zeros(nv)])
    E = np.zeros((0, nv)) if A_eq is None else np.array(A_eq, dtype=float)
    e = np.zeros(0) if b_eq is None else np.array(b_eq, dtype=float)
    pick = nv - E.shape[0]
    combos = np.array(list(itertools.combinations(range(G.shape[0]), pick)), dtype=int)
    if len(combos) > MAX_VERTEX_SUBSETS:
        raise SolverTolerance(f"vertex enumeration too large ({len(combos)} subsets)")
    c = np.asarray(c, dtype=float)
    best = np.inf
    for chunk in np.array_split(combos, max(1, len(combos) // 20000)):
        M = np.concatenate([G[chunk], np.broadcast_to(E, (len(chunk),) + E.shape)], axis=1)
        rhs = np.concatenate([h[chunk], np.broadcast_to(e, (len(chunk), e.size))], axis=1)
        ok = np.abs(np.linalg.det(M)) > 1e-10
        if not ok.any():
            continue
        x = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
        feas = np.all(x @ G.T <= h + 1e-9, axis=1) & np.all(np.abs(x @ E.T - e) <= 1e-9, axis=1)
        if feas.any():
            best = min(best, float(np.min(x[feas] @ c)))
    return best


def solve_dtmc(table: SpectralTable, d_prime: int, cross_check: bool = True) -> MarkovSolution:
    """Minimise nu_max over steps of length at most ``d_prime``.

    LP: minimise t subject to -t <= 1 + sum_k D[i][k] mu_k <= t for every
    nonprincipal row i, mu >= 0, sum mu_k <= 1 (mu_0 takes the rest).
    Exact rational arithmetic when the spectral table is rational.  For
    d' <= 6 the optimum is re-derived by enumerating basic points.
    """
    _check_dprime(table, d_prime)
    D = mixing_coefficients(table)
    d = table.d
    A, b = _dtmc_lp(D, d_prime, d)
    c = [0] * d_prime + [1]
    res = linprog(c, A, b)
    mu_tail = list(res.x[:d_prime])
    zero = Fraction(0) if res.exact else 0.0
    mu = [1 - sum(mu_tail, zero)] + mu_tail + [zero] * (d - d_prime)
    if not res.exact:
        mu = [max(float(x), 0.0) for x in mu]
    value = dtmc_objective(table, mu) if res.exact else float(res.fun)

    if cross_check and d_prime <= CROSS_CHECK_MAX_DPRIME:
        enum = _vertex_enumeration(A, b, c)
        if abs(enum - float(value)) > CROSS_CHECK_TOL:
            raise SolverTolerance(f"simplex {float(value)} vs enumeration {enum} (d'={d_prime})")

    vals = [1 + sum(D[i][k] * mu[k] for k in range(1, d + 1)) for i in range(1, d + 1)]
    tol = 0 if res.exact else 1e-9
    active = tuple(i + 1 for i, v in enumerate(vals) if abs(v) >= value - tol)
    per_vertex = tuple(m / n for m, n in zip(mu, table.shells.n))
    return MarkovSolution("dtmc", d_prime, value, StepDistribution(tuple(mu)), active,
                          res.exact, per_vertex)


def solve_ctmc(table: SpectralTable, d_prime: int, cross_check: bool = True) -> MarkovSolution:
    """Maximise the spectral gap min_{i>=1} -sum_k D[i][k] rho_k with sum rho_k = 1."""
    _check_dprime(table, d_prime)
    D = mixing_coefficients(table)
    d = table.d
    A, b = [], []
    for i in range(1, d + 1):
        A.append([D[i][k] for k in range(1, d_prime + 1)] + [1])
        b.append(0)
    A, b = _dedupe(A, b)
    A_eq = [[1] * d_prime + [0]]
    b_eq = [1]
    c = [0] * d_prime + [-1]
    res = linprog(c, A, b, A_eq, b_eq)
    rho_tail = list(res.x[:d_prime])
    zero = Fraction(0) if res.exact else 0.0
    rho = [zero] + rho_tail + [zero] * (d - d_prime)
    if not res.exact:
        rho = [max(float(x), 0.0) for x in rho]
    gens = [sum(D[i][k] * rho[k] for k in range(1, d + 1)) for i in range(1, d + 1)]
    gap = -max(gens)

    if cross_check and d_prime <= CROSS_CHECK_MAX_DPRIME:
        enum = -_vertex_enumeration(A, b, c, A_eq, b_eq)
        if abs(enum - float(gap)) > CROSS_CHECK_TOL:
            raise SolverTolerance(f"simplex {float(gap)} vs enumeration {enum} (d'={d_prime})")

    tol = 0 if res.exact else 1e-9
    active = tuple(i + 1 for i, g in enumerate(gens) if -g <= gap + tol)
    per_vertex = tuple(r / n for r, n in zip(rho, table.shells.n))
    return MarkovSolution("ctmc", d_prime, gap, StepDistribution(tuple(rho), "ctmc"), active,
                          res.exact, per_vertex)


def uniform_solution_check(table: SpectralTable) -> MarkovSolution:
    """mu proportional to the shell sizes makes P = J/n, so nu_max = 0."""
    n = table.shells.n
    total = table.order
    mu = tuple(Fraction(x, total) for x in n)
    value = dtmc_objective(table, mu)
    if table.is_exact():
        assert value == 0, value
    else:
        assert abs(float(value)) < 1e-9, value
    return MarkovSolution("dtmc", table.d, value, StepDistribution(mu), (), table.is_exact(),
                          tuple(Fraction(1, total) for _ in n))


def hamming_top_two(d: int, d_prime: int, table: Optional[SpectralTable] = None) -> TopTwoCheck:
    """Compare the "top two" step distribution on H(d,2) with the LP optimum.

    mu_{d'-1} = d'/(d+1), mu_{d'} = 1 - d'/(d+1), zero elsewhere.
    """
    if not 1 <= d_prime or 2 * d_prime > d:
        raise OutOfRange(f"top-two form needs 1 <= d' <= d/2, got d={d}, d'={d_prime}")
    if table is None:
        from gdspec.drg import spectral_table
        from gdspec.families import FamilySpec, intersection_array

        table = spectral_table(intersection_array(FamilySpec("hamming", (d, 2))))
    mu = [Fraction(0)] * (d + 1)
    mu[d_prime - 1] = Fraction(d_prime, d + 1)
    mu[d_prime] = 1 - Fraction(d_prime, d + 1)
    top = dtmc_objective(table, mu)
    lp = solve_dtmc(table, d_prime, cross_check=False).value
    if isinstance(top, Fraction) and isinstance(lp, Fraction):
        agrees = top == lp
    else:
        agrees = abs(float(top) - float(lp)) <= 1e-10
    return TopTwoCheck(StepDistribution(tuple(mu)), top, lp, agrees)


def explicit_nu_max(dist, shells: Sequence[int], mu: Sequence[float]) -> float:
    """nu_max of P[x,y] = mu_dist / n_dist built on an explicit graph."""
    from gdspec.oracle import assemble_m, dense_sym_eigen

    f = np.array([float(m) / n for m, n in zip(mu, shells)])
    vals = dense_sym_eigen(assemble_m(dist, f)).values
    return float(np.max(np.abs(vals[1:]))) if vals.size > 1 else 0.0


def explicit_ctmc_gap(dist, shells: Sequence[int], rho: Sequence[float]) -> float:
    """Spectral gap of the generator built on an explicit graph."""
    from gdspec.oracle import assemble_m, dense_sym_eigen

    f = np.array([float(r) / n for r, n in zip(rho, shells)])
    f[0] = -sum(float(r) for r in rho[1:])
    vals = dense_sym_eigen(assemble_m(dist, f)).values
    return float(-vals[1])


def johnson_probe(d: int = 3, d_prime: int = 2, ns: Sequence[int] = (10, 14, 20, 30)) -> list[dict]:
    """Track how far the LP optimum on J(n,d) is from the unit step at d' as n grows."""
    from gdspec.drg import spectral_table
    from gdspec.families import FamilySpec, intersection_array

    out = []
    for n in ns:
        table = spectral_table(intersection_array(FamilySpec("johnson", (n, d))))
        sol = solve_dtmc(table, d_prime, cross_check=False)
        mu = np.array([float(x) for x in sol.weights.weights])
        unit = np.zeros_like(mu)
        unit[d_prime] = 1.0
        unit_value = float(dtmc_objective(table, [Fraction(int(x)) for x in unit]))
        out.append({
            "n": n,
            "nu_max": float(sol.value),
            "mu": mu.tolist(),
            "distance_to_unit": float(np.abs(mu - unit).sum()),
            "unit_nu": unit_value,
        })
    return out
