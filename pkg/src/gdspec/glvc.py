"""Generalized Lotka-Volterra competition with and without mutation.

Without mutation:  dx_i/dt = x_i (r_i - sum_j c_ij x_j)
With mutation:     dx_i/dt = r_i sum_j d_ij x_j - x_i sum_j c_ij x_j

C = M(f;G) is the competition matrix and D = M(g;G) a row-stochastic
mutation matrix.  Both are generalized distance matrices of the same
graph, so on a distance-regular graph they commute and the Jacobian at
x* = 1 can be diagonalized from the spectral table alone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space

from gdspec.drg import SpectralTable, spectral_table
from gdspec.errors import BlowUp, RowSumViolation, StepSizeError
from gdspec.families import FamilySpec, intersection_array
from gdspec.oracle import (
    DistanceData,
    ExplicitGraph,
    all_pairs_distances,
    assemble_m,
    check_distance_regular,
    construct,
)
from gdspec.positivity import check_domain

log = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12
BLOWUP = 1e12
CLAMP = -1e-12
MAX_REL_STEP = 0.1
ROUTE_TOL = 1e-7
MU_GRID = 41
MU_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class GlvcSystem:
    C: np.ndarray
    r: np.ndarray
    x_star: np.ndarray
    f: np.ndarray
    D: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    table: Optional[SpectralTable] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.C.shape[0]

    @property
    def has_mutation(self) -> bool:
        return self.D is not None


@dataclass(frozen=True, eq=False)
class StabilityVerdict:
    jacobian_eigen_max: float
    stable: bool
    matrix_route_eigen_max: Optional[float]
    eigenvalues: np.ndarray
    nonprincipal_max: float
    route_nonprincipal_max: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    x: np.ndarray

    def to_csv(self) -> str:
        head = ",".join(["t"] + [f"x{i + 1}" for i in range(self.x.shape[1])])
        rows = [",".join(f"{v:.12g}" for v in (tt, *xx)) for tt, xx in zip(self.t, self.x)]
        return "\n".join([head] + rows) + "\n"


@dataclass(frozen=True)
class MutationReport:
    mu_star: float
    stable_at_zero: bool
    stable_at_half: bool
    grid: tuple[tuple[float, float], ...]
    route_max_at_star: float
    dense_max_at_star: Optional[float]


def _resolve(graph) -> tuple[DistanceData, Optional[SpectralTable]]:
    if isinstance(graph, str):
        graph = construct(graph)
    if isinstance(graph, FamilySpec):
        table = spectral_table(intersection_array(graph), strict=False)
        return all_pairs_distances(construct(graph)), table
    if isinstance(graph, ExplicitGraph):
        dist = all_pairs_distances(graph)
        ia = check_distance_regular(graph, dist)
        table = spectral_table(ia, strict=False) if ia else None
        return dist, table
    raise TypeError(f"cannot build a system from {type(graph).__name__}")


def point_mutation_kernel(d: int, mu: float) -> np.ndarray:
    """g_k = mu^k (1-mu)^(d-k): independent bit flips on H(d,2)."""
    k = np.arange(d + 1)
    return mu ** k * (1.0 - mu) ** (d - k)


def build_system(graph: Union[ExplicitGraph, FamilySpec, str], f: Sequence[float],
                 g_mut: Optional[Sequence[float]] = None,
                 x_star: Optional[Sequence[float]] = None,
                 normalize: bool = False) -> GlvcSystem:
    """Assemble C (and D) and pick r so that x_star is a fixed point.

    Without mutation r = C x_star.  With mutation only x_star = 1 is
    supported; then r = C 1, which must be constant.
    """
    dist, table = _resolve(graph)
    f = check_domain(f, tol=1e-12)
    if f.size != dist.diameter + 1:
        raise ValueError(f"f has {f.size} entries, graph has diameter {dist.diameter}")
    C = assemble_m(dist, f)
    n = C.shape[0]
    x = np.ones(n) if x_star is None else np.asarray(x_star, dtype=float)
    if x.shape != (n,) or np.any(x <= 0):
        raise ValueError("x_star must be a positive vector of length n")

    if g_mut is None:
        return GlvcSystem(C, C @ x, x, f, table=table)

    g = np.asarray(g_mut, dtype=float)
    if g.size != f.size or np.any(g < 0):
        raise ValueError("g must be a nonnegative vector of the same length as f")
    D = assemble_m(dist, g)
    sums = D.sum(axis=1)
    if normalize:
        if np.ptp(sums) > ROW_SUM_TOL * max(1.0, sums.max()):
            raise RowSumViolation("mutation rows have unequal sums, cannot normalize")
        g = g / sums[0]
        D = D / sums[0]
        sums = D.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > ROW_SUM_TOL:
        raise RowSumViolation(f"mutation row sums deviate from 1 by {np.max(np.abs(sums - 1)):.3g}")
    if not np.allclose(x, 1.0):
        raise ValueError("with mutation only x_star = 1 is supported")
    r = C.sum(axis=1)
    if np.ptp(r) > 1e-12 * r.max() or np.ptp(np.diag(D)) > 1e-15:
        raise ValueError("constant-r case needs constant C row sums and constant diag(D)")
    return GlvcSystem(C, r, x, f, D, g, table)


def vector_field(sys: GlvcSystem, x: np.ndarray) -> np.ndarray:
    Cx = sys.C @ x
    if sys.D is None:
        return x * (sys.r - Cx)
    return sys.r * (sys.D @ x) - x * Cx


def jacobian_at(sys: GlvcSystem, x: np.ndarray) -> np.ndarray:
    Cx = sys.C @ x
    if sys.D is None:
        return np.diag(sys.r - Cx) - x[:, None] * sys.C
    return sys.r[:, None] * sys.D - np.diag(Cx) - x[:, None] * sys.C


def route_eigenvalues(sys: GlvcSystem) -> Optional[np.ndarray]:
    """Distinct Jacobian eigenvalues at x* = 1 from the spectral table (row 0 first)."""
    if sys.table is None or not np.allclose(sys.x_star, 1.0):
        return None
    lam = sys.table.coeff
    r = float(sys.r[0])
    if sys.D is None:
        return -(lam @ sys.f)
    return lam @ (r * sys.g - sys.f) - r


def _nonprincipal(J: np.ndarray) -> np.ndarray:
    """Eigenvalues of J on the complement of the all-ones vector (J must fix it)."""
    Q = null_space(np.ones((1, J.shape[0])))
    return np.linalg.eigvalsh(0.5 * (Q.T @ (J + J.T) @ Q)) if J.shape[0] > 1 else np.zeros(0)


def jacobian(sys: GlvcSystem) -> tuple[np.ndarray, StabilityVerdict]:
    J = jacobian_at(sys, sys.x_star)
    symmetric = np.allclose(J, J.T, atol=1e-12 * max(1.0, np.abs(J).max()))
    vals = np.linalg.eigvalsh(J) if symmetric else np.linalg.eigvals(J).real
    jmax = float(np.max(vals))
    route = route_eigenvalues(sys)
    route_max = route_np = None
    nonprincipal = float(np.max(_nonprincipal(J))) if symmetric and sys.n > 1 else jmax
    if route is not None:
        route_max = float(np.max(route))
        route_np = float(np.max(route[1:])) if route.size > 1 else route_max
        if abs(route_max - jmax) > ROUTE_TOL * max(1.0, np.abs(vals).max()):
            log.warning("eigenvalue route %.12g disagrees with dense %.12g", route_max, jmax)
    verdict = StabilityVerdict(jmax, jmax < 0.0, route_max, np.sort(vals)[::-1],
                               nonprincipal, route_np)
    return J, verdict


def integrate(sys: GlvcSystem, x0: Sequence[float], t_end: float, dt: float,
              record_every: int = 1) -> Trajectory:
    """Classical fixed-step RK4."""
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (sys.n,) or np.any(x <= 0):
        raise ValueError("x0 must be a positive vector of length n")
    if dt <= 0 or t_end < 0:
        raise ValueError("need dt > 0 and t_end >= 0")
    steps = int(round(t_end / dt))
    ts, xs = [0.0], [x.copy()]
    for s in range(1, steps + 1):
        k1 = vector_field(sys, x)
        k2 = vector_field(sys, x + 0.5 * dt * k1)
        k3 = vector_field(sys, x + 0.5 * dt * k2)
        k4 = vector_field(sys, x + dt * k3)
        step = dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(step)):
            raise BlowUp(f"non-finite state at t={s * dt:g}")
        if np.max(np.abs(step)) > MAX_REL_STEP * np.min(x):
            raise StepSizeError(f"dt={dt:g} moves the state by more than {MAX_REL_STEP} * min(x) "
                                f"at t={(s - 1) * dt:g}")
        x = x + step
        if np.any(x > BLOWUP) or np.any(x < CLAMP):
            raise BlowUp(f"state left (0, {BLOWUP:g}] at t={s * dt:g}")
        x = np.maximum(x, 0.0)
        if s % record_every == 0 or s == steps:
            ts.append(s * dt)
            xs.append(x.copy())
    return Trajectory(np.array(ts), np.array(xs))


def _hamming_route_max(table: SpectralTable, f: np.ndarray, r: float, mu: float) -> float:
    g = point_mutation_kernel(table.d, mu)
    return float(np.max(table.coeff @ (r * g - f) - r))


def stabilizing_mutation(d: int, f: Sequence[float], dense_check: bool = True) -> MutationReport:
    """Smallest point-mutation rate mu in [0, 1/2] making r(D-I)-C negative definite on H(d,2).

    The sweep uses the eigenvalue-sum route on a 41-point grid and refines
    the first sign change by bisection to 1e-6.
    """
    spec = FamilySpec("hamming", (d, 2))
    table = spectral_table(intersection_array(spec))
    f = check_domain(f, tol=1e-12)
    if f.size != d + 1:
        raise ValueError(f"f must have {d + 1} entries")
    r = float(np.dot(f, table.shells.n))
    fn = lambda mu: _hamming_route_max(table, f, r, mu)  # noqa: E731
    mus = np.linspace(0.0, 0.5, MU_GRID)
    vals = np.array([fn(m) for m in mus])
    stable_half = bool(vals[-1] < 0)
    if vals[0] < 0:
        mu_star = 0.0
    else:
        j = int(np.argmax(vals < 0)) if np.any(vals < 0) else None
        if j is None:
            raise AssertionError("mu = 1/2 failed to stabilize")
        lo, hi = float(mus[j - 1]), float(mus[j])
        while hi - lo > MU_TOL:
            mid = 0.5 * (lo + hi)
            if fn(mid) < 0:
                hi = mid
            else:
                lo = mid
        mu_star = hi
    dense = None
    if dense_check:
        sys = build_system(spec, f, point_mutation_kernel(d, mu_star))
        _, verdict = jacobian(sys)
        dense = verdict.jacobian_eigen_max
    return MutationReport(mu_star, bool(vals[0] < 0), stable_half,
                          tuple((float(m), float(v)) for m, v in zip(mus, vals)),
                          fn(mu_star), dense)
