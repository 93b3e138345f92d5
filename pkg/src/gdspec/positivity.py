"""Positive definiteness of M(f;G) over the competition domain and along f_m = z^m."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from gdspec.drg import SpectralPolynomial, SpectralPolynomialSet, SpectralTable, eigenvalue_for_f
from gdspec.errors import DomainViolation

SIGN_TOL = 1e-10
GRID_STEP = 2.0 ** -10
ROOT_TOL = 1e-12
BOUND_TOL = 1e-9


@dataclass(frozen=True)
class DomainVerdict:
    nonneg: bool
    strict_interior: bool
    witness_corner: Optional[tuple[int, int]] = None
    strict_except_ones: bool = False


@dataclass(frozen=True)
class UniformVerdict:
    uniform: bool
    z_star: Optional[float] = None
    poly_index: Optional[int] = None


@dataclass(frozen=True)
class BoundCheck:
    r: float
    min_eigenvalue: float
    bound_holds: bool


@dataclass(frozen=True, eq=False)
class PositivityReport:
    pd_over_domain: bool
    strict_interior: bool
    strict_except_ones: bool
    corner_values: np.ndarray
    uniform_pd: bool
    z_star: Optional[float]
    min_bound_ok: bool
    witness_corner: Optional[tuple[int, int]] = None
    # EXPERIMENTAL: rows whose eigenvalue goes negative at some corner
    negative_corner_rows: int = 0

    def to_dict(self) -> dict:
        return {
            "pd_over_domain": self.pd_over_domain,
            "strict_interior": self.strict_interior,
            "strict_except_ones": self.strict_except_ones,
            "corner_values": [[float(x) for x in row] for row in self.corner_values],
            "uniform_pd": self.uniform_pd,
            "z_star": self.z_star,
            "min_bound_ok": self.min_bound_ok,
            "witness_corner": list(self.witness_corner) if self.witness_corner else None,
            "negative_corner_rows_experimental": self.negative_corner_rows,
        }


def corner_eigenvalues(table: SpectralTable) -> np.ndarray:
    """Entry (i, d') is lambda_i at the step vector f = (1,...,1,0,...,0) ending at d'."""
    return np.cumsum(table.coeff, axis=1)


def pd_over_competition_domain(table: SpectralTable) -> DomainVerdict:
    """Nonnegativity of every lambda_i(f) over the competition domain.

    Each lambda_i is linear in f and the domain is the convex hull of the
    step vectors, so checking the corners is enough.  ``strict_interior``
    asks every corner value to exceed the tolerance; the all-ones corner has
    zero nonprincipal eigenvalues, so it fails whenever d >= 1.
    ``strict_except_ones`` skips that corner.
    """
    corners = corner_eigenvalues(table)
    neg = np.argwhere(corners < -SIGN_TOL)
    witness = None
    if neg.size:
        # most negative corner
        i, dp = min(map(tuple, neg), key=lambda ij: corners[ij])
        witness = (int(i), int(dp))
    strict = bool(np.all(corners > SIGN_TOL))
    except_ones = bool(np.all(corners[:, :-1] > SIGN_TOL))
    return DomainVerdict(witness is None, strict, witness, except_ones)


def _derivative_coeffs(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.size <= 1:
        return np.zeros(1)
    return coeffs[1:] * np.arange(1, coeffs.size)


def _bisect(fn, lo: float, hi: float, tol: float = ROOT_TOL) -> float:
    flo = fn(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_changes(fn, grid: np.ndarray, vals: np.ndarray) -> list[float]:
    roots = []
    for j in range(grid.size - 1):
        if vals[j] == 0.0:
            roots.append(float(grid[j]))
        elif vals[j] * vals[j + 1] < 0:
            roots.append(_bisect(fn, float(grid[j]), float(grid[j + 1])))
    return roots


def _first_negative_crossing(coeffs: np.ndarray) -> Optional[float]:
    """Smallest root where the polynomial drops below -SIGN_TOL on [0, 1]."""
    poly = np.polynomial.Polynomial(coeffs)
    dpoly = np.polynomial.Polynomial(_derivative_coeffs(coeffs))
    grid = np.linspace(0.0, 1.0, int(round(1 / GRID_STEP)) + 1)
    # critical points catch dips that fall between grid nodes
    crit = _sign_changes(dpoly, grid, dpoly(grid))
    points = np.unique(np.concatenate([grid, np.array(crit, dtype=float)]))
    vals = poly(points)
    below = np.nonzero(vals < -SIGN_TOL)[0]
    if below.size == 0:
        return None
    j = int(below[0])
    if j == 0:
        return 0.0
    # vals[j-1] >= -SIGN_TOL; the crossing lies in [points[j-1], points[j]]
    lo, hi = float(points[j - 1]), float(points[j])
    if poly(lo) <= 0.0:
        return lo
    return _bisect(poly, lo, hi)


def uniform_pd(phis: SpectralPolynomialSet) -> UniformVerdict:
    """Is every phi_i nonnegative on [0, 1]?  If not, where does the first one cross?

    Roots are isolated by a sign scan on a 2^-10 grid (augmented with the
    critical points of each phi_i) and refined by bisection to 1e-12.
    """
    best: Optional[tuple[float, int]] = None
    for idx, p in enumerate(phis):
        z = _first_negative_crossing(np.asarray(p.coeffs, dtype=float))
        if z is not None and (best is None or z < best[0]):
            best = (z, idx)
    if best is None:
        return UniformVerdict(True)
    return UniformVerdict(False, best[0], best[1])


def check_domain(f: Sequence[float], tol: float = 0.0) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.size == 0 or abs(f[0] - 1.0) > tol:
        raise DomainViolation("competition vectors need f_0 = 1")
    if np.any(np.diff(f) > tol) or f[-1] < -tol:
        raise DomainViolation(f"not in the competition domain: {f}")
    return f


def min_eigen_bound(table: SpectralTable, f: Sequence[float]) -> BoundCheck:
    """Check lambda_i(f) >= 2 - r with r = sum_m f_m n_m the row sum of M(f;G)."""
    f = check_domain(f, tol=1e-12)
    r = float(np.dot(f, table.shells.n))
    lam = eigenvalue_for_f(table, f)
    lo = float(np.min(lam))
    return BoundCheck(r=r, min_eigenvalue=lo, bound_holds=lo >= 2.0 - r - BOUND_TOL)


def random_domain_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    """Uniform sample of 1 = f_0 >= f_1 >= ... >= f_d >= 0."""
    return np.concatenate([[1.0], np.sort(rng.random(d))[::-1]])


def positivity_report(table: SpectralTable, phis: SpectralPolynomialSet) -> PositivityReport:
    corners = corner_eigenvalues(table)
    dom = pd_over_competition_domain(table)
    uni = uniform_pd(phis)
    # lambda_i(f) - (2 - r(f)) is linear in f, so corners decide the bound
    r = np.cumsum(table.shells.n)
    bound_ok = bool(np.all(corners >= (2.0 - r)[None, :] - BOUND_TOL))
    return PositivityReport(
        pd_over_domain=dom.nonneg,
        strict_interior=dom.strict_interior,
        strict_except_ones=dom.strict_except_ones,
        corner_values=corners,
        uniform_pd=uni.uniform,
        z_star=uni.z_star,
        min_bound_ok=bound_ok,
        witness_corner=dom.witness_corner,
        negative_corner_rows=int(np.sum(np.any(corners < -SIGN_TOL, axis=1))),
    )
