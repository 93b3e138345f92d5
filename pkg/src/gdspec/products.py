"""Spectra and matrices of Cartesian products, without building the product."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from gdspec.drg import (
    SpectralPolynomial,
    SpectralPolynomialSet,
    coefficient_distance,
    poly_mul,
)
from gdspec.errors import NotSumDecomposable

MERGE_TOL = 1e-10
SUM_TOL = 1e-12

IDENTITY_FACTOR = SpectralPolynomialSet((SpectralPolynomial((1.0,), 1),))


@dataclass(frozen=True)
class ProductSpectrum:
    factors: tuple[SpectralPolynomialSet, ...]
    combined: SpectralPolynomialSet

    @property
    def candidate_count(self) -> int:
        """Number of tuple-wise products before merging."""
        return int(np.prod([len(f) for f in self.factors]))

    @property
    def distinct_count(self) -> int:
        return len(self.combined)


def _same(p: SpectralPolynomial, q: SpectralPolynomial) -> bool:
    if p.exact is not None and q.exact is not None:
        return p.exact == q.exact
    return coefficient_distance(p.coeffs, q.coeffs) <= MERGE_TOL


def tensor_phi(a: SpectralPolynomialSet, b: SpectralPolynomialSet) -> SpectralPolynomialSet:
    """Phi(z; G □ H) from Phi(z; G) and Phi(z; H).

    Every product phi_i psi_j appears with multiplicity m_i m_j; equal
    polynomials are merged and their multiplicities added.
    """
    merged: list[SpectralPolynomial] = []
    for p in a:
        for q in b:
            coeffs = tuple(float(x) for x in np.convolve(p.coeffs, q.coeffs))
            exact = None
            if p.exact is not None and q.exact is not None:
                exact = tuple(poly_mul(list(p.exact), list(q.exact)))
            new = SpectralPolynomial(coeffs, p.mult * q.mult, exact)
            for idx, old in enumerate(merged):
                if _same(old, new):
                    merged[idx] = SpectralPolynomial(old.coeffs, old.mult + new.mult, old.exact)
                    break
            else:
                merged.append(new)
    merged.sort(key=lambda s: tuple(-x for x in s.coeffs))
    return SpectralPolynomialSet(tuple(merged), conjectured=a.conjectured or b.conjectured)


def product_spectrum(factors: Sequence[SpectralPolynomialSet]) -> ProductSpectrum:
    combined = reduce(tensor_phi, factors, IDENTITY_FACTOR)
    return ProductSpectrum(tuple(factors), combined)


@dataclass(frozen=True, eq=False)
class SumDecomposition:
    f: np.ndarray
    matrix: Optional[np.ndarray] = None


def tensor_m(pairs: Sequence[tuple[Sequence[float], Sequence[float]]],
             G=None, H=None) -> SumDecomposition:
    """Combine (g, h) pairs into M(f; G □ H) = sum_q M(g_q; G) ⊗ M(h_q; H).

    The table F[k, l] = sum_q g_q[k] h_q[l] must depend only on k + l; its
    common values are returned as ``f``.  When explicit factor graphs are
    given the Kronecker sum is also assembled.
    """
    if not pairs:
        raise ValueError("need at least one (g, h) pair")
    gs = [np.asarray(g, dtype=float) for g, _ in pairs]
    hs = [np.asarray(h, dtype=float) for _, h in pairs]
    dg, dh = gs[0].size, hs[0].size
    if any(g.size != dg for g in gs) or any(h.size != dh for h in hs):
        raise ValueError("all g (resp. h) vectors must have the same length")
    F = sum(np.outer(g, h) for g, h in zip(gs, hs))
    scale = max(1.0, float(np.max(np.abs(F))))
    f = np.empty(dg + dh - 1)
    for s in range(dg + dh - 1):
        diag = np.array([F[k, s - k] for k in range(max(0, s - dh + 1), min(s, dg - 1) + 1)])
        if np.max(diag) - np.min(diag) > SUM_TOL * scale:
            raise NotSumDecomposable(f"sum_q g_k h_l is not a function of k + l at k + l = {s}")
        f[s] = diag[0]

    matrix = None
    if G is not None and H is not None:
        from gdspec.oracle import all_pairs_distances, assemble_m

        dG, dH = all_pairs_distances(G), all_pairs_distances(H)
        matrix = sum(np.kron(assemble_m(dG, g), assemble_m(dH, h)) for g, h in zip(gs, hs))
    return SumDecomposition(f, matrix)


def adjacency_pairs(dG: int, dH: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(g, h) pairs giving A(G □ H) = A(G) ⊗ I + I ⊗ A(H)."""
    e0g, e1g = np.eye(dG + 1)[0], np.eye(dG + 1)[1]
    e0h, e1h = np.eye(dH + 1)[0], np.eye(dH + 1)[1]
    return [(e1g, e0h), (e0g, e1h)]


def classical_distance_pairs(dG: int, dH: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(g, h) pairs giving D(G □ H) = D(G) ⊗ J + J ⊗ D(H)."""
    return [
        (np.arange(dG + 1, dtype=float), np.ones(dH + 1)),
        (np.ones(dG + 1), np.arange(dH + 1, dtype=float)),
    ]


def power_pairs(dG: int, dH: int, z: float) -> list[tuple[np.ndarray, np.ndarray]]:
    return [(z ** np.arange(dG + 1), z ** np.arange(dH + 1))]
