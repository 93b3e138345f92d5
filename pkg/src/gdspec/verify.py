"""Theory-versus-oracle comparison of generalized distance spectra."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from gdspec.drg import SpectralPolynomialSet, spectral_polynomials, spectral_table
from gdspec.families import FamilySpec, intersection_array, parse_family
from gdspec.oracle import (
    ExplicitGraph,
    all_pairs_distances,
    assemble_m,
    check_distance_regular,
    construct,
    dense_sym_eigen,
)
from gdspec.products import product_spectrum

LINEARITY_TOL = 1e-8


@dataclass
class VerifyReport:
    graph: str
    n_vertices: int
    diameter: int
    route: str  # "drg" or "product"
    trials: int = 0
    max_error: float = 0.0
    intersection_array: Optional[str] = None
    array_matches_family: Optional[bool] = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "n_vertices": self.n_vertices,
            "diameter": self.diameter,
            "route": self.route,
            "trials": self.trials,
            "max_error": self.max_error,
            "intersection_array": self.intersection_array,
            "array_matches_family": self.array_matches_family,
            "failures": list(self.failures),
            "ok": self.ok,
        }


def theory_phi(spec: Union[str, FamilySpec]) -> SpectralPolynomialSet:
    """Phi(z;G) from intersection arrays; ``a*b`` strings go through the product rule."""
    if isinstance(spec, str) and "*" in spec:
        factors = [theory_phi(p.strip()) for p in spec.split("*") if p.strip()]
        return product_spectrum(factors).combined
    if isinstance(spec, str):
        spec = parse_family(spec)
    return spectral_polynomials(spectral_table(intersection_array(spec)))


def _theory_from_graph(g: ExplicitGraph, dist) -> tuple[Optional[SpectralPolynomialSet], str]:
    ia = check_distance_regular(g, dist)
    if not ia:
        return None, ia.reason
    return spectral_polynomials(spectral_table(ia)), str(ia)


def verify_linearity(graph: Union[str, FamilySpec, ExplicitGraph], trials: int = 20,
                     seed: int = 0, tol: float = LINEARITY_TOL) -> VerifyReport:
    """Compare theory eigenvalues with a dense eigensolve of M(f;G) for random f.

    Agreement is measured multiset-wise (both lists sorted) and must stay
    below ``tol * ||f||``.
    """
    rng = np.random.default_rng(seed)
    g = graph if isinstance(graph, ExplicitGraph) else construct(graph)
    name = str(graph) if not isinstance(graph, ExplicitGraph) else (g.name or "edges")
    dist = all_pairs_distances(g)
    report = VerifyReport(name, g.n_vertices, dist.diameter, "drg")

    if isinstance(graph, str) and "*" in graph:
        report.route = "product"
        phis = theory_phi(graph)
    else:
        phis, label = _theory_from_graph(g, dist)
        if phis is None:
            report.failures.append(f"not distance-regular: {label}")
            return report
        report.intersection_array = label
        if not isinstance(graph, ExplicitGraph):
            spec = parse_family(graph) if isinstance(graph, str) else graph
            report.array_matches_family = label == str(intersection_array(spec))
            if not report.array_matches_family:
                report.failures.append(f"array {label} differs from family {intersection_array(spec)}")

    if phis.degree != dist.diameter:
        report.failures.append(f"theory degree {phis.degree} vs diameter {dist.diameter}")
        return report
    for t in range(trials):
        f = rng.uniform(-1.0, 1.0, dist.diameter + 1)
        theory = np.sort(phis.eigenvalues(f))
        dense = np.sort(dense_sym_eigen(assemble_m(dist, f)).values)
        if theory.size != dense.size:
            report.failures.append(f"trial {t}: {theory.size} theory vs {dense.size} dense eigenvalues")
            continue
        err = float(np.max(np.abs(theory - dense)))
        report.max_error = max(report.max_error, err / float(np.linalg.norm(f)))
        if err > tol * float(np.linalg.norm(f)):
            report.failures.append(f"trial {t}: error {err:.3g}")
    report.trials = trials
    return report
