import json
from fractions import Fraction
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TEST_GRAPHS, phi_for, table_for
from gdspec.drg import (
    IntersectionArray,
    SpectralPolynomial,
    SpectralPolynomialSet,
    SpectralTable,
    build_q_matrix,
    classical_distance_eigenvalues,
    eigenvalue_for_f,
    eigenvalues,
    leading_coefficients,
    p_polynomials,
    poly_product,
    shell_sizes,
    spectral_polynomials,
    spectral_table,
)
from gdspec.errors import (
    DimensionMismatch,
    InvalidIntersectionArray,
    MultiplicityNotIntegral,
    NonIntegralShell,
)
from gdspec.families import FamilySpec, intersection_array, parse_family
from gdspec.oracle import all_pairs_distances, assemble_m, construct, dense_sym_eigen

PETERSEN = IntersectionArray((3, 2), (1, 1))
HEAWOOD = IntersectionArray((3, 2, 2), (1, 1, 3))


def _srg(k, alpha, beta):
    return IntersectionArray((k, k - alpha - 1), (1, beta))


class TestIntersectionArray:
    def test_derived_quantities(self):
        ia = HEAWOOD
        assert (ia.d, ia.k) == (3, 3)
        assert ia.a == (0, 0, 0, 0)
        assert str(ia) == "{3,2,2;1,1,3}"

    def test_json_round_trip(self):
        ia = IntersectionArray((3, 2, 2, 1, 1), (1, 1, 2, 2, 3))
        text = json.dumps(ia.to_dict())
        assert json.loads(text) == {"b": [3, 2, 2, 1, 1], "c": [1, 1, 2, 2, 3]}
        assert IntersectionArray.from_dict(json.loads(text)) == ia

    @pytest.mark.parametrize("b, c", [((), ()), ((3, 2), (1,)), ((3, 0), (1, 1)),
                                      ((3, 2), (0, 1)), ((3, 3), (1, 1)), ((3.5,), (1,))])
    def test_rejects_invalid(self, b, c):
        with pytest.raises(InvalidIntersectionArray):
            IntersectionArray(b, c)


class TestShellSizes:
    @pytest.mark.parametrize("ia, shells", [
        (IntersectionArray((3,), (1,)), (1, 3)),
        (PETERSEN, (1, 3, 6)),
        # oracle BFS on the explicit Heawood graph
        (HEAWOOD, (1, 3, 6, 4)),
    ])
    def test_examples(self, ia, shells):
        s = shell_sizes(ia)
        assert s.n == shells
        assert s.total == sum(shells)

    def test_non_integral(self):
        with pytest.raises(NonIntegralShell):
            shell_sizes(IntersectionArray((5, 2), (1, 4)))


class TestQMatrix:
    def test_srg_uses_a1_equal_alpha(self):
        k, alpha, beta = 6, 1, 3
        Q = build_q_matrix(_srg(k, alpha, beta))
        assert np.array_equal(Q, [[0, k, 0], [1, alpha, k - alpha - 1], [0, beta, k - beta]])

    def test_taylor(self):
        k, mu = 10, 4
        Q = build_q_matrix(IntersectionArray((k, mu, 1), (1, mu, k)))
        assert np.array_equal(Q, [[0, k, 0, 0], [1, k - mu - 1, mu, 0],
                                  [0, mu, k - mu - 1, 1], [0, 0, k, 0]])

    def test_complete(self):
        n = 6
        assert np.array_equal(build_q_matrix(IntersectionArray((n - 1,), (1,))), [[0, n - 1], [1, n - 2]])

    @pytest.mark.parametrize("spec", TEST_GRAPHS)
    def test_row_sums_equal_k(self, spec):
        ia = intersection_array(parse_family(spec))
        assert np.allclose(build_q_matrix(ia).sum(axis=1), ia.k)


class TestEigenvalues:
    @pytest.mark.parametrize("k, alpha, beta", [(3, 0, 1), (6, 1, 3), (10, 3, 6), (16, 6, 2)])
    def test_srg_formula(self, k, alpha, beta):
        disc = sqrt((alpha - beta) ** 2 + 4 * (k - beta))
        expect = [k, (alpha - beta + disc) / 2, (alpha - beta - disc) / 2]
        assert np.allclose(eigenvalues(build_q_matrix(_srg(k, alpha, beta))), expect, atol=1e-12)

    def test_petersen(self):
        assert np.allclose(eigenvalues(build_q_matrix(PETERSEN)), [3, 1, -2], atol=1e-13)

    @pytest.mark.parametrize("n", [4, 5, 7, 10])
    def test_johnson_d2(self, n):
        ia = intersection_array(FamilySpec("johnson", (n, 2)))
        assert np.allclose(eigenvalues(build_q_matrix(ia)), [2 * n - 4, n - 4, -2], atol=1e-12)


class TestPolynomials:
    @pytest.mark.parametrize("spec", TEST_GRAPHS)
    def test_base_and_leading(self, spec):
        ia = table_for(spec).ia
        fam = p_polynomials(ia)
        assert fam.p[0] == (1,) and fam.p[1] == (0, 1)
        lead = Fraction(1)
        for m, coeff in enumerate(leading_coefficients(fam)):
            assert len(fam.p[m]) == m + 1
            assert coeff == lead
            if m < ia.d:
                lead /= ia.c[m]

    @pytest.mark.parametrize("k, alpha, beta", [(3, 0, 1), (6, 1, 3), (10, 3, 6)])
    def test_srg_p2(self, k, alpha, beta):
        fam = p_polynomials(_srg(k, alpha, beta))
        assert fam.p[2] == (Fraction(-k, beta), Fraction(-alpha, beta), Fraction(1, beta))

    def test_q_rows_are_partial_sums(self):
        fam = p_polynomials(HEAWOOD)
        P, Qm = fam.p_matrix(), fam.q_matrix()
        assert np.allclose(np.cumsum(P, axis=0), Qm)

    @pytest.mark.parametrize("n", [5, 8, 11])
    def test_johnson_p2_at_minus_two(self, n):
        t = table_for(f"johnson:{n},2")
        assert t.coeff[2, 2] == pytest.approx(1.0, abs=1e-12)
        assert t.exact_coeff[2][2] == 1


class TestSpectralTable:
    @pytest.mark.parametrize("spec", TEST_GRAPHS)
    def test_invariants(self, spec):
        t = table_for(spec)
        n = np.array(t.shells.n, dtype=float)
        assert t.lambdas[0] == t.ia.k
        assert np.array_equal(t.coeff[0], n)
        assert np.allclose(t.coeff[:, 0], 1.0)
        assert np.allclose(t.coeff[1:].sum(axis=1), 0.0, atol=1e-9 * t.order)
        assert np.all(np.abs(t.coeff) <= n[None, :] + 1e-9)
        assert sum(t.mults) == t.order
        assert all(a > b for a, b in zip(t.lambdas, t.lambdas[1:]))

    def test_petersen_multiplicities(self):
        # oracle dense eigensolve of the Petersen adjacency matrix
        t = table_for("cubic:petersen")
        assert t.mults == (1, 5, 4)
        groups = dense_sym_eigen(construct("cubic:petersen").adjacency.astype(float)).groups
        assert [m for _, m in groups] == list(t.mults)

    def test_exact_when_integral(self):
        assert table_for("hamming:4,2").is_exact()
        assert not table_for("cubic:heawood").is_exact()

    def test_non_integral_multiplicity(self):
        with pytest.raises(MultiplicityNotIntegral):
            spectral_table(IntersectionArray((3, 2), (1, 2)))
        lenient = spectral_table(IntersectionArray((3, 2), (1, 2)), strict=False)
        assert lenient.mults is None
        assert lenient.raw_mults[1] == pytest.approx(4.0606601717798, abs=1e-9)

    def test_json_round_trip(self):
        t = table_for("cubic:pappus")
        back = SpectralTable.from_dict(json.loads(json.dumps(t.to_dict())), t.ia)
        assert np.array_equal(back.coeff, t.coeff)
        assert back.mults == t.mults and back.lambdas == t.lambdas

    @pytest.mark.parametrize("spec", ["cubic:petersen", "cubic:heawood", "cubic:dodecahedral",
                                      "hamming:3,3", "johnson:8,3"])
    def test_linearity_against_oracle(self, spec, rng):
        phis = phi_for(spec)
        dist = all_pairs_distances(construct(spec))
        for _ in range(100):
            f = rng.normal(size=dist.diameter + 1)
            dense = dense_sym_eigen(assemble_m(dist, f)).values
            assert np.max(np.abs(np.sort(dense) - np.sort(phis.eigenvalues(f)))) <= 1e-8 * np.linalg.norm(f)


class TestEigenvalueForF:
    def test_examples(self):
        t = table_for("cubic:desargues")
        d = t.d
        assert np.allclose(eigenvalue_for_f(t, np.eye(d + 1)[0]), 1.0)
        ones = eigenvalue_for_f(t, np.ones(d + 1))
        assert ones[0] == pytest.approx(t.order) and np.allclose(ones[1:], 0, atol=1e-9)
        assert np.allclose(eigenvalue_for_f(t, np.eye(d + 1)[1]), t.lambdas)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            eigenvalue_for_f(table_for("cubic:petersen"), [1, 0])


class TestSpectralPolynomials:
    def _check(self, phis: SpectralPolynomialSet, factored):
        expected = SpectralPolynomialSet(tuple(
            SpectralPolynomial(tuple(poly_product(f)), 0) for f in factored))
        assert phis.matches(expected, tol=1e-12, check_mults=False)

    def test_petersen(self):
        self._check(phi_for("cubic:petersen"), [[(1, 3, 6)], [(1, -1), (1, -1)], [(1, -1), (1, 2)]])

    def test_utility(self):
        self._check(phi_for("cubic:utility"),
                    [[(1, 1), (1, 2)], [(1, -1), (1, -2)], [(1, -1), (1, 1)]])

    def test_heawood_contains_sqrt2_factor(self):
        target = poly_product([(1, -1), (1, 1), (1, -sqrt(2))])
        assert any(np.allclose(p.coeffs, target, atol=1e-12) for p in phi_for("cubic:heawood"))

    @pytest.mark.parametrize("spec", TEST_GRAPHS)
    def test_vanish_at_one_and_factor_identity(self, spec):
        phis, t = phi_for(spec), table_for(spec)
        assert phis.order == t.order
        assert np.allclose(phis.polys[0].coeffs, t.shells.n)
        for p in phis.polys[1:]:
            assert abs(p(1.0)) < 1e-9 * t.order
        fam = p_polynomials(t.ia)
        for lam in t.lambdas[1:]:
            pd = np.polyval(np.array(fam.p[-1], dtype=float)[::-1], lam)
            qd1 = np.polyval(np.array(fam.q[-2], dtype=float)[::-1], lam)
            assert pd == pytest.approx(-qd1, abs=1e-8)

    @pytest.mark.parametrize("spec", ["cubic:petersen", "cubic:cube", "cubic:heawood"])
    def test_derivatives_are_adjacency_and_distance_eigenvalues(self, spec):
        phis, t = phi_for(spec), table_for(spec)
        dist = all_pairs_distances(construct(spec))
        adj = dense_sym_eigen(assemble_m(dist, np.eye(t.d + 1)[1])).values
        dmat = dense_sym_eigen(dist.dist.astype(float)).values
        theory_adj = np.repeat([p.derivative(0.0) for p in phis], [p.mult for p in phis])
        theory_d = np.repeat([p.derivative(1.0) for p in phis], [p.mult for p in phis])
        assert np.allclose(np.sort(theory_adj), np.sort(adj), atol=1e-9)
        assert np.allclose(np.sort(theory_d), np.sort(dmat), atol=1e-9)
        assert np.allclose(classical_distance_eigenvalues(t), [p.derivative(1.0) for p in phis])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["hamming", "johnson"]), st.integers(1, 7), st.integers(2, 14))
def test_family_tables_are_consistent(kind, d, x):
    params = (d, x) if kind == "hamming" else (max(x, 2 * d), d)
    if kind == "hamming" and x > 6:
        params = (d, 2 + x % 5)
    t = spectral_table(intersection_array(FamilySpec(kind, params)))
    assert sum(t.mults) == t.order
    assert np.allclose(t.coeff[1:].sum(axis=1), 0, atol=1e-9 * t.order)
    phis = spectral_polynomials(t)
    f = np.linspace(1, 0, t.d + 1)
    assert phis.eigenvalues(f).sum() == pytest.approx(t.order, rel=1e-9)  # trace = n f_0
