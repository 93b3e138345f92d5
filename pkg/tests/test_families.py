from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import phi_for, table_for
from gdspec.drg import IntersectionArray, spectral_polynomials, spectral_table
from gdspec.errors import OutOfRange, Unavailable, UnknownGraph, UnsupportedFamily
from gdspec.families import (
    CROWN_NOTE,
    FamilySpec,
    closed_form_phi,
    crown_uniform_pd,
    feasible_srg_parameters,
    intersection_array,
    order,
    parse_family,
    srg_uniform_pd,
    taylor_eigenpair,
    taylor_two_path_dual,
    taylor_uniform_pd,
)
from gdspec.oracle import check_distance_regular, construct
from gdspec.positivity import uniform_pd


class TestParsing:
    @pytest.mark.parametrize("text, kind, params", [
        ("hamming:8,2", "hamming", (8, 2)),
        ("johnson:9,2", "johnson", (9, 2)),
        ("srg:10,3,0,1", "srg", (10, 3, 0, 1)),
        ("taylor:27,10", "taylor", (27, 10)),
        ("crown:5", "crown", (5,)),
        ("cubic:heawood", "cubic", ("heawood",)),
        ("cubic:Heawood", "cubic", ("heawood",)),
    ])
    def test_examples(self, text, kind, params):
        spec = parse_family(text)
        assert (spec.kind, spec.params) == (kind, params)

    @pytest.mark.parametrize("text, err", [
        ("nonsense", UnknownGraph), ("foo:1", UnknownGraph), ("hamming:a,b", UnknownGraph),
        ("hamming:0,2", OutOfRange), ("hamming:3,1", OutOfRange), ("johnson:5,3", OutOfRange),
        ("srg:10,3,0,0", OutOfRange), ("srg:10,3,0,2", OutOfRange), ("taylor:5,5", OutOfRange),
        ("crown:2", OutOfRange), ("cubic:tutte", UnknownGraph), ("cubic:coxeter", UnsupportedFamily),
        ("cubic:foster", UnsupportedFamily),
    ])
    def test_rejects(self, text, err):
        with pytest.raises(err):
            parse_family(text)


class TestIntersectionArrays:
    @pytest.mark.parametrize("spec, b, c", [
        ("cubic:petersen", (3, 2), (1, 1)),
        ("cubic:desargues", (3, 2, 2, 1, 1), (1, 1, 2, 2, 3)),
        ("cubic:cube", (3, 2, 1), (1, 2, 3)),
        ("hamming:3,2", (3, 2, 1), (1, 2, 3)),
        ("cubic:pappus", (3, 2, 2, 1), (1, 1, 2, 3)),
        ("cubic:heawood", (3, 2, 2), (1, 1, 3)),
        ("johnson:7,3", (12, 6, 2), (1, 4, 9)),
        ("crown:5", (4, 3, 1), (1, 3, 4)),
        ("taylor:27,10", (27, 10, 1), (1, 10, 27)),
    ])
    def test_examples(self, spec, b, c):
        assert intersection_array(parse_family(spec)) == IntersectionArray(b, c)

    @pytest.mark.parametrize("spec", [
        "complete:5", "cycle:7", "cycle:8", "hamming:2,2", "hamming:4,3", "hamming:3,4",
        "johnson:6,2", "johnson:8,3", "johnson:9,4", "srg:10,3,0,1", "srg:9,4,1,2", "srg:16,6,2,2",
        "srg:15,8,4,4", "srg:9,6,3,6", "crown:3", "crown:4", "crown:6", "cubic:k4", "cubic:utility",
        "cubic:cube", "cubic:petersen", "cubic:heawood", "cubic:pappus", "cubic:desargues",
        "cubic:dodecahedral",
    ])
    def test_oracle_agrees(self, spec):
        fam = parse_family(spec)
        g = construct(fam)
        assert g.n_vertices == order(fam)
        assert check_distance_regular(g) == intersection_array(fam)

    def test_heawood_graph_shape(self):
        g = construct("cubic:heawood")
        assert g.n_vertices == 14 and set(g.degrees().tolist()) == {3}
        assert intersection_array(parse_family("cubic:heawood")).d == 3


CLOSED_FORM_CASES = (
    ["cubic:utility", "cubic:petersen", "cubic:heawood", "cubic:pappus", "cubic:desargues",
     "cubic:dodecahedral", "cubic:k4", "cubic:cube"]
    + [f"hamming:{d},{q}" for d in range(1, 7) for q in range(2, 5)]
    + [f"johnson:{n},2" for n in range(4, 11)]
    + ["srg:10,3,0,1", "srg:9,4,1,2", "srg:16,6,2,2", "srg:5,2,0,1", "srg:13,6,2,3", "srg:27,10,1,5"]
    + ["taylor:27,10", "taylor:15,6", "taylor:5,2", "crown:4", "crown:5", "crown:7"]
)


class TestClosedForms:
    @pytest.mark.parametrize("spec", CLOSED_FORM_CASES)
    def test_matches_computed(self, spec):
        closed = closed_form_phi(parse_family(spec))
        computed = spectral_polynomials(spectral_table(intersection_array(parse_family(spec))))
        assert not closed.conjectured
        assert closed.order == computed.order
        assert closed.matches(computed, tol=1e-9)

    def test_hamming_multiplicities_are_binomial(self):
        phis = closed_form_phi(FamilySpec("hamming", (4, 3)))
        assert sorted(p.mult for p in phis) == sorted([1, 8, 24, 32, 16])

    def test_johnson_d2_closed_form(self):
        n = 9
        phis = closed_form_phi(FamilySpec("johnson", (n, 2)))
        want = [(1, 2 * (n - 2), (n - 2) * (n - 3) // 2), (1, n - 4, -(n - 3)), (1, -2, 1)]
        assert [tuple(int(x) for x in p.exact) for p in phis] == want

    def test_taylor_phi2(self):
        k, mu = 27, 10
        th = taylor_eigenpair(k, mu)
        target = np.convolve([1, -1], [1, th.theta_plus + 1, 1])
        assert any(np.allclose(p.coeffs, target) for p in closed_form_phi(FamilySpec("taylor", (k, mu))))

    def test_johnson_conjecture_flag(self):
        phis = closed_form_phi(FamilySpec("johnson", (9, 3)))
        assert phis.conjectured and "CONJECTURED" in phis.note
        assert phis.matches(phi_for("johnson:9,3"), tol=1e-8)

    def test_cycles_have_no_closed_form(self):
        with pytest.raises(Unavailable):
            closed_form_phi(FamilySpec("cycle", (7,)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(2, 12))
def test_johnson_conjecture_property(d, n):
    n = max(n, 2 * d)
    spec = FamilySpec("johnson", (n, d))
    closed = closed_form_phi(spec)
    computed = spectral_polynomials(spectral_table(intersection_array(spec)))
    assert closed.matches(computed, tol=1e-8)


class TestSrgCriterion:
    def test_petersen(self):
        v = srg_uniform_pd(10, 3, 0, 1)
        assert v.uniform and v.tau == pytest.approx(-2) and v.distance_singular

    def test_tau_minus_two_singular_distance_matrix(self):
        for params in [(10, 3, 0, 1), (9, 4, 1, 2), (15, 8, 4, 4)]:
            v = srg_uniform_pd(*params)
            assert v.distance_singular
            t = table_for(f"srg:{','.join(map(str, params))}")
            assert np.min(np.abs(t.coeff @ np.arange(3))) < 1e-9

    def test_multipartite_not_uniform(self):
        v = srg_uniform_pd(9, 6, 3, 6)
        assert not v.uniform and v.tau == pytest.approx(-3)
        assert v.z_star == pytest.approx(0.5)
        assert v.interval_bound == pytest.approx(1.0)

    def test_scan_against_polynomials(self):
        params = feasible_srg_parameters(50)
        assert len(params) > 100
        for p in params:
            v = srg_uniform_pd(*p)
            t = spectral_table(intersection_array(FamilySpec("srg", p)))
            u = uniform_pd(spectral_polynomials(t))
            assert u.uniform == v.uniform, p
            if not v.uniform:
                assert u.z_star == pytest.approx(v.z_star, abs=1e-9)


class TestTaylorCriterion:
    def test_halved_six_cube_boundary(self):
        v = taylor_uniform_pd(15, 6)
        assert v.uniform and v.triple_root

    def test_gosset(self):
        v = taylor_uniform_pd(27, 10)
        assert v.uniform and v.triple_root

    def test_crown5(self):
        v = crown_uniform_pd(5)
        assert not v.uniform
        assert v.theta.theta_minus == pytest.approx(-4.0)  # roots of z^2 + 3z - 4

    def test_crown_boundary_and_note(self):
        assert crown_uniform_pd(3).uniform and crown_uniform_pd(4).uniform
        assert crown_uniform_pd(4).triple_root
        assert all(not crown_uniform_pd(n).uniform for n in range(5, 12))
        assert "7/2" in CROWN_NOTE and "n <= 4" in CROWN_NOTE

    def test_scan(self):
        for k in range(2, 41):
            for mu in range(1, k):
                v = taylor_uniform_pd(k, mu)
                t = spectral_table(IntersectionArray((k, mu, 1), (1, mu, k)), strict=False)
                assert uniform_pd(spectral_polynomials(t)).uniform == v.uniform, (k, mu)

    @pytest.mark.parametrize("k, mu", [(5, 2), (10, 4), (27, 10), (15, 6)])
    def test_two_path_duality(self, k, mu):
        dual = taylor_two_path_dual(k, mu)
        th = taylor_eigenpair(k, mu)
        assert dual.theta_plus == pytest.approx(-th.theta_minus)
        assert dual.theta_minus == pytest.approx(-th.theta_plus)
