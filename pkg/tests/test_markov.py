from fractions import Fraction as F
from math import sqrt

import numpy as np
import pytest

from conftest import table_for
from gdspec.errors import OutOfRange
from gdspec.markov import (
    dtmc_objective,
    explicit_ctmc_gap,
    explicit_nu_max,
    hamming_top_two,
    johnson_probe,
    mixing_coefficients,
    solve_ctmc,
    solve_dtmc,
    uniform_solution_check,
)
from gdspec.oracle import all_pairs_distances, construct

H82_NU = [F(7, 9), F(5, 9), F(1, 3), F(1, 9), F(5, 123), F(1, 69), F(1, 255), F(0)]

H82_REFERENCE_MU = [
    [F(1, 9), F(8, 9)],
    [0, F(2, 9), F(7, 9)],
    [0, 0, F(1, 3), F(2, 3)],
    [0, 0, 0, F(4, 9), F(5, 9)],
    [F(1, 123), F(8, 123), F(8, 123), F(16, 123), F(50, 123), F(40, 123)],
    [0, F(5, 138), F(35, 276), F(14, 69), F(35, 138), F(35, 138), F(35, 276)],
    [F(1, 255), F(8, 255), F(28, 255), F(56, 255), F(14, 51), F(56, 255), F(28, 255), F(8, 255)],
    [F(1, 256), F(1, 32), F(7, 64), F(7, 32), F(35, 128), F(7, 32), F(7, 64), F(1, 32), F(1, 256)],
]

CUBIC_NU = {
    "cubic:heawood": [(29 + 12 * sqrt(2)) / 79, 1 - 6 / (sqrt(2) + 6), 0.0],
    "cubic:pappus": [(5 + 2 * sqrt(3)) / 13, 1 - 8 / (sqrt(3) + 9), 1 / 11, 0.0],
    "cubic:desargues": [5 / 7, 1 / 3, 1 / 7, 1 / 19, 0.0],
    "cubic:dodecahedral": [sqrt(5) / 3, 5 / 13, 0.137, 1 / 19, 0.0],
}


class TestDtmc:
    @pytest.mark.parametrize("dp", range(1, 9))
    def test_hamming_8_2_table(self, dp):
        t = table_for("hamming:8,2")
        sol = solve_dtmc(t, dp)
        assert sol.exact and sol.value == H82_NU[dp - 1]
        assert dtmc_objective(t, H82_REFERENCE_MU[dp - 1]) == H82_NU[dp - 1]
        assert sum(sol.weights.weights) == 1

    @pytest.mark.parametrize("spec", sorted(CUBIC_NU))
    def test_cubic_tables(self, spec):
        t = table_for(spec)
        for dp, want in enumerate(CUBIC_NU[spec], start=1):
            tol = 5e-4 if (spec == "cubic:dodecahedral" and dp == 3) else 1e-9
            assert float(solve_dtmc(t, dp).value) == pytest.approx(want, abs=tol)

    def test_heawood_uniform_row(self):
        sol = solve_dtmc(table_for("cubic:heawood"), 3)
        assert np.allclose(sol.weights.as_float(), [1 / 14, 3 / 14, 3 / 7, 2 / 7], atol=1e-12)

    def test_dodecahedral_first_row(self):
        t = table_for("cubic:dodecahedral")
        sol = solve_dtmc(t, 1)
        assert np.allclose(sol.weights.as_float()[:2], [0, 1], atol=1e-12)
        assert float(dtmc_objective(t, [0.0, 1.0])) == pytest.approx(sqrt(5) / 3, abs=1e-12)

    @pytest.mark.parametrize("spec", ["cubic:petersen", "cubic:heawood", "cubic:desargues", "hamming:4,2"])
    def test_objective_on_explicit_graph(self, spec):
        t = table_for(spec)
        dist = all_pairs_distances(construct(spec))
        for dp in range(1, t.d + 1):
            sol = solve_dtmc(t, dp)
            dense = explicit_nu_max(dist, t.shells.n, sol.weights.as_float())
            assert dense == pytest.approx(float(sol.value), abs=1e-7)

    @pytest.mark.parametrize("spec", ["cubic:pappus", "cubic:dodecahedral", "johnson:8,3", "hamming:6,2"])
    def test_monotone_and_bounded(self, spec):
        t = table_for(spec)
        vals = [float(solve_dtmc(t, dp).value) for dp in range(1, t.d + 1)]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(0, abs=1e-12)
        assert all(0 <= v <= 1 for v in vals)
        D = mixing_coefficients(t)
        assert np.all(np.array(D, dtype=float) <= 1e-12)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            solve_dtmc(table_for("cubic:petersen"), 3)
        with pytest.raises(OutOfRange):
            solve_ctmc(table_for("cubic:petersen"), 0)


class TestCtmc:
    def test_complete(self):
        n = 7
        sol = solve_ctmc(table_for(f"complete:{n}"), 1)
        assert sol.value == F(n, n - 1) and sol.weights.weights[1] == 1

    def test_petersen_single_step(self):
        # only D[i][1] enters: gap = -max_i D[i][1] = 1 - 1/3
        sol = solve_ctmc(table_for("cubic:petersen"), 1)
        assert sol.value == F(2, 3)
        dist = all_pairs_distances(construct("cubic:petersen"))
        assert explicit_ctmc_gap(dist, (1, 3, 6), sol.weights.as_float()) == pytest.approx(2 / 3, abs=1e-10)

    @pytest.mark.parametrize("spec", ["cubic:petersen", "cubic:heawood", "hamming:4,2", "johnson:7,2"])
    def test_full_range_gap(self, spec):
        t = table_for(spec)
        n = t.order
        sol = solve_ctmc(t, t.d)
        assert float(sol.value) == pytest.approx(n / (n - 1), abs=1e-12)
        rho = np.array(t.shells.n[1:], dtype=float) / (n - 1)
        gens = np.asarray(mixing_coefficients(t), dtype=float)[1:, 1:] @ rho
        assert -gens.max() == pytest.approx(n / (n - 1))

    @pytest.mark.parametrize("spec", ["cubic:heawood", "cubic:desargues"])
    def test_generator_on_explicit_graph(self, spec):
        t = table_for(spec)
        dist = all_pairs_distances(construct(spec))
        for dp in range(1, t.d + 1):
            sol = solve_ctmc(t, dp)
            assert explicit_ctmc_gap(dist, t.shells.n, sol.weights.as_float()) == pytest.approx(
                float(sol.value), abs=1e-7)


class TestUniformSolution:
    def test_hamming_last_row(self):
        sol = uniform_solution_check(table_for("hamming:8,2"))
        assert sol.value == 0
        assert list(sol.weights.weights) == H82_REFERENCE_MU[-1]

    def test_complete(self):
        n = 5
        sol = uniform_solution_check(table_for(f"complete:{n}"))
        assert list(sol.weights.weights) == [F(1, n), F(n - 1, n)]

    def test_desargues(self):
        sol = uniform_solution_check(table_for("cubic:desargues"))
        assert list(sol.weights.weights) == [F(1, 20), F(3, 20), F(3, 10), F(3, 10), F(3, 20), F(1, 20)]


class TestTopTwo:
    @pytest.mark.parametrize("dp, idx, vals", [(2, (1, 2), (F(2, 9), F(7, 9))),
                                               (4, (3, 4), (F(4, 9), F(5, 9))),
                                               (1, (0, 1), (F(1, 9), F(8, 9)))])
    def test_h82_examples(self, dp, idx, vals):
        chk = hamming_top_two(8, dp)
        w = chk.weights.weights
        assert (w[idx[0]], w[idx[1]]) == vals
        assert chk.agrees

    @pytest.mark.parametrize("d", [8, 10])
    def test_observation(self, d):
        for dp in range(1, d // 2 + 1):
            chk = hamming_top_two(d, dp)
            assert chk.agrees, (d, dp, chk.top_two_value, chk.lp_value)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            hamming_top_two(8, 5)


def test_johnson_probe_trend():
    rows = johnson_probe()
    assert [r["n"] for r in rows] == [10, 14, 20, 30]
    # recorded trend: the optimum reaches the unit step at d' once n >= 14
    assert rows[-1]["distance_to_unit"] <= rows[0]["distance_to_unit"]
    for r in rows:
        assert r["nu_max"] <= r["unit_nu"] + 1e-12
