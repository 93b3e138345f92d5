import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdspec.errors import NoConvergence
from gdspec.linalg import _round_robin, jacobi_eigenvalues, tridiagonal_eigenvalues


def test_round_robin_covers_every_pair_once():
    for n in (2, 5, 8, 11):
        seen = set()
        for p, q in _round_robin(n):
            idx = set(p.tolist()) | set(q.tolist())
            assert len(idx) == 2 * len(p)  # disjoint within a round
            seen.update(tuple(sorted(x)) for x in zip(p.tolist(), q.tolist()))
        assert len(seen) == n * (n - 1) // 2


def test_tridiagonal_known_spectrum():
    # path P_n adjacency: 2 cos(pi k / (n+1))
    n = 9
    vals = tridiagonal_eigenvalues(np.zeros(n), np.ones(n - 1))
    expect = np.sort(2 * np.cos(np.pi * np.arange(1, n + 1) / (n + 1)))[::-1]
    assert np.allclose(vals, expect, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_tridiagonal_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    diag, off = rng.normal(size=n), rng.normal(size=n - 1)
    T = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    assert np.allclose(tridiagonal_eigenvalues(diag, off), np.linalg.eigvalsh(T)[::-1], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    M = M + M.T
    err = np.max(np.abs(jacobi_eigenvalues(M) - np.linalg.eigvalsh(M)[::-1]))
    assert err < 1e-11 * max(1.0, np.linalg.norm(M))


def test_jacobi_repeated_eigenvalues():
    J = np.ones((7, 7))
    assert np.allclose(jacobi_eigenvalues(J), [7, 0, 0, 0, 0, 0, 0], atol=1e-13)


def test_jacobi_reports_nonconvergence():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(12, 12))
    with pytest.raises(NoConvergence):
        jacobi_eigenvalues(M + M.T, max_sweeps=1)
