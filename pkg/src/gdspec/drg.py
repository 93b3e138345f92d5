"""Spectral data of a distance-regular graph from its intersection array.

The eigenvalues of M(f;G) for a distance-regular graph G of diameter d are
the d+1 linear functions ``sum_m f_m p_m(lambda_i)``, where the lambda_i are
the eigenvalues of the tridiagonal quotient matrix and p_m are the
distance polynomials of the three-term recurrence

    z p_m(z) = c_{m+1} p_{m+1}(z) + a_m p_m(z) + b_{m-1} p_{m-1}(z).

Polynomial coefficients are kept as exact rationals.  Eigenvalues that turn
out to be integers are recognised and carried exactly as well, so that
downstream tables (and linear programs built on them) stay rational where
they can.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from gdspec.errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    FactorizationResidual,
    InvalidIntersectionArray,
    MultiplicityNotIntegral,
    NonIntegralShell,
)
from gdspec.linalg import tridiagonal_eigenvalues

DISTINCT_TOL = 1e-8
FACTOR_TOL = 1e-9
MULT_TOL = 1e-6


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def poly_mul(a: Sequence, b: Sequence) -> list:
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_eval(coeffs: Sequence, x):
    acc = coeffs[-1] * 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_product(factors: Iterable[Sequence]) -> list:
    out: list = [1]
    for f in factors:
        out = poly_mul(out, list(f))
    return out


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionArray:
    """The array {b_0, ..., b_{d-1}; c_1, ..., c_d}."""

    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self) -> None:
        b = tuple(int(x) for x in self.b)
        c = tuple(int(x) for x in self.c)
        if any(int(x) != x for x in (*self.b, *self.c)):
            raise InvalidIntersectionArray("intersection numbers must be integers")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if len(b) == 0 or len(b) != len(c):
            raise InvalidIntersectionArray("b and c must be nonempty and of equal length")
        if any(x < 1 for x in b):
            raise InvalidIntersectionArray(f"b_i must be >= 1 for i < d, got {b}")
        if any(x < 1 for x in c):
            raise InvalidIntersectionArray(f"c_i must be >= 1, got {c}")
        if any(x < 0 for x in self.a):
            raise InvalidIntersectionArray(f"a_i = k - b_i - c_i must be >= 0, got {self.a}")

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def k(self) -> int:
        return self.b[0]

    @property
    def a(self) -> tuple[int, ...]:
        bs = self.b + (0,)
        cs = (0,) + self.c
        return tuple(self.k - bs[i] - cs[i] for i in range(self.d + 1))

    def to_dict(self) -> dict:
        return {"b": list(self.b), "c": list(self.c)}

    @classmethod
    def from_dict(cls, data: dict) -> "IntersectionArray":
        return cls(tuple(data["b"]), tuple(data["c"]))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"


@dataclass(frozen=True)
class ShellSizes:
    n: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.n)


@dataclass(frozen=True)
class PolynomialFamily:
    """Exact coefficient rows of p_0..p_d and of the partial sums q_0..q_d."""

    p: tuple[tuple[Fraction, ...], ...]
    q: tuple[tuple[Fraction, ...], ...]

    @property
    def d(self) -> int:
        return len(self.p) - 1

    def p_matrix(self) -> np.ndarray:
        """(d+1)x(d+1) lower-triangular float matrix; row m holds p_m."""
        return _rows_to_matrix(self.p)

    def q_matrix(self) -> np.ndarray:
        return _rows_to_matrix(self.q)


def _rows_to_matrix(rows) -> np.ndarray:
    size = len(rows)
    out = np.zeros((size, size))
    for m, row in enumerate(rows):
        out[m, : len(row)] = [float(x) for x in row]
    return out


@dataclass(frozen=True)
class SpectralTable:
    """Distinct eigenvalues, multiplicities and the table lambda_{i,m} = p_m(lambda_i).

    ``exact_lambdas[i]`` and ``exact_coeff[i]`` are set when lambda_i is an
    integer (then the whole row is rational); otherwise they are ``None``.
    ``mults`` is ``None`` for tables built with ``strict=False`` whose
    multiplicities fail the integrality check.
    """

    ia: IntersectionArray
    lambdas: tuple[float, ...]
    mults: Optional[tuple[int, ...]]
    coeff: np.ndarray
    shells: ShellSizes
    exact_lambdas: tuple[Optional[int], ...] = ()
    exact_coeff: tuple[Optional[tuple[Fraction, ...]], ...] = ()
    raw_mults: tuple[float, ...] = ()

    @property
    def d(self) -> int:
        return self.ia.d

    @property
    def order(self) -> int:
        return self.shells.total

    def is_exact(self) -> bool:
        return all(row is not None for row in self.exact_coeff)

    def to_dict(self) -> dict:
        return {
            "lambdas": [float(x) for x in self.lambdas],
            "mults": list(self.mults) if self.mults is not None else None,
            "coeff": [[float(x) for x in row] for row in self.coeff],
        }

    @classmethod
    def from_dict(cls, data: dict, ia: IntersectionArray) -> "SpectralTable":
        """Rebuild a table from its JSON form (exactness is not serialized)."""
        coeff = np.array(data["coeff"], dtype=float)
        return cls(
            ia=ia,
            lambdas=tuple(float(x) for x in data["lambdas"]),
            mults=tuple(int(x) for x in data["mults"]) if data["mults"] is not None else None,
            coeff=coeff,
            shells=shell_sizes(ia),
            exact_lambdas=(None,) * len(coeff),
            exact_coeff=(None,) * len(coeff),
        )


@dataclass(frozen=True)
class SpectralPolynomial:
    coeffs: tuple[float, ...]
    mult: int
    exact: Optional[tuple[Fraction, ...]] = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return poly_eval(np.asarray(self.coeffs, dtype=float), z)

    def derivative(self, z: float) -> float:
        dc = [m * c for m, c in enumerate(self.coeffs)][1:] or [0.0]
        return float(poly_eval(dc, z))

    def eigenvalue(self, f: Sequence[float]) -> float:
        if len(f) != len(self.coeffs):
            raise DimensionMismatch(f"f has length {len(f)}, expected {len(self.coeffs)}")
        return float(np.dot(self.coeffs, f))


@dataclass(frozen=True)
class SpectralPolynomialSet:
    """The multiset Phi(z;G) of spectral polynomials with multiplicities."""

    polys: tuple[SpectralPolynomial, ...]
    conjectured: bool = False
    note: str = field(default="", compare=False)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    @property
    def order(self) -> int:
        return sum(p.mult for p in self.polys)

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.polys)

    def evaluate(self, z) -> np.ndarray:
        return np.array([p(z) for p in self.polys])

    def eigenvalues(self, f: Sequence[float]) -> np.ndarray:
        """All eigenvalues of M(f;G), repeated by multiplicity, descending."""
        vals = []
        for p in self.polys:
            vals.extend([p.eigenvalue(f)] * p.mult)
        return np.sort(np.array(vals))[::-1]

    def matches(self, other: "SpectralPolynomialSet", tol: float = 1e-9,
                check_mults: bool = True) -> bool:
        """Multiset equality of the polynomials, coefficientwise within ``tol``."""
        if len(self) != len(other):
            return False
        unused = list(other.polys)
        for p in self.polys:
            for j, q in enumerate(unused):
                if check_mults and p.mult != q.mult:
                    continue
                if coefficient_distance(p.coeffs, q.coeffs) <= tol:
                    del unused[j]
                    break
            else:
                return False
        return True


def coefficient_distance(a: Sequence[float], b: Sequence[float]) -> float:
    size = max(len(a), len(b))
    x = np.zeros(size)
    y = np.zeros(size)
    x[: len(a)] = a
    y[: len(b)] = b
    return float(np.max(np.abs(x - y)))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def shell_sizes(ia: IntersectionArray) -> ShellSizes:
    """Shell sizes n_0 = 1, n_{i+1} = n_i b_i / c_{i+1}."""
    n = [1]
    for i in range(ia.d):
        num = n[-1] * ia.b[i]
        if num % ia.c[i] != 0:
            raise NonIntegralShell(
                f"n_{i + 1} = {n[-1]}*{ia.b[i]}/{ia.c[i]} is not an integer for {ia}"
            )
        n.append(num // ia.c[i])
    return ShellSizes(tuple(n))


def build_q_matrix(ia: IntersectionArray) -> np.ndarray:
    """Tridiagonal quotient matrix: superdiagonal b, subdiagonal c, diagonal a."""
    size = ia.d + 1
    Q = np.zeros((size, size))
    for i in range(size):
        Q[i, i] = ia.a[i]
        if i < ia.d:
            Q[i, i + 1] = ia.b[i]
            Q[i + 1, i] = ia.c[i]
    return Q


def eigenvalues(Q: np.ndarray) -> tuple[float, ...]:
    """Distinct eigenvalues of a quotient matrix, descending.

    Q is similar to the symmetric tridiagonal matrix with off-diagonal
    sqrt(Q[k,k+1] Q[k+1,k]), which is what gets diagonalised.
    """
    Q = np.asarray(Q, dtype=float)
    size = Q.shape[0]
    prod = np.array([Q[k, k + 1] * Q[k + 1, k] for k in range(size - 1)])
    if np.any(prod <= 0):
        raise DegenerateSpectrum("quotient matrix must have positive off-diagonal products")
    lam = tridiagonal_eigenvalues(np.diag(Q), np.sqrt(prod))
    scale = max(1.0, float(np.max(np.abs(lam))))
    gaps = -np.diff(lam)
    if np.any(gaps <= DISTINCT_TOL * scale):
        raise DegenerateSpectrum(f"eigenvalues not distinct: {lam}")
    return tuple(float(x) for x in lam)


def p_polynomials(ia: IntersectionArray) -> PolynomialFamily:
    d = ia.d
    a = ia.a
    p: list[list[Fraction]] = [[Fraction(1)], [Fraction(0), Fraction(1)]]
    for m in range(1, d):
        # c_{m+1} p_{m+1} = (z - a_m) p_m - b_{m-1} p_{m-1}
        zp = [Fraction(0)] + p[m]
        nxt = []
        for j in range(m + 2):
            v = zp[j]
            if j < len(p[m]):
                v -= a[m] * p[m][j]
            if j < len(p[m - 1]):
                v -= ia.b[m - 1] * p[m - 1][j]
            nxt.append(v / ia.c[m])
        p.append(nxt)
    p = p[: d + 1]
    q = []
    running = [Fraction(0)] * (d + 1)
    for row in p:
        for j, v in enumerate(row):
            running[j] += v
        q.append(tuple(running[: len(row)]))
    return PolynomialFamily(tuple(tuple(r) for r in p), tuple(q))


def _p_values_float(ia: IntersectionArray, x: float) -> np.ndarray:
    """p_0(x)..p_d(x) through the recurrence, in floating point."""
    a = ia.a
    vals = [1.0, x]
    for m in range(1, ia.d):
        vals.append(((x - a[m]) * vals[m] - ia.b[m - 1] * vals[m - 1]) / ia.c[m])
    return np.array(vals[: ia.d + 1])


def _p_values_exact(fam: PolynomialFamily, x: int) -> tuple[Fraction, ...]:
    return tuple(poly_eval(row, Fraction(x)) for row in fam.p)


def spectral_table(ia: IntersectionArray, strict: bool = True) -> SpectralTable:
    """Eigenvalues, multiplicities and the coefficient table lambda_{i,m}.

    Multiplicities use mult_i = n / sum_j p_j(lambda_i)^2 / n_j.  With
    ``strict=False`` non-integral multiplicities are tolerated (``mults`` is
    then ``None``), which is handy when scanning parameter sets that need not
    correspond to an existing graph.
    """
    shells = shell_sizes(ia)
    fam = p_polynomials(ia)
    lam = list(eigenvalues(build_q_matrix(ia)))
    n = shells.total
    scale = max(1.0, float(ia.k))
    if abs(lam[0] - ia.k) > DISTINCT_TOL * scale:
        raise DegenerateSpectrum(f"largest eigenvalue {lam[0]} differs from valency {ia.k}")
    lam[0] = float(ia.k)

    exact_lam: list[Optional[int]] = []
    exact_rows: list[Optional[tuple[Fraction, ...]]] = []
    rows = []
    for i, x in enumerate(lam):
        r = round(x)
        exact_row = None
        if abs(x - r) <= 1e-7 * scale:
            cand = _p_values_exact(fam, r)
            if i == 0 or sum(cand) == 0:
                exact_row = cand
        if exact_row is not None:
            lam[i] = float(r)
            exact_lam.append(int(r))
            exact_rows.append(exact_row)
            rows.append([float(v) for v in exact_row])
        else:
            exact_lam.append(None)
            exact_rows.append(None)
            rows.append(list(_p_values_float(ia, x)))
    coeff = np.array(rows)
    coeff[0, :] = shells.n

    for i in range(1, ia.d + 1):
        resid = abs(float(np.sum(coeff[i])))
        if resid > FACTOR_TOL * n:
            raise FactorizationResidual(f"q_d(lambda_{i}) = {resid:g} is not zero")

    raw = []
    for i in range(ia.d + 1):
        if exact_rows[i] is not None:
            denom = sum(v * v / nj for v, nj in zip(exact_rows[i], shells.n))
            raw.append(Fraction(n) / denom)
        else:
            raw.append(n / float(np.sum(coeff[i] ** 2 / np.array(shells.n))))
    mults: Optional[tuple[int, ...]] = tuple(int(round(float(m))) for m in raw)
    bad = [
        i for i, m in enumerate(raw)
        if (isinstance(m, Fraction) and m.denominator != 1)
        or abs(float(m) - round(float(m))) > MULT_TOL
        or round(float(m)) < 1
    ]
    if bad or sum(mults) != n:
        if strict:
            raise MultiplicityNotIntegral(
                f"multiplicities {[float(m) for m in raw]} of {ia} are not positive integers summing to {n}"
            )
        mults = None

    return SpectralTable(
        ia=ia,
        lambdas=tuple(lam),
        mults=mults,
        coeff=coeff,
        shells=shells,
        exact_lambdas=tuple(exact_lam),
        exact_coeff=tuple(exact_rows),
        raw_mults=tuple(float(m) for m in raw),
    )


def eigenvalue_for_f(table: SpectralTable, f: Sequence[float]) -> np.ndarray:
    """lambda_i(f;G) = sum_m f_m lambda_{i,m}, one value per distinct eigenvalue."""
    f = np.asarray(f, dtype=float)
    if f.shape != (table.d + 1,):
        raise DimensionMismatch(f"f has shape {f.shape}, expected ({table.d + 1},)")
    return table.coeff @ f


def spectral_polynomials(table: SpectralTable) -> SpectralPolynomialSet:
    """Phi(z;G): row i of the table read as polynomial coefficients.

    Every nonprincipal row is also rebuilt from the factored form
    (1 - z) sum_m q_m(lambda_i) z^m and the two are required to agree.
    """
    polys = []
    n = table.order
    for i, row in enumerate(table.coeff):
        if i > 0:
            q = np.cumsum(row)[:-1]
            factored = np.array(poly_mul([1.0, -1.0], list(q)))
            if np.max(np.abs(factored - row)) > FACTOR_TOL * max(1.0, n):
                raise FactorizationResidual(f"factored form of phi_{i} disagrees with table")
        mult = table.mults[i] if table.mults is not None else 1
        polys.append(SpectralPolynomial(tuple(float(x) for x in row), mult, table.exact_coeff[i]))
    return SpectralPolynomialSet(tuple(polys))


def multiplicity_check(table: SpectralTable) -> bool:
    return table.mults is not None and sum(table.mults) == table.order


def leading_coefficients(fam: PolynomialFamily) -> list[Fraction]:
    return [row[-1] for row in fam.p]


def classical_distance_eigenvalues(table: SpectralTable) -> np.ndarray:
    """Derivative of each phi_i at z = 1, i.e. sum_m m lambda_{i,m}."""
    return table.coeff @ np.arange(table.d + 1, dtype=float)


def is_perfect_square(x: int) -> bool:
    return x >= 0 and math.isqrt(x) ** 2 == x
