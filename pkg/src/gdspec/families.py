"""Parameterized graph families: intersection arrays and closed-form spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from typing import Optional

from gdspec.drg import (
    IntersectionArray,
    SpectralPolynomial,
    SpectralPolynomialSet,
    poly_product,
)
from gdspec.errors import OutOfRange, Unavailable, UnsupportedFamily, UnknownGraph

KINDS = ("complete", "cycle", "hamming", "johnson", "srg", "taylor", "crown", "cubic")

# name -> (display name, b, c, adjacency spectrum {eigenvalue: multiplicity})
CUBIC_TABLE: dict[str, tuple[str, tuple[int, ...], tuple[int, ...], dict[float, int]]] = {
    "k4": ("K4", (3,), (1,), {3: 1, -1: 3}),
    "utility": ("K3,3", (3, 2), (1, 3), {3: 1, 0: 4, -3: 1}),
    "cube": ("Cube", (3, 2, 1), (1, 2, 3), {3: 1, 1: 3, -1: 3, -3: 1}),
    "petersen": ("Petersen", (3, 2), (1, 1), {3: 1, 1: 5, -2: 4}),
    "heawood": ("Heawood", (3, 2, 2), (1, 1, 3), {3: 1, sqrt(2): 6, -sqrt(2): 6, -3: 1}),
    "pappus": ("Pappus", (3, 2, 2, 1), (1, 1, 2, 3),
               {3: 1, sqrt(3): 6, 0: 4, -sqrt(3): 6, -3: 1}),
    "desargues": ("Desargues", (3, 2, 2, 1, 1), (1, 1, 2, 2, 3),
                  {3: 1, 2: 4, 1: 5, -1: 5, -2: 4, -3: 1}),
    "dodecahedral": ("Dodecahedral", (3, 2, 1, 1, 1), (1, 1, 1, 2, 3),
                     {3: 1, sqrt(5): 3, 1: 5, 0: 4, -2: 4, -sqrt(5): 3}),
}
CUBIC_ALIASES = {"k33": "utility", "k3,3": "utility", "dodecahedron": "dodecahedral",
                 "hypercube": "cube", "q3": "cube"}
# cubic distance-regular graphs outside the supported table
CUBIC_UNSUPPORTED = {"tutte8cage", "tutte-8-cage", "tutte-coxeter", "foster", "biggs-smith",
                     "biggssmith", "coxeter", "tutte12cage", "tutte-12-cage"}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise UnknownGraph(f"unknown family {self.kind!r}")
        _check_range(self)

    def __str__(self) -> str:
        return f"{self.kind}:{','.join(map(str, self.params))}"


@dataclass(frozen=True)
class TaylorEigenpair:
    theta_plus: float
    theta_minus: float


@dataclass(frozen=True)
class SrgVerdict:
    uniform: bool
    theta: float
    tau: float
    condition_holds: bool
    distance_singular: bool
    z_star: Optional[float] = None
    interval_bound: Optional[float] = None


@dataclass(frozen=True)
class TaylorVerdict:
    uniform: bool
    theta: TaylorEigenpair
    criterion_holds: bool
    triple_root: bool


def parse_family(text: str) -> FamilySpec:
    """Parse strings such as ``hamming:8,2`` or ``cubic:heawood``."""
    if ":" not in text:
        raise UnknownGraph(f"family spec must look like 'kind:params', got {text!r}")
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "cubic":
        name = rest.strip().lower()
        name = CUBIC_ALIASES.get(name, name)
        return FamilySpec("cubic", (name,))
    try:
        params = tuple(int(x) for x in rest.split(",") if x.strip())
    except ValueError as exc:
        raise UnknownGraph(f"bad parameters in {text!r}") from exc
    return FamilySpec(kind, params)


def _need(spec: FamilySpec, count: int) -> None:
    if len(spec.params) != count:
        raise OutOfRange(f"{spec.kind} takes {count} parameter(s), got {spec.params}")


def _check_range(spec: FamilySpec) -> None:
    p = spec.params
    kind = spec.kind
    if kind == "cubic":
        _need(spec, 1)
        name = p[0]
        if name in CUBIC_UNSUPPORTED:
            raise UnsupportedFamily(f"cubic graph {name!r} is not in the supported table")
        if name not in CUBIC_TABLE:
            raise UnknownGraph(f"unknown cubic graph {name!r}")
        return
    if kind in ("complete", "cycle", "crown"):
        _need(spec, 1)
        (n,) = p
        low = {"complete": 2, "cycle": 3, "crown": 3}[kind]
        if n < low:
            raise OutOfRange(f"{kind} needs n >= {low}")
    elif kind == "hamming":
        _need(spec, 2)
        d, q = p
        if d < 1 or q < 2:
            raise OutOfRange("hamming needs d >= 1 and q >= 2")
    elif kind == "johnson":
        _need(spec, 2)
        n, d = p
        if d < 1 or n < 2 * d:
            raise OutOfRange("johnson needs d >= 1 and n >= 2d")
    elif kind == "srg":
        _need(spec, 4)
        n, k, alpha, beta = p
        if beta <= 0 or not (1 <= k <= n - 2) or not (0 <= alpha < k) or beta > k:
            raise OutOfRange(f"invalid strongly regular parameters {p}")
        if k * (k - alpha - 1) != (n - k - 1) * beta:
            raise OutOfRange(f"k(k-alpha-1) != (n-k-1)beta for {p}")
    elif kind == "taylor":
        _need(spec, 2)
        k, mu = p
        if not 0 < mu < k:
            raise OutOfRange("taylor needs 0 < mu < k")


def cubic_name(spec: FamilySpec) -> str:
    return CUBIC_TABLE[spec.params[0]][0]


def intersection_array(spec: FamilySpec) -> IntersectionArray:
    kind, p = spec.kind, spec.params
    if kind == "complete":
        return IntersectionArray((p[0] - 1,), (1,))
    if kind == "cycle":
        n = p[0]
        d = n // 2
        return IntersectionArray((2,) + (1,) * (d - 1), (1,) * (d - 1) + (2 if n % 2 == 0 else 1,))
    if kind == "hamming":
        d, q = p
        return IntersectionArray(tuple((d - i) * (q - 1) for i in range(d)),
                                 tuple(range(1, d + 1)))
    if kind == "johnson":
        n, d = p
        return IntersectionArray(tuple((d - i) * (n - d - i) for i in range(d)),
                                 tuple(i * i for i in range(1, d + 1)))
    if kind == "srg":
        n, k, alpha, beta = p
        return IntersectionArray((k, k - alpha - 1), (1, beta))
    if kind == "taylor":
        k, mu = p
        return IntersectionArray((k, mu, 1), (1, mu, k))
    if kind == "crown":
        n = p[0]
        return intersection_array(FamilySpec("taylor", (n - 1, n - 2)))
    _, b, c, _ = CUBIC_TABLE[p[0]]
    return IntersectionArray(b, c)


def order(spec: FamilySpec) -> int:
    from gdspec.drg import shell_sizes

    return shell_sizes(intersection_array(spec)).total


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

ONE_MINUS_Z = (Fraction(1), Fraction(-1))


def _poly(factors, mult: int) -> SpectralPolynomial:
    coeffs = poly_product(factors)
    exact = None
    if all(isinstance(x, (int, Fraction)) for f in factors for x in f):
        exact = tuple(Fraction(x) for x in coeffs)
    return SpectralPolynomial(tuple(float(x) for x in coeffs), mult, exact)


def _sorted_set(polys, conjectured: bool = False, note: str = "") -> SpectralPolynomialSet:
    # order by the adjacency eigenvalue (coefficient of z), largest first
    ordered = sorted(polys, key=lambda p: -(p.coeffs[1] if len(p.coeffs) > 1 else 0.0))
    return SpectralPolynomialSet(tuple(ordered), conjectured=conjectured, note=note)


def _integral(x: float, what: str) -> int:
    r = round(x)
    if abs(x - r) > 1e-6 or r < 1:
        raise OutOfRange(f"{what} multiplicity {x:g} is not a positive integer")
    return int(r)


def srg_eigenvalues(k: int, alpha: int, beta: int) -> tuple[float, float]:
    disc = (alpha - beta) ** 2 + 4 * (k - beta)
    root = math.sqrt(disc)
    return ((alpha - beta) + root) / 2, ((alpha - beta) - root) / 2


def taylor_eigenpair(k: int, mu: int) -> TaylorEigenpair:
    s = k - 2 * mu - 1
    root = math.sqrt(s * s + 4 * k)
    return TaylorEigenpair((s + root) / 2, (s - root) / 2)


def _hamming_phi(d: int, q: int) -> SpectralPolynomialSet:
    lin = (Fraction(1), Fraction(q - 1))
    polys = [
        _poly([ONE_MINUS_Z] * m + [lin] * (d - m), comb(d, m) * (q - 1) ** m)
        for m in range(d + 1)
    ]
    return _sorted_set(polys)


def _johnson_phi(n: int, d: int) -> SpectralPolynomialSet:
    polys = []
    for m in range(d + 1):
        tail = tuple(Fraction(comb(m, k) * comb(n + m - 2 * d, k)) for k in range(m + 1))
        j = d - m
        mult = comb(n, j) - (comb(n, j - 1) if j > 0 else 0)
        polys.append(_poly([ONE_MINUS_Z] * (d - m) + [tail], mult))
    conj = d >= 3
    note = "CONJECTURED: closed form checked numerically only" if conj else ""
    return _sorted_set(polys, conjectured=conj, note=note)


def _srg_phi(n: int, k: int, alpha: int, beta: int) -> SpectralPolynomialSet:
    theta, tau = srg_eigenvalues(k, alpha, beta)
    disc = (alpha - beta) ** 2 + 4 * (k - beta)
    skew = (2 * k + (n - 1) * (alpha - beta)) / math.sqrt(disc)
    m_theta = _integral(((n - 1) - skew) / 2, "theta")
    m_tau = _integral(((n - 1) + skew) / 2, "tau")
    root = math.isqrt(disc)
    polys = [_poly([(1, k, n - k - 1)], 1)]
    for lam, mult in ((theta, m_theta), (tau, m_tau)):
        if root * root == disc:
            lam = Fraction((alpha - beta) + (root if lam == theta else -root), 2)
        polys.append(_poly([ONE_MINUS_Z, (1, lam + 1)], mult))
    return _sorted_set(polys)


def _taylor_phi(k: int, mu: int) -> SpectralPolynomialSet:
    th = taylor_eigenpair(k, mu)
    spread = th.theta_plus - th.theta_minus
    m_plus = _integral(-(k + 1) * th.theta_minus / spread, "theta_plus")
    m_minus = _integral((k + 1) * th.theta_plus / spread, "theta_minus")
    s = k - 2 * mu - 1
    disc = s * s + 4 * k
    root = math.isqrt(disc)
    exact = root * root == disc
    polys = [
        _poly([(1, k, k, 1)], 1),
        _poly([ONE_MINUS_Z, ONE_MINUS_Z, (1, 1)], k),
    ]
    for sign, theta, mult in ((1, th.theta_plus, m_plus), (-1, th.theta_minus, m_minus)):
        t = Fraction(s + sign * root, 2) if exact else theta
        polys.append(_poly([ONE_MINUS_Z, (1, t + 1, 1)], mult))
    return _sorted_set(polys)


def _cubic_factored(name: str) -> list[list[tuple]]:
    s2, s3, s5 = sqrt(2), sqrt(3), sqrt(5)
    one_plus = (1, 1)
    one_minus = (1, -1)
    if name == "k4":
        return [[(1, 3)], [one_minus]]
    if name == "utility":
        return [[one_plus, (1, 2)], [one_minus, (1, -2)], [one_minus, one_plus]]
    if name == "cube":
        return [[one_minus] * m + [one_plus] * (3 - m) for m in range(4)]
    if name == "petersen":
        return [[(1, 3, 6)], [one_minus, one_minus], [one_minus, (1, 2)]]
    if name == "heawood":
        return [
            [one_plus, (1, 2, 4)],
            [one_minus, (1, -2, 4)],
            [one_minus, one_plus, (1, -s2)],
            [one_minus, one_plus, (1, s2)],
        ]
    if name == "pappus":
        return [
            [one_plus, (1, 2, 4, 2)],
            [(-1, 1), (-1, 2, -4, 2)],
            [one_minus, one_plus, (1, -s3, 1)],
            [one_minus, one_plus, (1, s3, 1)],
            [one_minus, one_plus, (1, 0, -2)],
        ]
    if name == "desargues":
        return [
            [one_plus, (1, 2, 4, 2, 1)],
            [one_minus, (1, -2, 4, -2, 1)],
            [one_minus, one_minus, one_plus, (1, -1, 1)],
            [one_minus, one_plus, one_plus, (1, 1, 1)],
            [one_minus] * 3 + [one_plus] * 2,
            [one_minus] * 2 + [one_plus] * 3,
        ]
    if name == "dodecahedral":
        return [
            [one_plus, (1, 2, 4, 2, 1)],
            [one_minus, (1, 1 - s5, 3 - s5, 1 - s5, 1)],
            [one_minus, (1, 1 + s5, 3 + s5, 1 + s5, 1)],
            [one_minus, one_minus, one_plus, (1, -1, 1)],
            [one_minus, one_minus] + [one_plus] * 3,
            [one_minus, (1, 1, -2, 1, 1)],
        ]
    raise Unavailable(name)


def _cubic_phi(name: str) -> SpectralPolynomialSet:
    spectrum = CUBIC_TABLE[name][3]
    polys = []
    for factors in _cubic_factored(name):
        factors = [tuple(Fraction(x) if isinstance(x, int) else x for x in f) for f in factors]
        coeffs = poly_product(factors)
        lam = float(coeffs[1]) if len(coeffs) > 1 else 0.0
        mult = next((m for ev, m in spectrum.items() if abs(ev - lam) < 1e-9), None)
        if mult is None:
            raise Unavailable(f"no multiplicity for eigenvalue {lam} of {name}")
        polys.append(_poly(factors, mult))
    return _sorted_set(polys)


def closed_form_phi(spec: FamilySpec) -> SpectralPolynomialSet:
    """Closed-form Phi(z;G) for families that have one.

    Johnson graphs with d >= 3 come back flagged ``conjectured``.
    Raises ``Unavailable`` for families without a closed form (cycles).
    """
    kind, p = spec.kind, spec.params
    if kind == "complete":
        return _hamming_phi(1, p[0])
    if kind == "hamming":
        return _hamming_phi(*p)
    if kind == "johnson":
        return _johnson_phi(*p)
    if kind == "srg":
        return _srg_phi(*p)
    if kind == "taylor":
        return _taylor_phi(*p)
    if kind == "crown":
        return _taylor_phi(p[0] - 1, p[0] - 2)
    if kind == "cubic":
        return _cubic_phi(p[0])
    raise Unavailable(f"no closed form for {spec}")


# ---------------------------------------------------------------------------
# family-specific positivity criteria
# ---------------------------------------------------------------------------

def srg_uniform_pd(n: int, k: int, alpha: int, beta: int) -> SrgVerdict:
    """Uniform positive definiteness of a strongly regular graph.

    Decided twice: by tau >= -2 on the smallest eigenvalue and by the
    integer condition k - 2 alpha + beta <= 4.  The two must agree.
    ``z_star`` is the root -1/(tau+1) of the factor 1 + (tau+1) z when
    tau < -2; ``interval_bound`` is -1/(tau+2), kept for comparison only.
    """
    FamilySpec("srg", (n, k, alpha, beta))
    theta, tau = srg_eigenvalues(k, alpha, beta)
    by_eigenvalue = tau >= -2 - 1e-9
    condition = k - 2 * alpha + beta <= 4
    if by_eigenvalue != condition:
        raise AssertionError(f"SRG criteria disagree for {(n, k, alpha, beta)}: tau={tau}")
    z_star = interval = None
    if not condition:
        z_star = -1.0 / (tau + 1.0)
        interval = -1.0 / (tau + 2.0)
    return SrgVerdict(
        uniform=condition,
        theta=theta,
        tau=tau,
        condition_holds=condition,
        distance_singular=abs(tau + 2) <= 1e-9,
        z_star=z_star,
        interval_bound=interval,
    )


def taylor_uniform_pd(k: int, mu: int) -> TaylorVerdict:
    FamilySpec("taylor", (k, mu))
    th = taylor_eigenpair(k, mu)
    by_eigenvalue = th.theta_minus >= -3 - 1e-9
    criterion = k >= 3 * (mu - 1)
    if by_eigenvalue != criterion:
        raise AssertionError(f"Taylor criteria disagree for k={k}, mu={mu}: {th}")
    return TaylorVerdict(
        uniform=criterion,
        theta=th,
        criterion_holds=criterion,
        triple_root=k == 3 * (mu - 1),
    )


def taylor_two_path_dual(k: int, mu: int) -> TaylorEigenpair:
    """Antisymmetric eigenvalues of the Taylor graph with parameters (k, k-mu-1)."""
    return taylor_eigenpair(k, k - mu - 1)


CROWN_NOTE = (
    "crown(n) is Taylor(n-1, n-2); k >= 3(mu-1) gives n <= 4, with n = 4 the "
    "triple-root boundary. The bound n <= 7/2 from n-1 >= 3(n-2) does not follow "
    "from this criterion; both agree that n >= 5 is not uniformly positive definite."
)


def crown_uniform_pd(n: int) -> TaylorVerdict:
    FamilySpec("crown", (n,))
    return taylor_uniform_pd(n - 1, n - 2)


def feasible_srg_parameters(max_n: int) -> list[tuple[int, int, int, int]]:
    """Connected SRG tuples (n,k,alpha,beta) with n <= max_n passing the counting
    identity and the integrality of multiplicities (existence is not checked)."""
    out = []
    for n in range(4, max_n + 1):
        for k in range(1, n - 1):
            for alpha in range(k):
                num = k * (k - alpha - 1)
                if num % (n - k - 1):
                    continue
                beta = num // (n - k - 1)
                if not 1 <= beta <= k:
                    continue
                try:
                    _srg_phi(n, k, alpha, beta)
                except OutOfRange:
                    continue
                out.append((n, k, alpha, beta))
    return out
