"""Explicit graphs: the brute-force ground truth.

Nothing here uses intersection-array theory.  Graphs are built vertex by
vertex, distances come from breadth-first search, M(f;G) is assembled entry
by entry and diagonalised densely.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from gdspec.drg import IntersectionArray
from gdspec.errors import DimensionMismatch, Disconnected, UnknownGraph
from gdspec.linalg import jacobi_eigenvalues

GROUP_TOL = 1e-7
JACOBI_MAX_N = 400


@dataclass(frozen=True, eq=False)
class ExplicitGraph:
    adjacency: np.ndarray
    labels: Optional[tuple] = None
    name: str = ""

    def __post_init__(self) -> None:
        A = np.asarray(self.adjacency, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(np.diag(A)):
            raise ValueError("graph has loops")
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adjacency", A)

    @property
    def n_vertices(self) -> int:
        return self.adjacency.shape[0]

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adjacency))
        return [(int(u), int(v)) for u, v in zip(us, vs)]


@dataclass(frozen=True, eq=False)
class DistanceData:
    dist: np.ndarray

    @property
    def diameter(self) -> int:
        return int(self.dist.max())

    def shells(self, x: int) -> np.ndarray:
        return np.bincount(self.dist[x], minlength=self.diameter + 1)


@dataclass(frozen=True)
class NotDistanceRegular:
    witness: tuple[int, int]
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class SymEigen:
    values: np.ndarray  # descending, with repetition
    groups: tuple[tuple[float, int], ...]  # (value, multiplicity), descending


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def from_edges(n: int, edges, labels=None, name: str = "") -> ExplicitGraph:
    A = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        A[u, v] = A[v, u] = True
    return ExplicitGraph(A, labels, name)


def _from_labels(labels: list, adjacent, name: str) -> ExplicitGraph:
    n = len(labels)
    A = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(labels[i], labels[j]):
                A[i, j] = A[j, i] = True
    return ExplicitGraph(A, tuple(labels), name)


def complete_graph(n: int) -> ExplicitGraph:
    return ExplicitGraph(~np.eye(n, dtype=bool), tuple(range(n)), f"K{n}")


def cycle_graph(n: int) -> ExplicitGraph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def path_graph(n: int) -> ExplicitGraph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def complete_bipartite(m: int, n: int) -> ExplicitGraph:
    return from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)],
                      name=f"K{m},{n}")


def hamming_graph(d: int, q: int) -> ExplicitGraph:
    words = list(itertools.product(range(q), repeat=d))
    W = np.array(words)
    A = (W[:, None, :] != W[None, :, :]).sum(axis=2) == 1
    return ExplicitGraph(A, tuple(words), f"H({d},{q})")


def johnson_graph(n: int, d: int) -> ExplicitGraph:
    subsets = [frozenset(s) for s in itertools.combinations(range(n), d)]
    S = np.zeros((len(subsets), n), dtype=int)
    for i, s in enumerate(subsets):
        S[i, list(s)] = 1
    A = (S @ S.T) == d - 1
    return ExplicitGraph(A, tuple(subsets), f"J({n},{d})")


def kneser_graph(n: int, k: int) -> ExplicitGraph:
    subsets = [frozenset(s) for s in itertools.combinations(range(n), k)]
    return _from_labels(subsets, lambda s, t: not (s & t), f"Kneser({n},{k})")


def generalized_petersen(n: int, k: int) -> ExplicitGraph:
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return from_edges(2 * n, set(tuple(sorted(e)) for e in edges), name=f"GP({n},{k})")


def lcf_graph(n: int, shifts: Sequence[int], repeats: int) -> ExplicitGraph:
    """Hamiltonian cubic graph from LCF notation [shifts]^repeats."""
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    code = list(shifts) * repeats
    if len(code) != n:
        raise ValueError("LCF code length must equal the vertex count")
    for i, s in enumerate(code):
        edges.add(tuple(sorted((i, (i + s) % n))))
    return from_edges(n, edges, name=f"LCF{list(shifts)}^{repeats}")


def cartesian_product(G: ExplicitGraph, H: ExplicitGraph) -> ExplicitGraph:
    """G □ H with vertex (x, y) at index x*|H| + y, matching np.kron ordering."""
    IG = np.eye(G.n_vertices, dtype=int)
    IH = np.eye(H.n_vertices, dtype=int)
    A = np.kron(G.adjacency.astype(int), IH) + np.kron(IG, H.adjacency.astype(int))
    gl = G.labels or tuple(range(G.n_vertices))
    hl = H.labels or tuple(range(H.n_vertices))
    labels = tuple((x, y) for x in gl for y in hl)
    return ExplicitGraph(A > 0, labels, f"{G.name}x{H.name}")


def complement(G: ExplicitGraph) -> ExplicitGraph:
    A = ~G.adjacency & ~np.eye(G.n_vertices, dtype=bool)
    return ExplicitGraph(A, G.labels, f"co-{G.name}")


def crown_graph(n: int) -> ExplicitGraph:
    g = complement(cartesian_product(complete_graph(n), complete_graph(2)))
    return ExplicitGraph(g.adjacency, g.labels, f"Crown({n})")


def complete_multipartite(parts: int, size: int) -> ExplicitGraph:
    labels = [(i, j) for i in range(parts) for j in range(size)]
    return _from_labels(labels, lambda u, v: u[0] != v[0], f"K{parts}x{size}")


_CUBIC_BUILDERS = {
    "k4": lambda: complete_graph(4),
    "utility": lambda: complete_bipartite(3, 3),
    "cube": lambda: hamming_graph(3, 2),
    "petersen": lambda: kneser_graph(5, 2),
    "heawood": lambda: lcf_graph(14, [5, -5], 7),
    "pappus": lambda: lcf_graph(18, [5, 7, -7, 7, -7, -5], 3),
    "desargues": lambda: generalized_petersen(10, 3),
    "dodecahedral": lambda: generalized_petersen(10, 2),
}


def _srg_graph(n: int, k: int, alpha: int, beta: int) -> ExplicitGraph:
    if (n, k, alpha, beta) == (10, 3, 0, 1):
        return kneser_graph(5, 2)
    # complete multipartite K_{m x t}: (mt, (m-1)t, (m-2)t, (m-1)t)
    if beta == k and n % (n - k) == 0 and alpha == k - (n - k):
        return complete_multipartite(n // (n - k), n - k)
    # lattice H(2, m) and triangular J(m, 2)
    m = int(round(n ** 0.5))
    if m * m == n and (k, alpha, beta) == (2 * (m - 1), m - 2, 2):
        return hamming_graph(2, m)
    for m in range(4, 200):
        if m * (m - 1) // 2 == n and (k, alpha, beta) == (2 * (m - 2), m - 2, 4):
            return johnson_graph(m, 2)
    raise UnknownGraph(f"no explicit construction for srg:{n},{k},{alpha},{beta}")


def construct(spec) -> ExplicitGraph:
    """Build an explicit graph from a FamilySpec or a spec string.

    Spec strings joined by ``*`` denote Cartesian products, e.g.
    ``complete:2*complete:3``.
    """
    from gdspec.families import FamilySpec, parse_family

    if isinstance(spec, str):
        parts = [p for p in spec.split("*") if p.strip()]
        if len(parts) > 1:
            g = construct(parts[0])
            for p in parts[1:]:
                g = cartesian_product(g, construct(p))
            return g
        if spec.strip().lower().startswith("path:"):
            return path_graph(int(spec.split(":")[1]))
        spec = parse_family(spec)
    if not isinstance(spec, FamilySpec):
        raise UnknownGraph(f"cannot build a graph from {spec!r}")
    kind, p = spec.kind, spec.params
    if kind == "complete":
        return complete_graph(p[0])
    if kind == "cycle":
        return cycle_graph(p[0])
    if kind == "hamming":
        return hamming_graph(*p)
    if kind == "johnson":
        return johnson_graph(*p)
    if kind == "crown":
        return crown_graph(p[0])
    if kind == "taylor":
        k, mu = p
        if mu == k - 1:
            return crown_graph(k + 1)
        raise UnknownGraph(f"no explicit construction for {spec}")
    if kind == "srg":
        return _srg_graph(*p)
    if kind == "cubic":
        g = _CUBIC_BUILDERS[p[0]]()
        return ExplicitGraph(g.adjacency, g.labels, p[0])
    raise UnknownGraph(str(spec))


# ---------------------------------------------------------------------------
# distances and regularity
# ---------------------------------------------------------------------------

def all_pairs_distances(g: ExplicitGraph) -> DistanceData:
    """Breadth-first search from every vertex."""
    D = shortest_path(csr_matrix(g.adjacency.astype(np.int8)), method="D",
                      unweighted=True, directed=False)
    if np.isinf(D).any():
        raise Disconnected(f"graph {g.name or ''} is disconnected")
    return DistanceData(D.astype(int))


def shell_profile(dist: DistanceData) -> Optional[tuple[int, ...]]:
    """Shell sizes if the graph is shell-regular, else ``None``."""
    d = dist.diameter
    counts = np.stack([np.bincount(row, minlength=d + 1) for row in dist.dist])
    if np.all(counts == counts[0]):
        return tuple(int(x) for x in counts[0])
    return None


def check_distance_regular(g: ExplicitGraph, dist: Optional[DistanceData] = None,
                           full: bool = True):
    """Return the intersection array of ``g`` or a ``NotDistanceRegular`` witness.

    First checks that b(x,y) = |G_{i+1}(x) ∩ G_1(y)| and
    c(x,y) = |G_{i-1}(x) ∩ G_1(y)| depend only on i = dist(x,y); with
    ``full`` it then checks every n_{jk}(x,y) = |G_j(x) ∩ G_k(y)|.
    """
    if dist is None:
        dist = all_pairs_distances(g)
    D = dist.dist
    d = dist.diameter
    A = g.adjacency.astype(float)
    levels = [(D == j).astype(float) for j in range(d + 1)]
    # cnt[j][x, y] = number of neighbours of y at distance j from x
    cnt = [lv @ A for lv in levels]

    b, c = [], []
    for i in range(d + 1):
        mask = D == i
        for target, out, shift in ((b, "b", i + 1), (c, "c", i - 1)):
            if (out == "b" and i == d) or (out == "c" and i == 0):
                continue
            vals = cnt[shift][mask]
            if vals.min() != vals.max():
                x, y = np.argwhere(mask & (cnt[shift] != vals[0]))[0]
                return NotDistanceRegular((int(x), int(y)),
                                          f"{out}_{i} not constant: {vals.min()}..{vals.max()}")
            target.append(int(vals[0]))

    if full:
        for j in range(d + 1):
            for k in range(d + 1):
                N = levels[j] @ levels[k].T
                for i in range(d + 1):
                    mask = D == i
                    vals = N[mask]
                    if vals.min() != vals.max():
                        x, y = np.argwhere(mask & (N != vals[0]))[0]
                        return NotDistanceRegular((int(x), int(y)),
                                                  f"n^{i}_{j}{k} not constant")
    try:
        return IntersectionArray(tuple(b), tuple(c))
    except ValueError as exc:
        return NotDistanceRegular((0, 0), str(exc))


# ---------------------------------------------------------------------------
# matrices and spectra
# ---------------------------------------------------------------------------

def assemble_m(g: Union[ExplicitGraph, DistanceData], f: Sequence[float]) -> np.ndarray:
    """M[x, y] = f[dist(x, y)]."""
    dist = g if isinstance(g, DistanceData) else all_pairs_distances(g)
    f = np.asarray(f, dtype=float)
    if f.shape != (dist.diameter + 1,):
        raise DimensionMismatch(f"f has length {f.size}, diameter is {dist.diameter}")
    return f[dist.dist]


def group_eigenvalues(values: np.ndarray, scale: float,
                      tol: float = GROUP_TOL) -> tuple[tuple[float, int], ...]:
    vals = np.sort(np.asarray(values, dtype=float))[::-1]
    if vals.size == 0:
        return ()
    gap = tol * max(scale, 1e-300)
    groups: list[list[float]] = [[vals[0]]]
    for v in vals[1:]:
        if groups[-1][-1] - v <= gap:
            groups[-1].append(v)
        else:
            groups.append([v])
    return tuple((float(np.mean(grp)), len(grp)) for grp in groups)


def dense_sym_eigen(M: np.ndarray, method: str = "auto") -> SymEigen:
    """Eigenvalues of a symmetric matrix, grouped by multiplicity.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_N`` rows, LAPACK beyond).
    """
    M = np.asarray(M, dtype=float)
    if method == "auto":
        method = "jacobi" if M.shape[0] <= JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        vals = jacobi_eigenvalues(M)
    elif method == "lapack":
        vals = np.sort(np.linalg.eigvalsh(0.5 * (M + M.T)))[::-1]
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    return SymEigen(vals, group_eigenvalues(vals, scale))


# ---------------------------------------------------------------------------
# edge-list and JSON I/O
# ---------------------------------------------------------------------------

def read_edgelist(source: Union[str, Path], n: Optional[int] = None) -> ExplicitGraph:
    """Parse "u v" lines (0-indexed). ``source`` is a path or the text itself."""
    text = Path(source).read_text() if isinstance(source, Path) or (
        isinstance(source, str) and "\n" not in source and Path(source).exists()) else source
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        u, v = line.split()[:2]
        edges.append((int(u), int(v)))
    size = n if n is not None else 1 + max(max(e) for e in edges)
    return from_edges(size, edges)


def write_edgelist(g: ExplicitGraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def graph_to_json(g: ExplicitGraph) -> str:
    return json.dumps({"n": g.n_vertices, "edges": [list(e) for e in g.edges()]})


def graph_from_json(text: str) -> ExplicitGraph:
    data = json.loads(text)
    return from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])
