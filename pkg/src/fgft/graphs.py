"""Random graph models and their combinatorial Laplacians.

Three binary random-graph families are provided, all on n vertices:

erdos_renyi
    every unordered pair is an edge independently with probability p
sbm
    stochastic block model with m equal, contiguous communities,
    parametrized by the target average degree c and the ratio
    epsilon = q2/q1 of inter- to intra-community edge probability
random_sensor
    n points uniform on the unit square, edge iff distance < tau

All generators are deterministic functions of an RngSpec, so a draw can
be reproduced from (seed, stream_index) alone.  Random variates are
consumed in a documented order: one uniform per vertex pair (i, j) with
i < j in lexicographic order; the sensor model draws the n coordinate
pairs (row by row, x before y) before any pair is examined.

Graphs are never conditioned on connectivity; the number of connected
components is recorded in the model metadata instead.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .validation import check_adjacency

EDGE_WEIGHT_FORMAT = "%.17g"


@dataclass(frozen=True)
class RngSpec:
    """Seed plus stream index; distinct streams give independent draws."""

    seed: int
    stream_index: int = 0

    def generator(self):
        return np.random.default_rng([int(self.seed), int(self.stream_index)])


@dataclass
class Graph:
    """Undirected weighted graph: vertex count, symmetric weights, provenance."""

    n: int
    weights: np.ndarray
    model_tag: dict = field(default_factory=lambda: {"model": "custom"})

    def __post_init__(self):
        self.weights = check_adjacency(self.weights)
        if self.n != self.weights.shape[0]:
            raise ValueError("n does not match the weight matrix")
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")

    def degrees(self):
        return self.weights.sum(axis=1)

    def n_edges(self):
        return int(np.count_nonzero(self.weights) // 2)


def _pair_uniforms(n, rng):
    # one variate per pair (i, j), i < j, lexicographic; triu_indices is row-major
    rows, cols = np.triu_indices(n, k=1)
    return rows, cols, rng.random(rows.size)


def _weights_from_edges(n, rows, cols, keep):
    W = np.zeros((n, n))
    W[rows[keep], cols[keep]] = 1.0
    W[cols[keep], rows[keep]] = 1.0
    return W


def component_count(weights):
    """Number of connected components, by breadth-first search."""
    n = weights.shape[0]
    seen = np.zeros(n, dtype=bool)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            for u in np.flatnonzero(weights[v]):
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
    return count


def erdos_renyi(n, p, rng):
    """Binary graph where each pair is connected independently with probability p."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rows, cols, u = _pair_uniforms(n, rng.generator())
    W = _weights_from_edges(n, rows, cols, u < p)
    tag = {
        "model": "erdos_renyi",
        "n": n,
        "p": p,
        "seed": rng.seed,
        "stream_index": rng.stream_index,
        "components": component_count(W),
    }
    return Graph(n, W, tag)


def sbm_epsilon_critical(c, m):
    """Detectability threshold (c - sqrt(c)) / (c + sqrt(c) * (m - 1)).

    Community structure with epsilon above this value is asymptotically
    undetectable; experiments use fractions of it to set structure strength.
    """
    if c <= 0:
        raise ValueError("average degree c must be positive")
    if m < 2:
        raise ValueError("need at least two communities")
    root = np.sqrt(c)
    return (c - root) / (c + root * (m - 1))


def sbm(n, m, c, epsilon, rng):
    """Stochastic block model with m contiguous equal communities.

    The intra-community probability q1 is solved from the target average
    degree c = q1 * (n/m - 1) + q2 * (n - n/m) with q2 = epsilon * q1.
    Vertices 0 .. n/m - 1 form the first community, and so on.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if m < 1 or n % m != 0:
        raise ValueError(f"community count {m} must divide n={n}")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    size = n // m
    q1 = c / ((size - 1) + epsilon * (n - size))
    q2 = epsilon * q1
    if not (0.0 <= q1 <= 1.0 and 0.0 <= q2 <= 1.0):
        raise ValueError(
            f"derived probabilities q1={q1:.6g}, q2={q2:.6g} fall outside [0, 1]"
        )
    rows, cols, u = _pair_uniforms(n, rng.generator())
    same = (rows // size) == (cols // size)
    prob = np.where(same, q1, q2)
    W = _weights_from_edges(n, rows, cols, u < prob)
    tag = {
        "model": "sbm",
        "n": n,
        "m": m,
        "c": c,
        "epsilon": epsilon,
        "q1": q1,
        "q2": q2,
        "seed": rng.seed,
        "stream_index": rng.stream_index,
        "components": component_count(W),
    }
    return Graph(n, W, tag)


def random_sensor(n, tau, rng):
    """Random geometric graph on the unit square with strict threshold tau.

    Coordinates are drawn first (uniform i.i.d.), then pairs are connected
    iff their Euclidean distance is strictly below tau.  The coordinates
    are kept in the model metadata.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if tau <= 0:
        raise ValueError("distance threshold tau must be positive")
    pts = rng.generator().random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    W = (dist < tau).astype(float)
    np.fill_diagonal(W, 0.0)
    tag = {
        "model": "sensor",
        "n": n,
        "tau": tau,
        "seed": rng.seed,
        "stream_index": rng.stream_index,
        "coordinates": pts,
        "components": component_count(W),
    }
    return Graph(n, W, tag)


def laplacian(g):
    """Combinatorial Laplacian: degree matrix minus weights."""
    return np.diag(g.degrees()) - g.weights


def degree_permutation(g):
    """Vertex order of nondecreasing degree; ties keep ascending vertex index."""
    return np.argsort(g.degrees(), kind="stable")


def save_graph(g, path):
    """Write an edge list ("n <edges>" header, 1-based "i j w" lines) plus a
    JSON metadata sidecar at <path>.json."""
    rows, cols = np.nonzero(np.triu(g.weights, k=1))
    lines = [f"{g.n} {rows.size}"]
    for i, j in zip(rows, cols):
        w = EDGE_WEIGHT_FORMAT % g.weights[i, j]
        lines.append(f"{i + 1} {j + 1} {w}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    meta = dict(g.model_tag)
    if isinstance(meta.get("coordinates"), np.ndarray):
        meta["coordinates"] = meta["coordinates"].tolist()
    with open(f"{path}.json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_graph(path):
    """Read a graph written by save_graph; the sidecar is optional."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header, expected 'n <count>'")
        n, n_edges = int(header[0]), int(header[1])
        W = np.zeros((n, n))
        for _ in range(n_edges):
            fields = fh.readline().split()
            if len(fields) != 3:
                raise ValueError(f"{path}: malformed edge line")
            i, j, w = int(fields[0]) - 1, int(fields[1]) - 1, float(fields[2])
            W[i, j] = w
            W[j, i] = w
    tag = {"model": "custom"}
    try:
        with open(f"{path}.json") as fh:
            tag = json.load(fh)
        if "coordinates" in tag:
            tag["coordinates"] = np.asarray(tag["coordinates"])
    except FileNotFoundError:
        pass
    return Graph(n, W, tag)
