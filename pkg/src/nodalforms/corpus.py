"""Standard graph families and the bundled verification corpus.

Everything here is deterministic: random graphs are seeded, and the corpus
listing is a fixed sequence of (name, object) pairs so repeated runs visit
identical inputs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .elliptic import grid_spec_to_json, make_grid_spec
from .forms import WeightedGraph, graph_to_json


def path_graph(n: int, b: float = 1.0, m: float = 1.0, c: float = 0.0
               ) -> WeightedGraph:
    edges = [(i, i + 1, b) for i in range(n - 1)]
    return WeightedGraph(labels=[str(i) for i in range(n)],
                         m=[m] * n, c=[c] * n, edges=edges)


def cycle_graph(n: int, b: float = 1.0, m: float = 1.0) -> WeightedGraph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, (i + 1) % n, b) for i in range(n)]
    return WeightedGraph(labels=[str(i) for i in range(n)],
                         m=[m] * n, c=[0.0] * n, edges=edges)


def star_graph(leaves: int, b: float = 1.0, m: float = 1.0) -> WeightedGraph:
    """Star K_{1,leaves}: vertex 0 is the center."""
    if leaves < 1:
        raise ValueError("star needs at least one leaf")
    n = leaves + 1
    edges = [(0, i, b) for i in range(1, n)]
    return WeightedGraph(labels=["center"] + [f"leaf{i}" for i in range(1, n)],
                         m=[m] * n, c=[0.0] * n, edges=edges)


def complete_graph(n: int, b: float = 1.0, m: float = 1.0) -> WeightedGraph:
    edges = [(i, j, b) for i in range(n) for j in range(i + 1, n)]
    return WeightedGraph(labels=[str(i) for i in range(n)],
                         m=[m] * n, c=[0.0] * n, edges=edges)


def star_tight_vector(leaves: int) -> np.ndarray:
    """Eigenfunction of the star for eigenvalue b/m with every leaf nonzero.

    Center value 0; leaf values alternate in sign and sum to zero, so with
    unit weights the vector lies in the large middle eigenspace. Every
    nonzero leaf is its own nodal domain (leaves are pairwise
    non-adjacent), which attains the bound n + k - 1 at n = 2.
    """
    if leaves < 2:
        raise ValueError("need at least two leaves to balance signs")
    pos = (leaves + 1) // 2
    neg = leaves - pos
    vals = np.empty(leaves)
    vals[0::2] = 1.0
    vals[1::2] = -pos / neg
    return np.concatenate(([0.0], vals))


def disjoint_union(*graphs: WeightedGraph) -> WeightedGraph:
    """Disjoint union; labels are prefixed with the part index."""
    labels, m, c, edges = [], [], [], []
    offset = 0
    for part_index, g in enumerate(graphs):
        labels.extend(f"p{part_index}:{lab}" for lab in g.labels)
        m.extend(g.m.tolist())
        c.extend(g.c.tolist())
        edges.extend((u + offset, v + offset, w)
                     for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w))
        offset += g.n_vertices
    return WeightedGraph(labels=labels, m=m, c=c, edges=edges)


def random_connected_graph(n: int, seed: int, weight_range=(0.5, 2.0),
                           measure_range=(0.5, 2.0), extra_edge_prob=0.1,
                           killing_prob=0.25, killing_max=1.0
                           ) -> WeightedGraph:
    """Seeded random connected graph: a random attachment tree plus extras."""
    rng = np.random.default_rng(seed)
    w_lo, w_hi = weight_range
    edges = {}
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges[(u, v)] = float(rng.uniform(w_lo, w_hi))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges[(u, v)] = float(rng.uniform(w_lo, w_hi))
    m = rng.uniform(*measure_range, size=n)
    c = np.where(rng.random(n) < killing_prob,
                 rng.uniform(0.0, killing_max, size=n), 0.0)
    return WeightedGraph(labels=[str(i) for i in range(n)], m=m, c=c,
                         edges=[(u, v, w) for (u, v), w in edges.items()])


def lshape_mask(nx: int, ny: int) -> np.ndarray:
    """L-shaped domain: the full rectangle minus its upper-right quarter."""
    mask = np.ones((nx, ny), dtype=bool)
    mask[nx // 2:, ny // 2:] = False
    return mask


def bundled_graphs() -> list:
    """The fixed (name, graph) corpus used by the acceptance properties.

    Paths P_2..P_12, cycles C_3..C_12, stars K_{1,2}..K_{1,11}, complete
    graphs K_2..K_8, a few disconnected unions (they make the invariance
    lattice nontrivial), and 50 seeded random connected graphs with at most
    30 vertices.
    """
    out = []
    for n in range(2, 13):
        out.append((f"path_{n:02d}", path_graph(n)))
    for n in range(3, 13):
        out.append((f"cycle_{n:02d}", cycle_graph(n)))
    for leaves in range(2, 12):
        out.append((f"star_{leaves:02d}", star_graph(leaves)))
    for n in range(2, 9):
        out.append((f"complete_{n}", complete_graph(n)))
    out.append(("union_p2_p3", disjoint_union(path_graph(2), path_graph(3))))
    out.append(("union_c3_p2_k1",
                disjoint_union(cycle_graph(3), path_graph(2), path_graph(1))))
    out.append(("union_p4_p4", disjoint_union(path_graph(4), path_graph(4))))
    sizes = list(range(5, 31))
    for i in range(50):
        n = sizes[i % len(sizes)]
        out.append((f"random_{i:02d}_n{n}", random_connected_graph(n, seed=i)))
    return out


def bundled_grids() -> list:
    """The fixed (name, GridSpec) corpus: 1D and 2D grids, <= 400 vertices."""
    return [
        ("grid1d_099", make_grid_spec(1, (99,), h=1.0 / 100.0)),
        ("grid2d_12x12", make_grid_spec(2, (12, 12), h=1.0 / 13.0)),
        ("grid2d_20x20", make_grid_spec(2, (20, 20), h=1.0 / 21.0)),
        ("grid2d_lshape16", make_grid_spec(2, (16, 16), h=1.0 / 17.0,
                                           mask=lshape_mask(16, 16))),
    ]


def write_bundled_corpus(directory) -> list:
    """Write the whole corpus as JSON files; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, g in bundled_graphs():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(graph_to_json(g), indent=2, sort_keys=True)
                        + "\n")
        written.append(path)
    for name, spec in bundled_grids():
        path = directory / f"{name}.json"
        mask_file = None
        if not bool(np.all(spec.mask)):
            mask_file = f"{name}.mask.txt"
            np.savetxt(directory / mask_file, spec.mask.astype(int), fmt="%d")
        data = grid_spec_to_json(spec, mask_file=mask_file)
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written
