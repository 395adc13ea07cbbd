"""Finite weighted graphs and their energy forms.

A graph here is a pair (b, c) over a finite measured vertex set (X, m):
symmetric edge weights b > 0 with empty diagonal, a nonnegative on-site
killing term c, and a strictly positive vertex measure m. The associated
quadratic form is

    Q(f) = 1/2 sum_{x,y} b(x,y) (f(x) - f(y))^2 + sum_x c(x) f(x)^2

and its generator acts by L f(x) = (1/m(x)) (sum_y b(x,y)(f(x)-f(y)) + c(x) f(x)),
so that <L f, h>_m equals the polarized form Q(f, h). Restricting the form to
functions vanishing outside a subset A is realized by the induced graph
(b_A, c_A) where severed boundary edges feed the killing term:

    b_A(x, y) = b(x, y),   c_A(x) = c(x) + sum_{z not in A} b(x, z).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, EmptySubset, SchemaError
from .linalg import DenseSymMatrix


class VertexSubset:
    """Immutable subset of the vertices of a graph of a given size.

    Supports complement (~), union (|) and intersection (&), which keeps the
    family closed under the sigma-algebra operations the invariance machinery
    relies on.
    """

    __slots__ = ("bits",)

    def __init__(self, bits):
        b = np.array(bits, dtype=bool)
        if b.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        b.setflags(write=False)
        self.bits = b

    @classmethod
    def empty(cls, n: int) -> "VertexSubset":
        return cls(np.zeros(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "VertexSubset":
        return cls(np.ones(n, dtype=bool))

    @classmethod
    def from_indices(cls, n: int, indices) -> "VertexSubset":
        b = np.zeros(n, dtype=bool)
        b[list(indices)] = True
        return cls(b)

    @property
    def size(self) -> int:
        return self.bits.shape[0]

    def count(self) -> int:
        return int(self.bits.sum())

    def is_empty(self) -> bool:
        return not self.bits.any()

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def labels(self, graph: "WeightedGraph") -> tuple:
        return tuple(graph.labels[i] for i in self.indices())

    def issubset(self, other: "VertexSubset") -> bool:
        return bool(np.all(~self.bits | other.bits))

    def indicator(self) -> np.ndarray:
        return self.bits.astype(float)

    def _check(self, other):
        if self.size != other.size:
            raise DimensionError("subsets live over different vertex sets")

    def __and__(self, other):
        self._check(other)
        return VertexSubset(self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return VertexSubset(self.bits | other.bits)

    def __invert__(self):
        return VertexSubset(~self.bits)

    def __eq__(self, other):
        return (isinstance(other, VertexSubset) and self.size == other.size
                and bool(np.all(self.bits == other.bits)))

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        return f"VertexSubset({sorted(self.indices().tolist())} of {self.size})"


class WeightedGraph:
    """Finite weighted graph (b, c) over a measured vertex set (X, m).

    Edges are stored once with u < v, which enforces symmetry and an empty
    diagonal by construction; weights are strictly positive ("no edge" and
    "weight zero" are indistinguishable). The measure m is strictly positive
    everywhere and the killing term c is nonnegative.
    """

    __slots__ = ("labels", "m", "c", "edge_u", "edge_v", "edge_w", "_b_cache")

    def __init__(self, labels, m, c, edges):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        if len(set(labels)) != n:
            raise ValueError("vertex labels must be unique")
        m = np.array(m, dtype=float)
        c = np.array(c, dtype=float)
        if m.shape != (n,) or c.shape != (n,):
            raise DimensionError("m and c must have one entry per vertex")
        if not (np.all(np.isfinite(m)) and np.all(m > 0.0)):
            raise ValueError("vertex measure must be finite and > 0")
        if not (np.all(np.isfinite(c)) and np.all(c >= 0.0)):
            raise ValueError("killing term must be finite and >= 0")

        seen = set()
        eu, ev, ew = [], [], []
        for (u, v, w) in edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            if not (np.isfinite(w) and w > 0.0):
                raise ValueError(f"edge ({u},{v}) has non-positive weight {w}")
            seen.add((u, v))
            eu.append(u)
            ev.append(v)
            ew.append(w)
        order = sorted(range(len(eu)), key=lambda i: (eu[i], ev[i]))
        self.labels = labels
        self.m = m
        self.c = c
        self.edge_u = np.array([eu[i] for i in order], dtype=int)
        self.edge_v = np.array([ev[i] for i in order], dtype=int)
        self.edge_w = np.array([ew[i] for i in order], dtype=float)
        for arr in (self.m, self.c, self.edge_u, self.edge_v, self.edge_w):
            arr.setflags(write=False)
        self._b_cache = None

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return self.edge_u.shape[0]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def b_matrix(self) -> np.ndarray:
        """Dense symmetric weight matrix b with zero diagonal."""
        if self._b_cache is None:
            n = self.n_vertices
            b = np.zeros((n, n))
            b[self.edge_u, self.edge_v] = self.edge_w
            b[self.edge_v, self.edge_u] = self.edge_w
            b.setflags(write=False)
            self._b_cache = b
        return self._b_cache

    def weighted_degree(self) -> np.ndarray:
        """sum_y b(x, y) for every vertex x."""
        d = np.zeros(self.n_vertices)
        np.add.at(d, self.edge_u, self.edge_w)
        np.add.at(d, self.edge_v, self.edge_w)
        return d

    def edge_list(self):
        return list(zip(self.edge_u.tolist(), self.edge_v.tolist(),
                        self.edge_w.tolist()))

    def __eq__(self, other):
        return (isinstance(other, WeightedGraph)
                and self.labels == other.labels
                and np.array_equal(self.m, other.m)
                and np.array_equal(self.c, other.c)
                and np.array_equal(self.edge_u, other.edge_u)
                and np.array_equal(self.edge_v, other.edge_v)
                and np.array_equal(self.edge_w, other.edge_w))

    def __hash__(self):
        return hash((self.labels, self.m.tobytes(), self.c.tobytes(),
                     self.edge_w.tobytes()))

    def isclose(self, other: "WeightedGraph", tol: float = 1e-12) -> bool:
        """Field-by-field comparison with tolerance on the float fields."""
        return (self.labels == other.labels
                and np.array_equal(self.edge_u, other.edge_u)
                and np.array_equal(self.edge_v, other.edge_v)
                and np.allclose(self.m, other.m, rtol=tol, atol=tol)
                and np.allclose(self.c, other.c, rtol=tol, atol=tol)
                and np.allclose(self.edge_w, other.edge_w, rtol=tol, atol=tol))

    def __repr__(self):
        return (f"WeightedGraph(n={self.n_vertices}, edges={self.n_edges})")


class FormOperator:
    """Generator of the form as a matrix pair (stiffness A, measure diag M).

    ``stiffness`` satisfies f.T @ A @ f == Q(f); ``symmetrized`` is the
    ordinary-symmetric representative M^{-1/2} A M^{-1/2}, whose spectrum
    equals that of the pencil (A, M).
    """

    __slots__ = ("graph", "stiffness", "m", "symmetrized")

    def __init__(self, graph: WeightedGraph, stiffness: np.ndarray):
        self.graph = graph
        self.m = graph.m
        s = DenseSymMatrix(stiffness).a
        self.stiffness = s
        inv_sqrt_m = 1.0 / np.sqrt(graph.m)
        sym = s * np.outer(inv_sqrt_m, inv_sqrt_m)
        self.symmetrized = DenseSymMatrix(sym).a

    @property
    def n(self) -> int:
        return self.graph.n_vertices

    def apply_generator(self, f) -> np.ndarray:
        """L f = M^{-1} A f."""
        f = _as_vector(self.graph, f)
        return (self.stiffness @ f) / self.m


def _as_vector(g: WeightedGraph, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n_vertices,):
        raise DimensionError(
            f"vector of length {f.shape} against {g.n_vertices} vertices")
    return f


def quadratic_form(g: WeightedGraph, f) -> float:
    """Energy Q(f) of a function on the vertices; always >= 0."""
    f = _as_vector(g, f)
    df = f[g.edge_u] - f[g.edge_v]
    return float(g.edge_w @ (df * df) + g.c @ (f * f))


def bilinear_form(g: WeightedGraph, f, h) -> float:
    """Polarization Q(f, h); symmetric in its arguments."""
    f = _as_vector(g, f)
    h = _as_vector(g, h)
    df = f[g.edge_u] - f[g.edge_v]
    dh = h[g.edge_u] - h[g.edge_v]
    return float(g.edge_w @ (df * dh) + g.c @ (f * h))


def m_inner(g: WeightedGraph, f, h) -> float:
    """Measure-weighted inner product sum_x f(x) h(x) m(x)."""
    f = _as_vector(g, f)
    h = _as_vector(g, h)
    return float(np.sum(f * h * g.m))


def m_norm(g: WeightedGraph, f) -> float:
    return float(np.sqrt(max(m_inner(g, f, f), 0.0)))


def assemble_operator(g: WeightedGraph) -> FormOperator:
    """Stiffness matrix of Q: A[x,y] = -b(x,y) off-diagonal, degree + c on it."""
    n = g.n_vertices
    a = np.zeros((n, n))
    a[g.edge_u, g.edge_v] = -g.edge_w
    a[g.edge_v, g.edge_u] = -g.edge_w
    a[np.arange(n), np.arange(n)] = g.c + g.weighted_degree()
    return FormOperator(g, a)


def restrict(g: WeightedGraph, subset: VertexSubset) -> WeightedGraph:
    """Induced graph (b_A, c_A) on a nonempty subset A.

    Edges inside A keep their weight, the measure is inherited, and every
    severed edge from x in A to the complement is added to the killing term
    of x. On a finite vertex set this single construction realizes the
    restriction of the form to functions supported in A.
    """
    if isinstance(subset, np.ndarray):
        subset = VertexSubset(subset)
    if subset.size != g.n_vertices:
        raise DimensionError("subset size does not match the graph")
    if subset.is_empty():
        raise EmptySubset("cannot restrict to the empty set")
    keep = subset.indices()
    new_index = -np.ones(g.n_vertices, dtype=int)
    new_index[keep] = np.arange(keep.shape[0])

    c_new = g.c[keep].copy()
    edges = []
    for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w):
        iu, iv = new_index[u], new_index[v]
        if iu >= 0 and iv >= 0:
            edges.append((iu, iv, w))
        elif iu >= 0:
            c_new[iu] += w
        elif iv >= 0:
            c_new[iv] += w
    return WeightedGraph(labels=[g.labels[i] for i in keep],
                         m=g.m[keep], c=c_new, edges=edges)


def positivity_preserving_check(g: WeightedGraph, trials: int = 100,
                                seed: int = 0) -> bool:
    """Conformance check of Q(|f|) <= Q(f) on random functions.

    Graph forms always pass; this is not a classifier. Returns True iff
    every trial satisfies the inequality up to 1e-10 * (1 + |Q(f)|).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        f = rng.standard_normal(g.n_vertices)
        qf = quadratic_form(g, f)
        if quadratic_form(g, np.abs(f)) > qf + 1e-10 * (1.0 + abs(qf)):
            return False
    return True


# ---------------------------------------------------------------------------
# JSON schema: {"vertices": [{"label","m","c"}...], "edges": [{"u","v","b"}...]}
# ---------------------------------------------------------------------------

_VERTEX_KEYS = {"label", "m", "c"}
_EDGE_KEYS = {"u", "v", "b"}


def _require_number(value, where, token):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}", token)
    return float(value)


def graph_from_json(data, default_measure_one: bool = False) -> WeightedGraph:
    """Parse the graph JSON schema; unknown fields are rejected.

    The vertex measure ``m`` is mandatory in the file format unless
    ``default_measure_one`` is set (the CLI flag ``--default-measure-one``),
    in which case missing measures default to 1. The killing term ``c``
    defaults to 0. Edge weights must be strictly positive.
    """
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    unknown = set(data) - {"vertices", "edges"}
    if unknown:
        key = sorted(unknown)[0]
        raise SchemaError(f"unknown top-level field {key!r}", key)
    if "vertices" not in data or not isinstance(data["vertices"], list):
        raise SchemaError("missing or invalid 'vertices' array", "vertices")
    if "edges" not in data or not isinstance(data["edges"], list):
        raise SchemaError("missing or invalid 'edges' array", "edges")

    labels, ms, cs = [], [], []
    for i, vert in enumerate(data["vertices"]):
        where = f"vertices[{i}]"
        if not isinstance(vert, dict):
            raise SchemaError(f"{where}: expected an object")
        unknown = set(vert) - _VERTEX_KEYS
        if unknown:
            key = sorted(unknown)[0]
            raise SchemaError(f"{where}: unknown field {key!r}", key)
        if "label" not in vert or not isinstance(vert["label"], str):
            raise SchemaError(f"{where}: missing string 'label'", "label")
        label = vert["label"]
        if "m" in vert:
            mval = _require_number(vert["m"], f"{where}.m", label)
            if mval <= 0.0:
                raise SchemaError(f"{where}: measure must be > 0", label)
        elif default_measure_one:
            mval = 1.0
        else:
            raise SchemaError(
                f"{where}: measure 'm' is mandatory "
                "(pass --default-measure-one to default it to 1)", label)
        cval = _require_number(vert.get("c", 0.0), f"{where}.c", label)
        if cval < 0.0:
            raise SchemaError(f"{where}: killing term must be >= 0", label)
        labels.append(label)
        ms.append(mval)
        cs.append(cval)
    if len(set(labels)) != len(labels):
        raise SchemaError("vertex labels must be unique")
    if not labels:
        raise SchemaError("graph needs at least one vertex")
    where_of = {lab: i for i, lab in enumerate(labels)}

    edges = []
    for i, edge in enumerate(data["edges"]):
        where = f"edges[{i}]"
        if not isinstance(edge, dict):
            raise SchemaError(f"{where}: expected an object")
        unknown = set(edge) - _EDGE_KEYS
        if unknown:
            key = sorted(unknown)[0]
            raise SchemaError(f"{where}: unknown field {key!r}", key)
        for key in _EDGE_KEYS:
            if key not in edge:
                raise SchemaError(f"{where}: missing field {key!r}", key)
        for key in ("u", "v"):
            if not isinstance(edge[key], str) or edge[key] not in where_of:
                raise SchemaError(
                    f"{where}: '{key}' must name an existing vertex", key)
        weight = _require_number(edge["b"], f"{where}.b", "b")
        if weight <= 0.0:
            raise SchemaError(
                f"{where}: edge weight must be strictly positive "
                "(omit the edge instead of using weight 0)", "b")
        edges.append((where_of[edge["u"]], where_of[edge["v"]], weight))

    try:
        return WeightedGraph(labels=labels, m=ms, c=cs, edges=edges)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def graph_to_json(g: WeightedGraph) -> dict:
    return {
        "vertices": [{"label": lab, "m": float(g.m[i]), "c": float(g.c[i])}
                     for i, lab in enumerate(g.labels)],
        "edges": [{"u": g.labels[u], "v": g.labels[v], "b": float(w)}
                  for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w)],
    }
