"""Finite-difference grids for divergence-form elliptic operators.

The operator -div(a grad) + V on a 1D interval or a masked 2D rectangle,
with Dirichlet walls, is emitted as a weighted graph so the whole graph
machinery (spectra, nodal domains, bound checks) applies unchanged:

    vertex measure   m = h^dims            (cell volume)
    edge weight      b = a_edge * h^(dims-2)
    killing term     c = V * h^dims + sum over severed wall/mask links
                         of a_edge * h^(dims-2)

Folding the Dirichlet condition into the killing term makes the boundary
condition and the graph restriction construction literally the same code
path. The conductivity a is isotropic (scalar per cell, averaged onto edge
midpoints); a full tensor would need off-grid stencils that break the
graph correspondence, and the nodal-structure checks only need the scalar
case.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import EmptyDomain, SchemaError
from .forms import WeightedGraph
from .nodal import courant_check
from .spectral import EigenSystem


@dataclass(frozen=True)
class GridSpec:
    """Uniform-mesh description of the discretized operator.

    ``a`` and ``V`` may be scalars or per-cell arrays over the full
    rectangle; ``mask`` selects the cells that belong to the domain
    (everything outside is Dirichlet wall). Ellipticity requires a > 0
    everywhere; the realized bounds mu_1 = min a, mu_2 = max a are exposed.
    """

    dims: int
    shape: tuple
    h: float
    a: np.ndarray
    v: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        if self.dims not in (1, 2):
            raise ValueError("dims must be 1 or 2")
        if len(self.shape) != self.dims or any(s < 1 for s in self.shape):
            raise ValueError(f"bad shape {self.shape} for dims={self.dims}")
        if not self.h > 0.0:
            raise ValueError("mesh width h must be positive")
        for name, arr in (("a", self.a), ("V", self.v)):
            if arr.shape != self.shape:
                raise ValueError(f"{name} field shape {arr.shape} != {self.shape}")
        if self.mask.shape != self.shape:
            raise ValueError("mask shape does not match grid shape")
        if not np.any(self.mask):
            raise EmptyDomain("mask selects no cells")
        if not np.all(self.a > 0.0):
            raise ValueError("conductivity must be strictly positive")
        if not np.all(self.v >= 0.0):
            raise ValueError("potential must be nonnegative")

    @property
    def mu_bounds(self) -> tuple:
        return float(np.min(self.a)), float(np.max(self.a))

    @property
    def n_cells(self) -> int:
        return int(np.sum(self.mask))


def make_grid_spec(dims: int, shape, h: float, a=1.0, v=0.0,
                   mask=None) -> GridSpec:
    """Convenience constructor broadcasting scalar a, V and a full mask."""
    shape = tuple(int(s) for s in (shape if np.iterable(shape) else [shape]))
    a_arr = np.broadcast_to(np.asarray(a, dtype=float), shape).copy()
    v_arr = np.broadcast_to(np.asarray(v, dtype=float), shape).copy()
    mask_arr = (np.ones(shape, dtype=bool) if mask is None
                else np.asarray(mask, dtype=bool).copy())
    return GridSpec(dims=dims, shape=shape, h=float(h), a=a_arr, v=v_arr,
                    mask=mask_arr)


def _cells(spec: GridSpec):
    if spec.dims == 1:
        return [(i,) for i in range(spec.shape[0]) if spec.mask[i]]
    return [(i, j) for i in range(spec.shape[0]) for j in range(spec.shape[1])
            if spec.mask[i, j]]


def _label(cell) -> str:
    return ",".join(str(i) for i in cell)


def build_grid_form(spec: GridSpec) -> WeightedGraph:
    """Weighted graph of the discretized operator on the masked cells.

    Neighbor links inside the mask become edges with the midpoint-averaged
    conductivity; links pointing at a wall or a masked-out cell are severed
    into the killing term. A severed link toward a masked-out neighbor uses
    the same midpoint average (the field is defined on the full rectangle);
    a link toward the rectangle wall uses the cell's own value.
    """
    cells = _cells(spec)
    index = {cell: i for i, cell in enumerate(cells)}
    h = spec.h
    vol = h ** spec.dims
    w_scale = h ** (spec.dims - 2)

    def a_at(cell):
        return spec.a[cell]

    def in_rect(cell):
        return all(0 <= x < s for x, s in zip(cell, spec.shape))

    offsets = [(1,), (-1,)] if spec.dims == 1 else [(1, 0), (-1, 0), (0, 1), (0, -1)]
    m = [vol] * len(cells)
    c = [float(spec.v[cell]) * vol for cell in cells]
    edges = []
    for cell in cells:
        i = index[cell]
        for off in offsets:
            nb = tuple(x + d for x, d in zip(cell, off))
            if not in_rect(nb):
                c[i] += float(a_at(cell)) * w_scale
            elif nb not in index:
                c[i] += 0.5 * float(a_at(cell) + a_at(nb)) * w_scale
            elif index[nb] > i:
                w = 0.5 * float(a_at(cell) + a_at(nb)) * w_scale
                edges.append((i, index[nb], w))
    return WeightedGraph(labels=[_label(cell) for cell in cells],
                         m=m, c=c, edges=edges)


def dirichlet_interval_eigenvalues(nx: int, h: float) -> np.ndarray:
    """Exact spectrum of the 1D Dirichlet stencil with unit conductivity."""
    k = np.arange(1, nx + 1)
    return (2.0 - 2.0 * np.cos(k * np.pi / (nx + 1))) / h ** 2


def dirichlet_rectangle_eigenvalues(nx: int, ny: int, h: float) -> np.ndarray:
    """Exact ascending spectrum of the 2D Dirichlet stencil on a rectangle."""
    lx = dirichlet_interval_eigenvalues(nx, h)
    ly = dirichlet_interval_eigenvalues(ny, h)
    return np.sort((lx[:, None] + ly[None, :]).ravel())


def strong_bound_report(spec: GridSpec, es: EigenSystem, n_max: int,
                        tau: Optional[float] = None,
                        samples_per_cluster: int = 5, seed: int = 0) -> list:
    """Courant reports with strong-bound evaluation for n = 1..n_max.

    On grid graphs the nodal domains are pixel-connectedness components,
    the discrete counterpart of topological nodal domains. Solver vectors
    are always checked; degenerate clusters additionally get seeded random
    eigenspace samples, since the basis there is solver-dependent. Strong
    bound violations in degenerate clusters are findings to report, not
    failures: the l <= n statement assumes unique continuation, which the
    discretization is not guaranteed to inherit.
    """
    g = es.operator.graph
    reports = []
    for n in range(1, min(n_max, es.dim) + 1):
        reports.append(courant_check(g, es, n, tau=tau, strong=True))
        cl = es.cluster_of(n)
        if cl.count > 1:
            for s in range(samples_per_cluster):
                sample_seed = seed * 1000003 + n * 101 + s
                reports.append(courant_check(g, es, n, tau=tau, source="sample",
                                             seed=sample_seed, strong=True))
    return reports


# ---------------------------------------------------------------------------
# JSON schema:
#   {"dims":int, "shape":[int...], "h":float,
#    "a":float|"fieldfile", "V":float|"fieldfile", "mask":"maskfile"|null}
# field/mask files are plain-text row-major grids next to the spec file.
# ---------------------------------------------------------------------------

_GRID_KEYS = {"dims", "shape", "h", "a", "V", "mask"}


def _load_field(value, name, shape, base_dir):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return np.broadcast_to(float(value), shape).copy()
    if isinstance(value, str):
        path = Path(base_dir) / value
        try:
            arr = np.loadtxt(path, dtype=float)
        except OSError as exc:
            raise SchemaError(f"{name}: cannot read field file {value!r}: {exc}",
                              name) from exc
        arr = arr.reshape(shape) if arr.size == int(np.prod(shape)) else arr
        if arr.shape != shape:
            raise SchemaError(
                f"{name}: field file {value!r} has shape {arr.shape}, "
                f"expected {shape}", name)
        return arr
    raise SchemaError(f"{name}: expected a number or a field file name", name)


def grid_spec_from_json(data, base_dir=".") -> GridSpec:
    """Parse the grid JSON schema; unknown fields are rejected."""
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    unknown = set(data) - _GRID_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise SchemaError(f"unknown field {key!r}", key)
    for key in ("dims", "shape", "h"):
        if key not in data:
            raise SchemaError(f"missing field {key!r}", key)
    dims = data["dims"]
    if not isinstance(dims, int) or dims not in (1, 2):
        raise SchemaError("dims must be 1 or 2", "dims")
    shape = data["shape"]
    if (not isinstance(shape, list) or len(shape) != dims
            or not all(isinstance(s, int) and s >= 1 for s in shape)):
        raise SchemaError("shape must be a list of positive ints matching dims",
                          "shape")
    shape = tuple(shape)
    h = data["h"]
    if isinstance(h, bool) or not isinstance(h, (int, float)) or not h > 0:
        raise SchemaError("h must be a positive number", "h")

    a = _load_field(data.get("a", 1.0), "a", shape, base_dir)
    v = _load_field(data.get("V", 0.0), "V", shape, base_dir)
    mask_value = data.get("mask", None)
    if mask_value is None:
        mask = np.ones(shape, dtype=bool)
    elif isinstance(mask_value, str):
        mask = _load_field(mask_value, "mask", shape, base_dir) != 0.0
    else:
        raise SchemaError("mask must be a file name or null", "mask")
    try:
        return GridSpec(dims=dims, shape=shape, h=float(h), a=a, v=v, mask=mask)
    except (ValueError, EmptyDomain) as exc:
        raise SchemaError(str(exc)) from exc


def grid_spec_to_json(spec: GridSpec, mask_file: Optional[str] = None) -> dict:
    """Serialize a spec with scalar a and V; the caller writes the mask file.

    When the mask is not the full rectangle, ``mask_file`` must name the
    plain-text 0/1 grid the caller will write next to the JSON.
    """
    out = {"dims": spec.dims, "shape": list(spec.shape), "h": spec.h}
    mu1, mu2 = spec.mu_bounds
    if mu1 != mu2:
        raise ValueError("non-constant conductivity needs a field file")
    out["a"] = mu1
    if float(np.min(spec.v)) != float(np.max(spec.v)):
        raise ValueError("non-constant potential needs a field file")
    out["V"] = float(np.min(spec.v))
    if bool(np.all(spec.mask)):
        out["mask"] = None
    else:
        if mask_file is None:
            raise ValueError("masked spec needs a mask_file name")
        out["mask"] = mask_file
    return out
