"""Command-line front end.

Subcommands (also reachable as ``--mode NAME``): spectrum, nodal,
invariance, grid, corpus, search-tight. Reports are JSON, one file per
eigenvalue cluster so a degenerate eigenvalue yields a single report
covering all sampled representatives; renderings are static SVG. Exit
codes: 0 when every bound check passes, 2 when a multiplicity was
ambiguous at the clustering tolerance, 1 on I/O, schema, numerical or
bound failure. Identical configuration and seed produce byte-identical
JSON output. ``NODALFORMS_THREADS`` caps the corpus worker pool.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import corpus as corpus_mod
from . import render as render_mod
from .elliptic import build_grid_form, grid_spec_from_json, strong_bound_report
from .errors import NodalFormsError, SchemaError
from .forms import assemble_operator, graph_from_json
from .invariance import (connected_components, invariant_subsets_bruteforce,
                         is_invariant_resolvent, is_irreducible)
from .nodal import courant_check
from .spectral import DEFAULT_CLUSTER_TOL, eigensystem
from .suite import run_graph_suite

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_AMBIGUOUS = 2

MODES = ("spectrum", "nodal", "invariance", "grid", "corpus", "search-tight")


@dataclass
class RunConfig:
    mode: str
    input: Optional[Path] = None
    n_range: Optional[list] = None
    tau: Optional[float] = None
    cluster_tol: float = DEFAULT_CLUSTER_TOL
    alpha: float = 1.0
    samples: int = 5
    seed: int = 0
    out: Path = Path("nodalforms-out")
    render: bool = False
    default_measure_one: bool = False
    family: str = "star"
    max_size: int = 12


class CliError(Exception):
    """Carries a user-facing, location-anchored message."""


def _worker_count() -> int:
    env = os.environ.get("NODALFORMS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"NODALFORMS_THREADS={env!r} is not an integer")
    return min(4, os.cpu_count() or 1)


def _anchored(path: Path, text: str, err: SchemaError) -> str:
    line = None
    if err.token is not None:
        pos = text.find(f'"{err.token}"')
        if pos >= 0:
            line = text.count("\n", 0, pos) + 1
    location = f"{path}:{line}" if line else str(path)
    return f"{location}: {err}"


def _load_json(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc}")
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def load_graph_file(path: Path, default_measure_one: bool = False):
    text, data = _load_json(path)
    try:
        return graph_from_json(data, default_measure_one=default_measure_one)
    except SchemaError as exc:
        raise CliError(_anchored(path, text, exc))


def load_grid_file(path: Path):
    text, data = _load_json(path)
    try:
        return grid_spec_from_json(data, base_dir=path.parent)
    except SchemaError as exc:
        raise CliError(_anchored(path, text, exc))


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _parse_n_range(text: Optional[str], dim: int) -> list:
    if text is None:
        return list(range(1, dim + 1))
    out = set()
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(chunk))
    bad = [n for n in out if not 1 <= n <= dim]
    if bad:
        raise CliError(f"eigen index {min(bad)} out of range 1..{dim}")
    return sorted(out)


def _exit_code(failure: bool, ambiguous: bool, all_pass: bool) -> int:
    if failure or not all_pass:
        return EXIT_FAILURE
    if ambiguous:
        return EXIT_AMBIGUOUS
    return EXIT_OK


def _cluster_payload(es, cl) -> dict:
    return {
        "first_index": cl.start + 1,
        "multiplicity": cl.count,
        "value": cl.value,
        "ambiguous": cl.ambiguous,
        "verdict": "AMBIGUOUS" if cl.ambiguous else "OK",
    }


def run_spectrum(cfg: RunConfig) -> int:
    g = load_graph_file(cfg.input, cfg.default_measure_one)
    es = eigensystem(assemble_operator(g), cluster_tol=cfg.cluster_tol)
    payload = {
        "input": cfg.input.name,
        "seed": cfg.seed,
        "cluster_tol": cfg.cluster_tol,
        "values": [float(v) for v in es.values],
        "clusters": [_cluster_payload(es, cl) for cl in es.clusters],
    }
    _write_json(cfg.out / f"{cfg.input.stem}.spectrum.json", payload)
    return _exit_code(False, es.ambiguous, True)


def _cluster_reports(g, es, cfg, ns, strong=False):
    """Group requested indices by cluster; build solver + sample reports."""
    by_cluster = {}
    for n in ns:
        cl = es.cluster_of(n)
        by_cluster.setdefault(cl.start, (cl, []))[1].append(n)
    files = []
    all_pass = True
    for start in sorted(by_cluster):
        cl, indices = by_cluster[start]
        reports = []
        for n in indices:
            reports.append(courant_check(g, es, n, tau=cfg.tau, strong=strong))
        if cl.count > 1:
            n0 = cl.start + 1
            for s in range(cfg.samples):
                sample_seed = cfg.seed * 1000003 + n0 * 101 + s
                reports.append(courant_check(g, es, n0, tau=cfg.tau,
                                             source="sample", seed=sample_seed,
                                             strong=strong))
        all_pass &= all(r.passes for r in reports)
        files.append((cl, reports))
    return files, all_pass


def run_nodal(cfg: RunConfig) -> int:
    g = load_graph_file(cfg.input, cfg.default_measure_one)
    es = eigensystem(assemble_operator(g), cluster_tol=cfg.cluster_tol)
    ns = _parse_n_range(cfg.n_range, es.dim)
    files, all_pass = _cluster_reports(g, es, cfg, ns)
    stem = cfg.input.stem
    for cl, reports in files:
        payload = {
            "input": cfg.input.name,
            "seed": cfg.seed,
            "cluster": _cluster_payload(es, cl),
            "reports": [r.to_json_dict(g) for r in reports],
        }
        _write_json(cfg.out / f"{stem}.cluster{cl.start + 1:03d}.json", payload)
        if cfg.render:
            for r in reports:
                if r.eigenvector_source == "solver_basis":
                    svg = render_mod.render_graph_svg(
                        g, es.vector(r.n), r.decomposition)
                    out = cfg.out / f"{stem}.n{r.n:03d}.svg"
                    out.write_text(svg)
    return _exit_code(False, es.ambiguous, all_pass)


def run_invariance(cfg: RunConfig) -> int:
    g = load_graph_file(cfg.input, cfg.default_measure_one)
    op = assemble_operator(g)
    parts = connected_components(g)
    payload = {
        "input": cfg.input.name,
        "seed": cfg.seed,
        "alpha": cfg.alpha,
        "irreducible": is_irreducible(g),
        "components": [list(comp.labels(g)) for comp in parts.components],
    }
    if g.n_vertices <= 20:
        family = invariant_subsets_bruteforce(op, alpha=cfg.alpha)
        payload["family_size"] = len(family)
        payload["invariant_subsets"] = []
        for sub in family:
            cert = is_invariant_resolvent(op, sub, alpha=cfg.alpha)
            payload["invariant_subsets"].append({
                "vertices": list(sub.labels(g)),
                "commutator_norm": cert.commutator_norm,
                "crossing_edges": len(cert.crossing_edges),
            })
    else:
        payload["family_size"] = None
        payload["note"] = "vertex set too large for exhaustive enumeration"
    _write_json(cfg.out / f"{cfg.input.stem}.invariance.json", payload)
    return EXIT_OK


def run_grid(cfg: RunConfig) -> int:
    spec = load_grid_file(cfg.input)
    g = build_grid_form(spec)
    es = eigensystem(assemble_operator(g), cluster_tol=cfg.cluster_tol)
    n_max = max(_parse_n_range(cfg.n_range, es.dim)) if cfg.n_range \
        else min(10, es.dim)
    reports = strong_bound_report(spec, es, n_max, tau=cfg.tau,
                                  samples_per_cluster=cfg.samples,
                                  seed=cfg.seed)
    stem = cfg.input.stem
    by_cluster = {}
    for r in reports:
        cl = es.cluster_of(r.n)
        by_cluster.setdefault(cl.start, (cl, []))[1].append(r)
    all_pass = True
    for start in sorted(by_cluster):
        cl, cluster_reports = by_cluster[start]
        all_pass &= all(r.passes for r in cluster_reports)
        payload = {
            "input": cfg.input.name,
            "seed": cfg.seed,
            "cluster": _cluster_payload(es, cl),
            "reports": [r.to_json_dict(g) for r in cluster_reports],
        }
        _write_json(cfg.out / f"{stem}.cluster{cl.start + 1:03d}.json", payload)
    if cfg.render:
        for n in range(1, n_max + 1):
            svg = render_mod.render_grid_svg(spec, es.vector(n))
            (cfg.out / f"{stem}.n{n:03d}.svg").write_text(svg)
    return _exit_code(False, es.ambiguous, all_pass)


def _corpus_entry(path: Path, cfg: RunConfig):
    """Load one corpus file and run the lemma suite; returns (name, payload)."""
    entry_seed = (cfg.seed * 1000003 + zlib.crc32(path.name.encode())) \
        & 0x7FFFFFFF
    _text, data = _load_json(path)
    if isinstance(data, dict) and "dims" in data:
        spec = load_grid_file(path)
        g = build_grid_form(spec)
        kind = "grid"
        cap = 40
    else:
        g = load_graph_file(path, cfg.default_measure_one)
        kind = "graph"
        cap = None
    report = run_graph_suite(g, seed=entry_seed, samples_per_cluster=cfg.samples,
                             cluster_tol=cfg.cluster_tol, eigen_cap=cap)
    payload = {"input": path.name, "kind": kind, "seed": entry_seed}
    payload.update(report.to_json_dict())
    return payload


def run_corpus(cfg: RunConfig) -> int:
    directory = cfg.input
    if not directory.is_dir():
        raise CliError(f"{directory}: not a directory")
    paths = sorted(directory.glob("*.json"))
    results = {}
    errors = {}

    def job(path):
        return path.name, _corpus_entry(path, cfg)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        futures = {pool.submit(job, path): path for path in paths}
        for future, path in futures.items():
            try:
                name, payload = future.result()
                results[name] = payload
            except (CliError, NodalFormsError, ValueError) as exc:
                errors[path.name] = str(exc)

    totals = {}
    for payload in results.values():
        for lemma, counts in payload["lemmas"].items():
            slot = totals.setdefault(lemma, {"checked": 0, "failures": 0})
            slot["checked"] += counts["checked"]
            slot["failures"] += counts["failures"]
    for name in sorted(results):
        _write_json(cfg.out / f"{Path(name).stem}.result.json", results[name])
    summary = {
        "seed": cfg.seed,
        "inputs": {name: results[name] for name in sorted(results)},
        "errors": {name: errors[name] for name in sorted(errors)},
        "totals": {name: totals[name] for name in sorted(totals)},
    }
    _write_json(cfg.out / "summary.json", summary)
    failure = bool(errors)
    ambiguous = any(p["ambiguous"] for p in results.values())
    all_pass = all(p["failures"] == 0 for p in results.values())
    return _exit_code(failure, ambiguous, all_pass)


def _family_graph(family: str, size: int):
    if family == "star":
        return corpus_mod.star_graph(size - 1) if size >= 3 else None
    if family == "path":
        return corpus_mod.path_graph(size)
    if family == "cycle":
        return corpus_mod.cycle_graph(size) if size >= 3 else None
    if family == "complete":
        return corpus_mod.complete_graph(size)
    raise CliError(f"unknown family {family!r}")


def run_search_tight(cfg: RunConfig) -> int:
    """Scan a graph family for eigenfunctions attaining l == n + k - 1."""
    instances = []
    all_pass = True
    ambiguous = False
    for size in range(2, cfg.max_size + 1):
        g = _family_graph(cfg.family, size)
        if g is None:
            continue
        es = eigensystem(assemble_operator(g), cluster_tol=cfg.cluster_tol)
        ambiguous |= es.ambiguous
        candidates = []
        for n in range(1, es.dim + 1):
            candidates.append(courant_check(g, es, n, tau=cfg.tau))
        for cl in es.clusters:
            if cl.count > 1:
                n0 = cl.start + 1
                for s in range(cfg.samples):
                    sample_seed = cfg.seed * 1000003 + size * 1009 + s
                    candidates.append(courant_check(g, es, n0, tau=cfg.tau,
                                                    source="sample",
                                                    seed=sample_seed))
        if cfg.family == "star" and size >= 4:
            witness = corpus_mod.star_tight_vector(size - 1)
            candidates.append(courant_check(g, es, 2, tau=cfg.tau,
                                            source="explicit", vector=witness))
        all_pass &= all(r.passes for r in candidates)
        for r in candidates:
            if r.l == r.bound:
                entry = r.to_json_dict(g)
                entry["size"] = size
                if r.eigenvector_source == "explicit":
                    entry["witness"] = [float(x) for x in
                                        corpus_mod.star_tight_vector(size - 1)]
                instances.append(entry)
    payload = {
        "family": cfg.family,
        "max_size": cfg.max_size,
        "seed": cfg.seed,
        "tight_instances": instances,
    }
    _write_json(cfg.out / f"search_tight_{cfg.family}.json", payload)
    return _exit_code(False, ambiguous, all_pass)


RUNNERS = {
    "spectrum": run_spectrum,
    "nodal": run_nodal,
    "invariance": run_invariance,
    "grid": run_grid,
    "corpus": run_corpus,
    "search-tight": run_search_tight,
}


def run(cfg: RunConfig) -> int:
    """Dispatch one configured run; exceptions map to exit code 1."""
    try:
        return RUNNERS[cfg.mode](cfg)
    except (CliError, NodalFormsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodalforms",
        description="Spectra, nodal domains and Courant bound checks for "
                    "positivity preserving graph forms.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        if mode != "search-tight":
            p.add_argument("--input", required=True, type=Path)
        p.add_argument("--out", type=Path, default=Path("nodalforms-out"))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tau", type=float, default=None)
        p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--samples", type=int, default=5)
        p.add_argument("--render", action="store_true")
        p.add_argument("--default-measure-one", action="store_true")
        if mode in ("nodal", "grid"):
            p.add_argument("--n", default=None,
                           help="eigen indices, e.g. '3', '1..8' or '1,4,7'")
        if mode == "search-tight":
            p.add_argument("--family", default="star",
                           choices=("star", "path", "cycle", "complete"))
            p.add_argument("--max-size", type=int, default=12)
    return parser


def _normalize_argv(argv):
    """Allow '--mode X' or '--mode=X' anywhere as an alias for the subcommand."""
    argv = list(argv)
    if "--mode" in argv:
        i = argv.index("--mode")
        if i + 1 < len(argv):
            mode = argv[i + 1]
            del argv[i:i + 2]
            argv.insert(0, mode)
    else:
        for i, arg in enumerate(argv):
            if arg.startswith("--mode="):
                mode = arg.split("=", 1)[1]
                del argv[i]
                argv.insert(0, mode)
                break
    return argv


def main(argv=None) -> int:
    argv = _normalize_argv(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        mode=args.mode,
        input=getattr(args, "input", None),
        n_range=getattr(args, "n", None),
        tau=args.tau,
        cluster_tol=args.cluster_tol,
        alpha=args.alpha,
        samples=args.samples,
        seed=args.seed,
        out=args.out,
        render=args.render,
        default_measure_one=args.default_measure_one,
        family=getattr(args, "family", "star"),
        max_size=getattr(args, "max_size", 12),
    )
    for name, value in (("--tau", cfg.tau), ("--cluster-tol", cfg.cluster_tol),
                        ("--alpha", cfg.alpha)):
        if value is not None and value <= 0:
            parser.error(f"{name} must be positive")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
