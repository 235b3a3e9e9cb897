"""Command-line front end: enumerate, connect, label, learn, search, report."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ._budget import Budget
from ._checkpoint import Checkpoint
from ._config import Config, load_config
from ._connection import ConnectionMatrix, Pencil, gm_connection_at
from ._dataset import (
    POLICIES,
    EdgeSet,
    EdgeStore,
    OrbitStore,
    VertexSet,
    VertexStore,
    balance_oversample,
    build_edges,
    enumerate_fewnomials,
    s4_orbits,
    sample_orbit_representatives,
    split,
)
from ._ensemble import EnsembleModel, alpha_sweep, feature_arrays, train_ensemble, width_sweep
from ._exceptions import (
    DatasetError,
    PeriodPlanError,
    SearchError,
    SingularHypersurfaceError,
    StoreError,
)
from ._features import FeatureStore, PCAModel, feature_record, pca_fit, timing_rows
from ._jacobian import RingCache
from ._metrics import evaluate, roc, write_roc_csv
from ._network import Network, NetworkSpec, build_network
from ._oracle import AlgebraicOracle, SyntheticOracle, canonical_edge
from ._picard_fuchs import LabelStore, host_tag, label_edge
from ._polynomial import Polynomial
from ._scheduler import SearchProblem, brute_force, compare_strategies, queue_order, resume
from ._stores import read_json, write_json
from ._training import TrainConfig, train
from ._types import NOT_GIVEN, Edge, Scorer
from ._version import __version__
from .types.dataset import SplitSpec
from .types.features import FeatureRecord
from .types.labels import EdgeLabel, TimingRow
from .types.search import SearchReport

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_FAIL", "EXIT_ERROR", "toy_problem"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

MODEL_KINDS = ("mlp", "cnn", "ensemble")


# ----------------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------------


def _setup_logging(verbosity: int, level: str) -> None:
    if verbosity >= 2:
        level = "DEBUG"
    elif verbosity == 1:
        level = "INFO"
    root = logging.getLogger("periodplan")
    root.setLevel(level)
    if not any(getattr(h, "_periodplan", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s", "%H:%M:%S"))
        handler._periodplan = True  # type: ignore[attr-defined]
        root.addHandler(handler)


def _stamp(path: Path, config: Config, command: str) -> None:
    """Sidecar provenance for JSON-Lines and CSV outputs"""
    write_json(path.with_name(path.name + ".meta.json"), config.provenance(command))


def _require(path: Path, what: str) -> Path:
    if not path.exists():
        raise StoreError(f"missing {what} at {path}; run the upstream command first")
    return path


def _csv_list(value: str) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _read_lines(path: str) -> List[str]:
    p = Path(path)
    if not p.exists():
        raise StoreError(f"missing input file {p}")
    with open(p, "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip() and not line.strip().startswith("#")]


def _canonical(text: str) -> str:
    return Polynomial.parse(text).canonical_key()


def _load_vertices(config: Config) -> VertexSet:
    store = VertexStore(_require(config.path("vertices_path"), "vertex store"))
    return VertexSet.from_records(store.load())


def _load_edges(config: Config) -> List[Edge]:
    store = EdgeStore(_require(config.path("edges_path"), "edge store"))
    return [(r.f, r.g) for r in store.load()]


def _load_features(config: Config) -> Dict[str, FeatureRecord]:
    return FeatureStore(_require(config.path("features_path"), "feature store")).latest()


def _load_labels(config: Config) -> Dict[str, EdgeLabel]:
    return LabelStore(_require(config.path("labels_path"), "label store")).latest()


def _train_config(config: Config) -> TrainConfig:
    net = config.network
    return TrainConfig(
        gamma=net.gamma, decay=net.decay, batch_size=net.batch_size, epochs=net.epochs, seed=config.seed
    )


def _model_path(config: Config, kind: str) -> Path:
    return config.path("models_dir") / f"{kind}.json"


def _load_pca(config: Config) -> Optional[PCAModel]:
    path = config.path("models_dir") / "pca.json"
    return PCAModel.load(path) if path.exists() else None


def _record_scorer(config: Config, kind: str) -> Callable[[Sequence[FeatureRecord]], np.ndarray]:
    """Score feature records with a saved model of the given kind"""
    path = _require(_model_path(config, kind), f"{kind} model")
    if kind == "ensemble":
        model = EnsembleModel.load(path)
        return model.score_records
    net = Network.load(path)
    pca = _load_pca(config)

    def score(records: Sequence[FeatureRecord]) -> np.ndarray:
        vectors, channels = feature_arrays(records, pca)
        return net.forward(vectors if kind == "mlp" else channels)

    return score


class _RecordScorer:
    """Scorer over stored features for any saved model kind; unknown edges score 0"""

    def __init__(self, score: Callable[[Sequence[FeatureRecord]], np.ndarray], features: Mapping[str, FeatureRecord]):
        self._score = score
        self.features = features

    def score(self, edges: Sequence[Edge]) -> List[float]:
        out = [0.0] * len(edges)
        known: List[Tuple[int, FeatureRecord]] = []
        for i, (a, b) in enumerate(edges):
            rec = self.features.get(f"{a} | {b}") or self.features.get(f"{b} | {a}")
            if rec is not None:
                known.append((i, rec))
        if known:
            for (i, _), s in zip(known, self._score([r for _, r in known])):
                out[i] = float(s)
        return out


class _CostScorer:
    """Negated synthetic cost: the perfect ranking for a synthetic oracle"""

    def __init__(self, oracle: SyntheticOracle) -> None:
        self.oracle = oracle

    def score(self, edges: Sequence[Edge]) -> List[float]:
        return [-min(self.oracle.cost(e), 1e300) for e in edges]


def toy_problem() -> Tuple[List[str], List[str], List[Edge], SyntheticOracle]:
    """V = {a, b}, W = {a, b, c}; the direct edge never finishes, both detours take 1s"""
    oracle = SyntheticOracle({("a", "b"): float("inf"), ("a", "c"): 1.0, ("b", "c"): 1.0})
    return ["a", "b"], ["a", "b", "c"], [("a", "b"), ("a", "c"), ("b", "c")], oracle


def _print(data: Any) -> None:
    sys.stdout.write(json.dumps(data, indent=2, default=str) + "\n")


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_enumerate(args: argparse.Namespace, config: Config) -> int:
    vertices = enumerate_fewnomials(args.k, jobs=config.workers)
    path = config.path("vertices_path")
    store = VertexStore(path)
    store.clear()
    store.extend(vertices.records())
    _stamp(path, config, "enumerate")
    logger.info("wrote %d vertices to %s", len(vertices), path)
    _print({"k": args.k, "vertices": len(vertices), "path": str(path)})
    return EXIT_OK


def cmd_orbits(args: argparse.Namespace, config: Config) -> int:
    table = s4_orbits(_load_vertices(config))
    path = config.workdir / "orbits.jsonl"
    store = OrbitStore(path)
    store.clear()
    store.extend(table.records())
    _stamp(path, config, "orbits")
    out: Dict[str, Any] = {"orbits": len(table), "path": str(path)}
    if args.sample:
        out["sample"] = sample_orbit_representatives(table, args.sample, config.seed)
    _print(out)
    return EXIT_OK


def cmd_edges(args: argparse.Namespace, config: Config) -> int:
    vertices = _load_vertices(config)
    members: Sequence[Polynomial] = list(vertices)
    if args.sample_orbits:
        reps = set(sample_orbit_representatives(s4_orbits(vertices), args.sample_orbits, config.seed))
        members = [p for p in vertices if p.canonical_key() in reps]
    companions = None
    if args.companions:
        companions = VertexSet.from_records(VertexStore(_require(Path(args.companions), "companion store")).load())
    pairs = None
    if args.policy == "custom":
        if not args.pairs:
            raise DatasetError("the custom policy needs --pairs FILE with 'f | g' lines")
        pairs = []
        for line in _read_lines(args.pairs):
            f, sep, g = line.partition("|")
            if not sep:
                raise DatasetError(f"custom edge line {line!r} is not of the form 'f | g'")
            pairs.append((_canonical(f), _canonical(g)))
    edges: EdgeSet = build_edges(
        members, args.policy, companions=list(companions) if companions else None, pairs=pairs
    )
    path = config.path("edges_path")
    store = EdgeStore(path)
    store.clear()
    store.extend(edges.records())
    _stamp(path, config, "edges")
    _print({"policy": args.policy, "edges": len(edges), "path": str(path)})
    return EXIT_OK


def cmd_gm(args: argparse.Namespace, config: Config) -> int:
    basepoints = config.basepoint_values()
    path = config.path("features_path")
    store = FeatureStore(path)
    done = store.latest() if store.exists() else {}
    cache = RingCache()
    written = skipped = 0
    for f, g in _load_edges(config):
        pencil = Pencil.parse(f, g)
        if pencil.edge_id in done:
            continue
        matrices: Dict[Fraction, ConnectionMatrix] = {}
        try:
            for t0 in basepoints:
                matrices[t0] = gm_connection_at(pencil, t0, cache=cache)
        except SingularHypersurfaceError as exc:
            logger.warning("skipping %s: %s", pencil.edge_id, exc.message)
            skipped += 1
            continue
        store.append(feature_record(pencil, matrices, basepoints))
        written += 1
    _stamp(path, config, "gm")
    _print({"written": written, "singular": skipped, "path": str(path)})
    return EXIT_OK


def _label_job(f: str, g: str, wall_clock: float, step_limit: Optional[int], host: str) -> str:
    label = label_edge(Pencil.parse(f, g), Budget(wall_clock=wall_clock, step_limit=step_limit), host=host)
    return label.model_dump_json()


def cmd_label(args: argparse.Namespace, config: Config) -> int:
    path = config.path("labels_path")
    store = LabelStore(path)
    done = set(store.latest()) if store.exists() else set()
    todo = []
    for f, g in _load_edges(config):
        pencil = Pencil.parse(f, g)
        if pencil.edge_id not in done or args.relabel:
            todo.append(pencil)
    host = host_tag()
    budget = Budget(wall_clock=config.budget_seconds, step_limit=config.step_limit)
    successes = 0
    if config.workers == 1:
        for pencil in todo:
            successes += label_edge(pencil, budget, store=store, host=host).success
    else:
        # single writer: workers return labels, the coordinator appends them
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [
                pool.submit(
                    _label_job,
                    p.f.canonical_key(),
                    p.g.canonical_key(),
                    config.budget_seconds,
                    config.step_limit,
                    host,
                )
                for p in todo
            ]
            for fut in futures:
                label = EdgeLabel.model_validate_json(fut.result())
                store.append(label)
                successes += label.success
    _stamp(path, config, "label")
    _print({"labeled": len(todo), "successes": successes, "path": str(path)})
    return EXIT_OK


def cmd_pca(args: argparse.Namespace, config: Config) -> int:
    features = _load_features(config)
    if not features:
        raise DatasetError("the feature store is empty")
    x = np.array([features[e].vector for e in sorted(features)])
    model = pca_fit(x, config.pca_components)
    path = config.path("models_dir") / "pca.json"
    model.save(path, config.provenance("pca"))
    _print(
        {
            "components": model.k,
            "explained_variance": float(np.sum(model.explained_variance_ratio())),
            "path": str(path),
        }
    )
    return EXIT_OK


def _labeled_features(config: Config) -> Tuple[Dict[str, FeatureRecord], Dict[str, bool]]:
    features = _load_features(config)
    labels = {e: l.success for e, l in _load_labels(config).items() if e in features}
    if not labels:
        raise DatasetError("no edge has both features and a label")
    return features, labels


def cmd_train(args: argparse.Namespace, config: Config) -> int:
    features, labels = _labeled_features(config)
    pca = _load_pca(config)
    if pca is None and any(features[e].pca is None for e in labels):
        raise StoreError("no PCA model; run the pca command first")
    spec = split(sorted(labels), config.alpha, config.seed)
    write_json(config.path("models_dir") / "split.json", {**spec.model_dump(), "provenance": config.provenance("train")})
    rows = [features[e] for e in spec.train]
    provenance = config.provenance("train")
    if args.model == "ensemble":
        model = train_ensemble(
            rows,
            labels,
            pca=pca,
            config=_train_config(config),
            mlp_widths=config.network.mlp_widths,
            cnn_channels=config.network.cnn_channels,
            cnn_dense=config.network.cnn_dense,
            seed=config.seed,
        )
        model.save(_model_path(config, "ensemble"), provenance)
    else:
        rows = balance_oversample(rows, config.seed, label=lambda r: labels[r.edge])
        vectors, channels = feature_arrays(rows, pca)
        y = np.array([1.0 if labels[r.edge] else 0.0 for r in rows])
        if args.model == "mlp":
            spec_net = NetworkSpec(kind="mlp", input_dim=vectors.shape[1], widths=config.network.mlp_widths, seed=config.seed)
            x = vectors
        else:
            spec_net = NetworkSpec(
                kind="cnn",
                channels=channels.shape[1],
                grid=channels.shape[2],
                conv_channels=config.network.cnn_channels,
                dense_width=config.network.cnn_dense,
                seed=config.seed + 1,
            )
            x = channels
        net = build_network(spec_net)
        result = train(net, _train_config(config), x, y)
        net.save(_model_path(config, args.model), provenance)
        logger.info("final training loss %.6f", result.losses[-1] if result.losses else float("nan"))
    _print({"model": args.model, "train": len(spec.train), "test": len(spec.test)})
    return EXIT_OK


def _load_split(config: Config) -> SplitSpec:
    data = read_json(_require(config.path("models_dir") / "split.json", "train/test split"))
    if not isinstance(data, dict):
        raise StoreError("split.json is not a JSON object")
    data.pop("provenance", None)
    return SplitSpec.model_validate(data)


def cmd_predict(args: argparse.Namespace, config: Config) -> int:
    features = _load_features(config)
    score = _record_scorer(config, args.model)
    edges = sorted(features)
    if args.source:
        src = _canonical(args.source)
        edges = [e for e in edges if src in e.split(" | ")]
    if not edges:
        raise DatasetError("no featured edges to score")
    scores = score([features[e] for e in edges])
    groups: Dict[str, List[Tuple[str, float]]] = {}
    for e, s in zip(edges, scores):
        groups.setdefault(e.split(" | ")[0] if not args.source else args.source, []).append((e, float(s)))
    ranked: List[Dict[str, Any]] = []
    for source in sorted(groups):
        top = sorted(groups[source], key=lambda p: (-p[1], p[0]))
        if not args.all:
            top = top[: config.top_n]
        ranked.extend({"source": source, "edge": e, "score": s} for e, s in top)
    path = config.workdir / f"predictions_{args.model}.json"
    write_json(path, {"predictions": ranked, "provenance": config.provenance("predict")})
    _print({"scored": len(edges), "kept": len(ranked), "path": str(path)})
    return EXIT_OK


def cmd_roc(args: argparse.Namespace, config: Config) -> int:
    features, labels = _labeled_features(config)
    spec = _load_split(config)
    test = [features[e] for e in spec.test if e in features and e in labels]
    if not test:
        raise DatasetError("the held-out split has no featured, labeled edges")
    scores = _record_scorer(config, args.model)(test)
    y = [labels[r.edge] for r in test]
    curve = roc(scores, y)
    c = evaluate(scores, y, args.tau)
    path = config.workdir / f"roc_{args.model}.csv"
    write_roc_csv(curve, path, config.provenance("roc"))
    _print(
        {
            "auc": curve.auc,
            "tau": args.tau,
            "success_accuracy": c.tpr,
            "failure_accuracy": c.tnr,
            "path": str(path),
        }
    )
    return EXIT_OK


def _search_inputs(
    args: argparse.Namespace, config: Config
) -> Tuple[List[str], List[str], List[Edge], Any, Optional[Scorer]]:
    if args.toy:
        targets, waypoints, edges, oracle = toy_problem()
        scorer: Optional[Scorer] = _CostScorer(oracle) if args.scored else None
        return targets, waypoints, edges, oracle, scorer
    if not args.targets:
        raise SearchError("search needs --targets FILE (one polynomial per line) or --toy")
    targets = [_canonical(t) for t in _read_lines(args.targets)]
    if args.waypoints:
        waypoints = sorted({_canonical(w) for w in _read_lines(args.waypoints)} | set(targets))
    else:
        waypoints = sorted(set(_load_vertices(config).ids()) | set(targets))
    w = set(waypoints)
    edges = sorted({canonical_edge(e) for e in _load_edges(config) if e[0] in w and e[1] in w})
    oracle = AlgebraicOracle(step_limit=config.step_limit, store=LabelStore(config.path("labels_path")))
    scorer = None
    if args.scored:
        scorer = _RecordScorer(_record_scorer(config, args.model), _load_features(config))
    return targets, waypoints, edges, oracle, scorer


def cmd_search(args: argparse.Namespace, config: Config) -> int:
    targets, waypoints, edges, oracle, scorer = _search_inputs(args, config)
    problem = SearchProblem(
        targets=targets,
        waypoints=waypoints,
        edges=edges,
        budget=config.budget_seconds,
        oracle=oracle,
        scorer=scorer,
        workers=config.workers,
        isolation=config.isolation,
        retries=config.retries,
        seed=config.seed,
    )
    checkpoint = Checkpoint(config.path("checkpoint_path"))
    if args.resume and checkpoint.exists():
        result = resume(checkpoint, problem)
    else:
        checkpoint.clear()
        result = brute_force(problem, queue_order(problem), checkpoint=checkpoint)
    report = result.report(config.provenance("search"))
    path = Path(args.output) if args.output else config.workdir / "report.json"
    write_json(path, report.model_dump(mode="json"))
    _print({"status": report.status, "attempts": report.counts.attempted, "paths": report.paths, "path": str(path)})
    return EXIT_OK if result.success else EXIT_FAIL


def cmd_report(args: argparse.Namespace, config: Config) -> int:
    path = Path(args.input) if args.input else config.workdir / "report.json"
    report = SearchReport.model_validate(read_json(_require(path, "search report")))
    lines = [
        f"status: {report.status}",
        f"targets: {len(report.targets)}",
        f"attempts: {report.counts.attempted} ({report.counts.succeeded} succeeded, "
        f"{report.counts.timeouts} timed out, {report.counts.singular} singular, "
        f"{report.counts.faulted} faulted)",
        f"accepted edges: {len(report.accepted)}",
    ]
    for a, b in report.tree:
        lines.append(f"  tree: {a} -- {b}")
    for p in report.paths:
        lines.append("  path: " + " -> ".join(p))
    elapsed = sum(o.elapsed for o in report.attempts)
    lines.append(f"oracle time: {elapsed:.3f}s")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if report.status == "success" else EXIT_FAIL


def cmd_compare(args: argparse.Namespace, config: Config) -> int:
    features = _load_features(config)
    by_source: Dict[str, List[Edge]] = {}
    for f, g in _load_edges(config):
        by_source.setdefault(f, []).append((f, g))
    if args.sources:
        by_source = {s: by_source.get(s, []) for s in (_canonical(t) for t in _read_lines(args.sources))}
    scorer = _RecordScorer(_record_scorer(config, args.model), features)
    oracle = AlgebraicOracle(step_limit=config.step_limit, store=LabelStore(config.path("labels_path")))
    comparison = compare_strategies(
        by_source,
        oracle,
        scorer,
        top_n=config.top_n,
        budget=config.budget_seconds,
        seed=config.seed,
        isolation=config.isolation,
    )
    comparison.provenance = config.provenance("compare")
    path = config.workdir / "compare.json"
    write_json(path, comparison.model_dump(mode="json"))
    _print(
        {
            "aided_failure_rate": comparison.aided.failure_rate,
            "unaided_failure_rate": comparison.unaided.failure_rate,
            "path": str(path),
        }
    )
    return EXIT_OK


def _write_rows(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]], provenance: Mapping[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for key, value in provenance.items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(["" if v is None else v for v in row] for row in rows)


def cmd_sweep(args: argparse.Namespace, config: Config) -> int:
    features, labels = _labeled_features(config)
    pca = _load_pca(config)
    records = [features[e] for e in sorted(labels)]
    if args.widths:
        widths = [int(w) for w in _csv_list(args.widths)]
        rows = width_sweep(records, labels, widths, alpha=config.alpha, pca=pca, config=_train_config(config), seed=config.seed)
        path = config.workdir / "width_sweep.csv"
        _write_rows(path, ("width", "auc"), [(r.width, r.auc) for r in rows], config.provenance("sweep"))
    else:
        alphas = [float(a) for a in _csv_list(args.alphas)]
        sweep = alpha_sweep(records, labels, alphas, pca=pca, config=_train_config(config), seed=config.seed)
        path = config.workdir / "alpha_sweep.csv"
        _write_rows(
            path,
            ("alpha", "n_train", "n_test", "success_accuracy", "failure_accuracy", "auc"),
            [(r.alpha, r.n_train, r.n_test, r.success_accuracy, r.failure_accuracy, r.auc) for r in sweep],
            config.provenance("sweep"),
        )
    _print({"path": str(path)})
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, config: Config) -> int:
    labels = _load_labels(config)
    fpath = config.path("features_path")
    features = FeatureStore(fpath).latest() if fpath.exists() else None
    rows = timing_rows([labels[e] for e in sorted(labels)], features)
    path = config.workdir / "timings.csv"
    header = list(TimingRow.model_fields)
    _write_rows(path, header, [r.as_row() for r in rows], config.provenance("stats"))
    _print({"rows": len(rows), "path": str(path)})
    return EXIT_OK


def cmd_compact(args: argparse.Namespace, config: Config) -> int:
    store = LabelStore(_require(config.path("labels_path"), "label store"))
    dropped = store.compact()
    _print({"dropped": dropped, "path": str(store.path)})
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periodplan",
        description="Plan period computations of smooth quartic surfaces across deformation graphs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--workdir", default=NOT_GIVEN, type=Path, help="directory for stores and models")
    parser.add_argument("--seed", default=NOT_GIVEN, type=int)
    parser.add_argument("--workers", "--jobs", dest="workers", default=NOT_GIVEN, type=int)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="smooth k-term fewnomial quartics")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("orbits", help="variable-permutation orbits of the vertex store")
    p.add_argument("--sample", type=int, default=0, help="draw this many orbit representatives")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("edges", help="candidate edges over the vertex store")
    p.add_argument("--policy", choices=POLICIES, default="complete")
    p.add_argument("--companions", help="vertex store of the companion set")
    p.add_argument("--pairs", help="file of 'f | g' lines for the custom policy")
    p.add_argument("--sample-orbits", type=int, default=0, help="restrict to sampled orbit representatives")
    p.set_defaults(func=cmd_edges)

    p = sub.add_parser("gm", help="Gauss-Manin connection features per edge")
    p.add_argument("--basepoints", type=_csv_list, default=NOT_GIVEN)
    p.set_defaults(func=cmd_gm)

    p = sub.add_parser("label", help="budgeted first-ODE labels per edge")
    p.add_argument("--budget", dest="budget_seconds", type=float, default=NOT_GIVEN)
    p.add_argument("--step-limit", type=int, default=NOT_GIVEN)
    p.add_argument("--relabel", action="store_true", help="label edges that already have a label")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("pca", help="fit the PCA compression of edge vectors")
    p.add_argument("--components", dest="pca_components", type=int, default=NOT_GIVEN)
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("train", help="train a computability model")
    p.add_argument("--model", choices=MODEL_KINDS, default="ensemble")
    p.add_argument("--alpha", type=float, default=NOT_GIVEN)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score featured edges")
    p.add_argument("--model", choices=MODEL_KINDS, default="ensemble")
    p.add_argument("--source", help="only edges incident to this polynomial")
    p.add_argument("--top", dest="top_n", type=int, default=NOT_GIVEN, help="keep the top N per source")
    p.add_argument("--all", action="store_true", help="keep every scored edge")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("roc", help="ROC table of a model on the held-out split")
    p.add_argument("--model", choices=MODEL_KINDS, default="ensemble")
    p.add_argument("--tau", type=float, default=0.5)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("search", help="connect target vertices through computable edges")
    p.add_argument("--targets", help="file with one target polynomial per line")
    p.add_argument("--waypoints", help="file with one waypoint polynomial per line")
    p.add_argument("--threshold", dest="budget_seconds", type=float, default=NOT_GIVEN)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--scored", action="store_true", help="rank edges by the model")
    mode.add_argument("--random", dest="scored", action="store_false", help="seeded random order")
    p.add_argument("--model", choices=MODEL_KINDS, default="ensemble")
    p.add_argument("--isolation", choices=("thread", "process"), default=NOT_GIVEN)
    p.add_argument("--retries", type=int, default=NOT_GIVEN)
    p.add_argument("--resume", action="store_true", help="continue from the checkpoint")
    p.add_argument("--toy", action="store_true", help="the bundled three-vertex synthetic problem")
    p.add_argument("--output", help="report path")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("report", help="summarise a search report")
    p.add_argument("--input", help="report path")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("compare", help="model-aided versus random edge picks per source vertex")
    p.add_argument("--model", choices=MODEL_KINDS, default="ensemble")
    p.add_argument("--sources", help="file with one source polynomial per line")
    p.add_argument("--top", dest="top_n", type=int, default=NOT_GIVEN)
    p.add_argument("--budget", dest="budget_seconds", type=float, default=NOT_GIVEN)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="ensemble accuracy per training fraction, or MLP AUC per width")
    p.add_argument("--alphas", default="0.1,0.25,0.5,0.75,0.9")
    p.add_argument("--widths", help="comma separated hidden widths; switches to the width sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("stats", help="export timing and complexity rows")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compact", help="keep only the newest label per edge")
    p.set_defaults(func=cmd_compact)
    return parser


_CONFIG_FLAGS = (
    "workdir",
    "seed",
    "workers",
    "basepoints",
    "budget_seconds",
    "step_limit",
    "pca_components",
    "alpha",
    "top_n",
    "isolation",
    "retries",
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = {name: getattr(args, name, NOT_GIVEN) for name in _CONFIG_FLAGS}
        config = load_config(args.config, overrides)
        _setup_logging(args.verbose, config.log_level)
        logger.info("periodplan %s %s (config %s)", __version__, args.command, config.fingerprint()[:12])
        return int(args.func(args, config))
    except PeriodPlanError as exc:
        logger.debug("%r", exc)
        sys.stderr.write(f"error: {exc.message}\n")
        return EXIT_ERROR
