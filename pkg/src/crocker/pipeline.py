"""Experiment orchestration: simulate, summarize, compare, cluster, render.

Every stage reads and writes files under one output directory::

    out/manifest.json
    out/traces/<id>.csv
    out/features/<id>/order_parameter.csv
    out/features/<id>/barcodes/{index.json, slice_*.csv}
    out/features/<id>/stack_H0.json, stack_H1.json
    out/distances/<feature>[_pca<k>].csv
    out/clusters/<feature>[_pca<k>].json
    out/report.txt, out/report.json

Results do not depend on the worker count: seeds are derived per simulation
and all reductions happen in manifest order.
"""

from __future__ import annotations

import hashlib
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import formats
from .analysis import clustering_accuracy, euclidean_distance_matrix, k_medoids_pam, pca_reduce
from .complex import build_vr_filtration
from .distances import bottleneck_distance
from .errors import InvalidInput, IoError
from .metric import pairwise_distances
from .persistence import compute_ph
from .summaries import ScaleGrid, TimeVaryingBarcode, concat_dims, crocker_stack, vectorize, vectorize_stack
from .vicsek import SimulationTrace, VicsekParams, order_parameter, simulate, to_point_clouds

log = logging.getLogger(__name__)

ALL_ETAS = (0.01, 0.02, 0.03, 0.05, 0.1, 0.19, 0.2, 0.21, 0.3, 0.5, 1.0, 1.5, 1.9, 1.99, 2.0)
PRESETS = {
    "exp1": (0.01, 0.5, 1.0, 1.5, 2.0),
    "exp2": (0.01, 0.1, 1.0),
    "exp3": (0.01, 0.02, 0.19, 0.2, 1.99, 2.0),
    "exp4": ALL_ETAS,
}
FULL_SCALE = {"n": 300, "box_length": 25.0, "steps": 2000, "sims_per_eta": 100}

BASIC_FEATURES = (
    "order_parameter",
    "crocker_plot_H0", "crocker_plot_H1", "crocker_plot_H01",
    "crocker_stack_H0", "crocker_stack_H1", "crocker_stack_H01",
    "stacked_diagrams_bottleneck", "stacked_diagrams_bottleneck_H1",
)
_ALPHA_SLICE = re.compile(r"^alpha_slice\(([0-9.eE+-]+)\)$")


def check_feature(kind: str) -> str:
    if kind in BASIC_FEATURES or _ALPHA_SLICE.match(kind):
        return kind
    raise InvalidInput(f"unknown feature kind {kind!r}")


def dims_needed(kinds) -> set[int]:
    dims = set()
    for k in kinds:
        if k == "order_parameter":
            continue
        if k.endswith("H01") or k.startswith("alpha_slice"):
            dims |= {0, 1}
        elif k.endswith("H1"):
            dims.add(1)
        else:
            dims.add(0)
    return dims


@dataclass(frozen=True)
class ExperimentConfig:
    eta_values: tuple[float, ...] = PRESETS["exp1"]
    sims_per_eta: int = 20
    n: int = 100
    box_length: float = 25.0
    speed: float = 0.03
    radius: float = 1.0
    dt: float = 1.0
    steps: int = 500
    heading_rule: str = "circular_mean"
    metric_kind: str = "euclidean"
    subsample_step: int = 10
    order_step: int = 1
    eps_count: int = 50
    eps_max: float = 0.35
    alphas: tuple[float, ...] = tuple(np.round(np.arange(18) * 0.01, 12).tolist())
    features: tuple[str, ...] = ("order_parameter", "crocker_plot_H0", "crocker_plot_H1",
                                 "crocker_plot_H01", "crocker_stack_H0", "crocker_stack_H1",
                                 "crocker_stack_H01")
    pca: int | None = 3
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if not self.eta_values:
            raise InvalidInput("need at least one eta value")
        if self.sims_per_eta < 1:
            raise InvalidInput("sims_per_eta must be at least 1")
        if self.subsample_step < 1 or self.order_step < 1:
            raise InvalidInput("subsample steps must be at least 1")
        for k in self.features:
            check_feature(k)

    @property
    def grid(self) -> ScaleGrid:
        return ScaleGrid(np.linspace(0.0, self.eps_max, self.eps_count), np.array(self.alphas))

    @property
    def max_scale(self) -> float:
        return self.grid.required_scale

    def vicsek(self, eta: float, seed: int) -> VicsekParams:
        return VicsekParams(n=self.n, box_length=self.box_length, speed=self.speed, eta=eta,
                            radius=self.radius, dt=self.dt, steps=self.steps, seed=seed,
                            heading_rule=self.heading_rule)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        return d


def preset(name: str, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise InvalidInput(f"unknown preset {name!r}")
    return replace(ExperimentConfig(eta_values=PRESETS[name]), **overrides)


_TUPLE_FLOAT = {"eta_values", "alphas"}
_TUPLE_STR = {"features"}


def coerce(key: str, raw) -> object:
    """Convert a raw config value to the field's type."""
    names = {f.name: f for f in fields(ExperimentConfig)}
    if key not in names:
        raise InvalidInput(f"unknown config key {key!r}")
    if not isinstance(raw, str):
        return tuple(raw) if key in _TUPLE_FLOAT | _TUPLE_STR else raw
    raw = raw.strip()
    if key in _TUPLE_FLOAT:
        return tuple(float(x) for x in raw.split(",") if x.strip())
    if key in _TUPLE_STR:
        return tuple(x.strip() for x in re.split(r",(?![^()]*\))", raw) if x.strip())
    if key == "pca":
        return None if raw.lower() in ("", "none", "off", "0") else int(raw)
    if key in ("heading_rule", "metric_kind"):
        return raw
    default = getattr(ExperimentConfig(), key)
    return int(raw) if isinstance(default, int) else float(raw)


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; lists are comma separated."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"config line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("preset", "paper_scale"):
            out[key] = value
        else:
            out[key] = coerce(key, value)
    return out


def load_config(path=None, preset_name: str | None = None, paper_scale: bool = False,
                overrides: dict | None = None) -> ExperimentConfig:
    """Preset, then config file, then full scale, then explicit overrides."""
    values: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise IoError(f"cannot read config {path}: {exc}") from exc
        values = parse_config_text(text)
    name = preset_name or values.pop("preset", None)
    file_full = str(values.pop("paper_scale", "false")).lower() in ("1", "true", "yes")
    values.pop("preset", None)
    cfg = preset(name) if name else ExperimentConfig()
    cfg = replace(cfg, **values)
    if paper_scale or file_full:
        cfg = replace(cfg, **FULL_SCALE)
    if overrides:
        cfg = replace(cfg, **{k: coerce(k, v) for k, v in overrides.items() if v is not None})
    return cfg


def derive_seed(seed: int, eta_index: int, replicate: int) -> int:
    digest = hashlib.blake2b(f"{eta_index}:{replicate}".encode(), digest_size=8).digest()
    return (int(seed) ^ int.from_bytes(digest, "little")) & 0xFFFFFFFFFFFFFFFF


def _map(func, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


# simulate

def _simulate_one(job):
    cfg, entry, out = job
    trace = simulate(cfg.vicsek(entry["eta"], entry["seed"]))
    formats.write_trace(Path(out) / entry["trace"], trace.frames)
    return entry["id"]


def cmd_simulate(config: ExperimentConfig, out) -> dict:
    """Generate ``sims_per_eta`` traces for every eta and write the manifest."""
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out}: {exc}") from exc
    sims = []
    for i, eta in enumerate(config.eta_values):
        for r in range(config.sims_per_eta):
            sid = f"sim_{len(sims):05d}"
            sims.append({"id": sid, "eta": float(eta), "seed": derive_seed(config.seed, i, r),
                         "trace": f"traces/{sid}.csv"})
    manifest = {"config": config.to_dict(), "simulations": sims}
    _map(_simulate_one, [(config, s, out) for s in sims], config.threads)
    formats.write_manifest(out / "manifest.json", manifest)
    log.info("simulated %d traces into %s", len(sims), out)
    return manifest


# summarize

def barcodes_for_trace(frames: np.ndarray, config: ExperimentConfig, dims) -> TimeVaryingBarcode:
    params = config.vicsek(0.0, 0)
    trace = SimulationTrace(replace(params, n=frames.shape[1], steps=frames.shape[0] - 1), frames)
    clouds = to_point_clouds(trace, config.subsample_step, config.metric_kind)
    max_dim = 2 if 1 in dims else 1
    barcodes = []
    for cloud in clouds.clouds:
        f = build_vr_filtration(pairwise_distances(cloud), config.max_scale, max_dim)
        barcodes.append(compute_ph(f, dims=sorted(dims)))
    return TimeVaryingBarcode(clouds.times, barcodes)


def _summarize_one(job):
    cfg, entry, out = job
    out = Path(out)
    trace_path = out / entry["trace"]
    if not trace_path.exists():
        raise IoError(f"missing trace {trace_path}")
    frames = formats.read_trace(trace_path)
    target = out / "features" / entry["id"]
    trace = SimulationTrace(cfg.vicsek(entry["eta"], entry["seed"]), frames)
    phi = order_parameter(trace)
    formats.write_series(target / "order_parameter.csv", np.arange(len(phi)) * cfg.dt, phi)
    dims = dims_needed(cfg.features)
    if dims:
        series = barcodes_for_trace(frames, cfg, dims)
        formats.write_barcode_series(target / "barcodes", series.times, series.barcodes)
        for k in sorted(dims):
            formats.write_stack(target / f"stack_H{k}.json", crocker_stack(series, cfg.grid, k))
    return entry["id"]


def cmd_summarize(manifest: dict, config: ExperimentConfig, out) -> None:
    """Order parameters, barcodes and crocker stacks for every simulation."""
    _map(_summarize_one, [(config, s, out) for s in manifest["simulations"]], config.threads)


# features and distances

def _stack(out, sid, dim):
    return formats.read_stack(Path(out) / "features" / sid / f"stack_H{dim}.json")


def feature_vector(out, sid: str, kind: str, config: ExperimentConfig) -> np.ndarray:
    """Vector for one simulation, derived from the persisted summaries only."""
    if kind == "order_parameter":
        _, phi = formats.read_series(Path(out) / "features" / sid / "order_parameter.csv")
        return phi[::config.order_step]
    m = _ALPHA_SLICE.match(kind)
    if m:
        a = float(m.group(1))
        return concat_dims(vectorize(_stack(out, sid, 0).slice(a)), vectorize(_stack(out, sid, 1).slice(a)))
    family, dim = kind.rsplit("_", 1)
    dims = (0, 1) if dim == "H01" else (int(dim[1]),)
    parts = []
    for k in dims:
        stack = _stack(out, sid, k)
        parts.append(vectorize(stack.slice(0.0)) if family == "crocker_plot" else vectorize_stack(stack))
    return np.concatenate(parts)


def _bottleneck_row(job):
    i, series, dim = job
    a = series[i]
    row = np.zeros(len(series))
    for j in range(i + 1, len(series)):
        b = series[j]
        row[j] = max(bottleneck_distance(x, y, dim) for x, y in zip(a, b))
    return row


def stacked_bottleneck_matrix(series: list[list], dim: int, threads: int = 1) -> np.ndarray:
    """Pairwise sup-over-time bottleneck distances between barcode series."""
    rows = _map(_bottleneck_row, [(i, series, dim) for i in range(len(series))], threads)
    dm = np.array(rows)
    return dm + dm.T


def cmd_distances(manifest: dict, kind, config: ExperimentConfig, out, pca: int | None = None) -> tuple[np.ndarray, Path]:
    """Distance matrix over the corpus for one feature kind, written as CSV.

    Vector features use Euclidean distance (after PCA to ``pca`` components
    when requested).  ``stacked_diagrams_bottleneck`` uses the sup-over-time
    bottleneck distance, with infinite deaths clipped at the computed scale.
    """
    if not isinstance(kind, str):
        kinds = list(kind)
        if len(kinds) != 1:
            raise InvalidInput("exactly one feature kind per distance matrix")
        kind = kinds[0]
    check_feature(kind)
    out = Path(out)
    ids = [s["id"] for s in manifest["simulations"]]
    if kind.startswith("stacked_diagrams_bottleneck"):
        if pca:
            raise InvalidInput("PCA does not apply to stacked diagrams")
        dim = 1 if kind.endswith("_H1") else 0
        series = []
        for sid in ids:
            s = formats.read_barcode_series(out / "features" / sid / "barcodes")
            series.append([b.clipped() for b in s])
        dm = stacked_bottleneck_matrix(series, dim, config.threads)
        name = kind
    else:
        X = np.stack([feature_vector(out, sid, kind, config) for sid in ids])
        name = kind
        if pca:
            X, _ = pca_reduce(X, pca)
            name = f"{kind}_pca{pca}"
        dm = euclidean_distance_matrix(X)
    path = out / "distances" / f"{_safe(name)}.csv"
    formats.write_distance_matrix(path, dm)
    return dm, path


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name)


# clustering

def cmd_cluster(dm: np.ndarray, labels, K: int | None = None, seed: int = 0, path=None):
    """PAM on a distance matrix, scored against the generating labels."""
    dm = np.asarray(dm, dtype=float)
    labels = np.asarray(labels)
    if dm.ndim != 2 or dm.shape[0] != dm.shape[1]:
        raise InvalidInput("distance matrix must be square")
    if len(labels) != dm.shape[0]:
        raise InvalidInput("one label per row required")
    K = len(set(labels.tolist())) if K is None else K
    result = k_medoids_pam(dm, K, seed)
    acc = clustering_accuracy(result, labels)
    if path is not None:
        formats.write_cluster(path, result, labels, acc)
    return result, acc


def format_confusion(acc) -> str:
    width = max(8, *(len(f"{c:g}") + 6 for c in acc.column_labels))
    head = "eta".ljust(10) + "".join(f"eta={c:g}".rjust(width) for c in acc.column_labels)
    lines = [head]
    for r, row in zip(acc.row_labels, acc.confusion):
        lines.append(f"eta={r:g}".ljust(10) + "".join(str(v).rjust(width) for v in row))
    return "\n".join(lines)


# end to end

def cmd_experiment(config: ExperimentConfig, out, skip_simulation: bool = False) -> dict:
    """simulate -> summarize -> distances -> cluster for every feature kind."""
    out = Path(out)
    if skip_simulation and (out / "manifest.json").exists():
        manifest = formats.read_manifest(out / "manifest.json")
    else:
        manifest = cmd_simulate(config, out)
    cmd_summarize(manifest, config, out)
    labels = np.array([s["eta"] for s in manifest["simulations"]])
    rows = []
    for kind in config.features:
        entry = {"feature": kind}
        variants = [None]
        if config.pca and not kind.startswith("stacked_diagrams"):
            variants.append(config.pca)
        for k in variants:
            dm, dpath = cmd_distances(manifest, kind, config, out, pca=k)
            cpath = out / "clusters" / (dpath.stem + ".json")
            _, acc = cmd_cluster(dm, labels, seed=config.seed, path=cpath)
            entry["accuracy" if k is None else "accuracy_pca"] = acc.accuracy
        rows.append(entry)
    report = {"config": config.to_dict(), "n_simulations": len(labels), "rows": rows}
    formats._dump_json(out / "report.json", report)
    formats._write_text(out / "report.txt", format_report(report))
    return report


def format_report(report: dict) -> str:
    cfg = report["config"]
    pca = cfg.get("pca")
    header = f"{'feature':<34}{'accuracy':>10}"
    if pca:
        header += f"{'PCA-' + str(pca):>10}"
    lines = [f"etas: {', '.join(f'{e:g}' for e in cfg['eta_values'])}; "
             f"{report['n_simulations']} simulations", header, "-" * len(header)]
    for row in report["rows"]:
        line = f"{row['feature']:<34}{row['accuracy']:>10.2f}"
        if pca:
            v = row.get("accuracy_pca")
            line += f"{v:>10.2f}" if v is not None else f"{'n/a':>10}"
        lines.append(line)
    return "\n".join(lines) + "\n"


# rendering

def cmd_render(path, out_dir, clamp: float | None = None, dim_default_clamp: bool = True) -> list[Path]:
    """CSV grid plus PGM heatmap for every alpha slice of a plot or stack file.

    Without an explicit clamp, H0 grids are clamped at 6.
    """
    path = Path(path)
    if not path.exists():
        raise IoError(f"{path} not found")
    stack = formats.read_stack(path)
    if clamp is None and dim_default_clamp and stack.dim == 0:
        clamp = 6
    out_dir = Path(out_dir)
    written = []
    for k in range(len(stack.alphas)):
        grid = stack.values[:, :, k]
        stem = f"{path.stem}_alpha{k:02d}"
        formats.write_matrix_csv(out_dir / f"{stem}.csv", grid)
        formats.write_pgm(out_dir / f"{stem}.pgm", grid, clamp)
        written += [out_dir / f"{stem}.csv", out_dir / f"{stem}.pgm"]
    return written


def load_labels(manifest: dict) -> np.ndarray:
    return np.array([s["eta"] for s in manifest["simulations"]])


def config_from_manifest(manifest: dict, threads: int = 1) -> ExperimentConfig:
    d = dict(manifest["config"])
    for key in ("eta_values", "alphas", "features"):
        d[key] = tuple(d[key])
    return ExperimentConfig(**d, threads=threads)
