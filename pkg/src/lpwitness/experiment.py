"""Monte Carlo experiment harness: config, trial loop, and result writers.

Determinism contract: every trial draws its noise from a generator seeded by
(master seed, sweep index, trial index), results are gathered in trial order,
and the CSV writers use fixed float formatting, so a config + seed pair
yields byte-identical trial CSVs no matter how many worker processes run.
Per-trial wall-clock timings are kept in memory and summarized in the JSON
report but deliberately left out of the CSV for that reason.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from .channel import Channel, bhattacharyya, threshold_param
from .errors import LpwitnessError
from .lp import INTEGRALITY_TOL, lp_decode, polytope_constraints
from .minsum import run_standard_msa
from .tanner import CodeParams, TannerGraph, construct_regular, girth, load_alist
from .witness import events_all, witness

TRIALS_SCHEMA = 1
DECODER_NAMES = ("lp", "msa_standard", "witness")


@dataclass(frozen=True)
class ExperimentConfig:
    """Mirror of the JSON config (snake_case keys, see from_json_dict)."""

    channel_kind: str
    sweep: tuple
    trials: int
    seed: int
    decoders: tuple = ("lp",)
    l_depth: object = "auto"  # "auto" or a positive int
    tol: float = 1e-8
    code_params: CodeParams | None = None
    min_girth: int = 6
    alist_path: str | None = None

    @classmethod
    def from_json_dict(cls, raw: dict) -> "ExperimentConfig":
        try:
            code = raw["code"]
            channel = raw["channel"]
            kwargs = {
                "channel_kind": channel["kind"],
                "sweep": tuple(float(v) for v in channel["values"]),
                "trials": int(raw["trials"]),
                "seed": int(raw["seed"]),
            }
        except KeyError as exc:
            raise ValueError(f"config is missing required key {exc}") from None
        if "decoders" in raw:
            kwargs["decoders"] = tuple(raw["decoders"])
        if "l" in raw:
            kwargs["l_depth"] = raw["l"] if raw["l"] == "auto" else int(raw["l"])
        if "tol" in raw:
            kwargs["tol"] = float(raw["tol"])
        if "alist" in code:
            kwargs["alist_path"] = str(code["alist"])
        else:
            kwargs["code_params"] = CodeParams(
                n=int(code["n"]), j_weight=int(code["j"]),
                k_weight=int(code["k"]), seed=int(code.get("seed", 0)))
            kwargs["min_girth"] = int(code.get("min_girth", 6))
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def validate(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.sweep:
            raise ValueError("channel sweep must be nonempty")
        unknown = set(self.decoders) - set(DECODER_NAMES)
        if unknown:
            raise ValueError(f"unknown decoders: {sorted(unknown)}")
        if not self.decoders:
            raise ValueError("need at least one decoder")
        if self.l_depth != "auto" and int(self.l_depth) < 1:
            raise ValueError("l must be 'auto' or a positive integer")
        if (self.code_params is None) == (self.alist_path is None):
            raise ValueError("config must give exactly one of code params or alist")
        for v in self.sweep:
            Channel(self.channel_kind, v)  # parameter range check


@dataclass
class TrialRecord:
    sweep_param: float
    trial_index: int
    lp_value: float = math.nan
    lp_integral: bool = False
    lp_correct: bool = False
    lp_ambiguous: bool = False
    msa_correct: bool = False
    witness_certified: bool = False
    aj_failures: int = -1
    lp_ms: float = math.nan
    msa_ms: float = math.nan
    witness_ms: float = math.nan
    error: str = ""


@dataclass
class _TrialContext:
    graph: TannerGraph
    constraints: object
    cfg: ExperimentConfig
    depth: int


_CTX: _TrialContext | None = None


def _init_worker(ctx: _TrialContext):
    global _CTX
    _CTX = ctx


def _run_trial(task) -> TrialRecord:
    sweep_idx, trial_idx = task
    ctx = _CTX
    cfg = ctx.cfg
    param = cfg.sweep[sweep_idx]
    rec = TrialRecord(sweep_param=param, trial_index=trial_idx)
    rng = np.random.default_rng([cfg.seed, sweep_idx, trial_idx])
    ch = Channel(cfg.channel_kind, param)
    from .channel import sample_llrs
    llrs = sample_llrs(ch, ctx.graph.n_vars, rng)

    if "lp" in cfg.decoders:
        t0 = time.perf_counter()
        try:
            sol = lp_decode(ctx.graph, llrs, tol=cfg.tol,
                            constraints=ctx.constraints,
                            seed=trial_idx)
            rec.lp_value = sol.value
            rec.lp_integral = sol.is_integral
            zero_opt = sol.value >= -cfg.tol
            returned_zero = bool(np.max(sol.x) <= INTEGRALITY_TOL)
            rec.lp_correct = bool(zero_opt and returned_zero and sol.is_unique)
            rec.lp_ambiguous = bool(zero_opt and not rec.lp_correct)
        except LpwitnessError as exc:
            rec.error += f"lp:{exc};"
        rec.lp_ms = 1e3 * (time.perf_counter() - t0)

    if "msa_standard" in cfg.decoders:
        t0 = time.perf_counter()
        try:
            _, hard = run_standard_msa(ctx.graph, llrs, ctx.depth)
            rec.msa_correct = bool(not hard.any())
        except LpwitnessError as exc:
            rec.error += f"msa:{exc};"
        rec.msa_ms = 1e3 * (time.perf_counter() - t0)

    if "witness" in cfg.decoders:
        t0 = time.perf_counter()
        try:
            res = witness(ctx.graph, llrs, ctx.depth)
            rec.witness_certified = res.certified
            rec.aj_failures = int((~events_all(ctx.graph, llrs, ctx.depth)).sum())
        except LpwitnessError as exc:
            rec.error += f"witness:{exc};"
        rec.witness_ms = 1e3 * (time.perf_counter() - t0)

    if rec.witness_certified and "lp" in cfg.decoders and not rec.error:
        # One-sided certificate soundness, enforced on every single trial.
        if not (rec.lp_value >= -cfg.tol and abs(rec.lp_value) <= max(cfg.tol, 1e-8)):
            raise RuntimeError(
                f"soundness violation at sweep={param} trial={trial_idx}: "
                f"certified but LP value {rec.lp_value}")
    return rec


def load_experiment_graph(cfg: ExperimentConfig) -> TannerGraph:
    if cfg.alist_path is not None:
        return load_alist(Path(cfg.alist_path).read_text())
    return construct_regular(cfg.code_params, cfg.min_girth)


def resolve_depth(cfg: ExperimentConfig, graph: TannerGraph) -> int:
    if cfg.l_depth != "auto":
        depth = int(cfg.l_depth)
        if "witness" in cfg.decoders:
            g = girth(graph)
            if g != math.inf and g < 4 * depth + 2:
                raise ValueError(
                    f"l={depth} needs girth >= {4 * depth + 2}, graph has {g}")
        return depth
    g = girth(graph)
    depth = bounds_mod.max_depth_for_girth(g)
    if depth == bounds_mod.UNBOUNDED_DEPTH:
        raise ValueError("graph is a forest; give an explicit l in the config")
    if depth < 1:
        raise ValueError(f"girth {g} admits no usable tree depth")
    return int(depth)


def run_experiment(cfg: ExperimentConfig, threads: int | None = None,
                   graph: TannerGraph | None = None):
    """Run the full sweep.  Returns (records, summary points).

    Records arrive sorted by (sweep index, trial index) regardless of the
    worker count; threads=1 runs everything in-process.
    """
    cfg.validate()
    if graph is None:
        graph = load_experiment_graph(cfg)
    depth = resolve_depth(cfg, graph)
    needs_lp = "lp" in cfg.decoders
    constraints = polytope_constraints(graph) if needs_lp else None
    ctx = _TrialContext(graph=graph, constraints=constraints, cfg=cfg,
                        depth=depth)
    if "witness" in cfg.decoders:
        graph.regular_degrees()  # witness path requires a regular graph

    tasks = [(si, ti) for si in range(len(cfg.sweep))
             for ti in range(cfg.trials)]
    if threads is None:
        threads = multiprocessing.cpu_count()
    if threads <= 1:
        _init_worker(ctx)
        records = [_run_trial(t) for t in tasks]
    else:
        mp_ctx = multiprocessing.get_context("fork")
        chunk = max(1, len(tasks) // (8 * threads))
        with ProcessPoolExecutor(max_workers=threads, mp_context=mp_ctx,
                                 initializer=_init_worker,
                                 initargs=(ctx,)) as pool:
            records = list(pool.map(_run_trial, tasks, chunksize=chunk))

    summary = summarize(cfg, graph, depth, records)
    return records, summary


def summarize(cfg: ExperimentConfig, graph: TannerGraph, depth: int,
              records) -> list:
    """Per-sweep-point aggregates recomputed from the raw records."""
    try:
        j_wt, k_wt = graph.regular_degrees()
    except ValueError:
        j_wt = k_wt = None
    points = []
    for si, param in enumerate(cfg.sweep):
        rows = records[si * cfg.trials:(si + 1) * cfg.trials]
        t = len(rows)
        gamma = bhattacharyya(Channel(cfg.channel_kind, param))
        point = {
            "sweep_param": param,
            "trials": t,
            "gamma": gamma,
            "n": graph.n_vars,
            "depth": depth,
            "errors": sum(1 for r in rows if r.error),
        }
        if "lp" in cfg.decoders:
            point["wer_lp"] = sum(1 for r in rows if not r.lp_correct) / t
            point["ambiguous_rate"] = sum(1 for r in rows if r.lp_ambiguous) / t
            point["mean_lp_ms"] = float(np.mean([r.lp_ms for r in rows]))
        if "msa_standard" in cfg.decoders:
            point["wer_msa"] = sum(1 for r in rows if not r.msa_correct) / t
            point["mean_msa_ms"] = float(np.mean([r.msa_ms for r in rows]))
        if "witness" in cfg.decoders:
            point["witness_rate"] = sum(1 for r in rows if r.witness_certified) / t
            point["mean_aj_failure_fraction"] = float(
                np.mean([r.aj_failures / graph.n_checks for r in rows
                         if r.aj_failures >= 0] or [math.nan]))
            point["mean_witness_ms"] = float(np.mean([r.witness_ms for r in rows]))
        if j_wt is not None and k_wt > 2 and j_wt > 2:
            point["gamma_threshold"] = 1.0 / (k_wt - 1)
            point["threshold_param"] = threshold_param(cfg.channel_kind, k_wt)
            point["bound_paj"] = bounds_mod.p_aj_union_bound(j_wt, k_wt, depth, gamma)
            point["bound_pw"] = bounds_mod.pw_union_bound(
                graph.n_vars, j_wt, k_wt, gamma, depth)
        points.append(point)
    return points


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


TRIAL_CSV_COLUMNS = (
    "schema_version", "sweep_param", "trial_index", "lp_value", "lp_integral",
    "lp_correct", "lp_ambiguous", "msa_correct", "witness_certified",
    "aj_failures", "error",
)


def trials_csv(records) -> str:
    lines = [",".join(TRIAL_CSV_COLUMNS)]
    for r in records:
        lines.append(",".join([
            str(TRIALS_SCHEMA), _fmt(r.sweep_param), str(r.trial_index),
            _fmt(r.lp_value), _fmt(r.lp_integral), _fmt(r.lp_correct),
            _fmt(r.lp_ambiguous), _fmt(r.msa_correct),
            _fmt(r.witness_certified), str(r.aj_failures), r.error,
        ]))
    return "\n".join(lines) + "\n"


PLOT_CSV_COLUMNS = ("sweep_param", "wer_lp", "wer_msa", "witness_rate",
                    "bound_pw", "gamma")


def plot_csv(points) -> str:
    lines = [",".join(PLOT_CSV_COLUMNS)]
    for p in points:
        lines.append(",".join(
            _fmt(p.get(col, math.nan)) for col in PLOT_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def summary_json(cfg: ExperimentConfig, points) -> str:
    payload = {
        "schema": TRIALS_SCHEMA,
        "config": {
            "channel": {"kind": cfg.channel_kind, "values": list(cfg.sweep)},
            "trials": cfg.trials,
            "seed": cfg.seed,
            "decoders": list(cfg.decoders),
            "l": cfg.l_depth,
            "tol": cfg.tol,
        },
        "points": points,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_results(outdir, cfg: ExperimentConfig, records, points,
                  figures: bool = True) -> list:
    """Write trials.csv, summary.json, plot_data.csv, and (optionally) the
    rendered figures into outdir.  Returns the written paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in (("trials.csv", trials_csv(records)),
                       ("summary.json", summary_json(cfg, points)),
                       ("plot_data.csv", plot_csv(points))):
        path = out / name
        path.write_text(text)
        written.append(path)
    if figures:
        from .figures import render_summary_figures
        written.extend(render_summary_figures(points, out, cfg.channel_kind))
    return written
