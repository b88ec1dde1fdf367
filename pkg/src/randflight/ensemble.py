"""Replica fan-out, aggregation and output files for ``simulate``.

Replica ``i`` is simulated from ``substream(master_seed, i)`` alone, and
records are collected in replica order, so outputs do not depend on the
number of workers.

Output layout (all inside ``config.outputs``)::

    config.json            the validated config, normalized
    replicas.jsonl         one record per replica
    return_frequency.csv   P(W_n in target) at each checkpoint
    window_hits.csv        P(any hit during turns [2^j, 2^(j+1)))
    last_hit.csv           P(last hit after turn c) at each checkpoint
    gap_quantiles.csv      distribution of tau_{n+1} - tau_n at each checkpoint
    ring_occupancy.csv     ring histogram of the planar W_n (d >= 2)
    envelope.csv           tau_k envelope violation rates (PowerLaw, alpha < 1)
    summary.json           file list and headline numbers
    trajectories/          replica_<i>.csv for the first ``trajectory_dumps`` replicas
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import binomial_se, detect_hits, power_of_two_checkpoints
from .config import ExperimentConfig
from .geometry import ring_index
from .rates import RateKind, envelope_constants
from .rng import substream
from .walk import Trajectory, build_trajectory, write_csv

__all__ = [
    "THREADS_ENV",
    "default_threads",
    "simulate_replica",
    "replica_record",
    "run_ensemble",
    "aggregate",
    "write_outputs",
    "run_simulate",
]

THREADS_ENV = "RANDFLIGHT_THREADS"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def simulate_replica(cfg: ExperimentConfig, index: int, rf=None, dm=None) -> Trajectory:
    rf = rf or cfg.rate_function()
    dm = dm or cfg.direction_model()
    return build_trajectory(rf, dm, cfg.stop_condition(), substream(cfg.master_seed, index))


def _inside(w, cfg: ExperimentConfig) -> bool:
    if cfg.model == "A":
        return bool(np.max(np.abs(w)) <= cfg.rho)
    return bool(np.hypot(w[0], w[1]) <= cfg.rho)


def replica_record(cfg: ExperimentConfig, index: int, tr: Trajectory) -> dict:
    """JSON-ready summary of one replica."""
    report = detect_hits(tr, cfg.rho, cfg.region)
    points = []
    for c in cfg.resolved_checkpoints():
        if c > tr.n_turns:
            break
        w = tr.positions[c]
        points.append(
            {
                "n": c,
                "tau": float(tr.turn_times[c]),
                "gap": float(tr.turn_times[c + 1] - tr.turn_times[c]) if c < tr.n_turns else None,
                "inside": _inside(w, cfg),
                "ring": ring_index(w[:2]) if tr.dimension >= 2 else None,
                "W": [float(v) for v in w],
            }
        )
    return {
        "replica": index,
        "n_turns": tr.n_turns,
        "horizon": tr.horizon,
        "report": report.to_dict(),
        "checkpoints": points,
    }


def _run_chunk(cfg_json: str, start: int, stop: int) -> list[dict]:
    cfg = ExperimentConfig.model_validate_json(cfg_json)
    rf, dm = cfg.rate_function(), cfg.direction_model()
    return [replica_record(cfg, i, simulate_replica(cfg, i, rf, dm)) for i in range(start, stop)]


def run_ensemble(cfg: ExperimentConfig, threads: int = 1) -> list[dict]:
    """Simulate every replica; records come back ordered by replica index."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    R = cfg.replicas
    cfg_json = cfg.model_dump_json()
    if threads == 1 or R < 2:
        return _run_chunk(cfg_json, 0, R)
    size = max(1, -(-R // (threads * 8)))
    bounds = [(s, min(R, s + size)) for s in range(0, R, size)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(_run_chunk, [cfg_json] * len(bounds), *zip(*bounds))
        return [rec for part in parts for rec in part]


def aggregate(cfg: ExperimentConfig, records: list[dict]) -> dict[str, list[dict]]:
    """Reduce replica records (in replica order) to plot-ready tables."""
    tables: dict[str, list[dict]] = {}
    by_n: dict[int, list[dict]] = {}
    for rec in records:
        for p in rec["checkpoints"]:
            by_n.setdefault(p["n"], []).append(p)

    rows = []
    for c in sorted(by_n):
        pts = by_n[c]
        k = sum(p["inside"] for p in pts)
        q = k / len(pts)
        rows.append({"checkpoint": c, "replicas": len(pts), "inside": k, "q_hat": q,
                     "se": float(binomial_se(q, len(pts)))})
    tables["return_frequency"] = rows

    max_turns = max(rec["n_turns"] for rec in records)
    hit_sets = [rec["report"]["hit_intervals"] for rec in records]
    rows = []
    j = 0
    while 2 ** (j + 1) <= max_turns:
        lo, hi = 2**j, 2 ** (j + 1)
        eligible = [h for h, rec in zip(hit_sets, records) if rec["n_turns"] >= hi]
        hits = sum(any(lo <= k < hi for k in h) for h in eligible)
        f = hits / len(eligible) if eligible else None
        rows.append({"j": j, "start": lo, "end": hi, "replicas": len(eligible), "hits": hits,
                     "fraction": f, "se": float(binomial_se(f, len(eligible))) if eligible else None})
        j += 1
    tables["window_hits"] = rows

    rows = []
    last = [rec["report"]["last_hit_turn"] for rec in records]
    for c in power_of_two_checkpoints(max_turns):
        count = sum(1 for v in last if v is not None and v > c)
        f = count / len(records)
        rows.append({"cutoff": c, "replicas": len(records), "count": count, "fraction": f,
                     "se": float(binomial_se(f, len(records)))})
    tables["last_hit"] = rows

    rows = []
    for c in sorted(by_n):
        gaps = np.array([p["gap"] for p in by_n[c] if p["gap"] is not None])
        if gaps.size == 0:
            continue
        q50, q90, q99 = np.quantile(gaps, [0.5, 0.9, 0.99])
        rows.append({"checkpoint": c, "replicas": int(gaps.size), "mean": float(gaps.mean()),
                     "q50": float(q50), "q90": float(q90), "q99": float(q99), "max": float(gaps.max())})
    tables["gap_quantiles"] = rows

    if cfg.dimension >= 2:
        rows = []
        for c in sorted(by_n):
            rings = np.array([p["ring"] for p in by_n[c]])
            values, counts = np.unique(rings, return_counts=True)
            for r, k in zip(values, counts):
                rows.append({"checkpoint": c, "ring": int(r), "count": int(k),
                             "frequency": int(k) / len(rings)})
        tables["ring_occupancy"] = rows

    rf = cfg.rate_function()
    if rf.kind is RateKind.POWER_LAW and rf.alpha < 1.0:
        c0, c1 = envelope_constants(rf.alpha)
        rows = []
        for c in sorted(by_n):
            taus = np.array([p["tau"] for p in by_n[c]])
            scale = c ** (1.0 / (1.0 - rf.alpha))
            rows.append({"checkpoint": c, "c0": c0, "c1": c1,
                         "low_rate": float(np.mean(taus <= c0 * scale)),
                         "high_rate": float(np.mean(taus >= c1 * scale))})
        tables["envelope"] = rows
    return tables


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return v


def _write_table(path: Path, rows: list[dict], header: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(row[h]) for h in header])


_HEADERS = {
    "return_frequency": ["checkpoint", "replicas", "inside", "q_hat", "se"],
    "window_hits": ["j", "start", "end", "replicas", "hits", "fraction", "se"],
    "last_hit": ["cutoff", "replicas", "count", "fraction", "se"],
    "gap_quantiles": ["checkpoint", "replicas", "mean", "q50", "q90", "q99", "max"],
    "ring_occupancy": ["checkpoint", "ring", "count", "frequency"],
    "envelope": ["checkpoint", "c0", "c1", "low_rate", "high_rate"],
}


def write_outputs(cfg: ExperimentConfig, records: list[dict], tables: dict, outdir) -> dict:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(cfg.to_json() + "\n", encoding="utf-8")
    with open(out / "replicas.jsonl", "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
    files = ["config.json", "replicas.jsonl"]
    for name, rows in tables.items():
        _write_table(out / f"{name}.csv", rows, _HEADERS[name])
        files.append(f"{name}.csv")
    if cfg.trajectory_dumps:
        tdir = out / "trajectories"
        tdir.mkdir(exist_ok=True)
        rf, dm = cfg.rate_function(), cfg.direction_model()
        for i in range(min(cfg.trajectory_dumps, cfg.replicas)):
            with open(tdir / f"replica_{i}.csv", "w", encoding="utf-8", newline="") as fh:
                write_csv(simulate_replica(cfg, i, rf, dm), fh)
            files.append(f"trajectories/replica_{i}.csv")
    summary = {
        "schema_version": cfg.schema_version,
        "replicas": cfg.replicas,
        "files": files,
        "return_frequency": tables["return_frequency"],
        "window_hits": tables["window_hits"],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    return summary


def run_simulate(cfg: ExperimentConfig, threads: int | None = None) -> dict:
    """Simulate, aggregate and write every output file; returns the summary."""
    out = Path(cfg.outputs)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    records = run_ensemble(cfg, threads or default_threads())
    tables = aggregate(cfg, records)
    return write_outputs(cfg, records, tables, out)
