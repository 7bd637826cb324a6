"""Replicated experiments, summary statistics, table presets and report output.

Replication ``r`` draws its data sample from stream ``(DATA, r)``; the
measure sample for the ``k``-th smoothing value comes from
``(MEASURE, r, k)``. The same data sample is reused across the whole
epsilon list, so columns differ only through the smoothing value and their
independent measure draws.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from minklen.estimator import (
    EstimatorConfig,
    contour_index,
    default_bandwidth,
    estimate_length,
    estimate_length_bruteforce,
    min_mc_budget,
)
from minklen.geometry import Frame, ImageShape, Shape, parse_shape
from minklen.raster import (
    BinaryImage,
    add_noise_patches,
    digitize,
    exhaustive_with_smoothing,
    pixel_area,
    read_pbm,
)
from minklen.sampling import data_stream, draw_labeled_sample, mc_area, measure_stream, noise_stream

COLUMNS = ["experiment_id", "shape", "n", "eps", "B", "rep", "seed",
           "hits", "measure", "length", "area", "ci", "flags"]
STATS = ("length", "area", "ci")

# smoothing values of the cubic tables (frame units of the 11 x 11 window)
TABLE_EPS = (0.76, 0.78, 0.80, 0.82, 0.84, 0.86, 0.88, 0.90, 0.92, 0.94, 0.96, 0.98, 1.0, 1.2)
# constants C_k giving eps = 0.05, 0.02, 0.01 at n = 100000
TABLE1_C = (0.8897, 0.3559, 0.1779)


class DegenerateInputError(ValueError):
    """Input that makes the requested statistic meaningless (e.g. zero area)."""


@dataclass(frozen=True)
class ExperimentSpec:
    shape: str | Shape
    n: int
    eps: tuple[float, ...]
    mc_budget: int = 1500
    g1: int = 1
    r1: int = 1
    reps: int = 100
    seed: int = 0
    frame: Frame | None = None
    outputs: tuple[str, ...] = ("length",)
    mode: str = "random"
    experiment_id: str = "estimate"

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(float(e) for e in np.atleast_1d(self.eps)))
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if not self.eps:
            raise ValueError("eps list is empty")
        if self.mode not in ("random", "brute-force", "brute-force-check"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def resolve_shape(self) -> Shape:
        return parse_shape(self.shape) if isinstance(self.shape, str) else self.shape

    def resolve_frame(self) -> Frame:
        return self.frame if self.frame is not None else self.resolve_shape().default_frame()

    @property
    def shape_label(self) -> str:
        return self.shape if isinstance(self.shape, str) else type(self.shape).__name__.lower()


def _stats(values: Sequence[float]) -> tuple[float, float, float]:
    v = np.asarray(values, dtype=float)
    sd = float(np.std(v, ddof=1)) if len(v) > 1 else 0.0
    return float(np.mean(v)), sd, float(np.median(v))


def summarize(rows: list[dict], stats: Sequence[str] = STATS) -> list[dict]:
    """Per-eps mean, sd (divisor R-1) and median of each statistic present in ``rows``."""
    ordered = sorted(rows, key=lambda r: (r["eps"], r["rep"]))
    out = []
    for eps in sorted({r["eps"] for r in ordered}):
        group = [r for r in ordered if r["eps"] == eps]
        entry: dict = {"eps": eps, "reps": len(group), "flags": []}
        if len(group) == 1:
            entry["flags"].append("sd_undefined")
        for name in stats:
            vals = [r[name] for r in group if r.get(name) is not None and not _isnan(r[name])]
            if not vals:
                continue
            entry[f"{name}_mean"], entry[f"{name}_sd"], entry[f"{name}_median"] = _stats(vals)
        if any(r["flags"] for r in group):
            entry["flags"].append("replication_flags")
        out.append(entry)
    return out


def _isnan(x) -> bool:
    return isinstance(x, float) and math.isnan(x)


@dataclass
class ReplicationReport:
    experiment_id: str
    rows: list[dict] = field(default_factory=list)

    @property
    def summary(self) -> list[dict]:
        return summarize(self.rows)

    def by_eps(self) -> dict[float, dict]:
        return {s["eps"]: s for s in self.summary}

    def lengths(self, eps: float) -> np.ndarray:
        return np.array([r["length"] for r in sorted(self.rows, key=lambda r: r["rep"]) if r["eps"] == eps])


def run_replications(spec: ExperimentSpec, threads: int | None = None,
                     fixed_area: float | None = None) -> ReplicationReport:
    """Run ``spec.reps`` independent replications over the spec's eps list.

    ``fixed_area`` replaces the Monte Carlo area (used when the area is
    known exactly, e.g. a pixel count).
    """
    shape = spec.resolve_shape()
    frame = spec.resolve_frame()
    want_area = "area" in spec.outputs or "ci" in spec.outputs
    report = ReplicationReport(spec.experiment_id)
    for rep in range(spec.reps):
        sample = draw_labeled_sample(shape, frame, spec.n, data_stream(spec.seed, rep))
        area = None
        if want_area:
            area = fixed_area if fixed_area is not None else (mc_area(sample, frame) if len(sample) else 0.0)
        for k, eps in enumerate(spec.eps):
            cfg = EstimatorConfig(eps, spec.mc_budget, spec.g1, spec.r1, measure_stream(spec.seed, rep, k))
            if spec.mode == "brute-force":
                est = estimate_length_bruteforce(sample, frame, cfg)
            else:
                est = estimate_length(sample, frame, cfg, threads=threads)
            flags = list(est.flags)
            if spec.mode == "brute-force-check":
                if estimate_length_bruteforce(sample, frame, cfg) != est:
                    flags.append("oracle_mismatch")
            ci = None
            if "ci" in spec.outputs:
                if area and area > 0:
                    ci = contour_index(est.length, area)
                else:
                    ci = float("nan")
                    flags.append("zero_area")
            report.rows.append({
                "experiment_id": spec.experiment_id, "shape": spec.shape_label, "n": spec.n,
                "eps": eps, "B": spec.mc_budget, "rep": rep, "seed": spec.seed,
                "hits": est.hits, "measure": est.measure, "length": est.length,
                "area": area, "ci": ci, "flags": flags,
            })
    return report


def convergence_study(shape: str | Shape, n_list: Sequence[int], c: float = 1.0,
                      budget: int | Callable[[int, float], int] | None = None,
                      reps: int = 50, seed: int = 0, frame: Frame | None = None,
                      threads: int | None = None) -> list[dict]:
    """Bias and L1 error against the exact length as the sample size grows.

    The smoothing value is ``c n^(-1/(2d))`` scaled by the smallest frame
    side. ``budget`` is a fixed measure-sample size, a callable of
    ``(n, eps)``, or ``None`` for :func:`min_mc_budget`.
    """
    if list(n_list) != sorted(n_list):
        raise ValueError("n_list must be increasing")
    shp = parse_shape(shape) if isinstance(shape, str) else shape
    frm = frame if frame is not None else shp.default_frame()
    truth = shp.true_length()
    out = []
    for i, n in enumerate(n_list):
        eps = default_bandwidth(n, frm.dim, c) * min(frm.sides)
        if budget is None:
            b = min_mc_budget(n, eps)
        else:
            b = budget(n, eps) if callable(budget) else int(budget)
        spec = ExperimentSpec(shp, n, (eps,), b, reps=reps, seed=seed + 1000 * i, frame=frm,
                              experiment_id="converge")
        lengths = run_replications(spec, threads=threads).lengths(eps)
        mean, sd, _ = _stats(lengths)
        out.append({"n": n, "eps": eps, "B": b, "bias": mean - truth,
                    "mad": float(np.mean(np.abs(lengths - truth))), "mean": mean, "sd": sd})
    return out


def load_image_source(source) -> BinaryImage | None:
    if isinstance(source, BinaryImage):
        return source
    if isinstance(source, ImageShape):
        return source.image
    if isinstance(source, str) and not source.startswith("image:") and ":" not in source:
        return read_pbm(source)
    if isinstance(source, str) and source.startswith("image:"):
        return parse_shape(source).image
    return None


def ci_pipeline(source, spec: ExperimentSpec, threads: int | None = None) -> ReplicationReport:
    """Contour index per eps for an image (path or :class:`BinaryImage`) or a shape.

    Images use the exact black-pixel area; shapes use the Monte Carlo area
    of each replication's sample.
    """
    img = load_image_source(source)
    if img is not None:
        area = pixel_area(img)
        if area <= 0:
            raise DegenerateInputError("image has no black pixels")
        spec = replace(spec, shape=ImageShape(img), frame=img.frame, outputs=("length", "area", "ci"))
        rep = run_replications(spec, threads=threads, fixed_area=area)
    else:
        shape = parse_shape(source) if isinstance(source, str) else source
        spec = replace(spec, shape=shape, outputs=("length", "area", "ci"))
        rep = run_replications(spec, threads=threads)
    rep.experiment_id = spec.experiment_id
    return rep


@dataclass
class NoiseComparison:
    rows: list[dict]
    truth: float

    def summary(self) -> dict:
        ex = [r["exhaustive"] for r in self.rows]
        rd = [r["random"] for r in self.rows]
        (em, es, _), (rm, rs, _) = _stats(ex), _stats(rd)
        return {"truth": self.truth, "exhaustive_mean": em, "exhaustive_sd": es,
                "random_mean": rm, "random_sd": rs}


def noise_compare(shape: str | Shape, resolution: int = 300, k: int = 4, radius: float = 0.25,
                  n_random: int = 5000, eps: float = 0.94, reps: int = 50, seed: int = 0,
                  mc_budget: int = 1500, threads: int | None = None) -> NoiseComparison:
    """Exhaustive-with-smoothing versus random-sample estimates on noisy digitizations."""
    shp = parse_shape(shape) if isinstance(shape, str) else shape
    frame = shp.default_frame()
    clean = digitize(shp, frame, resolution, resolution)
    rows = []
    for rep in range(reps):
        img = add_noise_patches(clean, k, radius, noise_stream(seed, rep))
        exh = exhaustive_with_smoothing(img, eps)
        sample = draw_labeled_sample(ImageShape(img), frame, n_random, data_stream(seed, rep))
        est = estimate_length(sample, frame, EstimatorConfig(eps, mc_budget, rng=measure_stream(seed, rep)),
                              threads=threads)
        rows.append({"rep": rep, "seed": seed, "exhaustive": exh, "random": est.length,
                     "flags": list(est.flags)})
    return NoiseComparison(rows, shp.true_length())


def table_specs(which: str, reps: int = 100, seed: int = 0, mc_budget: int = 1500,
                image: str | None = None) -> list[ExperimentSpec]:
    """Presets for the cubic tables ("2": n=30000, "3": n=10000) and the CI table ("1")."""
    if which in ("2", "3"):
        n = 30_000 if which == "2" else 10_000
        return [ExperimentSpec("tschirnhausen:1", n, TABLE_EPS, mc_budget, reps=reps, seed=seed,
                               outputs=("length", "area"), experiment_id=f"table{which}")]
    if which == "1":
        if image is None:
            raise ValueError("table 1 needs an image")
        specs = []
        for n in (50_000, 100_000):
            eps = tuple(round(default_bandwidth(n, 2, c), 4) for c in TABLE1_C)
            specs.append(ExperimentSpec(f"image:{image}", n, eps, mc_budget, reps=reps, seed=seed,
                                        outputs=("length", "area", "ci"), experiment_id=f"table1_n{n}"))
        return specs
    raise ValueError(f"unknown table {which!r}")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, list):
        return ";".join(v)
    if isinstance(v, float):
        return repr(v)
    return v


def emit_report(report, fmt: str = "csv", path=None) -> str:
    """Write a report (ReplicationReport or list of row dicts) as CSV or JSON.

    ``path`` of ``None`` or ``"-"`` writes to stdout; a file-like object is
    written to directly. Returns the text.
    """
    if isinstance(report, ReplicationReport):
        rows, columns = report.rows, COLUMNS
        doc = {"experiment_id": report.experiment_id, "columns": COLUMNS,
               "rows": report.rows, "summary": report.summary}
    else:
        rows = list(report)
        columns = list(rows[0]) if rows else []
        doc = {"columns": columns, "rows": rows}
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps(doc, indent=2, default=_json_default, allow_nan=True) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None or path == "-":
        sys.stdout.write(text)
    elif hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")
