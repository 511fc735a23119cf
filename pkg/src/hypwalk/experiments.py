"""Config-driven experiment runner.

Experiments are declared in TOML files (see README for the schema), executed
as independent trials keyed by (experiment_id, n, trial_index), and written
as machine-readable reports.  Determinism contract: the records are a pure
function of (config, master seed) — every trial draws from the substream
derive_seed(master_seed, experiment_id, n, trial_index), and the coordinator
sorts records by (n, trial_index) before writing, so any worker count
produces byte-identical records.jsonl.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any, Dict, List, Optional, Sequence, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - py310 path
    import tomli as tomllib

from . import __version__
from .errors import BudgetExceededError, SchemaError, WrongDistributionError
from .freeness import (free_product_certificate, qg_enumeration_check,
                       relation_search, separation_profile, subgroup_orbit,
                       theorem_constants, transversality_profile)
from .geometry import find_match
from .groups import GroupModel, Word, parse_group_spec, serialize_word
from .stallings import stallings_core
from .walks import (Distribution, derive_seed, drift_oracle_for,
                    make_distribution, sample_walk, uniform_generators,
                    walk_distance, walk_geodesic, wilson_interval)

KINDS = ("drift", "freeness", "relation-search", "qg-words",
         "matching-decay", "separation", "transversality", "lox-products")
PROFILE_KINDS = ("separation", "transversality", "lox-products")

# schema caps ("all radii/bounds within budgets")
MAX_SYLLABLES_CAP = 8
EXPONENT_BOUND_CAP = 6
CANDIDATE_RADIUS_CAP = 10
TRUNCATION_CAP = 64
N_CAP = 100_000
TRIALS_CAP = 1_000_000


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    kind: str
    master_seed: Optional[int]
    model: GroupModel
    distribution: Optional[Distribution]
    n_grid: Tuple[int, ...]
    trials: int
    params: Dict[str, Any]
    raw: Dict[str, Any]           # parsed TOML, echoed into reports


@dataclass(frozen=True)
class TrialRecord:
    experiment_id: str
    n: int
    trial_index: int
    derived_seed: int
    payload: Dict[str, Any]

    def to_json(self) -> str:
        obj = {"experiment_id": self.experiment_id, "n": self.n,
               "trial_index": self.trial_index,
               "derived_seed": self.derived_seed, "payload": self.payload}
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class Report:
    config: Dict[str, Any]
    experiment_id: str
    kind: str
    master_seed: int
    seed_source: str
    tool_version: str
    drift_constant: Optional[Dict[str, str]]
    records: List[TrialRecord]
    aggregates: List[Dict[str, Any]]
    wall_time_s: float
    complete: bool
    error: Optional[str] = None


# ---------------------------------------------------------------------------
# Config parsing


def _parse_words(model: GroupModel, texts, key: str,
                 problems: List[Tuple[str, str]]) -> List[Word]:
    out = []
    if not isinstance(texts, list):
        problems.append((key, "expected a list of word strings"))
        return out
    for i, t in enumerate(texts):
        try:
            out.append(model.parse_word(t))
        except Exception as exc:
            problems.append((f"{key}[{i}]", str(exc)))
    return out


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a TOML experiment config; raises schema-violation
    carrying the full list of (key, reason) problems."""
    problems: List[Tuple[str, str]] = []
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SchemaError([("<toml>", str(exc))])

    exp = raw.get("experiment")
    if not isinstance(exp, dict):
        raise SchemaError([("experiment", "missing [experiment] table")])
    experiment_id = exp.get("id")
    if not isinstance(experiment_id, str) or not experiment_id:
        problems.append(("experiment.id", "required non-empty string"))
        experiment_id = "unnamed"
    kind = exp.get("kind")
    if kind not in KINDS:
        problems.append(("experiment.kind",
                         f"unknown kind {kind!r}; expected one of {KINDS}"))
        kind = "drift"
    master_seed = exp.get("master_seed")
    if master_seed is not None and (not isinstance(master_seed, int)
                                    or master_seed < 0):
        problems.append(("experiment.master_seed",
                         "must be a nonnegative integer"))
        master_seed = None

    group = raw.get("group", {})
    spec = group.get("spec") if isinstance(group, dict) else None
    model: Optional[GroupModel] = None
    if not isinstance(spec, str):
        problems.append(("group.spec", "required string, e.g. \"free(2)\""))
    else:
        try:
            model = parse_group_spec(spec)
        except Exception as exc:
            problems.append(("group.spec", str(exc)))
    if model is None:
        model = parse_group_spec("free(2)")  # placeholder for later checks

    dist: Optional[Distribution] = None
    dtable = raw.get("distribution")
    needs_dist = kind not in PROFILE_KINDS
    if dtable is None:
        if needs_dist:
            problems.append(("distribution",
                             "missing [distribution] table"))
    elif not isinstance(dtable, dict):
        problems.append(("distribution", "expected a table"))
    elif dtable.get("uniform_generators"):
        dist = uniform_generators(model)
    elif "support" in dtable:
        pairs = []
        sup = dtable["support"]
        if not isinstance(sup, list):
            problems.append(("distribution.support",
                             "expected list of [word, weight] pairs"))
        else:
            for i, item in enumerate(sup):
                if (not isinstance(item, (list, tuple)) or len(item) != 2
                        or not isinstance(item[1], (int, float))):
                    problems.append((f"distribution.support[{i}]",
                                     "expected [word, weight]"))
                    continue
                try:
                    pairs.append((model.parse_word(item[0]),
                                  float(item[1])))
                except Exception as exc:
                    problems.append((f"distribution.support[{i}]",
                                     str(exc)))
            if pairs and not problems:
                try:
                    dist = make_distribution(model, pairs)
                except Exception as exc:
                    problems.append(("distribution.support", str(exc)))
    else:
        problems.append(("distribution",
                         "need uniform_generators = true or support = [...]"))

    grid = raw.get("grid", {})
    if not isinstance(grid, dict):
        problems.append(("grid", "expected a table"))
        grid = {}
    n_grid = grid.get("n", [0] if kind in PROFILE_KINDS else None)
    if (not isinstance(n_grid, list) or not n_grid
            or not all(isinstance(n, int) and 0 <= n <= N_CAP
                       for n in n_grid)):
        problems.append(("grid.n", f"required ascending list of ints "
                                   f"in [0, {N_CAP}]"))
        n_grid = [0]
    elif any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        problems.append(("grid.n", "must be strictly ascending"))
    trials = grid.get("trials", 1 if kind in PROFILE_KINDS else None)
    if not isinstance(trials, int) or not 1 <= trials <= TRIALS_CAP:
        problems.append(("grid.trials",
                         f"required integer in [1, {TRIALS_CAP}]"))
        trials = 1

    params = raw.get("params", {})
    if not isinstance(params, dict):
        problems.append(("params", "expected a table"))
        params = {}
    params = dict(params)
    _validate_params(kind, model, params, problems)

    if problems:
        raise SchemaError(problems)
    return ExperimentConfig(
        experiment_id=experiment_id, kind=kind, master_seed=master_seed,
        model=model, distribution=dist, n_grid=tuple(n_grid), trials=trials,
        params=params, raw=raw)


def _opt(params, key, default, typ, lo, hi, problems, cast=None):
    val = params.get(key, default)
    if isinstance(val, bool) and typ is not bool:
        problems.append((f"params.{key}", f"expected {typ.__name__}"))
        return default
    if not isinstance(val, typ):
        problems.append((f"params.{key}", f"expected {typ.__name__}"))
        return default
    if lo is not None and val < lo or hi is not None and val > hi:
        problems.append((f"params.{key}", f"must be in [{lo}, {hi}]"))
        return default
    params[key] = cast(val) if cast else val
    return params[key]


def _validate_params(kind: str, model: GroupModel, params: Dict[str, Any],
                     problems: List[Tuple[str, str]]):
    def words(key, default):
        if key in params:
            params[key] = tuple(
                serialize_word(w)
                for w in _parse_words(model, params[key], f"params.{key}",
                                      problems))
        else:
            params[key] = default

    if kind in ("freeness", "qg-words", "relation-search", "matching-decay"):
        _opt(params, "n_walks", 2, int, 1, 8, problems)
    if kind in ("freeness", "separation"):
        words("h_gens", ("a^1",))
    if kind == "freeness":
        _opt(params, "relation_check", True, bool, None, None, problems)
        _opt(params, "max_syllables", 4, int, 1, MAX_SYLLABLES_CAP, problems)
        _opt(params, "exponent_bound", 2, int, 1, EXPONENT_BOUND_CAP,
             problems)
        _opt(params, "s_ball_radius", 2, int, 0, TRUNCATION_CAP, problems)
    if kind == "relation-search":
        words("s_words", ())
        _opt(params, "max_syllables", 4, int, 1, MAX_SYLLABLES_CAP, problems)
        _opt(params, "exponent_bound", 2, int, 1, EXPONENT_BOUND_CAP,
             problems)
    if kind == "qg-words":
        words("s_words", ("a^1",))
        _opt(params, "max_syllables", 6, int, 1, MAX_SYLLABLES_CAP, problems)
        _opt(params, "exponent_bound", 3, int, 1, EXPONENT_BOUND_CAP,
             problems)
        eps = _opt(params, "epsilon", 0.1, (int, float), 0, 1, problems,
                   cast=lambda v: str(Fraction(str(v))))
        epsp = _opt(params, "epsilon_prime", 0.05, (int, float), 0, 1,
                    problems, cast=lambda v: str(Fraction(str(v))))
        try:
            if not (0 < Fraction(params["epsilon_prime"])
                    < Fraction(params["epsilon"]) < 1):
                problems.append(("params.epsilon_prime",
                                 "need 0 < epsilon_prime < epsilon < 1"))
        except (ValueError, ZeroDivisionError):
            problems.append(("params.epsilon", "invalid rational"))
        _opt(params, "delta", 0, int, 0, None, problems)
    if kind == "matching-decay":
        _opt(params, "a_factor", 0.5, (int, float), 0, None, problems,
             cast=lambda v: str(Fraction(str(v))))
        _opt(params, "b", 0, int, 0, None, problems)
        _opt(params, "candidate_radius", 3, int, 0, CANDIDATE_RADIUS_CAP,
             problems)
    if kind == "separation":
        _opt(params, "kappa", 0, int, 0, None, problems)
        _opt(params, "candidate_radius", 4, int, 0, CANDIDATE_RADIUS_CAP,
             problems)
        _opt(params, "orbit_truncation", 12, int, 0, TRUNCATION_CAP,
             problems)
    if kind == "transversality":
        words("h_gens", ("a^1",))
        if "f" in params:
            ws = _parse_words(model, [params["f"]], "params.f", problems)
            params["f"] = serialize_word(ws[0]) if ws else "b^1"
        else:
            params["f"] = "b^1"
        _opt(params, "k_const", 0, int, 0, None, problems)
        _opt(params, "candidate_radius", 4, int, 0, CANDIDATE_RADIUS_CAP,
             problems)
        _opt(params, "coset_truncation", 12, int, 0, TRUNCATION_CAP,
             problems)
        rng = params.get("axis_range", [-8, 8])
        if (not isinstance(rng, list) or len(rng) != 2
                or not all(isinstance(v, int) for v in rng)
                or rng[0] >= rng[1]
                or rng[1] - rng[0] > TRUNCATION_CAP):
            problems.append(("params.axis_range",
                             "expected [lo, hi] ints, lo < hi, small"))
            rng = [-8, 8]
        params["axis_range"] = tuple(rng)
    if kind == "lox-products":
        _opt(params, "y_length", 4, int, 1, 16, problems)
        _opt(params, "exponent_lo", 3, int, 1, None, problems)
        _opt(params, "exponent_hi", 6, int, 1, None, problems)
        if params["exponent_lo"] > params["exponent_hi"]:
            problems.append(("params.exponent_lo",
                             "must be <= exponent_hi"))
    if kind == "drift":
        if "band_epsilon" in params:
            _opt(params, "band_epsilon", 0.1, (int, float), 0, 1, problems,
                 cast=lambda v: str(Fraction(str(v))))


# ---------------------------------------------------------------------------
# Drift constant resolution


def resolve_drift_constant(config: ExperimentConfig,
                           master_seed: int) -> Tuple[Fraction, str]:
    """The drift constant D for downstream constants: the exact oracle when
    the distribution admits one, else a seeded calibration run at the
    largest configured n (recorded as such in the report)."""
    try:
        return drift_oracle_for(config.model, config.distribution), "oracle"
    except WrongDistributionError:
        n = max(max(config.n_grid), 1)
        trials = 200
        total = 0
        for t in range(trials):
            total += walk_distance(
                config.model, config.distribution, n,
                derive_seed(master_seed, config.experiment_id,
                            "calibration", n, t))
        return Fraction(total, n * trials), "calibration"


# ---------------------------------------------------------------------------
# Trials


def _rng(seed: int):
    import numpy as np

    return np.random.Generator(np.random.Philox(key=seed))


def _trial_payload(config: ExperimentConfig, dconst: Optional[Fraction],
                   n: int, seed: int) -> Dict[str, Any]:
    kind = config.kind
    model = config.model
    params = config.params
    if kind == "drift":
        return {"distance": walk_distance(model, config.distribution, n,
                                          seed)}
    if kind == "freeness":
        h_gens = [model.parse_word(t) for t in params["h_gens"]]
        k = params["n_walks"]
        walks = [sample_walk(model, config.distribution, n,
                             derive_seed(seed, "walk", i)).endpoint
                 for i in range(k)]
        cert = free_product_certificate(model, h_gens, walks)
        payload = {"certificate": cert}
        if params["relation_check"]:
            s_vals = [w for w in subgroup_orbit(model, h_gens,
                                                params["s_ball_radius"])
                      if not w.is_identity]
            rep = relation_search(model, s_vals, walks,
                                  params["max_syllables"],
                                  params["exponent_bound"])
            payload["relation_found"] = rep.found
            payload["soundness_ok"] = (not rep.found) or (not cert)
        return payload
    if kind == "relation-search":
        s_vals = [model.parse_word(t) for t in params["s_words"]]
        k = params["n_walks"]
        walks = [sample_walk(model, config.distribution, n,
                             derive_seed(seed, "walk", i)).endpoint
                 for i in range(k)]
        rep = relation_search(model, s_vals, walks, params["max_syllables"],
                              params["exponent_bound"])
        return {"found": rep.found,
                "syllable_length": rep.syllable_length,
                "nodes_scanned": rep.nodes_scanned}
    if kind == "qg-words":
        s_vals = [model.parse_word(t) for t in params["s_words"]]
        k = params["n_walks"]
        walks = [sample_walk(model, config.distribution, n,
                             derive_seed(seed, "walk", i)).endpoint
                 for i in range(k)]
        consts = theorem_constants(max(n, 1), Fraction(params["epsilon"]),
                                   Fraction(params["epsilon_prime"]),
                                   dconst, params["delta"])
        check = qg_enumeration_check(model, s_vals, walks,
                                     params["max_syllables"],
                                     params["exponent_bound"], consts)
        cert = (free_product_certificate(model, [], walks)
                if model.kind == "free" else None)
        return {"qg_all_pass": check.qg_all_pass,
                "qg_via_arc_bound": check.qg_via_arc_bound,
                "arc_bound": check.arc_bound,
                "word_count": check.count,
                "relation_found": check.relation.found,
                "certificate": cert,
                "nontrivial_ok": (not cert) or (not check.relation.found)}
    if kind == "matching-decay":
        walks = [sample_walk(model, config.distribution, n,
                             derive_seed(seed, "walk", i))
                 for i in range(2)]
        geos = [walk_geodesic(model, s) for s in walks]
        A = math.ceil(Fraction(params["a_factor"]) * dconst * n)
        A = max(A, 1)
        cands = model.ball(params["candidate_radius"])
        witness = find_match(model, geos[0], geos[1], A, params["b"], cands)
        return {"matched": witness is not None, "a_threshold": A,
                "n_candidates": len(cands)}
    if kind == "separation":
        h_gens = [model.parse_word(t) for t in params["h_gens"]]
        prof = separation_profile(
            model, h_gens, params["kappa"],
            model.ball(params["candidate_radius"]),
            params["orbit_truncation"])
        return {"max_diameter": prof.max_diameter,
                "n_candidates": len(prof.records),
                "excluded": prof.excluded,
                "kappa": params["kappa"],
                "orbit_truncation": params["orbit_truncation"],
                "candidate_radius": params["candidate_radius"]}
    if kind == "transversality":
        h_gens = [model.parse_word(t) for t in params["h_gens"]]
        f = model.parse_word(params["f"])
        prof = transversality_profile(
            model, f, h_gens, params["k_const"],
            model.ball(params["candidate_radius"]), params["axis_range"],
            params["coset_truncation"])
        return {"max_diameter": prof.max_diameter,
                "n_candidates": len(prof.records),
                "k_const": params["k_const"],
                "axis_range": list(params["axis_range"]),
                "coset_truncation": params["coset_truncation"],
                "candidate_radius": params["candidate_radius"]}
    if kind == "lox-products":
        from .freeness import lox_product_word

        rng = _rng(seed)
        length = params["y_length"]
        lo, hi = params["exponent_lo"], params["exponent_hi"]
        attempts = 0
        while True:
            attempts += 1
            if attempts > 100:
                raise BudgetExceededError(
                    "could not sample an independent loxodromic pair")
            y1 = model.random_reduced_word(length, rng)
            y2 = model.random_reduced_word(length, rng)
            if not (model.is_loxodromic(y1) and model.is_loxodromic(y2)):
                continue
            if model.kind == "free":
                if stallings_core(model, [y1, y2]).rank() != 2:
                    continue
            m1 = int(rng.integers(lo, hi + 1))
            m2 = int(rng.integers(lo, hi + 1))
            break
        res = lox_product_word(model, [y1, y2], [(0, m1), (1, m2)])
        return {"loxodromic": res.loxodromic,
                "y1": serialize_word(y1), "y2": serialize_word(y2),
                "m1": m1, "m2": m2,
                "translation_length": model.translation_length(res.z),
                "attempts": attempts}
    raise ValueError(f"unknown kind {kind!r}")


def _run_one(args) -> TrialRecord:
    config, dconst, n, t = args
    seed = derive_seed(config.master_seed, config.experiment_id, n, t)
    payload = _trial_payload(config, dconst, n, seed)
    return TrialRecord(config.experiment_id, n, t, seed, payload)


# ---------------------------------------------------------------------------
# Aggregation


def _bernoulli_row(n: int, flags: List[bool],
                   extra: Dict[str, Any]) -> Dict[str, Any]:
    succ = sum(flags)
    trials = len(flags)
    lo, hi = wilson_interval(succ, trials)
    row = {"n": n, "estimate": succ / trials, "ci_lo": lo, "ci_hi": hi,
           "successes": succ, "trials": trials}
    row.update(extra)
    return row


def aggregate_records(config: ExperimentConfig, dconst: Optional[Fraction],
                      n: int,
                      records: Sequence[TrialRecord]) -> Dict[str, Any]:
    """Per-n aggregate row; a pure function of the records so that replay
    can recompute it exactly."""
    kind = config.kind
    pay = [r.payload for r in records]
    if kind == "drift":
        dists = [p["distance"] for p in pay]
        trials = len(dists)
        nn = max(n, 1)
        mean = sum(dists) / (nn * trials)
        var = (sum((d / nn - mean) ** 2 for d in dists) / (trials - 1)
               if trials > 1 else 0.0)
        se = math.sqrt(var / trials) if trials else 0.0
        row = {"n": n, "estimate": mean, "ci_lo": mean - 1.959963984540054 * se,
               "ci_hi": mean + 1.959963984540054 * se, "std_error": se,
               "trials": trials,
               "mean_fraction": f"{sum(dists)}/{nn * trials}"}
        if "band_epsilon" in config.params and dconst is not None:
            eps = Fraction(config.params["band_epsilon"])
            lo = (1 - eps) * dconst * n
            hi = (1 + eps) * dconst * n
            outside = sum(1 for d in dists if d < lo or d > hi)
            row["tail_fraction"] = outside / trials
            row["band"] = [str(lo), str(hi)]
        return row
    if kind == "freeness":
        row = _bernoulli_row(n, [p["certificate"] for p in pay], {})
        if pay and "soundness_ok" in pay[0]:
            row["soundness_violations"] = sum(
                1 for p in pay if not p["soundness_ok"])
            row["relations_found"] = sum(
                1 for p in pay if p.get("relation_found"))
        return row
    if kind == "relation-search":
        return _bernoulli_row(n, [p["found"] for p in pay], {})
    if kind == "qg-words":
        row = _bernoulli_row(n, [p["certificate"] for p in pay], {})
        row["qg_violations"] = sum(1 for p in pay if not p["qg_all_pass"])
        row["nontriviality_violations"] = sum(
            1 for p in pay if not p["nontrivial_ok"])
        row["word_count"] = pay[0]["word_count"] if pay else 0
        return row
    if kind == "matching-decay":
        extra = {"a_threshold": pay[0]["a_threshold"] if pay else None,
                 "n_candidates": pay[0]["n_candidates"] if pay else None}
        return _bernoulli_row(n, [p["matched"] for p in pay], extra)
    if kind in ("separation", "transversality"):
        mx = max((p["max_diameter"] for p in pay), default=0)
        row = {"n": n, "estimate": float(mx), "ci_lo": float(mx),
               "ci_hi": float(mx), "max_diameter": mx}
        if pay:
            for key in ("n_candidates", "kappa", "k_const",
                        "orbit_truncation", "coset_truncation",
                        "candidate_radius"):
                if key in pay[0]:
                    row[key] = pay[0][key]
        return row
    if kind == "lox-products":
        return _bernoulli_row(n, [p["loxodromic"] for p in pay], {})
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Running


def run_experiment(config: ExperimentConfig, threads: int = 1,
                   seed_source: str = "config") -> Report:
    """Execute the trial grid; deterministic for a fixed (config, seed)."""
    if config.master_seed is None:
        raise ValueError("master seed unresolved; set experiment.master_seed,"
                         " pass --seed, or export HYPWALK_SEED")
    t0 = time.monotonic()
    dconst: Optional[Fraction] = None
    dsource = None
    if config.kind in ("matching-decay", "qg-words") or (
            config.kind == "drift" and "band_epsilon" in config.params):
        dconst, dsource = resolve_drift_constant(config, config.master_seed)
    tasks = [(config, dconst, n, t) for n in config.n_grid
             for t in range(config.trials)]
    records: List[TrialRecord] = []
    error: Optional[str] = None
    if threads <= 1:
        for task in tasks:
            try:
                records.append(_run_one(task))
            except BudgetExceededError as exc:
                error = str(exc)
                break
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunk = max(1, len(tasks) // (threads * 8))
            try:
                for rec in pool.map(_run_one, tasks, chunksize=chunk):
                    records.append(rec)
            except BudgetExceededError as exc:
                error = str(exc)
    records.sort(key=lambda r: (r.n, r.trial_index))
    aggregates = []
    for n in config.n_grid:
        recs = [r for r in records if r.n == n]
        if recs:
            aggregates.append(aggregate_records(config, dconst, n, recs))
    drift_info = None
    if dconst is not None:
        drift_info = {"value": str(dconst), "source": dsource}
    return Report(
        config=config.raw, experiment_id=config.experiment_id,
        kind=config.kind, master_seed=config.master_seed,
        seed_source=seed_source, tool_version=__version__,
        drift_constant=drift_info, records=records, aggregates=aggregates,
        wall_time_s=round(time.monotonic() - t0, 3),
        complete=error is None, error=error)


# ---------------------------------------------------------------------------
# Output files and replay


def write_report(report: Report, out_dir) -> List[str]:
    """Emit records.jsonl, summary.csv, and report.json into out_dir."""
    out = FsPath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records_path = out / "records.jsonl"
    with open(records_path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in report.records:
            fh.write(rec.to_json() + "\n")
    summary_path = out / "summary.csv"
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "estimate", "ci_lo", "ci_hi"])
        for row in report.aggregates:
            writer.writerow([row["n"], repr(row["estimate"]),
                             repr(row["ci_lo"]), repr(row["ci_hi"])])
    report_path = out / "report.json"
    doc = {
        "experiment_id": report.experiment_id,
        "kind": report.kind,
        "master_seed": report.master_seed,
        "seed_source": report.seed_source,
        "tool_version": report.tool_version,
        "drift_constant": report.drift_constant,
        "config": report.config,
        "aggregates": report.aggregates,
        "n_records": len(report.records),
        "wall_time_s": report.wall_time_s,
        "complete": report.complete,
        "error": report.error,
    }
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return [str(records_path), str(summary_path), str(report_path)]


def load_records(path) -> List[TrialRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            records.append(TrialRecord(
                obj["experiment_id"], obj["n"], obj["trial_index"],
                obj["derived_seed"], obj["payload"]))
    return records


def replay(records_path) -> Tuple[bool, List[str]]:
    """Recompute aggregates from records.jsonl and compare them against the
    adjacent report.json; returns (ok, human-readable differences)."""
    rpath = FsPath(records_path)
    report_path = rpath.parent / "report.json"
    with open(report_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    config = _config_from_raw(doc["config"])
    records = load_records(rpath)
    dconst = None
    if doc.get("drift_constant"):
        dconst = Fraction(doc["drift_constant"]["value"])
    diffs: List[str] = []
    by_n: Dict[int, List[TrialRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec)
        expected = derive_seed(doc["master_seed"], rec.experiment_id, rec.n,
                               rec.trial_index)
        if rec.derived_seed != expected:
            diffs.append(f"record (n={rec.n}, trial={rec.trial_index}): "
                         f"derived_seed mismatch")
    recomputed = []
    for n in sorted(by_n):
        recomputed.append(aggregate_records(config, dconst, n,
                                            sorted(by_n[n],
                                                   key=lambda r:
                                                   r.trial_index)))
    stored = doc["aggregates"]
    if json.dumps(recomputed, sort_keys=True) != json.dumps(stored,
                                                            sort_keys=True):
        diffs.append("aggregates differ from recomputation")
        for a, b in zip(stored, recomputed):
            if a != b:
                diffs.append(f"  n={a.get('n')}: stored {a} != recomputed "
                             f"{b}")
    return not diffs, diffs


def _config_from_raw(raw: Dict[str, Any]) -> ExperimentConfig:
    # round-trip the echoed config through the parser for validation
    return parse_config(_toml_dumps(raw))


def _toml_dumps(obj: Dict[str, Any], prefix: str = "") -> str:
    """Minimal TOML writer for the echoed config (tables of scalars and
    lists, as produced by parse_config)."""
    lines: List[str] = []
    scalars = {k: v for k, v in obj.items() if not isinstance(v, dict)}
    tables = {k: v for k, v in obj.items() if isinstance(v, dict)}
    for k, v in scalars.items():
        lines.append(f"{k} = {_toml_value(v)}")
    for k, v in tables.items():
        name = f"{prefix}{k}"
        lines.append(f"[{name}]")
        lines.append(_toml_dumps(v, prefix=name + "."))
    return "\n".join(line for line in lines if line != "")


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__} to TOML")
