"""Scenario file ingestion, seeded sweeps and machine-readable report emission.

Scenario files are JSON; complex numbers are always [re, im] pairs.
Supported top-level "type" values: "scenario", "two_particle", "ensemble".
Detector sections accept either explicit "vectors" or a "gram" overlap
table.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .discrimination import Ensemble
from .duality import (
    DualityReport,
    Relation,
    TwoParticleScenario,
    check_accessible_relation,
    check_entropic_memory,
    check_entropic_no_memory,
    check_l1_memory,
    check_l1_no_memory,
    check_mixed_state,
    check_two_particle_sum,
    check_two_path_equality,
    entanglement_witnesses,
)
from .interferometer import ScenarioSpec, gram_to_states, scenario_reduced
from .linalg import Dims, purity, von_neumann_entropy
from .sampling import haar_state, sample_scenario, subseed

CSV_HEADER = "scenario_id,relation,n,d_b,lhs,rhs,slack,satisfied,certified,ms"


class ScenarioParseError(ValueError):
    """Malformed or invalid scenario/ensemble file."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_pairs(a: np.ndarray):
    """Complex array -> nested [re, im] lists."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def from_pairs(data, where: str) -> np.ndarray:
    """Nested [re, im] lists -> complex array."""
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"{where}: not a numeric array: {exc}") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ScenarioParseError(f"{where}: complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _detector_states(section, n: int, where: str) -> np.ndarray:
    if not isinstance(section, dict):
        raise ScenarioParseError(f"{where}: expected an object with 'vectors' or 'gram'")
    if ("vectors" in section) == ("gram" in section):
        raise ScenarioParseError(f"{where}: give exactly one of 'vectors' or 'gram'")
    if "vectors" in section:
        phi = from_pairs(section["vectors"], f"{where}.vectors")
        if phi.ndim != 2 or phi.shape[0] != n:
            raise ScenarioParseError(f"{where}.vectors: expected {n} state vectors")
        return phi
    g = from_pairs(section["gram"], f"{where}.gram")
    if g.shape != (n, n):
        raise ScenarioParseError(f"{where}.gram: expected an {n}x{n} matrix")
    try:
        return gram_to_states(g)
    except ValueError as exc:
        raise ScenarioParseError(f"{where}.gram: {exc}") from exc


def parse_scenario(path) -> ScenarioSpec | TwoParticleScenario | Ensemble:
    """Load and validate a scenario, two-particle or ensemble file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{path}: parse error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioParseError(f"{path}: top level must be an object")
    kind = doc.get("type", "scenario")

    try:
        if kind == "scenario":
            amps = from_pairs(doc.get("amplitudes"), "amplitudes")
            if amps.ndim != 2:
                raise ScenarioParseError("amplitudes: expected an N x d_B table")
            phi = _detector_states(doc.get("detector", {}), amps.shape[0], "detector")
            return ScenarioSpec(amps, phi)
        if kind == "two_particle":
            amps = from_pairs(doc.get("amplitudes"), "amplitudes")
            if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
                raise ScenarioParseError("amplitudes: expected an N x N joint table")
            n = amps.shape[0]
            da = _detector_states(doc.get("detector_a", {}), n, "detector_a")
            db = _detector_states(doc.get("detector_b", {}), n, "detector_b")
            return TwoParticleScenario(amps, da, db)
        if kind == "ensemble":
            probs = np.asarray(doc.get("probs"), dtype=float)
            states = from_pairs(doc.get("states"), "states")
            return Ensemble(probs, states)
    except ScenarioParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"{path}: validation error: {exc}") from exc
    raise ScenarioParseError(f"{path}: unknown type {kind!r}")


def emit_scenario(spec: ScenarioSpec, path) -> None:
    doc = {
        "type": "scenario",
        "amplitudes": to_pairs(spec.amplitudes),
        "detector": {"vectors": to_pairs(spec.detector_states)},
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


@dataclass(frozen=True)
class SweepConfig:
    """Randomized verification sweep: `count` scenarios per (N, d_B) cell."""

    seed: int
    count: int
    n_values: tuple[int, ...]
    d_b_values: tuple[int, ...]
    d_d: int | None = None  # None: detector dimension follows N
    relations: tuple[Relation, ...] | None = None  # None: all applicable
    tol_overrides: dict = field(default_factory=dict)
    restarts: int = 2  # accessible-information restarts
    solver_tol: float = 1e-9

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise ValueError(f"every N must be >= 2, got {self.n_values}")
        if not self.d_b_values or any(d < 1 for d in self.d_b_values):
            raise ValueError(f"every d_B must be >= 1, got {self.d_b_values}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")

    def cells(self) -> list[tuple[int, int]]:
        return [(n, d_b) for n in self.n_values for d_b in self.d_b_values]


@dataclass(frozen=True)
class SweepRow:
    scenario_id: str
    relation: str
    n: int
    d_b: int
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    certified: bool
    wall_time_ms: float


DEFAULT_RELATIONS = (
    Relation.L1_MEMORY,
    Relation.L1_NO_MEMORY,
    Relation.TWO_PATH_EQUALITY,
    Relation.MIXED_STATE,
    Relation.ENTROPIC_MEMORY,
    Relation.ENTROPIC_NO_MEMORY,
    Relation.ACCESSIBLE,
)


def applicable_relations(relations, n: int, d_b: int) -> list[Relation]:
    out = []
    for r in relations:
        if r in (Relation.L1_NO_MEMORY, Relation.ENTROPIC_NO_MEMORY) and d_b != 1:
            continue
        if r is Relation.TWO_PATH_EQUALITY and n != 2:
            continue
        out.append(Relation(r))
    return out


def sample_two_particle(rng, n: int, d_d: int | None = None) -> TwoParticleScenario:
    d_d = n if d_d is None else d_d
    amps = haar_state(rng, n * n).reshape(n, n)
    da = np.stack([haar_state(rng, d_d) for _ in range(n)])
    db = np.stack([haar_state(rng, d_d) for _ in range(n)])
    return TwoParticleScenario(amps, da, db)


def run_relation(relation: Relation, spec, *, restarts: int = 2, seed: int = 0,
                 solver_tol: float = 1e-10) -> DualityReport:
    """Evaluate one relation on a ScenarioSpec (or TwoParticleScenario)."""
    if relation is Relation.TWO_PARTICLE_SUM:
        return check_two_particle_sum(spec, solver_tol=solver_tol)
    if relation is Relation.L1_MEMORY:
        return check_l1_memory(spec, solver_tol=solver_tol)
    if relation is Relation.L1_NO_MEMORY:
        return check_l1_no_memory(spec, solver_tol=solver_tol)
    if relation is Relation.TWO_PATH_EQUALITY:
        return check_two_path_equality(spec)
    if relation is Relation.MIXED_STATE:
        return check_mixed_state(spec, solver_tol=solver_tol)
    if relation is Relation.ENTROPIC_MEMORY:
        return check_entropic_memory(spec, solver_tol=solver_tol)
    if relation is Relation.ENTROPIC_NO_MEMORY:
        return check_entropic_no_memory(spec, solver_tol=solver_tol)
    if relation is Relation.ACCESSIBLE:
        return check_accessible_relation(spec, restarts=restarts, seed=seed,
                                         solver_tol=solver_tol)
    raise ValueError(f"relation {relation} is not sweepable")


def _eval_task(config: SweepConfig, cell_idx: int, scen_idx: int) -> list[SweepRow]:
    n, d_b = config.cells()[cell_idx]
    relations = applicable_relations(config.relations or DEFAULT_RELATIONS, n, d_b)
    scenario_id = f"s{config.seed}-c{cell_idx}-i{scen_idx}"
    rows = []

    need_single = any(r is not Relation.TWO_PARTICLE_SUM for r in relations)
    spec = None
    if need_single:
        spec = sample_scenario(subseed(config.seed, cell_idx, scen_idx),
                               n, d_b, config.d_d)
    tp = None
    if Relation.TWO_PARTICLE_SUM in relations:
        tp = sample_two_particle(subseed(config.seed, cell_idx, scen_idx, 1),
                                 n, config.d_d)

    for rel in relations:
        target = tp if rel is Relation.TWO_PARTICLE_SUM else spec
        t0 = time.perf_counter()
        rep = run_relation(rel, target, restarts=config.restarts,
                           seed=config.seed, solver_tol=config.solver_tol)
        ms = (time.perf_counter() - t0) * 1e3
        tol = config.tol_overrides.get(rel)
        ok = rep.satisfied if tol is None else (
            abs(rep.slack) <= tol if rep.equality else rep.slack >= -tol)
        rows.append(SweepRow(
            scenario_id=scenario_id, relation=rel.value, n=n, d_b=d_b,
            lhs=rep.lhs, rhs=rep.rhs, slack=rep.slack, satisfied=ok,
            certified=rep.solver_certified, wall_time_ms=ms))
    return rows


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every (cell, scenario, relation) triple.

    Row order is deterministic and independent of `jobs`; each scenario is
    generated from a substream keyed by (seed, cell index, scenario index).
    """
    tasks = [(ci, si) for ci in range(len(config.cells()))
             for si in range(config.count)]
    if jobs <= 1:
        chunks = [_eval_task(config, ci, si) for ci, si in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_eval_task, [config] * len(tasks),
                                   [t[0] for t in tasks], [t[1] for t in tasks],
                                   chunksize=max(1, len(tasks) // (8 * jobs))))
    return [row for chunk in chunks for row in chunk]


def summarize(rows: list[SweepRow]) -> dict:
    return {
        "rows": len(rows),
        "violations": sum(1 for r in rows if not r.satisfied),
        "uncertified": sum(1 for r in rows if not r.certified),
        "worst_slack": min((r.slack for r in rows), default=0.0),
    }


def emit(rows: list[SweepRow], fmt: str, path) -> None:
    """Write rows as CSV or JSON-lines.

    The CSV payload is deterministic for a fixed config: wall times vary
    between runs, so the CSV `ms` column is fixed to 0 and measured times
    are only available in the JSON-lines format.
    """
    path = Path(path)
    if fmt == "csv":
        lines = [CSV_HEADER]
        for r in rows:
            lines.append(",".join([
                r.scenario_id, r.relation, str(r.n), str(r.d_b),
                _fmt(r.lhs), _fmt(r.rhs), _fmt(r.slack),
                "true" if r.satisfied else "false",
                "true" if r.certified else "false",
                "0",
            ]))
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "jsonl":
        with path.open("w") as fh:
            for r in rows:
                fh.write(json.dumps(asdict(r)) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r} (expected 'csv' or 'jsonl')")


def parse_rows(path) -> list[SweepRow]:
    """Re-load rows emitted as JSON-lines."""
    rows = []
    with Path(path).open() as fh:
        for line in fh:
            if line.strip():
                rows.append(SweepRow(**json.loads(line)))
    return rows


def witness_report(spec: ScenarioSpec) -> dict:
    """Both entanglement witnesses of the particle-memory state."""
    red = scenario_reduced(spec)
    dims = Dims.of(("A", spec.n), ("B", spec.d_b))
    pur_w, cond_w = entanglement_witnesses(red.rho_ab, dims)
    return {"purity_witness": pur_w, "cond_ent_witness": cond_w}


def default_out_dir() -> Path:
    return Path(os.environ.get("PATHCOH_OUT_DIR", "."))
