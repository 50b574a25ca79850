"""Seeded Monte Carlo sweeps: threshold experiments, witness runs, censuses."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import sample_mask, safe_mask_z2n
from .extremal import SFCatalog, dilation_catalog_z3q, enumerate_sf_type1
from .groups import GroupSpec, parse_group_literal
from .parity import BudgetExceeded
from .solver import augment_with_safe
from .subsets import Subset

CSV_COLUMNS = (
    "n",
    "C",
    "p",
    "trial",
    "decision",
    "sample_size",
    "s0",
    "solver_max",
    "witness_found",
    "safe_count",
    "elapsed_ms",
)

KINDS = ("sharp", "good", "witness", "census")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    groups: Tuple[str, ...]
    c_grid: Tuple[float, ...] = ()
    p_grid: Tuple[float, ...] = ()
    trials: int = 100
    master_seed: int = 0
    node_cap: int = 2 * 10**6

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.c_grid and not self.p_grid:
            raise ValueError("one of c_grid or p_grid is required")
        for c in self.c_grid:
            if c <= 0:
                raise ValueError("C values must be positive")
        for p in self.p_grid:
            if not 0 < p < 1:
                raise ValueError("explicit p values must lie in (0, 1)")

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        data = json.loads(text)
        return ExperimentConfig(
            kind=data["kind"],
            groups=tuple(data["groups"]),
            c_grid=tuple(data.get("c_grid", ())),
            p_grid=tuple(data.get("p_grid", ())),
            trials=int(data.get("trials", 100)),
            master_seed=int(data.get("seed", 0)),
            node_cap=int(data.get("node_cap", 2 * 10**6)),
        )


def threshold_parameter(G: GroupSpec) -> int:
    """The scaling parameter: half the order for cyclic even-order groups."""
    if len(G.orders) == 1 and G.n % 2 == 0:
        return G.n // 2
    return G.n


def p_from_C(C: float, n_param: int) -> float:
    """p with p^2 · n = C · ln n (natural logarithm)."""
    p = math.sqrt(C * math.log(n_param) / n_param)
    if not 0 < p < 1:
        raise ValueError(f"C={C} gives p={p} outside (0, 1)")
    return p


@dataclass(frozen=True)
class TrialRecord:
    n: int
    C: Optional[float]
    p: float
    trial: int
    decision: str  # "true" | "false" | "indeterminate" | ""
    sample_size: int
    s0: int
    solver_max: int
    witness_found: Optional[bool]
    safe_count: Optional[int]

    def csv_row(self) -> str:
        wf = "" if self.witness_found is None else str(self.witness_found).lower()
        sc = "" if self.safe_count is None else str(self.safe_count)
        c = "" if self.C is None else repr(self.C)
        # elapsed_ms stays blank so reruns are byte-identical.
        return ",".join(
            [
                str(self.n),
                c,
                repr(self.p),
                str(self.trial),
                self.decision,
                str(self.sample_size),
                str(self.s0),
                str(self.solver_max),
                wf,
                sc,
                "",
            ]
        )


def sample_subset(G: GroupSpec, p: float, master_seed: int, trial_index: int) -> Subset:
    """p-random subset, bit-exact for fixed (seed, trial, element) counters."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    mask = sample_mask(G.n, p, master_seed, trial_index)
    return Subset.from_mask(G, mask)


def wilson_interval(successes: int, total: int, z: float = 1.959963984540054) -> Tuple[float, float, float]:
    """(estimate, lo, hi) 95% Wilson interval; (0, 0, 1) for empty totals."""
    if total == 0:
        return 0.0, 0.0, 1.0
    phat = successes / total
    z2 = z * z
    denom = 1.0 + z2 / total
    centre = (phat + z2 / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z2 / (4 * total * total)) / denom
    return phat, max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class SweepSummary:
    kind: str
    cells: List[Dict] = field(default_factory=list)
    indeterminate_rate: float = 0.0
    elapsed_seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "cells": self.cells,
                "indeterminate_rate": self.indeterminate_rate,
                "elapsed_seconds": round(self.elapsed_seconds, 3),
            },
            indent=2,
        )


# --- per-trial workers -----------------------------------------------------


def _odd_subset(G: GroupSpec) -> Subset:
    return Subset.from_elements(G, range(1, G.n, 2))


def _sharp_trial(args) -> TrialRecord:
    literal, n_param, C, p, trial, seed, cap = args
    from .certify import decide_sharp_event_certified

    G = parse_group_literal(literal)
    sample = sample_subset(G, p, seed, trial)
    odds = _odd_subset(G)
    s0 = len(sample & odds)
    try:
        holds, witness = decide_sharp_event_certified(sample, node_cap=cap)
        if holds:
            decision, solver_max = "true", s0
        else:
            decision, solver_max = "false", len(witness)
    except BudgetExceeded:
        decision, solver_max = "indeterminate", s0
    return TrialRecord(
        n=n_param, C=C, p=p, trial=trial, decision=decision,
        sample_size=len(sample), s0=s0, solver_max=solver_max,
        witness_found=None, safe_count=None,
    )


def _good_trial(args) -> TrialRecord:
    literal, n_param, C, p, trial, seed, cap, catalog_json = args
    G = parse_group_literal(literal)
    catalog = SFCatalog.from_json(catalog_json)
    sample = sample_subset(G, p, seed, trial)
    scores = [len(sample & a) for a in catalog.sets]
    s0 = max(scores)
    ref_idx = max(range(len(catalog.sets)), key=lambda i: (scores[i], -i))
    ref = catalog.sets[ref_idx]
    others = [a for i, a in enumerate(catalog.sets) if i != ref_idx]
    from .certify import decide_reference_uniqueness

    try:
        good, witness = decide_reference_uniqueness(sample, ref, others, node_cap=cap)
        decision = "true" if good else "false"
        solver_max = s0 if witness is None else len(witness)
    except BudgetExceeded:
        decision, solver_max = "indeterminate", s0
    return TrialRecord(
        n=n_param, C=C, p=p, trial=trial, decision=decision,
        sample_size=len(sample), s0=s0, solver_max=solver_max,
        witness_found=None, safe_count=None,
    )


def _census_trial(args) -> TrialRecord:
    literal, n_param, C, p, trial, seed = args
    G = parse_group_literal(literal)
    two_n = G.n
    n = two_n // 2
    mask = sample_mask(two_n, p, seed, trial)
    elems = np.flatnonzero(mask)
    w_elems = elems[elems % 2 == 1]
    candidates = np.arange(2, n, 2, dtype=np.int64)
    safe = safe_mask_z2n(two_n, w_elems.astype(np.int64), candidates)
    safe_count = int(safe.sum())
    in_sample = mask[candidates]
    safe_in_sample = int((safe & in_sample).sum())
    return TrialRecord(
        n=n_param, C=C, p=p, trial=trial, decision="",
        sample_size=int(mask.sum()), s0=int(w_elems.size),
        solver_max=safe_in_sample, witness_found=None, safe_count=safe_count,
    )


def interval_family(n: int, m: float) -> Tuple[Subset, Subset, Subset]:
    """The sum-free interval A with side intervals A' and A'' in Z_n.

    A = {l..r} with l = ceil(n/3) + ceil(4m) + 1, r = floor(2n/3) + floor(2m);
    A' = {l'..l-1}, l' = ceil(n/3) + ceil(m) + 1; A'' = {r'..r},
    r' = floor(2n/3) - ceil(m).
    """
    if m <= 0:
        raise ValueError("m must be positive")
    G = GroupSpec((n,))
    l = math.ceil(n / 3) + math.ceil(4 * m) + 1
    r = math.floor(2 * n / 3) + math.floor(2 * m)
    lp = math.ceil(n / 3) + math.ceil(m) + 1
    rp = math.floor(2 * n / 3) - math.ceil(m)
    if not (lp < l <= r and rp <= r):
        raise ValueError("degenerate interval family for these parameters")
    A = Subset.from_elements(G, range(l, r + 1))
    A1 = Subset.from_elements(G, range(lp, l))
    A2 = Subset.from_elements(G, range(rp, r + 1))
    from .gadgets import is_sum_free

    if not is_sum_free(A):
        raise AssertionError("interval A is not sum-free")
    return A, A1, A2


def _witness_zn_trial(args) -> TrialRecord:
    literal, n_param, C, p, trial, seed, catalog_json = args
    G = parse_group_literal(literal)
    n = G.n
    catalog = SFCatalog.from_json(catalog_json)
    m = min(n, p**-2) / 100.0
    A, A1, _ = interval_family(n, m)
    sample = sample_subset(G, p, seed, trial)
    best = max(len(member & sample) for member in catalog.sets)
    # Every unit dilation of the interval scaffold is an equally valid
    # sum-free construction; work in the coordinates of the dilation that
    # captures the most sample mass, then the witness is its image.
    elems = sample.to_array().astype(np.int64)
    a_mask = np.zeros(n, dtype=bool)
    a_mask[np.array(A.elements(), dtype=np.int64)] = True
    best_lam, best_count = 1, -1
    for lam in range(1, n):
        if math.gcd(lam, n) != 1:
            continue
        inv = pow(lam, -1, n)
        cnt = int(a_mask[(elems * inv) % n].sum()) if elems.size else 0
        if cnt > best_count:
            best_count, best_lam = cnt, lam
    inv = pow(best_lam, -1, n)
    dilated = Subset.from_elements(G, ((elems * inv) % n).tolist())
    B = augment_with_safe(A & dilated, A1 & dilated, A)
    found = len(B) > best
    return TrialRecord(
        n=n_param, C=C, p=p, trial=trial, decision="",
        sample_size=len(sample), s0=len(A & dilated), solver_max=len(B),
        witness_found=found, safe_count=None,
    )


_PARITY16 = None


def _parity_table() -> np.ndarray:
    global _PARITY16
    if _PARITY16 is None:
        t = np.zeros(1 << 16, dtype=np.uint8)
        for b in range(16):
            t ^= ((np.arange(1 << 16) >> b) & 1).astype(np.uint8)
        _PARITY16 = t
    return _PARITY16


def _witness_z2k_trial(args) -> TrialRecord:
    literal, n_param, C, p, trial, seed = args
    G = parse_group_literal(literal)
    order = G.n
    k = order.bit_length() - 1
    assert order == 1 << k
    sample = sample_subset(G, p, seed, trial)
    if k > 16:
        raise ValueError("orders beyond 2^16 are not supported")
    # |O(c) ∩ sample| for every nonzero functional c via parity sums.
    elems = sample.to_array().astype(np.int64)
    par = _parity_table()
    cs = np.arange(1, order, dtype=np.int64)
    counts = np.zeros(order - 1, dtype=np.int64)
    for e in elems:
        counts += par[cs & int(e)].astype(np.int64)
    best = int(counts.max()) if elems.size else 0
    # Base the construction on the extremal set richest in the sample: the
    # reference is O(a*), the donor pool a maximum sum-free subset of E(a*).
    a_star = int(cs[int(np.argmax(counts))]) if elems.size else 1
    b = 2 if a_star == 1 else 1
    A = Subset.from_elements(
        G, [e for e in range(order) if par[e & a_star]]
    )
    Eprime = Subset.from_elements(
        G, [e for e in range(order) if not par[e & a_star] and par[e & b]]
    )
    B = augment_with_safe(A & sample, Eprime & sample, A)
    found = len(B) > best
    return TrialRecord(
        n=n_param, C=C, p=p, trial=trial, decision="",
        sample_size=len(sample), s0=len(A & sample), solver_max=len(B),
        witness_found=found, safe_count=None,
    )


# --- sweep drivers ---------------------------------------------------------


def _grid(cfg: ExperimentConfig) -> List[Tuple[str, int, Optional[float], float]]:
    cells = []
    for literal in cfg.groups:
        G = parse_group_literal(literal)
        n_param = threshold_parameter(G)
        for C in cfg.c_grid:
            cells.append((literal, n_param, C, p_from_C(C, n_param)))
        for p in cfg.p_grid:
            cells.append((literal, n_param, None, p))
    return cells


def _run_tasks(worker, tasks, threads: int):
    if threads <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, tasks, chunksize=1))


def run_sweep(cfg: ExperimentConfig, threads: int = 1) -> Tuple[List[TrialRecord], SweepSummary]:
    """Run every (group, C/p, trial) cell; deterministic given the seed."""
    import time

    start = time.perf_counter()
    cells = _grid(cfg)
    tasks = []
    worker = None
    if cfg.kind == "sharp":
        worker = _sharp_trial
        for literal, n_param, C, p in cells:
            for t in range(cfg.trials):
                tasks.append((literal, n_param, C, p, t, cfg.master_seed, cfg.node_cap))
    elif cfg.kind == "good":
        worker = _good_trial
        for literal, n_param, C, p in cells:
            G = parse_group_literal(literal)
            catalog_json = enumerate_sf_type1(G).to_json()
            for t in range(cfg.trials):
                tasks.append(
                    (literal, n_param, C, p, t, cfg.master_seed, cfg.node_cap, catalog_json)
                )
    elif cfg.kind == "census":
        worker = _census_trial
        for literal, n_param, C, p in cells:
            for t in range(cfg.trials):
                tasks.append((literal, n_param, C, p, t, cfg.master_seed))
    elif cfg.kind == "witness":
        for literal, n_param, C, p in cells:
            G = parse_group_literal(literal)
            if set(G.orders) == {2}:
                for t in range(cfg.trials):
                    tasks.append(("z2k", (literal, n_param, C, p, t, cfg.master_seed)))
            elif len(G.orders) == 1 and G.n % 3 == 0:
                catalog_json = dilation_catalog_z3q(G).to_json()
                for t in range(cfg.trials):
                    tasks.append(
                        ("zn", (literal, n_param, C, p, t, cfg.master_seed, catalog_json))
                    )
            else:
                raise ValueError(
                    f"witness experiment unsupported for group {literal}"
                )
        records = _run_tasks(_witness_dispatch, tasks, threads)
        records.sort(key=lambda r: (r.n, r.C if r.C is not None else r.p, r.trial))
        summary = _summarize(cfg, records, time.perf_counter() - start)
        return records, summary
    else:  # pragma: no cover
        raise AssertionError

    records = _run_tasks(worker, tasks, threads)
    records.sort(key=lambda r: (r.n, r.C if r.C is not None else r.p, r.trial))
    summary = _summarize(cfg, records, time.perf_counter() - start)
    return records, summary


def _witness_dispatch(tagged):
    tag, args = tagged
    if tag == "z2k":
        return _witness_z2k_trial(args)
    return _witness_zn_trial(args)


def _summarize(cfg: ExperimentConfig, records: Sequence[TrialRecord], elapsed: float) -> SweepSummary:
    summary = SweepSummary(kind=cfg.kind, elapsed_seconds=elapsed)
    groups: Dict[Tuple, List[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.C, r.p), []).append(r)
    total = len(records)
    indet = sum(1 for r in records if r.decision == "indeterminate")
    for (n, C, p), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][2])):
        cell: Dict = {"n": n, "C": C, "p": p, "trials": len(rs)}
        if cfg.kind in ("sharp", "good"):
            decided = [r for r in rs if r.decision in ("true", "false")]
            succ = sum(1 for r in decided if r.decision == "true")
            est, lo, hi = wilson_interval(succ, len(decided))
            cell.update(
                estimate=est, wilson_lo=lo, wilson_hi=hi,
                indeterminate=len(rs) - len(decided),
            )
        elif cfg.kind == "witness":
            succ = sum(1 for r in rs if r.witness_found)
            est, lo, hi = wilson_interval(succ, len(rs))
            cell.update(estimate=est, wilson_lo=lo, wilson_hi=hi)
        elif cfg.kind == "census":
            counts = [r.safe_count for r in rs]
            mean = sum(counts) / len(counts)
            var = sum((c - mean) ** 2 for c in counts) / max(1, len(counts) - 1)
            half = 1.959963984540054 * math.sqrt(var / len(counts))
            in_sample = [r.solver_max for r in rs]
            cell.update(
                mean_safe=mean, ci_half_width=half,
                mean_safe_in_sample=sum(in_sample) / len(in_sample),
            )
        summary.cells.append(cell)
    summary.indeterminate_rate = indet / total if total else 0.0
    return summary


def records_to_csv(records: Sequence[TrialRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def run_sharp_sweep(cfg: ExperimentConfig, threads: int = 1):
    if cfg.kind != "sharp":
        raise ValueError("config kind must be 'sharp'")
    return run_sweep(cfg, threads)


def run_goodness_sweep(cfg: ExperimentConfig, threads: int = 1):
    if cfg.kind != "good":
        raise ValueError("config kind must be 'good'")
    return run_sweep(cfg, threads)


def run_counterexample_witness(cfg: ExperimentConfig, threads: int = 1):
    if cfg.kind != "witness":
        raise ValueError("config kind must be 'witness'")
    return run_sweep(cfg, threads)


def run_safe_census(cfg: ExperimentConfig, threads: int = 1):
    if cfg.kind != "census":
        raise ValueError("config kind must be 'census'")
    return run_sweep(cfg, threads)
