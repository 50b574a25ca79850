"""Command-line front door: group queries, solving, sweeps, verification.

Data goes to standard output or the requested files; diagnostics go to
standard error.  Exit status is nonzero when a check fails, a sweep
exceeds the 1% indeterminate budget, or input cannot be parsed.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import click

from .bounds import SetFamily, exact_avoidance_probability, fkg_lower, janson_stats
from .experiments import (
    ExperimentConfig,
    SweepSummary,
    TrialRecord,
    interval_family,
    records_to_csv,
    run_sweep,
    sample_subset,
    wilson_interval,
)
from .extremal import enumerate_sf_bruteforce, enumerate_sf_type1
from .gadgets import is_safe, is_sum_free, link_sets
from .groups import (
    GroupSpec,
    classify,
    enumerate_abelian_groups,
    mu,
    parse_group_literal,
)
from .solver import BudgetExceeded, is_sum_free_good, max_sum_free
from .subsets import Subset

BRUTE_FORCE_ORDER_CAP = 30


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_group(literal: str) -> GroupSpec:
    try:
        return parse_group_literal(literal)
    except (ValueError, KeyError) as exc:
        _fail(f"cannot parse group literal {literal!r}: {exc}")
        raise  # unreachable


def _parse_elements(G: GroupSpec, text: str) -> Subset:
    try:
        elems = [int(tok) for tok in text.split(",") if tok.strip() != ""]
        return Subset.from_elements(G, elems)
    except (ValueError, IndexError) as exc:
        _fail(f"cannot parse element list {text!r}: {exc}")
        raise  # unreachable


def _emit(payload: Dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main() -> None:
    """Sum-free subsets of finite Abelian groups: exact search and sweeps."""


@main.command("classify")
@click.option("--group", "literal", required=True, help="Group literal, e.g. Z10 or Z2xZ500.")
@click.option("--out", default=None, help="Write JSON here instead of stdout.")
def cmd_classify(literal: str, out: Optional[str]) -> None:
    """Type tag, mu(G) as an exact fraction, and the extremal size."""
    G = _load_group(literal)
    t = classify(G)
    m = mu(G)
    _emit(
        {
            "group": G.literal(),
            "order": G.n,
            "type": str(t),
            "mu": f"{m.numerator}/{m.denominator}",
            "extremal_size": int(m * G.n),
        },
        out,
    )


@main.command("mu")
@click.option("--group", "literal", required=True)
@click.option("--out", default=None)
def cmd_mu(literal: str, out: Optional[str]) -> None:
    """The sum-free density mu(G) and the extremal size mu(G)·|G|."""
    G = _load_group(literal)
    m = mu(G)
    _emit(
        {
            "group": G.literal(),
            "mu": f"{m.numerator}/{m.denominator}",
            "extremal_size": int(m * G.n),
        },
        out,
    )


@main.command("sf-enum")
@click.option("--group", "literal", required=True)
@click.option("--out", default=None)
def cmd_sf_enum(literal: str, out: Optional[str]) -> None:
    """Enumerate the maximum-size sum-free sets (catalog JSON)."""
    G = _load_group(literal)
    t = classify(G)
    if t.tag == "I":
        catalog = enumerate_sf_type1(G)
    elif G.n <= BRUTE_FORCE_ORDER_CAP:
        catalog = enumerate_sf_bruteforce(G)
    else:
        _fail(
            f"group {G.literal()} is type {t}; exhaustive enumeration is only "
            f"available up to order {BRUTE_FORCE_ORDER_CAP}"
        )
    payload = json.loads(catalog.to_json())
    payload["count"] = len(catalog)
    _emit(payload, out)


@main.command("solve")
@click.option("--group", "literal", required=True)
@click.option("--set", "elements", default=None, help="Comma-separated elements; default: the full group.")
@click.option("--cap", default=10**6, show_default=True, help="Search node cap.")
@click.option("--enumerate", "enum_all", is_flag=True, help="Enumerate all optima.")
@click.option("--out", default=None)
def cmd_solve(literal: str, elements: Optional[str], cap: int, enum_all: bool, out: Optional[str]) -> None:
    """Exact maximum sum-free subset of a given set."""
    G = _load_group(literal)
    B = _parse_elements(G, elements) if elements is not None else Subset.full(G)
    result = max_sum_free(B, enumerate_optima=enum_all, cap=cap)
    payload: Dict = {
        "group": G.literal(),
        "input_size": len(B),
        "max_size": result.max_size,
        "witness": result.witness.elements(),
        "nodes_explored": result.nodes_explored,
        "enumeration_complete": result.enumeration_complete,
    }
    if enum_all and result.optima is not None:
        payload["optima"] = [s.elements() for s in result.optima]
    _emit(payload, out)


@main.command("good")
@click.option("--group", "literal", required=True)
@click.option("--set", "elements", required=True, help="Comma-separated elements of the sample.")
@click.option("--cap", default=10**6, show_default=True)
@click.option("--out", default=None)
def cmd_good(literal: str, elements: str, cap: int, out: Optional[str]) -> None:
    """Whether every maximum sum-free subset lies inside an extremal set."""
    G = _load_group(literal)
    t = classify(G)
    if t.tag != "I":
        _fail(f"goodness needs a type I group; {G.literal()} is type {t}")
    B = _parse_elements(G, elements)
    catalog = enumerate_sf_type1(G)
    try:
        verdict = is_sum_free_good(B, catalog, cap=cap)
    except BudgetExceeded:
        _emit({"group": G.literal(), "decision": "indeterminate"}, out)
        sys.exit(2)
    payload: Dict = {
        "group": G.literal(),
        "decision": "true" if verdict.good else "false",
        "max_size": verdict.max_size,
    }
    if verdict.counterexample is not None:
        payload["counterexample"] = verdict.counterexample.elements()
    _emit(payload, out)


@main.command("bounds")
@click.option("--group", "literal", required=True, help="Cyclic group of even order.")
@click.option("--p", "prob", type=float, required=True)
@click.option("--element", "x", type=int, default=None, help="Candidate element; default 2.")
@click.option("--out", default=None)
def cmd_bounds(literal: str, prob: float, x: Optional[int], out: Optional[str]) -> None:
    """FKG / Janson bounds for one element staying safe against the odd part."""
    G = _load_group(literal)
    if len(G.orders) != 1 or G.n % 2:
        _fail("bounds are computed against the odd part of a cyclic even-order group")
    if x is None:
        x = 2
    odds = Subset.from_elements(G, range(1, G.n, 2))
    blockers = link_sets(x, odds).all_blockers()
    F = SetFamily.from_lists(G.n, blockers)
    js = janson_stats(F, prob)
    payload: Dict = {
        "group": G.literal(),
        "element": x,
        "p": prob,
        "blocker_count": len(blockers),
        "fkg_lower": fkg_lower(F, prob),
        "janson_mu": js.mu,
        "janson_delta": js.delta,
        "janson_upper": js.bound_main,
    }
    try:
        payload["exact"] = exact_avoidance_probability(F, prob)
    except ValueError:
        payload["exact"] = None
    _emit(payload, out)


# --- sweep / plot ----------------------------------------------------------


def _svg_color(i: int) -> str:
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    return palette[i % len(palette)]


def render_sweep_svg(cells: Sequence[Dict]) -> str:
    """Self-contained SVG: one estimate-vs-C polyline per n, with CI whiskers."""
    pts = [c for c in cells if c.get("estimate") is not None]
    width, height = 640, 440
    ml, mr, mt, mb = 60, 20, 20, 50
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if not pts:
        parts.append(f'<text x="{width/2}" y="{height/2}">no data</text></svg>')
        return "\n".join(parts)
    xs = [c["C"] if c.get("C") is not None else c["p"] for c in pts]
    x_label = "C" if pts[0].get("C") is not None else "p"
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pw, ph = width - ml - mr, height - mt - mb

    def X(v: float) -> float:
        return ml + (v - x0) / (x1 - x0) * pw

    def Y(v: float) -> float:
        return mt + (1.0 - v) * ph

    parts.append(
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = Y(frac)
        parts.append(f'<line x1="{ml-4}" y1="{y:.1f}" x2="{ml}" y2="{y:.1f}" stroke="#444"/>')
        parts.append(f'<text x="{ml-8}" y="{y+4:.1f}" text-anchor="end">{frac:g}</text>')
    for i in range(5):
        v = x0 + (x1 - x0) * i / 4
        xpix = X(v)
        parts.append(
            f'<line x1="{xpix:.1f}" y1="{mt+ph}" x2="{xpix:.1f}" y2="{mt+ph+4}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{xpix:.1f}" y="{mt+ph+18}" text-anchor="middle">{v:.3g}</text>'
        )
    parts.append(
        f'<text x="{ml+pw/2}" y="{height-12}" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{mt+ph/2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt+ph/2})">estimate</text>'
    )
    by_n: Dict[int, List[Dict]] = {}
    for c in pts:
        by_n.setdefault(c["n"], []).append(c)
    for i, (n, group) in enumerate(sorted(by_n.items())):
        color = _svg_color(i)
        group = sorted(group, key=lambda c: c["C"] if c.get("C") is not None else c["p"])
        coords = []
        for c in group:
            xv = c["C"] if c.get("C") is not None else c["p"]
            xpix, ypix = X(xv), Y(c["estimate"])
            coords.append(f"{xpix:.1f},{ypix:.1f}")
            lo, hi = c.get("wilson_lo"), c.get("wilson_hi")
            if lo is not None and hi is not None:
                parts.append(
                    f'<line x1="{xpix:.1f}" y1="{Y(lo):.1f}" x2="{xpix:.1f}" '
                    f'y2="{Y(hi):.1f}" stroke="{color}" stroke-width="1"/>'
                )
                for v in (lo, hi):
                    parts.append(
                        f'<line x1="{xpix-3:.1f}" y1="{Y(v):.1f}" x2="{xpix+3:.1f}" '
                        f'y2="{Y(v):.1f}" stroke="{color}" stroke-width="1"/>'
                    )
            parts.append(f'<circle cx="{xpix:.1f}" cy="{ypix:.1f}" r="3" fill="{color}"/>')
        if len(coords) > 1:
            parts.append(
                f'<polyline points="{" ".join(coords)}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        parts.append(
            f'<text x="{ml+pw-8}" y="{mt+16+14*i}" text-anchor="end" '
            f'fill="{color}">n={n}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def _effective_seed(cfg: ExperimentConfig, seed_flag: Optional[int]) -> int:
    env = os.environ.get("SUMFREE_SEED")
    if env is not None:
        return int(env)
    if seed_flag is not None:
        return seed_flag
    return cfg.master_seed


@main.command("sweep")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_csv", default=None, help="CSV of trial records.")
@click.option("--svg", "out_svg", default=None, help="Optional SVG line chart.")
@click.option("--trials", default=None, type=int, help="Override the config trial count.")
@click.option("--seed", default=None, type=int, help="Override the config seed (SUMFREE_SEED wins).")
@click.option("--cap", default=None, type=int, help="Override the solver node cap.")
@click.option("--threads", default=None, type=int, help="Worker processes; default: all cores.")
def cmd_sweep(
    config_path: str,
    out_csv: Optional[str],
    out_svg: Optional[str],
    trials: Optional[int],
    seed: Optional[int],
    cap: Optional[int],
    threads: Optional[int],
) -> None:
    """Run a Monte Carlo sweep from a JSON config; CSV + JSON summary out."""
    with open(config_path) as fh:
        try:
            cfg = ExperimentConfig.from_json(fh.read())
        except (ValueError, KeyError) as exc:
            _fail(f"bad config: {exc}")
    cfg = ExperimentConfig(
        kind=cfg.kind,
        groups=cfg.groups,
        c_grid=cfg.c_grid,
        p_grid=cfg.p_grid,
        trials=trials if trials is not None else cfg.trials,
        master_seed=_effective_seed(cfg, seed),
        node_cap=cap if cap is not None else cfg.node_cap,
    )
    nthreads = threads if threads is not None else (os.cpu_count() or 1)
    click.echo(
        f"sweep kind={cfg.kind} groups={','.join(cfg.groups)} trials={cfg.trials} "
        f"seed={cfg.master_seed} threads={nthreads}",
        err=True,
    )
    records, summary = run_sweep(cfg, threads=nthreads)
    csv_text = records_to_csv(records)
    if out_csv:
        with open(out_csv, "w") as fh:
            fh.write(csv_text)
        summary_path = os.path.splitext(out_csv)[0] + ".summary.json"
        with open(summary_path, "w") as fh:
            fh.write(summary.to_json() + "\n")
        click.echo(f"wrote {out_csv} and {summary_path}", err=True)
    else:
        click.echo(csv_text, nl=False)
    if out_svg:
        with open(out_svg, "w") as fh:
            fh.write(render_sweep_svg(summary.cells) + "\n")
        click.echo(f"wrote {out_svg}", err=True)
    click.echo(summary.to_json(), err=True)
    if summary.indeterminate_rate > 0.01:
        click.echo(
            f"FAILED: indeterminate rate {summary.indeterminate_rate:.3f} exceeds 1%",
            err=True,
        )
        sys.exit(1)


@main.command("plot")
@click.option("--out", "csv_path", required=True, type=click.Path(exists=True), help="Sweep CSV to plot.")
@click.option("--svg", "svg_path", required=True, help="SVG output path.")
def cmd_plot(csv_path: str, svg_path: str) -> None:
    """Render a sweep CSV as an estimate-vs-C chart with CI whiskers."""
    cells: Dict[Tuple, Dict] = {}
    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
        col = {name: i for i, name in enumerate(header)}
        for line in fh:
            row = line.rstrip("\n").split(",")
            if len(row) < len(header):
                continue
            n = int(row[col["n"]])
            C = float(row[col["C"]]) if row[col["C"]] else None
            p = float(row[col["p"]])
            key = (n, C, p)
            cell = cells.setdefault(key, {"succ": 0, "tot": 0})
            decision = row[col["decision"]]
            witness = row[col["witness_found"]]
            if decision in ("true", "false"):
                cell["tot"] += 1
                cell["succ"] += decision == "true"
            elif witness in ("true", "false"):
                cell["tot"] += 1
                cell["succ"] += witness == "true"
    out_cells = []
    for (n, C, p), cell in sorted(cells.items(), key=lambda kv: (kv[0][0], kv[0][2])):
        est, lo, hi = wilson_interval(cell["succ"], cell["tot"])
        out_cells.append(
            {"n": n, "C": C, "p": p, "estimate": est, "wilson_lo": lo, "wilson_hi": hi}
        )
    with open(svg_path, "w") as fh:
        fh.write(render_sweep_svg(out_cells) + "\n")
    click.echo(f"wrote {svg_path}", err=True)


# --- verify ----------------------------------------------------------------


def _verify_small_groups() -> List[Tuple[str, bool, str]]:
    checks = []
    for order in range(2, 25):
        for G in enumerate_abelian_groups(order):
            m = mu(G)
            target = int(m * G.n)
            ok_size = m * G.n == target
            brute = enumerate_sf_bruteforce(G)
            brute_max = max((len(s) for s in brute.sets), default=0)
            ok = ok_size and brute_max == target
            detail = f"mu·n={m * G.n}, brute max={brute_max}"
            if classify(G).tag == "I":
                cat = enumerate_sf_type1(G)
                ok_cat = {s.bits for s in cat.sets} == {s.bits for s in brute.sets}
                ok = ok and ok_cat
                detail += f", catalog match={ok_cat}"
            checks.append((f"small-group {G.literal()}", ok, detail))
    return checks


def _verify_claims() -> List[Tuple[str, bool, str]]:
    checks = []
    for n in (60, 100, 150, 301):
        for m in (1.0, 2.0, n / 200.0):
            try:
                A, A1, A2 = interval_family(n, m)
            except ValueError:
                continue
            G = A.group
            ok = is_sum_free(A)
            bad = 0
            universe = A.bits | A1.bits
            from .groups import element_add

            members = [e for e in range(n) if universe >> e & 1]
            for i, xx in enumerate(members):
                for yy in members[i:]:
                    z = element_add(G, xx, yy)
                    if universe >> z & 1 and z != xx and z != yy:
                        if not (xx in A2 and yy in A2 and z in A1):
                            bad += 1
            ok = ok and bad == 0
            checks.append(
                (f"interval-family n={n} m={m:g}", ok, f"violations={bad}")
            )
    # safe-element test agrees with direct sum-freeness of W ∪ {x}.
    G = GroupSpec((30,))
    odds = Subset.from_elements(G, range(1, 30, 2))
    mismatches = 0
    for t in range(40):
        W = sample_subset(G, 0.3, 7, t) & odds
        for x in range(2, 30, 2):  # 0 is never a candidate: 0 + w = w always
            direct = is_sum_free(W.add(x)) if x not in W else None
            if direct is None:
                continue
            if is_safe(x, W, odds) != direct:
                mismatches += 1
    checks.append(("safe-vs-direct Z30", mismatches == 0, f"mismatches={mismatches}"))
    return checks


def _verify_bounds() -> List[Tuple[str, bool, str]]:
    import random

    checks = []
    rng = random.Random(11)
    worst = 0.0
    bad = 0
    for case in range(60):
        u = rng.randint(6, 12)
        members = []
        for _ in range(rng.randint(2, 5)):
            size = rng.randint(2, 4)
            members.append(rng.sample(range(u), size))
        F = SetFamily.from_lists(u, members)
        p = rng.choice((0.1, 0.3, 0.5, 0.7))
        exact = exact_avoidance_probability(F, p)
        lo = fkg_lower(F, p)
        hi = janson_stats(F, p).bound_main
        eps = 1e-9
        if not (lo - eps <= exact <= hi + eps):
            bad += 1
            worst = max(worst, lo - exact, exact - hi)
    checks.append(
        ("fkg/janson sandwich (60 random families)", bad == 0, f"violations={bad} worst={worst:.2e}")
    )
    return checks


@main.command("verify")
@click.argument("scope", type=click.Choice(["small-groups", "claims", "bounds", "all"]))
@click.option("--out", default=None)
def cmd_verify(scope: str, out: Optional[str]) -> None:
    """Run an invariant suite; nonzero exit on any failure."""
    suites = {
        "small-groups": _verify_small_groups,
        "claims": _verify_claims,
        "bounds": _verify_bounds,
    }
    names = list(suites) if scope == "all" else [scope]
    report = []
    failed = 0
    for name in names:
        for check, ok, detail in suites[name]():
            report.append({"suite": name, "check": check, "passed": ok, "detail": detail})
            if not ok:
                failed += 1
                click.echo(f"FAIL {check}: {detail}", err=True)
    _emit({"scope": scope, "checks": report, "failed": failed}, out)
    if failed:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
