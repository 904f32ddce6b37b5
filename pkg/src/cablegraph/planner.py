"""Greedy disentangling loop, rollout traces, and benchmark statistics.

One rollout starts with a straightening pull on the two selected
opposing endpoints, then repeats: extract the rightmost cable if it is
semi-disentangled, otherwise pull an under-segment out of the first
non-trivial undercrossing traced from the rightmost endpoint.  It stops
on an empty workspace, when the disentangling-action budget (Node
Deletions plus Cable Extractions, attempts included) would be exceeded,
or when no target exists anywhere, which is surfaced as a distinct
Stuck outcome rather than looped over.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Union

from .analysis import find_node_deletion_target, is_semi_disentangled, select_endpoints
from .diagram import Diagram, potential, validate
from .errors import InvalidDiagramError, StuckError
from .moves import (
    Action,
    ActionKind,
    ExtractionTarget,
    NoiseConfig,
    apply_action,
    apply_noisy,
)

DEFAULT_TIER_BUDGETS = {1: 20, 2: 30, 3: 30}
FALLBACK_BUDGET = 30


@dataclass(frozen=True)
class Budget:
    """Cap on disentangling actions (Node Deletions + Cable Extractions)."""

    max_disentangling_actions: int

    def __post_init__(self):
        if self.max_disentangling_actions < 0:
            raise ValueError("budget must be non-negative")


class Outcome(Enum):
    SUCCESS = "Success"
    BUDGET_EXCEEDED = "BudgetExceeded"
    STUCK = "Stuck"


@dataclass(frozen=True)
class StepRecord:
    index: int
    action: Action
    potential_before: int
    potential_after: int
    effective: bool  # False when noise turned the action into a no-op


@dataclass(frozen=True)
class RolloutTrace:
    actions: tuple[StepRecord, ...]
    outcome: Outcome
    disentangling_actions: int
    recovery_actions: int
    total_actions: int
    final: Diagram


def plan_step(diagram: Diagram, did_initial_reidemeister: bool) -> Action:
    """Next action for the current configuration.

    Order of the case analysis: empty workspace is Done; the opening
    straightening pull happens exactly once; a semi-disentangled rightmost
    cable is extracted with a soft pin on the selected left endpoint;
    otherwise the first non-trivial undercrossing is pulled out.  Raises
    :class:`StuckError` when the last case finds no target on any cable.
    """
    if not diagram.cable_visits:
        return Action(ActionKind.DONE, None, 0)
    sel = select_endpoints(diagram)
    if not did_initial_reidemeister:
        return Action(ActionKind.REIDEMEISTER, sel, 1)
    if is_semi_disentangled(diagram, sel.v_r.cable):
        return Action(
            ActionKind.CABLE_EXTRACTION,
            ExtractionTarget(cable=sel.v_r.cable, pin=sel.v_l),
            0,
        )
    target = find_node_deletion_target(diagram)
    if target is None:
        raise StuckError("no non-trivial undercrossing reachable from any endpoint")
    return Action(ActionKind.NODE_DELETION, target, 1)


def run(
    diagram: Diagram,
    budget: Union[Budget, int, None] = None,
    noise: Optional[NoiseConfig] = None,
    validate_steps: bool = False,
) -> RolloutTrace:
    """Roll the planning loop forward until Done, Stuck, or budget out.

    Noise-free runs are deterministic: the same diagram yields the same
    trace byte for byte.  With ``validate_steps`` every intermediate
    diagram is re-validated and a violation raises immediately.
    """
    if budget is None:
        budget = Budget(FALLBACK_BUDGET)
    elif isinstance(budget, int):
        budget = Budget(budget)

    rng = random.Random(noise.seed) if noise is not None else None
    records: list[StepRecord] = []
    disentangling = 0
    recovery = 0
    did_reidemeister = False
    prev_action: Optional[Action] = None
    prev_effective = True
    current = diagram

    while True:
        try:
            action = plan_step(current, did_reidemeister)
        except StuckError:
            outcome = Outcome.STUCK
            break
        if action.kind is ActionKind.DONE:
            outcome = Outcome.SUCCESS
            break
        is_disentangling = action.kind in (ActionKind.NODE_DELETION, ActionKind.CABLE_EXTRACTION)
        if is_disentangling and disentangling + 1 > budget.max_disentangling_actions:
            outcome = Outcome.BUDGET_EXCEEDED
            break

        before = potential(current)
        if noise is not None:
            nxt = apply_noisy(current, action, noise, rng)
        else:
            nxt = apply_action(current, action)
        effective = nxt != current

        if is_disentangling:
            disentangling += 1
        if prev_action == action and not prev_effective:
            recovery += 1
        records.append(StepRecord(len(records) + 1, action, before, potential(nxt), effective))

        if validate_steps:
            report = validate(nxt)
            if not report.ok:
                raise InvalidDiagramError(report)

        if action.kind is ActionKind.REIDEMEISTER:
            did_reidemeister = True
        prev_action, prev_effective = action, effective
        current = nxt

    return RolloutTrace(
        actions=tuple(records),
        outcome=outcome,
        disentangling_actions=disentangling,
        recovery_actions=recovery,
        total_actions=len(records),
        final=current,
    )


def _render_target(action: Action) -> str:
    t = action.target
    if action.kind is ActionKind.REIDEMEISTER:
        return f"vr={t.v_r},vl={t.v_l}"
    if action.kind is ActionKind.NODE_DELETION:
        return (
            f"crossing={t.crossing},hold={t.hold.cable}:{t.hold.visit},"
            f"pull={t.pull.cable}:{t.pull.visit}"
        )
    if action.kind is ActionKind.CABLE_EXTRACTION:
        return f"cable={t.cable},pin={t.pin}"
    return "-"


def format_trace(trace: RolloutTrace) -> str:
    """Line-delimited step records with a stable field order."""
    lines = [
        f"step {r.index} | {r.action.kind.value} | targets={_render_target(r.action)} "
        f"| potential {r.potential_before}->{r.potential_after}"
        for r in trace.actions
    ]
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Benchmarks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TierStats:
    tier: int
    runs: int
    successes: int
    median_disentangling: Optional[float]
    median_recovery: Optional[float]
    median_total: Optional[float]
    failures: dict[str, int]

    @property
    def success_rate(self) -> str:
        return f"{self.successes}/{self.runs}"


FAILURE_LABELS = ("Stuck", "BudgetExceeded", "NoiseStall")


@dataclass(frozen=True)
class StatsTable:
    rows: tuple[TierStats, ...]

    def to_text(self) -> str:
        headers = [
            "Tier",
            "Success Rate",
            "Disentangling Actions",
            "Recovery Actions",
            "Total Actions",
            "Failure Modes",
        ]
        body = []
        for r in self.rows:
            body.append(
                [
                    str(r.tier),
                    r.success_rate,
                    _fmt_median(r.median_disentangling),
                    _fmt_median(r.median_recovery),
                    _fmt_median(r.median_total),
                    ", ".join(f"{k} ({r.failures.get(k, 0)})" for k in FAILURE_LABELS),
                ]
            )
        widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
                  for i, h in enumerate(headers)]
        lines = [" | ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for row in body:
            lines.append(" | ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        return "\n".join(lines) + "\n"

    def to_delimited(self) -> str:
        """Tab-separated report; column order is a stable contract."""
        cols = [
            "tier",
            "runs",
            "successes",
            "median_disentangling",
            "median_recovery",
            "median_total",
            "stuck",
            "budget_exceeded",
            "noise_stall",
        ]
        lines = ["\t".join(cols)]
        for r in self.rows:
            lines.append(
                "\t".join(
                    [
                        str(r.tier),
                        str(r.runs),
                        str(r.successes),
                        _fmt_median(r.median_disentangling),
                        _fmt_median(r.median_recovery),
                        _fmt_median(r.median_total),
                        str(r.failures.get("Stuck", 0)),
                        str(r.failures.get("BudgetExceeded", 0)),
                        str(r.failures.get("NoiseStall", 0)),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def _fmt_median(value: Optional[float]) -> str:
    if value is None:
        return "-"
    if float(value).is_integer():
        return str(int(value))
    return f"{value:g}"


def bench(
    entries: Sequence[tuple[str, int, Diagram]],
    budgets: Optional[dict[int, int]] = None,
    repetitions: int = 1,
    noise: Optional[NoiseConfig] = None,
) -> StatsTable:
    """Run every (name, tier, diagram) entry ``repetitions`` times and
    aggregate per tier: success rate, medians over successful rollouts,
    and failure tallies.  Noisy repetitions get distinct derived seeds."""
    budgets = dict(DEFAULT_TIER_BUDGETS if budgets is None else budgets)
    per_tier: dict[int, list[RolloutTrace]] = {}
    for idx, (name, tier, diagram) in enumerate(entries):
        budget = Budget(budgets.get(tier, FALLBACK_BUDGET))
        for rep in range(repetitions):
            cfg = None
            if noise is not None:
                cfg = replace(noise, seed=noise.seed + 1_000_003 * idx + rep)
            trace = run(diagram, budget, cfg)
            per_tier.setdefault(tier, []).append(trace)

    rows = []
    for tier in sorted(per_tier):
        traces = per_tier[tier]
        wins = [t for t in traces if t.outcome is Outcome.SUCCESS]
        failures = {label: 0 for label in FAILURE_LABELS}
        for t in traces:
            if t.outcome is Outcome.BUDGET_EXCEEDED:
                failures["BudgetExceeded"] += 1
            elif t.outcome is Outcome.STUCK:
                # A dead end that only noise can produce is a stall, not a
                # model gap.
                failures["NoiseStall" if noise is not None else "Stuck"] += 1
        rows.append(
            TierStats(
                tier=tier,
                runs=len(traces),
                successes=len(wins),
                median_disentangling=_median([t.disentangling_actions for t in wins]),
                median_recovery=_median([t.recovery_actions for t in wins]),
                median_total=_median([t.total_actions for t in wins]),
                failures=failures,
            )
        )
    return StatsTable(tuple(rows))


def _median(values: list[int]) -> Optional[float]:
    if not values:
        return None
    return float(statistics.median(values))
