"""Graph-rewrite semantics of the three manipulation primitives.

All moves are pure functions: immutable diagram in, immutable diagram
out.  A Reidemeister move pulls a pair of opposing endpoints apart and
sheds every trivial crossing.  A Node Deletion move holds a crossing's
topmost segment and pulls one under-segment out of it.  A Cable
Extraction move pins the scene and drags one semi-disentangled cable to
the termination area.  An optional noise wrapper models imperfect
physical execution: actions that silently do nothing, and slack that
loops itself into a fresh monogon.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .analysis import (
    EndpointSelection,
    NodeDeletionTarget,
    classify_trivial,
    is_semi_disentangled,
)
from .diagram import Diagram, Endpoint, SegmentRef, Visit, remove_segments
from .errors import MovePreconditionError, StaleActionError, UnknownCableError


class ActionKind(Enum):
    REIDEMEISTER = "Reidemeister"
    NODE_DELETION = "NodeDeletion"
    CABLE_EXTRACTION = "CableExtraction"
    DONE = "Done"


@dataclass(frozen=True)
class ExtractionTarget:
    cable: int
    pin: Endpoint


@dataclass(frozen=True)
class Action:
    """One planner decision: a move kind, its graph targets, and whether the
    pinning gripper closes its jaws (1) or soft-pins with open jaws (0)."""

    kind: ActionKind
    target: Union[EndpointSelection, NodeDeletionTarget, ExtractionTarget, None]
    pin_grasp_flag: int = 1

    def __post_init__(self):
        expected = {
            ActionKind.REIDEMEISTER: EndpointSelection,
            ActionKind.NODE_DELETION: NodeDeletionTarget,
            ActionKind.CABLE_EXTRACTION: ExtractionTarget,
            ActionKind.DONE: type(None),
        }[self.kind]
        if not isinstance(self.target, expected):
            raise ValueError(f"{self.kind.value} action needs a {expected.__name__} target")
        if self.pin_grasp_flag not in (0, 1):
            raise ValueError("pin_grasp_flag must be 0 or 1")
        if self.kind is ActionKind.CABLE_EXTRACTION and self.pin_grasp_flag != 0:
            raise ValueError("extraction soft-pins: pin_grasp_flag must be 0")


@dataclass(frozen=True)
class NoiseConfig:
    """Imperfect-execution model: each action is a no-op with probability
    ``p_fail``; after an effective action a monogon is spawned on a random
    live cable with probability ``p_spawn``.  Deterministic under ``seed``."""

    p_fail: float
    p_spawn: float
    seed: int = 0

    def __post_init__(self):
        for name in ("p_fail", "p_spawn"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


def _renormalized_depths(slots: list[tuple[SegmentRef, int]]) -> dict[SegmentRef, int]:
    """New depth labels for a shrunken crossing, preserving relative order:
    the shallowest survivor becomes +1, the rest -1, -2, ..."""
    ranked = sorted(slots, key=lambda sd: -sd[1])
    return {seg: (1 if rank == 0 else -rank) for rank, (seg, _) in enumerate(ranked)}


def apply_reidemeister(diagram: Diagram, sel: EndpointSelection) -> Diagram:
    """Pull ``sel.v_r`` and ``sel.v_l`` apart: every trivial crossing sheds,
    and the endpoint order is updated so v_l is leftmost and v_r rightmost."""
    for e in (sel.v_r, sel.v_l):
        if e not in diagram.endpoint_order:
            raise StaleActionError(f"endpoint {e} is no longer live")
    reduced = classify_trivial(diagram).reduced
    middle = tuple(e for e in reduced.endpoint_order if e not in (sel.v_l, sel.v_r))
    order = (sel.v_l, *middle, sel.v_r) if sel.v_l != sel.v_r else (sel.v_r,)
    return Diagram(reduced.cable_visits, order, reduced.terminated)


def apply_node_deletion(diagram: Diagram, target: NodeDeletionTarget) -> Diagram:
    """Pull the ``target.pull`` segment out of its crossing.

    An arity-2 crossing disappears entirely; at higher arity the remaining
    stack is renumbered in place.  Potential drops by exactly arity-1.
    """
    crossing = diagram.crossings.get(target.crossing)
    if crossing is None:
        raise StaleActionError(f"crossing {target.crossing} does not exist")
    if target.hold not in crossing.segments or target.pull not in crossing.segments:
        raise StaleActionError(f"target slots not at crossing {target.crossing}")
    if crossing.depth_of(target.hold) != 1:
        raise StaleActionError("hold slot is not the topmost segment")
    if crossing.depth_of(target.pull) >= 0:
        raise StaleActionError("pull slot is not an under-segment")
    if target.crossing in classify_trivial(diagram).trivial:
        raise MovePreconditionError(
            f"crossing {target.crossing} is trivial; a straightening pull removes it"
        )
    if crossing.arity == 2:
        return remove_segments(diagram, crossing.segments)
    survivors = [(s, d) for s, d in crossing.slots() if s != target.pull]
    return remove_segments(diagram, (target.pull,), _renormalized_depths(survivors))


def apply_cable_extraction(diagram: Diagram, cable: int, pin: Endpoint) -> Diagram:
    """Terminate a semi-disentangled cable.

    All its slots leave their crossings; a crossing left with one segment
    is spliced away, one left with two or more renumbers its stack.  The
    pin must be a live endpoint off the extracted cable, except when it is
    the only cable left (then its own far endpoint is pinned).
    """
    if not diagram.is_live(cable):
        raise UnknownCableError(f"cable {cable} is not live")
    if not is_semi_disentangled(diagram, cable):
        raise MovePreconditionError(
            f"cable {cable} is not semi-disentangled; extraction would drag entangled cables"
        )
    if pin not in diagram.endpoint_order:
        raise StaleActionError(f"pin endpoint {pin} is not live")
    if len(diagram.cable_visits) > 1 and pin.cable == cable:
        raise MovePreconditionError("pin must be on a different cable while others remain")

    doomed = {SegmentRef(cable, i) for i in range(len(diagram.cable_visits[cable]))}
    depth_updates: dict[SegmentRef, int] = {}
    for crossing in diagram.crossings.values():
        survivors = [(s, d) for s, d in crossing.slots() if s.cable != cable]
        if len(survivors) == len(crossing.segments):
            continue
        if len(survivors) == 1:
            doomed.add(survivors[0][0])  # arity-1 crossings are not crossings
        elif len(survivors) >= 2:
            depth_updates.update(_renormalized_depths(survivors))

    stripped = remove_segments(diagram, doomed, depth_updates)
    visits = {c: vs for c, vs in stripped.cable_visits.items() if c != cable}
    order = tuple(e for e in stripped.endpoint_order if e.cable != cable)
    return Diagram(visits, order, stripped.terminated + (cable,))


def apply_action(diagram: Diagram, action: Action) -> Diagram:
    if action.kind is ActionKind.REIDEMEISTER:
        return apply_reidemeister(diagram, action.target)
    if action.kind is ActionKind.NODE_DELETION:
        return apply_node_deletion(diagram, action.target)
    if action.kind is ActionKind.CABLE_EXTRACTION:
        return apply_cable_extraction(diagram, action.target.cable, action.target.pin)
    return diagram  # Done


def spawn_monogon(diagram: Diagram, rng: random.Random) -> Diagram:
    """Insert a fresh self-loop at a random position on a random live cable."""
    live = diagram.live_cables
    if not live:
        return diagram
    cable = rng.choice(live)
    visits = diagram.cable_visits[cable]
    pos = rng.randint(0, len(visits))
    new_id = max(diagram.crossings, default=0) + 1
    pair = (Visit(new_id, 1), Visit(new_id, -1))
    if rng.random() < 0.5:
        pair = (pair[1], pair[0])
    new_visits = dict(diagram.cable_visits)
    new_visits[cable] = visits[:pos] + pair + visits[pos:]
    return Diagram(new_visits, diagram.endpoint_order, diagram.terminated)


def apply_noisy(
    diagram: Diagram,
    action: Action,
    cfg: NoiseConfig,
    rng: Optional[random.Random] = None,
) -> Diagram:
    """Execute an action under the noise model.

    A fresh generator seeded from ``cfg.seed`` is used unless the caller
    threads its own, so identical (diagram, action, cfg) inputs give
    identical outputs.
    """
    if rng is None:
        rng = random.Random(cfg.seed)
    if rng.random() < cfg.p_fail:
        return diagram
    out = apply_action(diagram, action)
    if rng.random() < cfg.p_spawn:
        out = spawn_monogon(out, rng)
    return out
