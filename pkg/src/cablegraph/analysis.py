"""Crossing triviality, semi-disentanglement, and grasp-target queries.

A crossing is *trivial* when a taut pull of the cable endpoints sheds it
without any dedicated crossing-removal move.  Triviality is computed as
the fixpoint of three reduction rules over arity-2 crossings:

  T1 (monogon)   -- both slots are consecutive visits of one cable; the
                    self-loop falls open.
  T2 (bigon)     -- two crossings joined by two direct parallel passes
                    where one pass runs on top at both; the pair cancels.
  T3 (end slide) -- each of the two strands runs crossing-free from the
                    crossing to one of its own endpoints; the crossing
                    slides off the free ends.

Crossings with more than two segments are never trivial: a middle-depth
segment cannot shed under a taut pull and must be removed explicitly.
Each rule only deletes whole crossings, and deleting a crossing never
disables another pending rule, so the removed set does not depend on
application order (exercised empirically by the test suite).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

from .diagram import Diagram, Endpoint, SegmentRef, remove_segments
from .errors import EmptyWorkspaceError, UnknownCableError

RULE_MONOGON = "T1"
RULE_BIGON = "T2"
RULE_END_SLIDE = "T3"


class Redex(NamedTuple):
    rule: str
    crossings: tuple[int, ...]
    slots: tuple[SegmentRef, ...]


@dataclass(frozen=True)
class TrivialityReport:
    """Result of reducing a diagram: removed crossing ids and the survivor."""

    trivial: frozenset[int]
    reduced: Diagram


@dataclass(frozen=True)
class EndpointSelection:
    """The opposing endpoint pair a straightening pull grasps."""

    v_r: Endpoint
    v_l: Endpoint


@dataclass(frozen=True)
class NodeDeletionTarget:
    """Hold/pull slots for removing one under-segment from one crossing."""

    crossing: int
    hold: SegmentRef
    pull: SegmentRef


def _is_end_slot(diagram: Diagram, seg: SegmentRef) -> bool:
    return seg.visit == 0 or seg.visit == len(diagram.cable_visits[seg.cable]) - 1


def find_redexes(diagram: Diagram) -> list[Redex]:
    """All currently applicable reduction rule instances, in deterministic
    order: monogons first, then bigons, then end slides, each ascending by
    crossing id."""
    redexes: list[Redex] = []
    crossings = diagram.crossings

    for cid in sorted(crossings):
        c = crossings[cid]
        if c.arity != 2:
            continue
        s1, s2 = c.segments
        if s1.cable == s2.cable and abs(s1.visit - s2.visit) == 1:
            redexes.append(Redex(RULE_MONOGON, (cid,), (s1, s2)))

    # Direct passes: consecutive visits of one cable between two distinct
    # crossings.  A bigon is two slot-disjoint passes between the same pair.
    passes: dict[frozenset[int], list[tuple[SegmentRef, SegmentRef]]] = {}
    for cable, visits in diagram.cable_visits.items():
        for i in range(len(visits) - 1):
            a, b = visits[i].crossing, visits[i + 1].crossing
            if a == b:
                continue
            passes.setdefault(frozenset((a, b)), []).append(
                (SegmentRef(cable, i), SegmentRef(cable, i + 1))
            )
    def on_top(p):
        return all(diagram.cable_visits[s.cable][s.visit].depth == 1 for s in p)

    bigons = []
    for pair, ps in passes.items():
        v, w = sorted(pair)
        if crossings[v].arity != 2 or crossings[w].arity != 2:
            continue
        for p1, p2 in combinations(ps, 2):
            slots = {p1[0], p1[1], p2[0], p2[1]}
            if len(slots) != 4:
                continue
            if on_top(p1) or on_top(p2):
                bigons.append(Redex(RULE_BIGON, (v, w), tuple(sorted(slots))))
                break
    redexes.extend(sorted(bigons, key=lambda r: r.crossings))

    for cid in sorted(crossings):
        c = crossings[cid]
        if c.arity != 2:
            continue
        if all(_is_end_slot(diagram, s) for s in c.segments):
            redexes.append(Redex(RULE_END_SLIDE, (cid,), c.segments))

    return redexes


def classify_trivial(diagram: Diagram, rng: Optional[random.Random] = None) -> TrivialityReport:
    """Reduce to the triviality fixpoint.

    With ``rng`` the applicable rule instance is picked uniformly at each
    step instead of in deterministic order; the removed set is the same
    either way (checked by the confluence tests).
    """
    trivial: set[int] = set()
    current = diagram
    while True:
        redexes = find_redexes(current)
        if not redexes:
            break
        redex = rng.choice(redexes) if rng is not None else redexes[0]
        trivial.update(redex.crossings)
        current = remove_segments(current, redex.slots)
    return TrivialityReport(frozenset(trivial), current)


def is_semi_disentangled(diagram: Diagram, cable: int) -> bool:
    """True when every crossing the cable still passes through is trivial,
    i.e. one pull to the termination area frees it completely."""
    if not diagram.is_live(cable):
        if cable in diagram.terminated:
            raise UnknownCableError(f"cable {cable} is terminated")
        raise UnknownCableError(f"unknown cable {cable}")
    reduced = classify_trivial(diagram).reduced
    return len(reduced.cable_visits[cable]) == 0


def select_endpoints(diagram: Diagram) -> EndpointSelection:
    """Rightmost endpoint overall, paired with the leftmost endpoint on a
    different cable (same cable only when a single cable remains)."""
    order = diagram.endpoint_order
    if not order:
        raise EmptyWorkspaceError("no live endpoints to select")
    v_r = order[-1]
    if len(diagram.cable_visits) > 1:
        v_l = next(e for e in order if e.cable != v_r.cable)
    else:
        v_l = order[0]
    return EndpointSelection(v_r=v_r, v_l=v_l)


def first_nontrivial_undercrossing(
    diagram: Diagram,
    start: Optional[Endpoint] = None,
    trivial: Optional[frozenset[int]] = None,
) -> Optional[NodeDeletionTarget]:
    """First non-trivial undercrossing on the cable traced from ``start``.

    ``start`` defaults to the rightmost endpoint in the workspace.  Trivial
    crossings along the trace are skipped.  Returns the crossing with
    hold = its topmost segment and pull = the traversed under-segment, or
    None when the trace has no such visit.
    """
    if start is None:
        start = select_endpoints(diagram).v_r
    if trivial is None:
        trivial = classify_trivial(diagram).trivial
    visits = diagram.cable_visits[start.cable]
    indices = range(len(visits)) if start.side == "L" else range(len(visits) - 1, -1, -1)
    for i in indices:
        v = visits[i]
        if v.depth < 0 and v.crossing not in trivial:
            crossing = diagram.crossings[v.crossing]
            return NodeDeletionTarget(
                crossing=v.crossing,
                hold=crossing.top(),
                pull=SegmentRef(start.cable, i),
            )
    return None


def find_node_deletion_target(diagram: Diagram) -> Optional[NodeDeletionTarget]:
    """Target search with fallback starts.

    Tries the rightmost endpoint first, then the selected leftmost
    endpoint, then each remaining cable's rightmost endpoint (rightmost
    cable first).  Any non-trivial crossing has an under-segment on some
    cable, so this finds a target whenever one exists at all.
    """
    trivial = classify_trivial(diagram).trivial
    sel = select_endpoints(diagram)
    starts = [sel.v_r, sel.v_l]
    searched = {sel.v_r.cable, sel.v_l.cable}
    rightmost: dict[int, Endpoint] = {}
    for e in diagram.endpoint_order:
        rightmost[e.cable] = e
    for e in sorted(rightmost.values(), key=diagram.endpoint_index, reverse=True):
        if e.cable not in searched:
            starts.append(e)
            searched.add(e.cable)
    for start in starts:
        target = first_nontrivial_undercrossing(diagram, start, trivial)
        if target is not None:
            return target
    return None
