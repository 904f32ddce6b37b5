"""Multi-cable knot diagrams as annotated crossing-visit sequences.

A diagram records, for every live cable, the sequence of crossings the
cable passes through from its left endpoint to its right endpoint,
together with a depth annotation at each visit: ``+1`` for the segment
lying on top at that crossing, ``-m`` for a segment passing under ``m``
others.  Crossings are derived views over the visit sequences: a
crossing of arity ``k`` is simply a crossing id visited ``k`` times in
total, and its vertex has degree ``2k`` (two edge ends per segment).

The workspace geometry is abstracted to a left-to-right total order
over the live endpoints plus the list of cables already moved to the
termination area.  Diagram values are immutable; moves and reductions
build new diagrams.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional

from .errors import InvalidDiagramError, MCDParseError, UnknownCableError

SIDE_LEFT = "L"
SIDE_RIGHT = "R"

_ENDPOINT_RE = re.compile(r"(\d+)([LR])")
_VISIT_TOKEN_RE = re.compile(r"X(\d+)@([+-]\d+)")


class Visit(NamedTuple):
    """One pass of a cable through a crossing, with its depth label."""

    crossing: int
    depth: int


class Endpoint(NamedTuple):
    """A cable end, named by its cable and the side it starts the trace on."""

    cable: int
    side: str

    def __str__(self) -> str:
        return f"{self.cable}{self.side}"

    @classmethod
    def from_token(cls, token: str) -> "Endpoint":
        m = _ENDPOINT_RE.fullmatch(token)
        if m is None:
            raise ValueError(f"bad endpoint token {token!r}")
        return cls(int(m.group(1)), m.group(2))


class SegmentRef(NamedTuple):
    """A crossing slot, addressed as (cable id, visit index on that cable)."""

    cable: int
    visit: int


@dataclass(frozen=True)
class Crossing:
    """Derived view of one crossing: its slots and their depth labels."""

    id: int
    segments: tuple[SegmentRef, ...]
    depths: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.segments)

    def slots(self) -> tuple[tuple[SegmentRef, int], ...]:
        return tuple(zip(self.segments, self.depths))

    def depth_of(self, seg: SegmentRef) -> int:
        return self.depths[self.segments.index(seg)]

    def top(self) -> SegmentRef:
        """The unique segment annotated +1."""
        tops = [s for s, d in zip(self.segments, self.depths) if d == 1]
        if len(tops) != 1:
            raise ValueError(f"crossing {self.id} has {len(tops)} topmost segments")
        return tops[0]


@dataclass(frozen=True)
class CableTrace:
    """Ordered visit list of one cable, as returned by :func:`trace_cable`."""

    cable: int
    visits: tuple[Visit, ...]


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Diagram:
    """An n-cable configuration.

    ``cable_visits`` maps each live cable id to its visit sequence in
    left-endpoint to right-endpoint order.  ``endpoint_order`` lists the
    live endpoints left to right across the workspace.  ``terminated``
    lists cables already removed to the termination area; they carry no
    visits and no endpoints.
    """

    cable_visits: Mapping[int, tuple[Visit, ...]]
    endpoint_order: tuple[Endpoint, ...]
    terminated: tuple[int, ...] = ()

    def __post_init__(self):
        visits = {
            int(c): tuple(Visit(int(v[0]), int(v[1])) for v in vs)
            for c, vs in sorted(self.cable_visits.items())
        }
        object.__setattr__(self, "cable_visits", visits)
        object.__setattr__(
            self, "endpoint_order", tuple(Endpoint(int(e[0]), e[1]) for e in self.endpoint_order)
        )
        object.__setattr__(self, "terminated", tuple(sorted(int(c) for c in self.terminated)))

    @property
    def live_cables(self) -> tuple[int, ...]:
        return tuple(self.cable_visits)

    def is_live(self, cable: int) -> bool:
        return cable in self.cable_visits

    @cached_property
    def crossings(self) -> dict[int, Crossing]:
        """Crossing views derived from the visit sequences.

        Slots are listed in canonical order: ascending (cable, visit index).
        """
        acc: dict[int, list[tuple[SegmentRef, int]]] = {}
        for cable, visits in self.cable_visits.items():
            for i, v in enumerate(visits):
                acc.setdefault(v.crossing, []).append((SegmentRef(cable, i), v.depth))
        out = {}
        for cid in sorted(acc):
            slots = sorted(acc[cid])
            out[cid] = Crossing(
                id=cid,
                segments=tuple(s for s, _ in slots),
                depths=tuple(d for _, d in slots),
            )
        return out

    def endpoint_index(self, endpoint: Endpoint) -> int:
        return self.endpoint_order.index(endpoint)


def expected_depths(arity: int) -> list[int]:
    """Depth multiset required at an arity-k crossing: one +1, then -1..-(k-1)."""
    return sorted([1] + [-m for m in range(1, arity)])


def potential(diagram: Diagram) -> int:
    """Pairwise segment-crossing count, sum over crossings of k*(k-1)/2.

    Zero exactly when every live cable is crossing-free, i.e. the
    configuration graph has only its two endpoint vertices per cable.
    """
    return sum(c.arity * (c.arity - 1) // 2 for c in diagram.crossings.values())


def validate(diagram: Diagram) -> ValidationReport:
    """Check every model invariant; violations are report entries, not faults."""
    violations: list[Violation] = []

    live = set(diagram.cable_visits)
    seen_terminated: set[int] = set()
    for c in diagram.terminated:
        if c in live:
            violations.append(
                Violation("terminated-live", str(c), f"cable {c} is both live and terminated")
            )
        if c in seen_terminated:
            violations.append(
                Violation("terminated-dup", str(c), f"cable {c} terminated more than once")
            )
        seen_terminated.add(c)

    expected_eps = {Endpoint(c, s) for c in live for s in (SIDE_LEFT, SIDE_RIGHT)}
    seen_eps: set[Endpoint] = set()
    for e in diagram.endpoint_order:
        if e.side not in (SIDE_LEFT, SIDE_RIGHT):
            violations.append(Violation("endpoint-side", str(e), f"endpoint {e} has bad side"))
            continue
        if e in seen_eps:
            violations.append(
                Violation("endpoint-dup", str(e), f"endpoint {e} appears twice in order")
            )
        seen_eps.add(e)
        if e not in expected_eps:
            violations.append(
                Violation("endpoint-foreign", str(e), f"endpoint {e} is not on a live cable")
            )
    for e in sorted(expected_eps - seen_eps):
        violations.append(
            Violation("endpoint-missing", str(e), f"endpoint {e} missing from order")
        )

    for cid, crossing in diagram.crossings.items():
        k = crossing.arity
        if k < 2:
            violations.append(
                Violation("arity", str(cid), f"crossing {cid} has arity {k}; need at least 2")
            )
            continue
        if sorted(crossing.depths) != expected_depths(k):
            if list(crossing.depths).count(1) > 1:
                msg = f"crossing {cid} has duplicate topmost (+1) segments"
            elif 1 not in crossing.depths:
                msg = f"crossing {cid} has no topmost (+1) segment"
            else:
                msg = (
                    f"crossing {cid} depth multiset {sorted(crossing.depths)} "
                    f"!= required {expected_depths(k)}"
                )
            violations.append(Violation("depths", str(cid), msg))

    return ValidationReport(tuple(violations))


def trace_cable(diagram: Diagram, cable: int, from_left: bool = True) -> CableTrace:
    """Visit sequence of one live cable; ``from_left=False`` reverses it."""
    if not diagram.is_live(cable):
        if cable in diagram.terminated:
            raise UnknownCableError(f"cable {cable} is terminated")
        raise UnknownCableError(f"unknown cable {cable}")
    visits = diagram.cable_visits[cable]
    if not from_left:
        visits = tuple(reversed(visits))
    return CableTrace(cable, visits)


def remove_segments(
    diagram: Diagram,
    slots: Iterable[SegmentRef],
    depth_updates: Optional[Mapping[SegmentRef, int]] = None,
) -> Diagram:
    """Rebuild the diagram with the given crossing slots spliced out.

    ``depth_updates`` reassigns depths of surviving visits (used when a
    crossing loses segments and its depth stack is renumbered).  Endpoint
    order and the terminated list are untouched.
    """
    removed = set(slots)
    updates = dict(depth_updates or {})
    new_visits = {}
    for cable, visits in diagram.cable_visits.items():
        seq = []
        for i, v in enumerate(visits):
            ref = SegmentRef(cable, i)
            if ref in removed:
                continue
            depth = updates.get(ref, v.depth)
            seq.append(Visit(v.crossing, depth))
        new_visits[cable] = tuple(seq)
    return Diagram(new_visits, diagram.endpoint_order, diagram.terminated)


# ---------------------------------------------------------------------------
# MCD text format
# ---------------------------------------------------------------------------
#
#   mcd 1
#   cables <n>
#   cable <id>: X<crossing>@<depth> ...    (one line per live cable)
#   order: <endpoint> ...                  (omitted when there are no cables)
#   terminated: <cable> ...                (omitted when empty)
#
# Depth tokens are "+1" or "-m".  Lines starting with "#" and blank lines
# are ignored.  Serialization is canonical: cables ascending by id, visits
# in trace order, terminated ids ascending; round trips are bit-exact.


def serialize(diagram: Diagram) -> str:
    lines = ["mcd 1", f"cables {len(diagram.cable_visits)}"]
    for cable, visits in diagram.cable_visits.items():
        toks = " ".join(f"X{v.crossing}@{v.depth:+d}" for v in visits)
        lines.append(f"cable {cable}:" + (f" {toks}" if toks else ""))
    if diagram.endpoint_order:
        lines.append("order: " + " ".join(str(e) for e in diagram.endpoint_order))
    if diagram.terminated:
        lines.append("terminated: " + " ".join(str(c) for c in diagram.terminated))
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw


def _tokens_with_columns(line: str, start: int = 0):
    for m in re.finditer(r"\S+", line[start:]):
        yield m.group(0), start + m.start() + 1


def parse(text: str) -> Diagram:
    """Parse MCD text into a validated diagram.

    Raises :class:`MCDParseError` with a line/column for malformed input
    and :class:`InvalidDiagramError` when the text is well-formed but the
    described diagram breaks a model invariant.
    """
    lines = list(_content_lines(text))
    pos = 0

    def take(expect: str):
        nonlocal pos
        if pos >= len(lines):
            raise MCDParseError(len(text.splitlines()) + 1, 1, f"unexpected end of file, expected {expect}")
        out = lines[pos]
        pos += 1
        return out

    lineno, line = take("'mcd 1' header")
    if line.strip() != "mcd 1":
        raise MCDParseError(lineno, 1, "expected version header 'mcd 1'")

    lineno, line = take("'cables <n>' line")
    m = re.fullmatch(r"\s*cables\s+(\d+)\s*", line)
    if m is None:
        raise MCDParseError(lineno, 1, "expected 'cables <n>'")
    n_cables = int(m.group(1))

    cable_visits: dict[int, tuple[Visit, ...]] = {}
    for _ in range(n_cables):
        lineno, line = take("a 'cable <id>:' line")
        m = re.match(r"\s*cable\s+(\d+):", line)
        if m is None:
            raise MCDParseError(lineno, 1, "expected 'cable <id>: <tok> ...'")
        cable = int(m.group(1))
        if cable in cable_visits:
            raise MCDParseError(lineno, 1, f"duplicate cable id {cable}")
        visits = []
        for tok, col in _tokens_with_columns(line, m.end()):
            tm = _VISIT_TOKEN_RE.fullmatch(tok)
            if tm is None:
                raise MCDParseError(lineno, col, f"bad visit token {tok!r}, expected X<id>@<depth>")
            depth = int(tm.group(2))
            if depth == 0:
                raise MCDParseError(lineno, col, "depth 0 is not a legal annotation")
            visits.append(Visit(int(tm.group(1)), depth))
        cable_visits[cable] = tuple(visits)

    endpoint_order: list[Endpoint] = []
    terminated: list[int] = []
    saw_order = False
    saw_terminated = False
    while pos < len(lines):
        lineno, line = take("'order:' or 'terminated:'")
        stripped = line.strip()
        if stripped.startswith("order:"):
            if saw_order:
                raise MCDParseError(lineno, 1, "duplicate order line")
            saw_order = True
            start = line.index("order:") + len("order:")
            for tok, col in _tokens_with_columns(line, start):
                try:
                    endpoint_order.append(Endpoint.from_token(tok))
                except ValueError:
                    raise MCDParseError(lineno, col, f"bad endpoint token {tok!r}") from None
        elif stripped.startswith("terminated:"):
            if saw_terminated:
                raise MCDParseError(lineno, 1, "duplicate terminated line")
            saw_terminated = True
            start = line.index("terminated:") + len("terminated:")
            for tok, col in _tokens_with_columns(line, start):
                if not tok.isdigit():
                    raise MCDParseError(lineno, col, f"bad cable id {tok!r}")
                terminated.append(int(tok))
        else:
            raise MCDParseError(lineno, 1, f"unexpected line {stripped.split()[0]!r}")

    if n_cables > 0 and not saw_order:
        raise MCDParseError(len(text.splitlines()) + 1, 1, "missing order line")

    diagram = Diagram(cable_visits, tuple(endpoint_order), tuple(terminated))
    report = validate(diagram)
    if not report.ok:
        raise InvalidDiagramError(report)
    return diagram
