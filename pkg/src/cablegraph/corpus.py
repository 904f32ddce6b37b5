"""Benchmark knot classes, random tangles, and the exhaustive oracle.

The named generators transcribe standard bend and knot diagrams into
visit sequences.  Two-cable classes use arity-2 crossings; the
three-cable variants run one rope of the bend as a parallel pair, which
stacks three or four segments at each crossing site.  A ``slack``
parameter pads a knot with removable self-loops to emulate denser
configurations at graph level.

``bfs_solve`` is the verification oracle: an exhaustive search over all
legal move applications that returns the minimum number of
disentangling actions (Node Deletions plus Cable Extractions;
straightening pulls are free) together with a replayable witness.
"""

from __future__ import annotations

import os
import random
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, NamedTuple, Optional, Union

from .analysis import NodeDeletionTarget, classify_trivial, select_endpoints
from .diagram import Diagram, Endpoint, Visit, parse, serialize
from .errors import CableGraphError, UnknownKnotError
from .moves import (
    Action,
    ActionKind,
    ExtractionTarget,
    apply_action,
)

TIER_BY_NAME = {
    "twist": 1,
    "carrick": 1,
    "sheet_bend": 1,
    "square": 1,
    "crown": 2,
    "fisherman": 2,
    "overhand2": 2,
    "braid3": 3,
    "square3": 3,
    "carrick3": 3,
    "sheet3": 3,
}

CORPUS_ENV_VAR = "CABLEGRAPH_CORPUS"
DEFAULT_ORACLE_DEPTH = 12


@dataclass(frozen=True)
class KnotSpec:
    """A named benchmark instance: knot class, size parameters, tier."""

    name: str
    params: tuple[tuple[str, int], ...] = ()
    tier: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.params, Mapping):
            object.__setattr__(self, "params", tuple(sorted(self.params.items())))
        else:
            object.__setattr__(self, "params", tuple(sorted(tuple(p) for p in self.params)))
        if self.name != "random" and self.name not in TIER_BY_NAME:
            raise UnknownKnotError(f"unknown knot class {self.name!r}")
        expected = TIER_BY_NAME.get(self.name)
        if self.tier is None:
            object.__setattr__(self, "tier", expected)
        elif expected is not None and self.tier != expected:
            raise ValueError(f"{self.name} belongs to tier {expected}, not {self.tier}")

    def param(self, key: str, default: Optional[int] = None) -> Optional[int]:
        for k, v in self.params:
            if k == key:
                return v
        return default

    def file_stem(self) -> str:
        parts = [f"tier{self.tier}", self.name]
        n = self.param("n")
        if n is not None:
            parts.append(f"n{n}")
        parts.append(f"s{self.param('slack', 0)}")
        return "_".join(parts)


class CorpusEntry(NamedTuple):
    name: str
    tier: int
    diagram: Diagram


class OracleResult(NamedTuple):
    """``reachable`` is True/False, or None when the depth ran out before
    the search space did (unknown, as opposed to proven unreachable)."""

    reachable: Optional[bool]
    min_moves: Optional[int]
    witness: Optional[tuple[Action, ...]]


# ---------------------------------------------------------------------------
# Named generators
# ---------------------------------------------------------------------------


def _build(visit_table: Mapping[int, list[tuple[int, int]]], order: list[str]) -> Diagram:
    return Diagram(
        {c: tuple(Visit(*v) for v in vs) for c, vs in visit_table.items()},
        tuple(Endpoint.from_token(tok) for tok in order),
    )


def add_slack(diagram: Diagram, slack: int) -> Diagram:
    """Pad with ``slack`` fresh self-loops, cycling over cables and
    alternating between prepending and appending."""
    if slack < 0:
        raise ValueError("slack must be non-negative")
    if slack == 0:
        return diagram
    visits = {c: list(vs) for c, vs in diagram.cable_visits.items()}
    cables = sorted(visits)
    next_id = max(diagram.crossings, default=0) + 1
    for i in range(slack):
        cable = cables[i % len(cables)]
        pair = [Visit(next_id, 1), Visit(next_id, -1)]
        if i % 2 == 0:
            visits[cable] = pair + visits[cable]
        else:
            visits[cable] = visits[cable] + pair
        next_id += 1
    return Diagram(visits, diagram.endpoint_order, diagram.terminated)


def gen_twist(n: int, slack: int = 0) -> Diagram:
    """Two cables wound around each other n times, over/under alternating."""
    if n < 1:
        raise ValueError("twist needs n >= 1")
    c1 = [(i, 1 if i % 2 == 1 else -1) for i in range(1, n + 1)]
    c2 = [(i, -d) for i, d in c1]
    right = ["1R", "2R"] if n % 2 == 0 else ["2R", "1R"]
    return add_slack(_build({1: c1, 2: c2}, ["1L", "2L"] + right), slack)


def gen_braid3(n: int = 6, slack: int = 0) -> Diagram:
    """Three-cable braid: n alternating adjacent exchanges, left strand over."""
    if n < 1:
        raise ValueError("braid3 needs n >= 1")
    visits: dict[int, list[tuple[int, int]]] = {1: [], 2: [], 3: []}
    positions = [1, 2, 3]
    for j in range(n):
        i = j % 2
        upper, lower = positions[i], positions[i + 1]
        visits[upper].append((j + 1, 1))
        visits[lower].append((j + 1, -1))
        positions[i], positions[i + 1] = lower, upper
    order = ["1L", "2L", "3L"] + [f"{c}R" for c in positions]
    return add_slack(_build(visits, order), slack)


def gen_square(slack: int = 0) -> Diagram:
    """Square (reef) bend: six alternating inter-cable crossings; each rope
    enters and exits on its own side."""
    table = {
        1: [(1, -1), (2, 1), (3, -1), (4, 1), (5, -1), (6, 1)],
        2: [(4, -1), (5, 1), (6, -1), (1, 1), (2, -1), (3, 1)],
    }
    return add_slack(_build(table, ["1L", "1R", "2L", "2R"]), slack)


def gen_carrick(slack: int = 0) -> Diagram:
    """Carrick bend: two interlocked loops, one self-crossing per rope and
    four mutual crossings, fully alternating."""
    table = {
        1: [(1, 1), (2, -1), (3, 1), (4, -1), (2, 1), (5, -1)],
        2: [(4, 1), (6, -1), (5, 1), (1, -1), (6, 1), (3, -1)],
    }
    return add_slack(_build(table, ["1L", "2L", "1R", "2R"]), slack)


def gen_sheet_bend(slack: int = 0) -> Diagram:
    """Sheet bend: one rope forms a bight, the other threads through it and
    tucks under itself (four mutual crossings plus one self-crossing)."""
    table = {
        1: [(1, -1), (2, 1), (3, -1), (4, 1)],
        2: [(3, 1), (5, -1), (1, 1), (4, -1), (5, 1), (2, -1)],
    }
    return add_slack(_build(table, ["1L", "1R", "2L", "2R"]), slack)


def gen_crown(slack: int = 0) -> Diagram:
    """Two-cable crown: each end passes over its neighbour then tucks under,
    giving four interleaved mutual crossings."""
    table = {
        1: [(1, 1), (2, -1), (3, 1), (4, -1)],
        2: [(2, 1), (4, 1), (1, -1), (3, -1)],
    }
    return add_slack(_build(table, ["1L", "2L", "2R", "1R"]), slack)


def gen_fisherman(slack: int = 0) -> Diagram:
    """Fisherman's knot: each rope ties an overhand knot around the other's
    standing part (three self-crossings plus two mutual crossings per side)."""
    table = {
        1: [(1, 1), (2, -1), (3, 1), (4, 1), (5, -1), (1, -1), (2, 1), (3, -1), (9, -1), (10, 1)],
        2: [(4, -1), (5, 1), (6, 1), (7, -1), (8, 1), (9, 1), (10, -1), (6, -1), (7, 1), (8, -1)],
    }
    return add_slack(_build(table, ["1L", "2L", "1R", "2R"]), slack)


def gen_overhand2(slack: int = 0) -> Diagram:
    """Two parallel cables tied together in a single overhand knot; the pair
    stacks four segments at each of the three crossing sites."""
    table = {
        1: [(1, 1), (2, -2), (3, 1), (1, -2), (2, 1), (3, -2)],
        2: [(1, -1), (2, -3), (3, -1), (1, -3), (2, -1), (3, -3)],
    }
    return add_slack(_build(table, ["1L", "2L", "2R", "1R"]), slack)


def gen_square3(slack: int = 0) -> Diagram:
    """Square bend tied with one single cable against a parallel pair; every
    crossing site stacks three segments."""
    table = {
        1: [(1, -2), (2, 1), (3, -2), (4, 1), (5, -2), (6, 1)],
        2: [(4, -1), (5, 1), (6, -1), (1, 1), (2, -1), (3, 1)],
        3: [(4, -2), (5, -1), (6, -2), (1, -1), (2, -2), (3, -1)],
    }
    return add_slack(_build(table, ["1L", "1R", "2L", "3L", "2R", "3R"]), slack)


def gen_carrick3(slack: int = 0) -> Diagram:
    """Carrick bend with the weaving rope doubled: mutual sites stack three
    segments and the doubled rope's self-crossing stacks four."""
    table = {
        1: [(1, 1), (2, -1), (3, 1), (4, -2), (2, 1), (5, -2)],
        2: [(4, 1), (6, -2), (5, 1), (1, -1), (6, 1), (3, -1)],
        3: [(4, -1), (6, -3), (5, -1), (1, -2), (6, -1), (3, -2)],
    }
    return add_slack(_build(table, ["1L", "2L", "3L", "1R", "2R", "3R"]), slack)


def gen_sheet3(slack: int = 0) -> Diagram:
    """Sheet bend whose bight is formed by a parallel pair; the third cable
    threads through the doubled bight."""
    table = {
        1: [(1, -1), (2, 1), (3, -1), (4, 1)],
        2: [(1, -2), (2, -1), (3, -2), (4, -1)],
        3: [(3, 1), (5, -1), (1, 1), (4, -2), (5, 1), (2, -2)],
    }
    return add_slack(_build(table, ["1L", "2L", "1R", "2R", "3L", "3R"]), slack)


_GENERATORS = {
    "twist": gen_twist,
    "braid3": gen_braid3,
    "square": gen_square,
    "carrick": gen_carrick,
    "sheet_bend": gen_sheet_bend,
    "crown": gen_crown,
    "fisherman": gen_fisherman,
    "overhand2": gen_overhand2,
    "square3": gen_square3,
    "carrick3": gen_carrick3,
    "sheet3": gen_sheet3,
}

_SIZED = {"twist", "braid3"}


def generate(spec: KnotSpec) -> Diagram:
    """Instantiate a named knot class (or a random tangle) from its spec."""
    if spec.name == "random":
        return generate_random(
            seed=spec.param("seed", 0),
            n_cables=spec.param("cables", 2),
            n_crossings=spec.param("crossings", 0),
        )
    gen = _GENERATORS[spec.name]
    kwargs = {"slack": spec.param("slack", 0)}
    if spec.name in _SIZED:
        n = spec.param("n")
        if n is None:
            raise ValueError(f"{spec.name} needs an 'n' parameter")
        kwargs["n"] = n
    return gen(**kwargs)


def generate_random(seed: int, n_cables: int, n_crossings: int) -> Diagram:
    """Random open tangle: braid-style exchanges between adjacent strands
    (left strand over) mixed with self-loop insertions.

    Crossings all have arity 2.  Because exchanges always put the
    left-positioned strand on top, successive meetings of the same two
    cables alternate which one is over, so no reducible same-over pair is
    ever stacked -- reductions of these tangles are order-independent.
    """
    if n_cables < 1:
        raise ValueError("need at least one cable")
    if n_crossings < 0:
        raise ValueError("crossing count must be non-negative")
    rng = random.Random(seed)
    visits: dict[int, list[Visit]] = {c: [] for c in range(1, n_cables + 1)}
    positions = list(range(1, n_cables + 1))
    for event in range(1, n_crossings + 1):
        intra = n_cables == 1 or rng.random() < 0.25
        if intra:
            cable = rng.choice(sorted(visits))
            if rng.random() < 0.5:
                pair = [Visit(event, 1), Visit(event, -1)]
            else:
                pair = [Visit(event, -1), Visit(event, 1)]
            visits[cable].extend(pair)
        else:
            i = rng.randrange(n_cables - 1)
            upper, lower = positions[i], positions[i + 1]
            visits[upper].append(Visit(event, 1))
            visits[lower].append(Visit(event, -1))
            positions[i], positions[i + 1] = lower, upper
    order = [Endpoint(c, "L") for c in range(1, n_cables + 1)] + [
        Endpoint(c, "R") for c in positions
    ]
    return Diagram(visits, tuple(order))


# ---------------------------------------------------------------------------
# Exhaustive oracle
# ---------------------------------------------------------------------------


def _legal_moves(diagram: Diagram) -> list[tuple[Action, int]]:
    """Every applicable action with its disentangling cost (pulls are free)."""
    moves: list[tuple[Action, int]] = []
    if not diagram.cable_visits:
        return moves
    sel = select_endpoints(diagram)
    moves.append((Action(ActionKind.REIDEMEISTER, sel, 1), 0))
    report = classify_trivial(diagram)
    for cid in sorted(diagram.crossings):
        if cid in report.trivial:
            continue
        crossing = diagram.crossings[cid]
        top = crossing.top()
        for seg, depth in crossing.slots():
            if depth < 0:
                target = NodeDeletionTarget(crossing=cid, hold=top, pull=seg)
                moves.append((Action(ActionKind.NODE_DELETION, target, 1), 1))
    for cable in diagram.live_cables:
        if len(report.reduced.cable_visits[cable]) != 0:
            continue
        if len(diagram.cable_visits) > 1:
            pin = next(e for e in diagram.endpoint_order if e.cable != cable)
        else:
            pin = diagram.endpoint_order[0]
        moves.append(
            (Action(ActionKind.CABLE_EXTRACTION, ExtractionTarget(cable, pin), 0), 1)
        )
    return moves


def bfs_solve(diagram: Diagram, max_depth: int = DEFAULT_ORACLE_DEPTH) -> OracleResult:
    """Minimum disentangling-action count to empty the workspace.

    0/1-cost breadth-first search over every legal move application,
    deduplicated on the canonical serialization.  ``reachable=None`` means
    the depth bound was hit before the space was exhausted.
    """
    if not diagram.cable_visits:
        return OracleResult(True, 0, ())
    start_key = serialize(diagram)
    best = {start_key: 0}
    queue: deque[tuple[Diagram, str, int, tuple[Action, ...]]] = deque(
        [(diagram, start_key, 0, ())]
    )
    truncated = False
    while queue:
        state, key, cost, witness = queue.popleft()
        if best.get(key, cost) < cost:
            continue
        if not state.cable_visits:
            return OracleResult(True, cost, witness)
        for action, move_cost in _legal_moves(state):
            ncost = cost + move_cost
            if ncost > max_depth:
                truncated = True
                continue
            nxt = apply_action(state, action)
            nkey = serialize(nxt)
            if best.get(nkey, ncost + 1) <= ncost:
                continue
            best[nkey] = ncost
            entry = (nxt, nkey, ncost, witness + (action,))
            if move_cost == 0:
                queue.appendleft(entry)
            else:
                queue.append(entry)
    return OracleResult(None if truncated else False, None, None)


def replay_witness(diagram: Diagram, witness: tuple[Action, ...]) -> Diagram:
    """Apply a witness action sequence; the caller checks the end state."""
    current = diagram
    for action in witness:
        current = apply_action(current, action)
    return current


# ---------------------------------------------------------------------------
# Golden corpus
# ---------------------------------------------------------------------------


def golden_specs() -> list[KnotSpec]:
    """Every benchmark instance frozen into the shipped corpus: all knot
    classes at slack 0 and 2, twists at n=2..6, braids at n=6."""
    specs = []
    for slack in (0, 2):
        for n in range(2, 7):
            specs.append(KnotSpec("twist", {"n": n, "slack": slack}))
        for name in ("carrick", "sheet_bend", "square"):
            specs.append(KnotSpec(name, {"slack": slack}))
        for name in ("crown", "fisherman", "overhand2"):
            specs.append(KnotSpec(name, {"slack": slack}))
        specs.append(KnotSpec("braid3", {"n": 6, "slack": slack}))
        for name in ("square3", "carrick3", "sheet3"):
            specs.append(KnotSpec(name, {"slack": slack}))
    return sorted(specs, key=lambda s: (s.tier, s.file_stem()))


def default_corpus_dir() -> Path:
    env = os.environ.get(CORPUS_ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("cablegraph").joinpath("data/corpus")))


def write_golden_corpus(directory: Union[str, Path]) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for spec in golden_specs():
        path = directory / f"{spec.file_stem()}.mcd"
        path.write_text(serialize(generate(spec)), encoding="utf-8")
        paths.append(path)
    return paths


def load_golden_corpus(directory: Union[str, Path, None] = None) -> list[CorpusEntry]:
    directory = Path(directory) if directory is not None else default_corpus_dir()
    if not directory.is_dir():
        raise CableGraphError(f"corpus directory {directory} does not exist")
    entries = []
    for path in sorted(directory.glob("*.mcd")):
        stem = path.stem
        if not stem.startswith("tier"):
            raise CableGraphError(f"corpus file {path.name} lacks a tier prefix")
        tier = int(stem.split("_", 1)[0][len("tier"):])
        entries.append(CorpusEntry(stem, tier, parse(path.read_text(encoding="utf-8"))))
    if not entries:
        raise CableGraphError(f"no .mcd files found in {directory}")
    return sorted(entries, key=lambda e: (e.tier, e.name))
