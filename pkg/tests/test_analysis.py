"""Triviality classification, endpoint selection, and target queries."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from cablegraph import (
    Diagram,
    EmptyWorkspaceError,
    Endpoint,
    UnknownCableError,
    Visit,
    apply_node_deletion,
    classify_trivial,
    find_node_deletion_target,
    first_nontrivial_undercrossing,
    generate_random,
    gen_overhand2,
    gen_square,
    gen_twist,
    is_semi_disentangled,
    potential,
    select_endpoints,
    validate,
)
from cablegraph.analysis import NodeDeletionTarget


def single_cable_overhand():
    """Open overhand knot on one cable: three alternating self-crossings."""
    return Diagram(
        {1: (Visit(1, 1), Visit(2, -1), Visit(3, 1), Visit(1, -1), Visit(2, 1), Visit(3, -1))},
        (Endpoint(1, "L"), Endpoint(1, "R")),
    )


def order_only(*tokens):
    """Crossing-free diagram with the given endpoint order."""
    cables = sorted({int(t[:-1]) for t in tokens})
    return Diagram(
        {c: () for c in cables},
        tuple(Endpoint(int(t[:-1]), t[-1]) for t in tokens),
    )


class TestClassifyTrivial:
    def test_single_cable_overhand_core_survives(self):
        report = classify_trivial(single_cable_overhand())
        assert report.trivial == frozenset()
        assert report.reduced == single_cable_overhand()

    def test_single_mutual_crossing_is_trivial(self):
        report = classify_trivial(gen_twist(1))
        assert report.trivial == frozenset({1})
        assert potential(report.reduced) == 0

    def test_twist4_cascades_completely(self):
        report = classify_trivial(gen_twist(4))
        assert report.trivial == frozenset({1, 2, 3, 4})

    def test_monogon_is_trivial(self):
        d = Diagram(
            {1: (Visit(1, 1), Visit(1, -1))},
            (Endpoint(1, "L"), Endpoint(1, "R")),
        )
        assert classify_trivial(d).trivial == frozenset({1})

    def test_reducible_bigon_cancels(self):
        # cable 1 runs on top of cable 2 at both crossings, blocked at both
        # of its own ends by an overhand core on cable 2's far side
        d = Diagram(
            {
                1: (Visit(1, 1), Visit(2, 1)),
                2: (
                    Visit(3, 1), Visit(4, -1), Visit(5, 1),
                    Visit(1, -1), Visit(2, -1),
                    Visit(3, -1), Visit(4, 1), Visit(5, -1),
                ),
            },
            (Endpoint(1, "L"), Endpoint(2, "L"), Endpoint(2, "R"), Endpoint(1, "R")),
        )
        assert validate(d).ok
        report = classify_trivial(d)
        # bigon {1, 2} cancels; then cable 1 is free so nothing else changes
        assert report.trivial == frozenset({1, 2})

    def test_clasp_is_not_a_bigon(self):
        # same shape but cable 1 goes over then under: a clasp holds
        d = Diagram(
            {
                1: (Visit(1, 1), Visit(2, -1)),
                2: (
                    Visit(3, 1), Visit(4, -1), Visit(5, 1),
                    Visit(1, -1), Visit(2, 1),
                    Visit(3, -1), Visit(4, 1), Visit(5, -1),
                ),
            },
            (Endpoint(1, "L"), Endpoint(2, "L"), Endpoint(2, "R"), Endpoint(1, "R")),
        )
        assert validate(d).ok
        assert classify_trivial(d).trivial == frozenset()

    def test_higher_arity_crossings_never_trivial(self):
        assert classify_trivial(gen_overhand2()).trivial == frozenset()

    def test_idempotent(self):
        for seed in range(30):
            d = generate_random(seed, 3, 8)
            reduced = classify_trivial(d).reduced
            again = classify_trivial(reduced)
            assert again.trivial == frozenset()
            assert again.reduced == reduced

    def test_reduced_never_gains_potential(self):
        for seed in range(30):
            d = generate_random(seed, 2, 8)
            report = classify_trivial(d)
            assert potential(report.reduced) <= potential(d)
            assert set(report.reduced.crossings) == set(d.crossings) - set(report.trivial)

    @given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 8), st.integers(0, 10**6))
    @settings(max_examples=80, deadline=None)
    def test_order_independent(self, seed, cables, crossings, order_seed):
        d = generate_random(seed, cables, crossings)
        base = classify_trivial(d).trivial
        shuffled = classify_trivial(d, rng=random.Random(order_seed)).trivial
        assert shuffled == base


class TestSemiDisentangled:
    def test_crossing_free_cable(self):
        d = order_only("1L", "1R")
        assert is_semi_disentangled(d, 1)

    def test_square_cables_are_not(self):
        d = gen_square()
        assert not is_semi_disentangled(d, 1)
        assert not is_semi_disentangled(d, 2)

    def test_over_cable_of_single_mutual_crossing(self):
        d = gen_twist(1)
        assert is_semi_disentangled(d, 1)
        assert is_semi_disentangled(d, 2)

    def test_unknown_cable_errors(self):
        with pytest.raises(UnknownCableError):
            is_semi_disentangled(gen_twist(1), 7)

    def test_monotone_under_node_deletion(self):
        # removing the cable's own non-trivial crossings never knocks the
        # predicate back from true to false
        for seed in range(25):
            d = generate_random(seed * 31 + 5, 2, 6)
            cable = 1
            history = [is_semi_disentangled(d, cable)]
            while not history[-1]:
                trivial = classify_trivial(d).trivial
                candidates = [
                    (cid, seg)
                    for cid, c in d.crossings.items()
                    if cid not in trivial
                    for seg, depth in c.slots()
                    if depth < 0 and any(s.cable == cable for s in c.segments)
                ]
                if not candidates:
                    break
                cid, seg = candidates[0]
                target = NodeDeletionTarget(cid, d.crossings[cid].top(), seg)
                d = apply_node_deletion(d, target)
                history.append(is_semi_disentangled(d, cable))
            assert history == sorted(history)


class TestSelectEndpoints:
    def test_interleaved_order(self):
        sel = select_endpoints(order_only("1L", "2L", "2R", "1R"))
        assert sel.v_r == Endpoint(1, "R")
        assert sel.v_l == Endpoint(2, "L")

    def test_side_by_side_order(self):
        sel = select_endpoints(order_only("1L", "1R", "2L", "2R"))
        assert sel.v_r == Endpoint(2, "R")
        assert sel.v_l == Endpoint(1, "L")

    def test_three_cables_skip_own_cable(self):
        sel = select_endpoints(order_only("2L", "1L", "3L", "1R", "3R", "2R"))
        assert sel.v_r == Endpoint(2, "R")
        assert sel.v_l == Endpoint(1, "L")

    def test_single_cable_uses_its_own_ends(self):
        sel = select_endpoints(order_only("1L", "1R"))
        assert sel.v_r == Endpoint(1, "R")
        assert sel.v_l == Endpoint(1, "L")

    def test_empty_workspace_errors(self):
        with pytest.raises(EmptyWorkspaceError):
            select_endpoints(Diagram({}, ()))


class TestFirstNontrivialUndercrossing:
    def test_fully_reduced_returns_none(self):
        assert first_nontrivial_undercrossing(order_only("1L", "2L", "2R", "1R")) is None

    def test_overhand_first_undercrossing_from_right(self):
        d = single_cable_overhand()
        target = first_nontrivial_undercrossing(d)
        assert target is not None
        # traced from 1R the first visit is (3, -1)
        assert target.crossing == 3
        assert target.pull.cable == 1 and target.pull.visit == 5
        assert d.crossings[3].depth_of(target.hold) == 1

    def test_trivial_crossing_nearest_right_end_is_skipped(self):
        # square knot with a removable self-loop sitting right at v_r
        base = gen_square()
        visits = dict(base.cable_visits)
        visits[2] = visits[2] + (Visit(7, 1), Visit(7, -1))
        d = Diagram(visits, base.endpoint_order)
        assert validate(d).ok
        target = first_nontrivial_undercrossing(d)
        assert target.crossing == 2  # square core, not the loop
        assert 7 in classify_trivial(d).trivial

    def test_target_crossing_always_survives_reduction(self):
        for seed in range(40):
            d = generate_random(seed, 3, 7)
            target = find_node_deletion_target(d)
            if target is None:
                continue
            report = classify_trivial(d)
            assert target.crossing not in report.trivial
            assert target.hold != target.pull

    def test_fallback_finds_target_when_v_r_cable_is_all_over(self):
        # cable 1 runs on top everywhere and owns v_r, so its trace offers
        # no under-segment; the knot sits entirely on cable 2
        d = Diagram(
            {
                1: (Visit(1, 1), Visit(2, 1)),
                2: (
                    Visit(3, 1), Visit(4, -1), Visit(5, 1),
                    Visit(1, -1), Visit(2, -1),
                    Visit(3, -1), Visit(4, 1), Visit(5, -1),
                ),
            },
            (Endpoint(2, "L"), Endpoint(1, "L"), Endpoint(2, "R"), Endpoint(1, "R")),
        )
        assert validate(d).ok
        sel = select_endpoints(d)
        assert sel.v_r.cable == 1
        assert first_nontrivial_undercrossing(d) is None
        target = find_node_deletion_target(d)
        assert target is not None and target.pull.cable == 2
