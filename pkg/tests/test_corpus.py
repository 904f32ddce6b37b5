"""Generators, the golden corpus files, and the exhaustive oracle."""

import random
from pathlib import Path

import pytest

from cablegraph import (
    Budget,
    KnotSpec,
    Outcome,
    UnknownKnotError,
    bfs_solve,
    default_corpus_dir,
    generate,
    generate_random,
    gen_overhand2,
    gen_square3,
    gen_twist,
    golden_specs,
    is_semi_disentangled,
    load_golden_corpus,
    potential,
    replay_witness,
    run,
    serialize,
    validate,
    write_golden_corpus,
)


class TestGenerate:
    def test_twist1_minimal(self):
        d = gen_twist(1)
        assert len(d.live_cables) == 2
        assert len(d.crossings) == 1
        segs = d.crossings[1].segments
        assert {s.cable for s in segs} == {1, 2}  # inter-cable

    def test_overhand2_neither_cable_semi_disentangled(self):
        d = gen_overhand2()
        assert not is_semi_disentangled(d, 1)
        assert not is_semi_disentangled(d, 2)

    def test_square3_shape(self):
        d = gen_square3()
        assert len(d.live_cables) == 3
        assert len(d.endpoint_order) == 6
        assert validate(d).ok

    def test_unknown_name_rejected(self):
        with pytest.raises(UnknownKnotError):
            KnotSpec("nosuch")

    def test_bad_params_rejected(self):
        with pytest.raises(ValueError):
            gen_twist(0)
        with pytest.raises(ValueError):
            generate(KnotSpec("twist", {"slack": 0}))  # missing n

    def test_tier_mismatch_rejected(self):
        with pytest.raises(ValueError):
            KnotSpec("square", tier=3)

    def test_generate_is_deterministic(self):
        for spec in golden_specs():
            assert serialize(generate(spec)) == serialize(generate(spec))

    def test_slack_adds_exactly_trivial_loops(self):
        for spec in golden_specs():
            if spec.param("slack", 0) == 0:
                continue
            core = generate(KnotSpec(spec.name, dict(spec.params) | {"slack": 0}))
            padded = generate(spec)
            extra = set(padded.crossings) - set(core.crossings)
            assert len(extra) == spec.param("slack")
            for cid in extra:
                assert padded.crossings[cid].arity == 2


class TestGenerateRandom:
    def test_single_cable_no_crossings(self):
        d = generate_random(5, 1, 0)
        assert d.live_cables == (1,)
        assert potential(d) == 0

    def test_same_seed_same_serialization(self):
        assert serialize(generate_random(7, 3, 8)) == serialize(generate_random(7, 3, 8))

    def test_three_cables_eight_crossings_all_k2(self):
        d = generate_random(7, 3, 8)
        assert all(c.arity == 2 for c in d.crossings.values())
        assert potential(d) >= 8

    def test_outputs_always_validate(self):
        for seed in range(60):
            rng = random.Random(seed)
            d = generate_random(seed, rng.randint(1, 4), rng.randint(0, 12))
            assert validate(d).ok

    def test_argument_checks(self):
        with pytest.raises(ValueError):
            generate_random(0, 0, 1)
        with pytest.raises(ValueError):
            generate_random(0, 2, -1)


class TestOracle:
    def test_empty_diagram_reachable_in_zero(self):
        from cablegraph import Diagram

        res = bfs_solve(Diagram({}, ()))
        assert res.reachable is True
        assert res.min_moves == 0

    def test_single_mutual_crossing_is_extraction_only(self):
        res = bfs_solve(gen_twist(1))
        assert res.reachable is True
        assert res.min_moves == 2
        assert all(a.kind.value != "NodeDeletion" for a in res.witness)

    def test_witnesses_replay_to_empty_workspace(self):
        for seed in range(25):
            d = generate_random(seed, 2, 5)
            res = bfs_solve(d)
            assert res.reachable is True
            end = replay_witness(d, res.witness)
            assert end.live_cables == ()
            assert potential(end) == 0

    def test_small_random_diagrams_always_reachable(self):
        for seed in range(60):
            rng = random.Random(seed)
            d = generate_random(seed, rng.choice([2, 3]), rng.randint(0, 5))
            assert bfs_solve(d).reachable is True

    def test_depth_exhaustion_is_unknown_not_false(self):
        res = bfs_solve(gen_square3(), max_depth=1)
        assert res.reachable is None
        assert res.min_moves is None

    def test_planner_never_beats_oracle_on_small_corpus(self):
        for spec in golden_specs():
            d = generate(spec)
            if len(d.crossings) > 8:
                continue
            res = bfs_solve(d, max_depth=12)
            assert res.reachable is True, spec.file_stem()
            trace = run(d, Budget(30))
            assert trace.outcome is Outcome.SUCCESS
            assert trace.disentangling_actions >= res.min_moves, spec.file_stem()


class TestGoldenCorpus:
    def test_shipped_files_match_regeneration(self, tmp_path):
        write_golden_corpus(tmp_path)
        shipped = default_corpus_dir()
        fresh = sorted(p.name for p in tmp_path.glob("*.mcd"))
        have = sorted(p.name for p in Path(shipped).glob("*.mcd"))
        assert fresh == have
        for name in fresh:
            assert (tmp_path / name).read_text() == (Path(shipped) / name).read_text()

    def test_load_yields_one_entry_per_spec(self):
        entries = load_golden_corpus()
        assert len(entries) == len(golden_specs())
        assert {e.tier for e in entries} == {1, 2, 3}
        for e in entries:
            assert validate(e.diagram).ok

    def test_env_override(self, tmp_path, monkeypatch):
        write_golden_corpus(tmp_path)
        monkeypatch.setenv("CABLEGRAPH_CORPUS", str(tmp_path))
        assert default_corpus_dir() == tmp_path
        assert len(load_golden_corpus()) == len(golden_specs())

    def test_missing_directory_errors(self, tmp_path):
        from cablegraph import CableGraphError

        with pytest.raises(CableGraphError):
            load_golden_corpus(tmp_path / "nope")
