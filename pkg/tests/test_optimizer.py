import itertools
import math
import random

import numpy as np
import pytest

from lumifuse.core import CaptureSet, FusionMethod, IlluminationPattern as P, Image
from lumifuse.errors import ConfigError, FusionArityError, UnknownPatternError
from lumifuse.metrics import evaluate
from lumifuse.optimizer import (GRID_0_1_5_15, SETTINGS_23_PLACEHOLDER, SearchConfig, best_sets,
                                effective_frame_rate, evaluate_combination, exhaustive_search, grid_subset,
                                greedy_sequence, intersect_best, parallel_map, read_csv, write_search_csv,
                                write_sequence_csv)

from oracles import (background_difference_naive, dwt_fuse_naive, rms_contrast_naive, sharpness_naive)

DWT = FusionMethod.dwt()
LAP = FusionMethod.laplacian()
METRICS = ("sharpness", "rms_contrast", "background_difference")


def test_presets():
    assert len(GRID_0_1_5_15) == 64 and len(set(GRID_0_1_5_15)) == 64
    assert {v for p in GRID_0_1_5_15 for v in p} == {0, 1, 5, 15}
    assert len(SETTINGS_23_PLACEHOLDER) == 23 and len(set(SETTINGS_23_PLACEHOLDER)) == 23
    sub = grid_subset(12)
    assert len(sub) == 12 and sub[0] == P(0, 0, 0) and sub[-1] == P(15, 15, 15)


def test_single_pattern_is_raw(small_set):
    p = P(15, 15, 15)
    assert evaluate_combination(small_set, [p], DWT) == evaluate(small_set.captures[p], small_set.backgrounds[p])


def test_duplicate_pattern_is_idempotent(small_set):
    p = P(0, 15, 0)
    raw = evaluate_combination(small_set, [p], DWT)
    dup = evaluate_combination(small_set, [p, p], DWT)
    for m in METRICS:
        assert dup[m] == pytest.approx(raw[m], abs=1e-5)


def test_pair_matches_straight_line_oracle(small_set):
    a, b = P(15, 15, 15), P(0, 15, 0)
    caps = [small_set.captures[a].pixels, small_set.captures[b].pixels]
    bgs = [small_set.backgrounds[a].pixels, small_set.backgrounds[b].pixels]
    fused = [dwt_fuse_naive([c[:, :, k] for c in caps], 2) for k in range(3)]
    fused_bg = [dwt_fuse_naive([c[:, :, k] for c in bgs], 2) for k in range(3)]
    img, bg = np.stack(fused, 2), np.stack(fused_bg, 2)
    oracle = (sharpness_naive(img), rms_contrast_naive(img), background_difference_naive(img, bg))
    got = evaluate_combination(small_set, [a, b], DWT)
    assert got.sharpness == pytest.approx(oracle[0], abs=1e-9)
    assert got.rms_contrast == pytest.approx(oracle[1], abs=1e-9)
    assert got.background_difference == pytest.approx(oracle[2], abs=1e-9)
    # frozen from the oracle run above
    assert got.sharpness == pytest.approx(PAIR_FIXTURE[0], rel=1e-6)
    assert got.rms_contrast == pytest.approx(PAIR_FIXTURE[1], rel=1e-6)
    assert got.background_difference == pytest.approx(PAIR_FIXTURE[2], rel=1e-6)


PAIR_FIXTURE = (0.025488957172804402, 0.09320899718946236, 0.0508368147101656)


def test_evaluate_combination_errors(small_set):
    with pytest.raises(UnknownPatternError):
        evaluate_combination(small_set, [P(1, 1, 1)], DWT)
    with pytest.raises(FusionArityError):
        evaluate_combination(small_set, [P(15, 15, 15), P(0, 15, 0)], FusionMethod.channel_sum())


def test_channel_sum_triplet(small_set):
    r = evaluate_combination(small_set, [P(15, 0, 0), P(0, 15, 0), P(0, 0, 15)], FusionMethod.channel_sum())
    assert r.sharpness > 0


def test_single_entry(small_set):
    res = exhaustive_search(small_set, SearchConfig([P(15, 15, 15)], [DWT], 1, "sharpness"))
    assert len(res) == 1 and res[0].rank == 1


def test_entry_count(small_set):
    pats = [P(15, 15, 15), P(0, 15, 0), P(15, 0, 0)]
    res = exhaustive_search(small_set, SearchConfig(pats, [DWT, LAP], 2, "sharpness"))
    assert len(res) == math.comb(3, 1) * 2 + math.comb(3, 2) * 2 == 12
    assert [r.rank for r in res] == list(range(1, 13))


def test_fixed_arity_methods_skip_other_sizes(small_set):
    pats = [P(15, 0, 0), P(0, 15, 0), P(0, 0, 15), P(15, 15, 15)]
    res = exhaustive_search(small_set, SearchConfig(pats, [FusionMethod.brovey()], 3, "contrast"))
    assert sorted({len(r.patterns) for r in res}) == [1, 3]
    assert len(res) == 4 + 4


def _oracle_top(cs, patterns, methods, max_size, metric):
    """Enumerate subsets via bitmasks and keep the best by (value desc, size, tuple, method index)."""
    pats = sorted(patterns)
    best = None
    for mask in range(1, 2 ** len(pats)):
        combo = tuple(p for i, p in enumerate(pats) if mask >> i & 1)
        if len(combo) > max_size:
            continue
        for mi, m in enumerate(methods):
            if len(combo) > 1 and not m.accepts(len(combo)):
                continue
            value = evaluate_combination(cs, combo, m)[metric]
            key = (-value, len(combo), combo, mi)
            if best is None or key < best[0]:
                best = (key, combo, m, value)
    return best[1], best[2], best[3]


@pytest.mark.parametrize("metric", ["sharpness", "contrast", "background_diff"])
def test_top_entry_matches_enumeration(small_set, metric):
    pats = small_set.patterns[:4]
    cfg = SearchConfig(pats, [DWT, LAP], 3, metric)
    top = exhaustive_search(small_set, cfg)[0]
    combo, method, value = _oracle_top(small_set, pats, [DWT, LAP], 3, metric)
    assert (top.patterns, top.method) == (combo, method)
    assert top.report[metric] == value


def test_ranking_invariant_under_pattern_permutation(small_set):
    pats = small_set.patterns
    ref = exhaustive_search(small_set, SearchConfig(pats, [DWT], 2, "sharpness"))
    shuffled = list(pats)
    random.Random(4).shuffle(shuffled)
    got = exhaustive_search(small_set, SearchConfig(shuffled, [DWT], 2, "sharpness"))
    assert [(r.patterns, r.report) for r in got] == [(r.patterns, r.report) for r in ref]


def test_intersection_mode_leads_with_common_pairs(small_set):
    cfg = SearchConfig(small_set.patterns, [DWT, LAP], 2, "intersection", top_k=8)
    res = exhaustive_search(small_set, cfg)
    common = intersect_best(best_sets(res, cfg.methods, 8))
    assert {r.key for r in res[:len(common)]} == common


def test_intersect_best():
    s = {("a",), ("b",)}
    assert intersect_best({"x": s, "y": s, "z": s}) == s
    assert intersect_best({"x": {1}, "y": {2}}) == set()
    with pytest.raises(ValueError):
        intersect_best({})


def test_intersection_against_manual_sets():
    per_object = {"o1": {1, 2, 3, 4}, "o2": {2, 3, 5}, "o3": {3, 2, 9}}
    manual = [x for x in per_object["o1"] if all(x in s for s in per_object.values())]
    assert intersect_best(per_object) == set(manual) == {2, 3}


def test_config_validation():
    with pytest.raises(ConfigError):
        SearchConfig([], [DWT])
    with pytest.raises(ConfigError):
        SearchConfig([P(1, 1, 1)], [])
    with pytest.raises(ConfigError):
        SearchConfig([P(1, 1, 1)], [DWT], 2)
    with pytest.raises(ConfigError):
        SearchConfig([P(1, 1, 1)], [DWT], 1, "loudness")


def test_greedy_length_one_is_best_raw(small_set):
    seq = greedy_sequence(small_set, small_set.patterns, DWT, "sharpness", 1)
    best = max(small_set.patterns, key=lambda p: (evaluate_combination(small_set, [p], DWT).sharpness,
                                                  [-v for v in p]))
    assert seq.sequence == [best] and seq.best_n == 1


def test_greedy_identical_captures():
    img = Image.constant(16, 16, 0.4, channels=3)
    pats = [P(5, 5, 5), P(0, 1, 0), P(15, 0, 0)]
    cs = CaptureSet("same", {p: img for p in pats}, {p: img for p in pats})
    seq = greedy_sequence(cs, pats, DWT, "contrast", 3)
    assert seq.sequence == sorted(pats)
    assert len(set(seq.scores)) == 1 and seq.best_n == 1


def _greedy_oracle(cs, patterns, method, metric, max_len):
    chosen = []
    for _ in range(max_len):
        scored = []
        for p in sorted(set(patterns) - set(chosen)):
            scored.append((-evaluate_combination(cs, chosen + [p], method)[metric], p))
        chosen.append(min(scored)[1])
    return chosen


@pytest.mark.parametrize("metric", ["sharpness", "rms_contrast", "background_difference"])
def test_greedy_matches_stepwise_oracle(small_set, metric):
    seq = greedy_sequence(small_set, small_set.patterns, DWT, metric, 3)
    assert seq.sequence == _greedy_oracle(small_set, small_set.patterns, DWT, metric, 3)
    for m, rep in enumerate(seq.reports, start=1):
        assert rep == evaluate_combination(small_set, seq.sequence[:m], DWT)
    assert 1 <= seq.best_n <= 3


def test_greedy_step_one_equals_exhaustive_top_single(small_set):
    for metric, mode in [("sharpness", "sharpness"), ("rms_contrast", "contrast")]:
        seq = greedy_sequence(small_set, small_set.patterns, DWT, metric, 1)
        res = exhaustive_search(small_set, SearchConfig(small_set.patterns, [DWT], 1, mode))
        assert res[0].patterns == (seq.sequence[0],)


def test_greedy_never_beats_exhaustive(small_set):
    for metric, mode in [("sharpness", "sharpness"), ("background_difference", "background_diff")]:
        seq = greedy_sequence(small_set, small_set.patterns, DWT, metric, 3)
        res = exhaustive_search(small_set, SearchConfig(small_set.patterns, [DWT], 3, mode))
        assert max(seq.scores) <= res[0].report[metric] + 1e-12


def test_greedy_repeats_and_errors(small_set):
    seq = greedy_sequence(small_set, small_set.patterns[:2], DWT, "sharpness", 4, allow_repeats=True)
    assert len(seq.sequence) == 4
    with pytest.raises(ConfigError):
        greedy_sequence(small_set, [], DWT, "sharpness", 1)
    with pytest.raises(ConfigError):
        greedy_sequence(small_set, small_set.patterns[:2], DWT, "sharpness", 3)


def test_frame_rate():
    assert effective_frame_rate(3, 0.29) == pytest.approx(1 / 0.87)
    assert round(effective_frame_rate(3, 0.29), 1) == 1.1
    assert effective_frame_rate(1, 1.0) == 1.0
    assert effective_frame_rate(2, 0.25) == 2.0
    for bad in [(0, 1.0), (1, 0.0), (2, -0.1)]:
        with pytest.raises(ValueError):
            effective_frame_rate(*bad)


def test_parallel_map_is_order_preserving(monkeypatch):
    monkeypatch.setenv("LUMIFUSE_THREADS", "4")
    assert parallel_map(lambda x: x * x, list(range(50))) == [x * x for x in range(50)]
    monkeypatch.setenv("LUMIFUSE_THREADS", "nope")
    with pytest.raises(ConfigError):
        parallel_map(abs, [1, 2])


def test_thread_count_does_not_change_results(small_set, monkeypatch):
    cfg = SearchConfig(small_set.patterns, [DWT], 2, "intersection")
    monkeypatch.setenv("LUMIFUSE_THREADS", "1")
    a = exhaustive_search(small_set, cfg)
    monkeypatch.setenv("LUMIFUSE_THREADS", "3")
    b = exhaustive_search(small_set, cfg)
    assert a == b


def test_csv_roundtrip_preserves_ranking(small_set, tmp_path):
    res = exhaustive_search(small_set, SearchConfig(small_set.patterns, [DWT], 2, "sharpness"))
    write_search_csv([("obj", r) for r in res], tmp_path / "r.csv")
    rows = read_csv(tmp_path / "r.csv")
    assert list(rows[0]) == ["object_id", "patterns", "method", "sharpness", "rms_contrast", "background_diff",
                             "rank"]
    reranked = sorted(rows, key=lambda r: (-float(r["sharpness"]), len(r["patterns"].split(";")),
                                           [tuple(map(int, p.split(","))) for p in r["patterns"].split(";")]))
    assert [int(r["rank"]) for r in reranked] == list(range(1, len(res) + 1))
    assert float(rows[0]["sharpness"]) == res[0].report.sharpness

    seq = greedy_sequence(small_set, small_set.patterns, DWT, "sharpness", 3)
    write_sequence_csv([("obj", seq)], tmp_path / "g.csv")
    rows = read_csv(tmp_path / "g.csv")
    assert [float(r["score"]) for r in rows] == seq.scores
