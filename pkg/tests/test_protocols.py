import numpy as np
import pytest

from ftqec.code import LOOKUP_ARRAY
from ftqec.noise import NoiseParams
from ftqec.protocols import (ENCODING_PROTOCOLS, FLAG_SET_1, FLAG_SET_2, PROTOCOLS, ShotBatch,
                             decode, decode_steane, f1s2_table, pattern_breakdown,
                             pattern_corrections, policy, run_bare, run_hybrid_fb,
                             run_steane_hybrid, simulate, table_pattern, use_gotorl)
from ftqec.circuits import load_gotorl

import golden


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize("protocol", PROTOCOLS)
def test_noiseless_runs_never_fail(protocol):
    pol = "s0Z" if protocol == "hybrid-steane" else "trivial"
    out = simulate(protocol, NoiseParams(0.0), 3000, rng(), pol=pol)
    accepted, fe, ft = out.counts()
    assert accepted == 3000 and fe == 0 and ft == 0


def test_unknown_names():
    with pytest.raises(ValueError):
        simulate("teleport", NoiseParams(0.01), 10, rng())
    with pytest.raises(ValueError):
        policy("everything")
    with pytest.raises(ValueError):
        simulate("enc-gotorl-fb", NoiseParams(0.01), 10, rng(), pol="set1")


def test_flag_sets():
    assert len(FLAG_SET_1) == 5 and len(FLAG_SET_2) == 10
    assert FLAG_SET_1 < FLAG_SET_2
    published = {table_pattern(p) for p in golden.TABLE_III}
    from ftqec.code import str_to_bits
    assert {str_to_bits(p) for p in published} == set(FLAG_SET_2)
    starred = {str_to_bits(table_pattern(p)) for p in golden.TABLE_III_STARRED}
    assert set(pattern_corrections()) == starred


def test_table_pattern_is_an_involution():
    for p in golden.TABLE_III:
        assert table_pattern(table_pattern(p)) == p
    assert table_pattern("00 00 01") == "00 00 10"
    assert table_pattern("11 00 00") == "11 00 00"


def test_policy_corrections():
    set2 = policy("set2")
    f0 = np.array([0, 3, 4, 16, 5])
    assert list(set2.accepts(f0)) == [True, True, True, True, False]
    # X3 for both S1 double flag and lone first S2 flag, X6 for the lone S3 flag
    assert list(set2.correction_masks(f0)) == [0, 4, 4, 32, 0]
    assert not policy("trivial").correction_masks(f0).any()
    assert policy("none").accepts(f0).all()


def test_f1s2_array():
    arr = f1s2_table()
    assert arr.shape == (64, 8)
    assert list(arr[0]) == list(LOOKUP_ARRAY)
    keyed = [(f, s) for f in range(1, 64) for s in range(8) if arr[f, s] >= 0]
    assert len(keyed) == 21


def test_pattern_breakdown_partitions_shots():
    out = pattern_breakdown(NoiseParams(0.02), 20000, rng(2))
    assert sum(n for n, _ in out.values()) == 20000
    assert all(0 <= k <= n for n, k in out.values())


def test_same_seed_same_outcome():
    a = simulate("hybrid-fb", NoiseParams(2e-3), 20000, rng(5))
    b = simulate("hybrid-fb", NoiseParams(2e-3), 20000, rng(5))
    assert a.counts() == b.counts()
    assert np.array_equal(a.recovery_x, b.recovery_x)


def test_bare_cycle_bookkeeping():
    rec = run_bare("fb", NoiseParams(3e-3), 20000, rng(3))
    clean = rec.encoded & ~rec.terminated
    # shots without a second round take s1 as their s2
    assert np.array_equal(rec.s2X[clean], rec.s1X[clean])
    assert np.array_equal(rec.s2Z[clean], rec.s1Z[clean])
    # rejected encodings never enter the EC cycle
    assert not rec.terminated[~rec.encoded].any()
    i = int(np.flatnonzero(rec.terminated)[0])
    r = rec.record(i)
    assert r.terminated_early and len(r.f1[0]) == 8 and len(r.b0[0]) == 7


def test_perfect_encoding_never_terminates_noiselessly():
    rec = run_bare("fb", NoiseParams(0.0), 2000, rng(), perfect_encoding=True)
    assert not rec.terminated.any() and rec.encoded.all()


def test_hybrid_reuses_encoder_x_checks():
    rec = run_hybrid_fb(NoiseParams(5e-3), 20000, rng(4))
    assert np.array_equal(rec.s1X, rec.s0X) and np.array_equal(rec.f1X, rec.f0X)
    # a flagged encoding goes straight to the second round
    assert rec.terminated[rec.f0X != 0].all()


def test_trivial_flags_always_decodable_with_f1s2():
    rec = run_hybrid_fb(NoiseParams(5e-3), 20000, rng(6))
    f1s2 = decode(rec, "f1s2")
    s2 = decode(rec, "s2")
    assert not (s2.accepted & ~f1s2.accepted).any()
    assert decode(rec, "s2", post_select=False).accepted.all()
    with pytest.raises(ValueError):
        decode(rec, "magic")


def test_steane_post_selection_subset():
    rec = run_steane_hybrid(NoiseParams(2e-3), 20000, rng(7))
    ps, raw = decode_steane(rec, True), decode_steane(rec, False)
    assert not (ps.accepted & ~raw.accepted).any()
    assert (rec.s0Z[ps.accepted] == 0).all()


def test_shot_batch_defaults():
    b = ShotBatch(4)
    assert b.encoded.all() and not b.terminated.any() and b.f1.tolist() == [0, 0, 0, 0]


def test_gotorl_override_round_trip():
    use_gotorl(load_gotorl())
    try:
        out = simulate("enc-gotorl-fb", NoiseParams(0.0), 100, rng())
        assert out.counts() == (100, 0, 0)
    finally:
        use_gotorl(None)


@pytest.mark.parametrize("protocol", ENCODING_PROTOCOLS)
def test_encoding_rates_ordered_by_post_selection(protocol):
    ps = simulate(protocol, NoiseParams(0.02), 50000, rng(8), pol="trivial")
    raw = simulate(protocol, NoiseParams(0.02), 50000, rng(8), pol="none")
    a, _, f = ps.counts()
    a2, _, f2 = raw.counts()
    assert a < a2 and f / a < f2 / a2
