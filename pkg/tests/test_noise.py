import numpy as np
import pytest

from ftqec.circuit import CircuitBuilder
from ftqec.frame import FrameBatch, run
from ftqec.noise import (NoiseParams, bernoulli_positions, enumerate_fault_sites,
                         expand_swaps, expected_fault_count, fault_pauli, for_noise, sample_noise)

SHOTS = 200_000
P = 0.3


def _one(op):
    b = CircuitBuilder()
    b.qubit(0, "data")
    b.qubit(1, "data")
    op(b)
    return b.build()


def _within(count, expected, shots=SHOTS):
    sigma = np.sqrt(expected * (1 - expected) / shots)
    return abs(count / shots - expected) < 5 * sigma


def test_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(-0.1)
    with pytest.raises(ValueError):
        NoiseParams(1.0)
    with pytest.raises(ValueError):
        NoiseParams(0.1, "teleported")
    assert NoiseParams(0.3).p_meas == pytest.approx(0.2)


def test_two_qubit_gate_draws_fifteen_paulis_uniformly():
    c = _one(lambda b: b.cx(0, 1))
    fr = FrameBatch(2, SHOTS, np.random.default_rng(11))
    run(fr, c, NoiseParams(P))
    code = fr.x[0] * 1 + fr.z[0] * 2 + fr.x[1] * 4 + fr.z[1] * 8
    counts = np.bincount(code, minlength=16)
    assert _within(counts[0], 1 - P)
    assert all(_within(k, P / 15) for k in counts[1:])


def test_single_qubit_gate_draws_three_paulis():
    c = _one(lambda b: b.h(0))
    fr = FrameBatch(2, SHOTS, np.random.default_rng(12))
    run(fr, c, NoiseParams(P))
    code = fr.x[0] * 1 + fr.z[0] * 2
    counts = np.bincount(code, minlength=4)
    assert all(_within(k, P / 3) for k in counts[1:])


def test_preparation_flips_with_x_or_y():
    c = _one(lambda b: b.prep_z(0))
    fr = FrameBatch(2, SHOTS, np.random.default_rng(13), randomize=False)
    run(fr, c, NoiseParams(P))
    assert _within(fr.x[0].sum(), 2 * P / 3)
    # half of those carry a Z as well (Y errors)
    assert _within((fr.x[0] & fr.z[0]).sum(), P / 3)


def test_measurement_flip_rate():
    c = _one(lambda b: b.meas_z(0, "m[0]"))
    fr = FrameBatch(2, SHOTS, np.random.default_rng(14))
    flips = run(fr, c, NoiseParams(P))
    assert _within(flips["m[0]"].sum(), 2 * P / 3)
    assert not fr.x.any()


def test_bernoulli_positions_rate():
    rng = np.random.default_rng(5)
    for p in (1e-4, 0.01, 0.2):
        hits = bernoulli_positions(rng, 2_000_000, p)
        assert np.all(np.diff(hits) > 0) and hits[-1] < 2_000_000
        assert _within(hits.size, p, 2_000_000)


def test_swap_accounting():
    c = _one(lambda b: b.swap(0, 1))
    assert [g.kind for g in expand_swaps(c).gates] == ["CNOT"] * 3
    assert for_noise(c, NoiseParams(0.1, "atomic")) is c
    assert expected_fault_count(for_noise(c, NoiseParams(0.1)), 0.1) == pytest.approx(0.3)


def test_fault_site_enumeration():
    c = _one(lambda b: (b.prep_z(0), b.h(0), b.cx(0, 1), b.meas_z(1, "m[0]")))
    sites = enumerate_fault_sites(c)
    assert [len(labels) for _, labels in sites] == [2, 3, 15, 1]
    site, labels = sites[2]
    assert fault_pauli(site, "XZ", 2).to_label() == "XZ"
    assert fault_pauli(sites[3][0], "flip", 2) is None


def test_explicit_sampler_mean():
    c = _one(lambda b: (b.prep_z(0), b.h(0), b.cx(0, 1), b.meas_z(1, "m[0]")))
    rng = np.random.default_rng(9)
    n = np.mean([len(sample_noise(c, NoiseParams(0.1), rng)) for _ in range(20000)])
    assert n == pytest.approx(expected_fault_count(c, 0.1), rel=0.05)
