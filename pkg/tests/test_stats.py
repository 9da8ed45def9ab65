import math

import pytest
from hypothesis import given, strategies as st

from ftqec.stats import (CSV_COLUMNS, ConfigError, SweepConfig, SweepPoint, SweepResult,
                         binomial_sigma, ci95, fit_scaling_exponent, pseudo_threshold, run_sweep,
                         wilson_interval)


def test_binomial_sigma():
    assert binomial_sigma(50, 100) == pytest.approx(0.05)
    assert binomial_sigma(0, 0) == 0.0


def test_wilson_reference_values():
    # frozen from statsmodels proportion_confint(method="wilson")
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and hi == pytest.approx(0.0369935, abs=1e-7)
    lo, hi = wilson_interval(5, 50)
    assert (lo, hi) == (pytest.approx(0.0434758, abs=1e-7), pytest.approx(0.2136023, abs=1e-7))


def test_ci95_switches_to_wilson_for_small_counts():
    assert ci95(3, 1000) == wilson_interval(3, 1000)
    lo, hi = ci95(500, 1000)
    assert (lo, hi) == (pytest.approx(0.5 - 1.96 * math.sqrt(0.25 / 1000), abs=1e-4),
                        pytest.approx(0.5 + 1.96 * math.sqrt(0.25 / 1000), abs=1e-4))


@given(st.integers(1, 10_000), st.data())
def test_intervals_contain_the_estimate(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = ci95(k, n)
    assert 0.0 <= lo <= k / n <= hi <= 1.0


def _power_law(a, exponent, ps, n=10 ** 9):
    return [SweepPoint(p, n, n, round(a * p ** exponent * n), 0) for p in ps]


def test_threshold_of_exact_quadratic():
    pts = _power_law(100.0, 2, [0.004, 0.02])
    th = pseudo_threshold(pts)
    assert th.found and th.value == pytest.approx(0.01, rel=1e-6)
    assert th.lo <= th.value <= th.hi and th.bracket == (0.004, 0.02)


def test_threshold_absent():
    th = pseudo_threshold(_power_law(1.0, 2, [0.01, 0.02, 0.03]))
    assert not th.found and "above" in th.hint
    th = pseudo_threshold(_power_law(10.0, 0.5, [0.01, 0.02]))
    assert not th.found and "below" in th.hint


def test_exact_p_squared_slope():
    slope, err = fit_scaling_exponent(_power_law(50.0, 2, [1e-3, 2e-3, 4e-3, 8e-3]))
    assert slope == pytest.approx(2.0, abs=1e-4) and err < 0.01
    with pytest.raises(ValueError):
        fit_scaling_exponent(_power_law(50.0, 2, [1e-3, 2e-3]))


@pytest.mark.parametrize("kw, msg", [
    ({"protocol": "warp"}, "unknown protocol"),
    ({"shots": 0}, "shots"),
    ({"p_values": [0.02, 0.01]}, "increasing"),
    ({"p_values": [1.5]}, r"\(0, 1\)"),
    ({"p_values": []}, "no physical"),
    ({"policy": "f1s2"}, "EC protocols"),
    ({"decoder": "ml"}, "decoder"),
])
def test_config_validation(kw, msg):
    base = {"protocol": "enc-fb", "p_values": [0.01]}
    base.update(kw)
    with pytest.raises(ConfigError, match=msg):
        SweepConfig(**base)


def _small(**kw):
    base = dict(protocol="hybrid-fb", p_values=[1e-3, 3e-3], shots=30000, seed=4,
                batch_size=10000, policy="f1s2")
    base.update(kw)
    return SweepConfig(**base)


def test_csv_columns_and_seed_determinism():
    a = run_sweep(_small())
    b = run_sweep(_small())
    assert a.to_csv() == b.to_csv()
    header = a.to_csv().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    c = run_sweep(_small(seed=5))
    assert c.to_csv() != a.to_csv()


def test_parallel_matches_serial():
    assert run_sweep(_small(workers=2)).to_csv() == run_sweep(_small()).to_csv()


def test_json_round_trip(tmp_path):
    res = run_sweep(_small(format="json"))
    again = SweepResult.from_json(res.to_json())
    assert again.points == res.points and again.metadata == res.metadata
    assert again.config.digest() == res.config.digest()
    path = tmp_path / "r.csv"
    res.write(path, "csv")
    assert SweepResult.points_from_csv(path.read_text()) == res.points
    assert res.metadata["seed"] == 4 and res.metadata["batches_per_point"] == 3


def test_digest_ignores_output_location():
    assert _small(out="a.csv").digest() == _small(out="b.csv").digest()
    assert _small(shots=1000).digest() != _small().digest()
