import numpy as np
import pytest

from mmsim.metrics import (
    EmpiricalDistribution,
    LinkBudget,
    capacity,
    ecdf,
    median_gap,
    noise_power_dbm,
    percentile,
    percentile_ci,
    sinr,
    snr_linear,
    to_db,
)
from mmsim.precoding import EquivalentMatrix


def test_noise_floor_frozen_values():
    assert noise_power_dbm(1e9, 7.0) == pytest.approx(-77.0, abs=1e-12)
    assert noise_power_dbm(2e7, 7.0) == pytest.approx(-174.0 + 73.01029995663981 + 7.0,
                                                      abs=1e-10)


def test_snr_linear_frozen_value_and_outage():
    budget = LinkBudget(tx_power_dbm=30.0, noise_figure_db=7.0, bandwidth_hz=1e6,
                        path_loss_db=np.array([101.4, np.inf]))
    snrs = snr_linear(budget)
    # 30 - 101.4 + 107 = 35.6 dB
    assert snrs[0] == pytest.approx(10 ** 3.56, rel=1e-12)
    assert snrs[1] == 0.0


def test_link_budget_validation():
    with pytest.raises(ValueError):
        LinkBudget(30.0, 7.0, 0.0, np.array([100.0]))


def test_sinr_hand_example():
    h_bar = EquivalentMatrix(h_bar=np.array([[0.8, 0.1], [0.2, 0.9]], dtype=complex),
                             precoder_kind="mf")
    got = sinr(h_bar, np.array([10.0, 5.0]))
    np.testing.assert_allclose(got, [0.64 / (0.1 + 0.01), 0.81 / (0.2 + 0.04)], rtol=1e-12)


def test_sinr_zero_snr_gives_zero():
    h_bar = EquivalentMatrix(h_bar=np.eye(2, dtype=complex), precoder_kind="zf")
    got = sinr(h_bar, np.array([0.0, 4.0]))
    assert got[0] == 0.0
    assert got[1] == pytest.approx(4.0, rel=1e-12)


def test_sinr_requires_one_snr_per_ue():
    h_bar = EquivalentMatrix(h_bar=np.eye(3, dtype=complex), precoder_kind="zf")
    with pytest.raises(ValueError):
        sinr(h_bar, np.array([1.0, 2.0]))


def test_sinr_invariant_to_per_ue_phase():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=4))
    snrs = rng.uniform(1.0, 100.0, size=4)
    a = sinr(EquivalentMatrix(m, "mf"), snrs)
    b = sinr(EquivalentMatrix(phases[:, None] * m, "mf"), snrs)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_capacity_values():
    np.testing.assert_allclose(capacity([3.0, 0.0, 1.0]), [2.0, 0.0, 1.0], rtol=1e-15)


def test_to_db():
    np.testing.assert_allclose(to_db([100.0, 1.0]), [20.0, 0.0], atol=1e-12)
    assert to_db([0.0])[0] == -np.inf


def test_nearest_rank_percentile():
    dist = ecdf(list(range(10, 0, -1)))  # 1..10 after sorting
    assert percentile(dist, 50) == 5.0
    assert percentile(dist, 95) == 10.0
    assert percentile(dist, 5) == 1.0
    assert percentile(dist, 100) == 10.0
    assert percentile(dist, 0) == 1.0
    single = ecdf([42.0])
    assert percentile(single, 1) == 42.0
    assert percentile(single, 99) == 42.0
    with pytest.raises(ValueError):
        percentile(dist, 101)


def test_percentile_ci_brackets_the_median():
    rng = np.random.default_rng(1)
    dist = ecdf(rng.standard_normal(1000))
    lo, hi = percentile_ci(dist, 50)
    med = percentile(dist, 50)
    assert lo <= med <= hi
    assert lo < hi


def test_median_gap():
    a = ecdf([1.0, 5.0, 9.0])
    b = ecdf([0.0, 2.0, 4.0])
    assert median_gap(a, b) == pytest.approx(3.0)


def test_ecdf_sorts_flattens_and_counts():
    dist = ecdf(np.array([[3.0, 1.0], [2.0, 0.0]]))
    np.testing.assert_array_equal(dist.sorted_samples, [0.0, 1.0, 2.0, 3.0])
    assert dist.count == 4


def test_empty_distribution_rejected():
    with pytest.raises(ValueError):
        ecdf([])
    with pytest.raises(ValueError):
        EmpiricalDistribution(sorted_samples=np.array([]))
