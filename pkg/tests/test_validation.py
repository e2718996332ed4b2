"""
解析公式与蒙特卡罗经验值对比的测试
"""

import functools
from typing import Dict, List

import numpy as np
import pytest
from scipy import stats

from keyrate.channel import ChannelPoint
from keyrate.protocol import Measurement
from keyrate.rates import mutual_info_bob
from keyrate.units import InfoUnit
from simulation.validation import Z_FLAG_LIMIT, ValidationRow, validation_report

HET, HOM = Measurement.HETERODYNE, Measurement.HOMODYNE

COMMON_ROWS = [f'{name} ({label})' for label in ('Q', 'P')
               for name in ('V_A', 'V_B', 'V_E', 'Cov(B,E)', 'energy balance')]
REPORT_ROWS = {
    HET: COMMON_ROWS + [f'{name} ({label})' for label in ('Q', 'P')
                        for name in ('Var(Y)', 'V(Y|X)', 'V(E|Y)')] + ['I(X;Y)'],
    HOM: COMMON_ROWS + ['Var(Y)', 'V(Y|X)', 'V(E|Y) measured', 'V(E|Y) other', 'I(X;Y)'],
}
CALIBRATION_CASES = [(m, quantity) for m in (HET, HOM) for quantity in REPORT_ROWS[m]]


@functools.lru_cache(maxsize=None)
def _seeded_z_scores(measurement: Measurement) -> Dict[str, List[float]]:
    # 100 个独立种子、每个 20000 样本，z 分数应近似服从标准正态
    reports = [validation_report(ChannelPoint(0.5, 11.0), measurement, n=20_000, seed=seed)
               for seed in range(100)]
    return {quantity: [report.row(quantity).z_score for report in reports]
            for quantity in REPORT_ROWS[measurement]}


class TestValidationRow:

    def test_flag_threshold(self) -> None:
        assert not ValidationRow('x', 1.0, 1.1, 0.1, 1.0).flagged
        assert ValidationRow('x', 1.0, 2.0, 0.1, 10.0).flagged
        assert ValidationRow('x', 1.0, 0.0, 0.1, -Z_FLAG_LIMIT - 0.1).flagged

    def test_to_dict(self) -> None:
        row = ValidationRow('V_B (Q)', 6.0, 6.01, 0.01, 1.0).to_dict()
        assert list(row) == ['quantity', 'analytic', 'empirical', 'stderr', 'z_score', 'flagged']
        assert row['flagged'] is False


class TestValidationReport:

    @pytest.mark.parametrize("measurement", [HET, HOM])
    def test_vacuum_identity_channel_is_clean(self, measurement: Measurement) -> None:
        report = validation_report(ChannelPoint(1.0, 1.0), measurement, n=20_000, seed=1)
        assert report.flagged_rows == []
        assert report.row('I(X;Y)').empirical == 0.0
        assert report.row('I(X;Y)').z_score == 0.0

    def test_heterodyne_row_set(self) -> None:
        report = validation_report(ChannelPoint(0.5, 11.0), HET, n=5000, seed=2)
        assert [row.quantity for row in report.rows] == REPORT_ROWS[HET]
        assert report.batch is None

    def test_homodyne_row_set(self) -> None:
        report = validation_report(ChannelPoint(0.5, 11.0), HOM, n=5000, seed=2, keep_batch=True)
        assert [row.quantity for row in report.rows] == REPORT_ROWS[HOM]
        assert len(report.batch) == 5000

    def test_homodyne_eve_conditional_analytic_values(self) -> None:
        T, V_A = 0.3, 51.0
        report = validation_report(ChannelPoint(T, V_A), HOM, n=2000, seed=4)
        assert report.row('V(E|Y) measured').analytic == pytest.approx(
            1.0 / (T + (1.0 - T) / V_A), rel=1e-12)
        assert report.row('V(E|Y) other').analytic == pytest.approx(
            (1.0 - T) * V_A + T, rel=1e-12)

    def test_unknown_row(self) -> None:
        report = validation_report(ChannelPoint(0.5, 11.0), HOM, n=1000, seed=2)
        with pytest.raises(KeyError):
            report.row('V(Z)')

    def test_mutual_information_unit(self) -> None:
        point = ChannelPoint(0.5, 11.0)
        report = validation_report(point, HOM, n=1000, seed=5, unit=InfoUnit.BITS)
        assert report.row('I(X;Y)').analytic == pytest.approx(
            mutual_info_bob(HOM, point, InfoUnit.BITS))

    def test_reproducible(self) -> None:
        first = validation_report(ChannelPoint(0.3, 20.0), HET, n=3000, seed=99)
        second = validation_report(ChannelPoint(0.3, 20.0), HET, n=3000, seed=99)
        assert [row.empirical for row in first.rows] == [row.empirical for row in second.rows]


@pytest.mark.slow
class TestMillionSamples:

    @pytest.mark.parametrize("measurement", [HET, HOM])
    @pytest.mark.parametrize("T, V_A", [(0.5, 11.0), (0.9, 101.0), (0.1, 101.0), (0.3, 51.0)])
    def test_every_quantity_within_four_sigma(self, measurement: Measurement,
                                              T: float, V_A: float) -> None:
        report = validation_report(ChannelPoint(T, V_A), measurement, n=1_000_000, seed=20240601)
        assert [row.quantity for row in report.flagged_rows] == []
        for row in report.rows:
            assert abs(row.z_score) < Z_FLAG_LIMIT
        if measurement is HET:
            mi = report.row('I(X;Y)')
            assert mi.empirical == pytest.approx(mi.analytic, rel=0.02)

    def test_homodyne_eve_conditionals_off_symmetric_point(self) -> None:
        T, V_A = 0.3, 51.0
        report = validation_report(ChannelPoint(T, V_A), HOM, n=1_000_000, seed=20240601)
        measured, other = report.row('V(E|Y) measured'), report.row('V(E|Y) other')
        assert measured.empirical == pytest.approx(1.0 / (T + (1.0 - T) / V_A), rel=1e-2)
        assert other.empirical == pytest.approx((1.0 - T) * V_A + T, rel=1e-2)
        assert abs(measured.z_score) < Z_FLAG_LIMIT
        assert abs(other.z_score) < Z_FLAG_LIMIT

    @pytest.mark.parametrize("measurement, quantity", CALIBRATION_CASES,
                             ids=[f'{m.value}-{q}' for m, q in CALIBRATION_CASES])
    def test_standard_error_is_calibrated(self, measurement: Measurement, quantity: str) -> None:
        z_scores = np.asarray(_seeded_z_scores(measurement)[quantity])
        assert np.all(np.isfinite(z_scores))
        result = stats.kstest(z_scores, 'norm')
        assert result.pvalue > 0.01
