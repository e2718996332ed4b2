"""
大调制极限、强损耗极限与误差量级的测试
"""

import math

import numpy as np
import pytest

from cli.sweep import fit_loglog_slope, run_compare
from keyrate.asymptotic import (STRONG_LOSS_LIMIT, StrongLossWarning, key_rate_asymptotic,
                                key_rate_strong_loss, predicted_error_scale)
from keyrate.channel import ChannelPoint
from keyrate.errors import DomainError, UnsupportedSpecError
from keyrate.protocol import Direction, Measurement, ProtocolSpec
from keyrate.rates import key_rate
from keyrate.units import InfoUnit

COLL, HET, HOM = Measurement.COLLECTIVE, Measurement.HETERODYNE, Measurement.HOMODYNE
DIRECT, REVERSE, UNCOND = Direction.DIRECT, Direction.REVERSE, Direction.UNCONDITIONAL


class TestKeyRateAsymptotic:

    def test_direct_collective_at_080_is_two_bits(self) -> None:
        value = key_rate_asymptotic(ProtocolSpec(COLL, DIRECT), 0.8, InfoUnit.BITS)
        assert value == pytest.approx(2.0, abs=1e-12)

    def test_direct_heterodyne_root(self) -> None:
        T = math.e / (math.e + 1.0)
        assert key_rate_asymptotic(ProtocolSpec(HET, DIRECT), T) == pytest.approx(0.0, abs=1e-12)

    def test_unconditional_homodyne_root(self) -> None:
        T = math.e ** 2 / (math.e ** 2 + 4.0)
        assert key_rate_asymptotic(ProtocolSpec(HOM, UNCOND), T) == pytest.approx(0.0, abs=1e-12)

    def test_reverse_forms(self) -> None:
        T = 0.4
        loss = math.log(1.0 / (1.0 - T))
        assert key_rate_asymptotic(ProtocolSpec(COLL, REVERSE), T) == pytest.approx(loss)
        assert key_rate_asymptotic(ProtocolSpec(HET, REVERSE), T) == pytest.approx(loss / T - 1.0)
        assert key_rate_asymptotic(ProtocolSpec(HOM, REVERSE), T) == pytest.approx(loss / 2.0)

    def test_unconditional_matches_direct_for_collective_and_heterodyne(self) -> None:
        for m in (COLL, HET):
            assert (key_rate_asymptotic(ProtocolSpec(m, UNCOND), 0.77)
                    == key_rate_asymptotic(ProtocolSpec(m, DIRECT), 0.77))

    @pytest.mark.parametrize("T", [0.0, 1.0, -0.2, 1.3])
    def test_closed_interval_endpoints_raise(self, T: float) -> None:
        with pytest.raises(DomainError):
            key_rate_asymptotic(ProtocolSpec(COLL, DIRECT), T)


class TestStrongLoss:

    def test_collective(self) -> None:
        assert key_rate_strong_loss(ProtocolSpec(COLL, REVERSE), 0.01) == pytest.approx(0.01)

    def test_heterodyne_is_half_of_collective(self) -> None:
        assert key_rate_strong_loss(ProtocolSpec(HET, REVERSE), 0.01) == pytest.approx(0.005)
        assert (key_rate_strong_loss(ProtocolSpec(HOM, REVERSE), 0.01)
                == key_rate_strong_loss(ProtocolSpec(HET, REVERSE), 0.01))

    @pytest.mark.parametrize("direction", [DIRECT, UNCOND])
    def test_only_reverse_is_supported(self, direction: Direction) -> None:
        with pytest.raises(UnsupportedSpecError):
            key_rate_strong_loss(ProtocolSpec(COLL, direction), 0.01)

    def test_warns_outside_strong_loss_regime(self) -> None:
        with pytest.warns(StrongLossWarning):
            key_rate_strong_loss(ProtocolSpec(COLL, REVERSE), 2 * STRONG_LOSS_LIMIT)

    @pytest.mark.parametrize("m", list(Measurement))
    def test_exact_rates_follow_strong_loss_limit(self, m: Measurement) -> None:
        T, V_A = 1e-3, 1e7
        spec = ProtocolSpec(m, REVERSE)
        exact = key_rate(spec, ChannelPoint(T, V_A)).rate
        assert abs(exact / key_rate_strong_loss(spec, T) - 1.0) < 0.02


class TestErrorScale:

    def test_collective_scale(self) -> None:
        scale = predicted_error_scale(ProtocolSpec(COLL, DIRECT), 0.25, 100.0)
        assert scale == pytest.approx((4.0 + 1.0 / 0.75) / 100.0)

    def test_direct_homodyne_scale_is_square_root(self) -> None:
        scale = predicted_error_scale(ProtocolSpec(HOM, DIRECT), 0.5, 1e4)
        assert scale == pytest.approx(2.0 * math.sqrt(2.0) / 100.0)

    def test_nonpositive_va_raises(self) -> None:
        with pytest.raises(DomainError):
            predicted_error_scale(ProtocolSpec(HOM, DIRECT), 0.5, 0.0)


class TestAsymptoticConsistency:

    TRANSMISSIONS = (0.3, 0.7)
    VAS = (1e4, 1e5, 1e6, 1e7)

    @pytest.mark.parametrize("spec", ProtocolSpec.all_specs(), ids=str)
    def test_residual_decays_as_one_over_va(self, spec: ProtocolSpec) -> None:
        rows, summary = run_compare(spec, self.TRANSMISSIONS, self.VAS, InfoUnit.NATS)
        assert math.isfinite(summary.fitted_constant)
        assert set(summary.slopes) == set(self.TRANSMISSIONS)
        for slope in summary.slopes.values():
            assert slope == pytest.approx(-1.0, abs=0.1)

    @pytest.mark.parametrize("direction", list(Direction))
    def test_homodyne_residual_inside_square_root_envelope(self, direction: Direction) -> None:
        rows, _ = run_compare(ProtocolSpec(HOM, direction), (0.3,), self.VAS, InfoUnit.NATS)
        scaled = [row.scaled_error for row in rows]
        assert max(scaled) <= 1.0
        assert scaled[-1] < scaled[0]

    def test_reverse_collective_shrinks_tenfold_per_decade(self) -> None:
        rows, _ = run_compare(ProtocolSpec(COLL, REVERSE), (0.5,), (1e3, 1e4, 1e5))
        magnitudes = [abs(row.difference) for row in rows]
        for larger, smaller in zip(magnitudes, magnitudes[1:]):
            assert larger / smaller == pytest.approx(10.0, rel=0.05)

    def test_direct_homodyne_residual_at_three_db(self) -> None:
        rows, _ = run_compare(ProtocolSpec(HOM, DIRECT), (0.5,), (1e4, 1e6, 1e8), InfoUnit.NATS)
        magnitudes = [abs(row.difference) for row in rows]
        assert magnitudes[0] > magnitudes[1] > magnitudes[2]
        assert magnitudes[-1] < 3e-3

    def test_slope_needs_two_distinct_va(self) -> None:
        assert fit_loglog_slope([10.0, 10.0], [1e-2, 1e-2]) is None
        assert fit_loglog_slope([10.0, 100.0], [0.0, 1e-3]) is None
        assert fit_loglog_slope([10.0, 100.0], [1e-2, 1e-3]) == pytest.approx(-1.0)
