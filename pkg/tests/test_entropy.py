"""
g(V)、渐近式与信息单位的测试
"""

import math

import numpy as np
import pytest

from keyrate.entropy import (entropy_g, entropy_g_asymptotic, log_ratio_term,
                             symmetrized_variance)
from keyrate.errors import DomainError
from keyrate.units import InfoUnit


class TestInfoUnit:

    def test_bits_divide_by_ln2(self) -> None:
        assert InfoUnit.BITS.convert(math.log(2.0)) == pytest.approx(1.0, abs=1e-15)

    def test_nats_unchanged(self) -> None:
        assert InfoUnit.NATS.convert(0.75) == 0.75


class TestEntropyG:

    def test_vacuum_has_zero_entropy(self) -> None:
        assert entropy_g(1.0) == 0.0

    def test_v3_is_two_bits(self) -> None:
        assert entropy_g(3.0, InfoUnit.BITS) == pytest.approx(2.0, abs=1e-12)

    def test_v200_close_to_taylor_form(self) -> None:
        assert entropy_g(200.0) == pytest.approx(math.log(200.0) + math.log(math.e / 2.0), abs=5e-3)

    def test_just_below_one_is_clamped(self) -> None:
        assert entropy_g(1.0 - 1e-13) == 0.0

    @pytest.mark.parametrize("V", [0.5, 1.0 - 1e-9, -3.0])
    def test_below_one_raises(self, V: float) -> None:
        with pytest.raises(DomainError):
            entropy_g(V)

    @pytest.mark.parametrize("V", [math.nan, math.inf])
    def test_non_finite_raises(self, V: float) -> None:
        with pytest.raises(DomainError):
            entropy_g(V)

    def test_strictly_increasing_and_positive(self) -> None:
        grid = 1.0 + np.logspace(-6, 6, 200)
        values = np.array([entropy_g(V) for V in grid])
        assert np.all(values > 0.0)
        assert np.all(np.diff(values) > 0.0)

    def test_stable_at_1e12(self) -> None:
        value = entropy_g(1e12)
        assert math.isfinite(value)
        assert value == pytest.approx(entropy_g_asymptotic(1e12), abs=1e-10)

    @pytest.mark.parametrize("n_bar", [0.1, 1.0, 5.0, 50.0])
    def test_matches_fock_sum(self, n_bar: float, fock_entropy) -> None:
        V = 2.0 * n_bar + 1.0
        assert entropy_g(V) == pytest.approx(fock_entropy(V), abs=1e-9)


class TestEntropyAsymptotic:

    def test_zero_at_two_over_e(self) -> None:
        assert entropy_g_asymptotic(2.0 / math.e) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("V, tol", [(100.0, 1e-2), (1e6, 2e-6)])
    def test_matches_exact(self, V: float, tol: float) -> None:
        assert entropy_g_asymptotic(V) == pytest.approx(entropy_g(V), abs=tol)

    @pytest.mark.parametrize("V", [0.0, -1.0])
    def test_nonpositive_raises(self, V: float) -> None:
        with pytest.raises(DomainError):
            entropy_g_asymptotic(V)

    def test_error_bounded_by_c_over_v(self) -> None:
        grid = np.logspace(1, 6, 60)
        fitted = max(abs(entropy_g(V) - entropy_g_asymptotic(V)) * V for V in grid)
        assert fitted <= 1.0

    def test_units_agree(self) -> None:
        assert entropy_g_asymptotic(50.0, InfoUnit.BITS) == pytest.approx(
            entropy_g_asymptotic(50.0) / math.log(2.0), rel=1e-15)


class TestLogRatioTerm:

    def test_zero_at_one(self) -> None:
        assert log_ratio_term(1.0) == 0.0

    def test_tends_to_one_nat(self) -> None:
        assert log_ratio_term(1e8) == pytest.approx(1.0, abs=1e-6)

    def test_is_holevo_minus_heterodyne(self) -> None:
        V = 37.0
        assert log_ratio_term(V) == pytest.approx(entropy_g(V) - math.log((V + 1.0) / 2.0),
                                                  abs=1e-13)


class TestSymmetrizedVariance:

    def test_vacuum(self) -> None:
        assert symmetrized_variance(1.0, 1.0) == 1.0

    def test_exact_product(self) -> None:
        assert symmetrized_variance(4.0, 9.0) == 6.0

    def test_one_and_vb(self) -> None:
        assert symmetrized_variance(1.0, 51.0) == pytest.approx(math.sqrt(51.0))

    @pytest.mark.parametrize("V_Q, V_P", [(0.0, 1.0), (1.0, -2.0)])
    def test_nonpositive_raises(self, V_Q: float, V_P: float) -> None:
        with pytest.raises(DomainError):
            symmetrized_variance(V_Q, V_P)
