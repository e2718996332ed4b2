"""
渐近密钥率模块
给出 V_A → ∞ 的极限速率、强损耗极限以及渐近式的误差量级
"""

import logging
import math
import warnings

from keyrate.errors import DomainError, UnsupportedSpecError
from keyrate.protocol import Direction, Measurement, ProtocolSpec
from keyrate.units import InfoUnit

logger = logging.getLogger(__name__)

# 强损耗近似 T << 1 的适用上限
STRONG_LOSS_LIMIT = 0.1


class StrongLossWarning(UserWarning):
    """透射率超出强损耗近似的适用范围"""


def _check_open_unit_interval(T: float) -> float:
    T = float(T)
    if not math.isfinite(T) or not 0.0 < T < 1.0:
        raise DomainError(f"渐近式要求 0 < T < 1，实际 T = {T!r}")
    return T


def key_rate_asymptotic(spec: ProtocolSpec, T: float, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    大调制极限（V_A → ∞）下的密钥率

    Args:
        spec (ProtocolSpec): 协议规格
        T (float): 透射率，0 < T < 1
        unit (InfoUnit): 输出单位

    Returns:
        float: 极限速率
    """
    T = _check_open_unit_interval(T)
    m, d = spec.measurement, spec.direction
    odds = math.log(T / (1.0 - T))
    if d is Direction.REVERSE:
        loss = -math.log1p(-T)  # log(1/(1-T))
        if m is Measurement.COLLECTIVE:
            value = loss
        elif m is Measurement.HETERODYNE:
            value = loss / T - 1.0
        else:
            value = 0.5 * loss
    elif m is Measurement.HOMODYNE:
        value = 0.5 * odds
        if d is Direction.UNCONDITIONAL:
            value += 0.5 * math.log(4.0 / math.e ** 2)
    elif m is Measurement.HETERODYNE:
        value = odds - 1.0
    else:
        value = odds
    return unit.convert(value)


def key_rate_strong_loss(spec: ProtocolSpec, T: float, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    强损耗（1/V_A << T << 1）下反向协商速率的首项

    collective: T·log e；heterodyne 与 homodyne: (T/2)·log e。

    Args:
        spec (ProtocolSpec): 协议规格，方向必须为 reverse
        T (float): 透射率
        unit (InfoUnit): 输出单位

    Returns:
        float: 强损耗近似速率

    Raises:
        UnsupportedSpecError: 正向或无条件协议
    """
    if spec.direction is not Direction.REVERSE:
        raise UnsupportedSpecError(f"强损耗近似只对反向协商给出，实际为 {spec}")
    T = _check_open_unit_interval(T)
    if T >= STRONG_LOSS_LIMIT:
        message = f"T = {T} 超出强损耗近似范围 (T < {STRONG_LOSS_LIMIT})"
        logger.warning(message)
        warnings.warn(message, StrongLossWarning, stacklevel=2)
    if spec.measurement is Measurement.COLLECTIVE:
        return unit.convert(T)
    return unit.convert(T / 2.0)


def predicted_error_scale(spec: ProtocolSpec, T: float, V_A: float) -> float:
    """
    渐近式所标注的误差量级 O(·) 中的尺度（不含常数）

    Args:
        spec (ProtocolSpec): 协议规格
        T (float): 透射率，0 < T < 1
        V_A (float): Alice 态方差

    Returns:
        float: 误差尺度
    """
    T = _check_open_unit_interval(T)
    if V_A <= 0.0:
        raise DomainError(f"V_A 必须为正，实际 V_A = {V_A!r}")
    m, d = spec.measurement, spec.direction
    both_sides = (1.0 / T + 1.0 / (1.0 - T)) / V_A
    if m is Measurement.HOMODYNE:
        if d is Direction.DIRECT:
            return (1.0 / math.sqrt(T) + 1.0 / math.sqrt(1.0 - T)) / math.sqrt(V_A)
        if d is Direction.REVERSE:
            return 1.0 / (T * V_A) + math.sqrt(T / ((1.0 - T) * V_A))
        return 1.0 / math.sqrt((1.0 - T) * V_A)
    if m is Measurement.HETERODYNE and d is not Direction.REVERSE:
        return 1.0 / ((1.0 - T) * V_A)
    return both_sides


def main():
    """测试函数"""
    transmissions = (0.05, 0.3, 0.7)
    print("大调制极限速率 (bits):  T = " + ", ".join(str(T) for T in transmissions))
    for spec in ProtocolSpec.all_specs():
        rates = [key_rate_asymptotic(spec, T, InfoUnit.BITS) for T in transmissions]
        print(f"{str(spec):<24}" + "".join(f"{rate:+11.5f}" for rate in rates))
    print("强损耗近似 T = 0.01:")
    for m in Measurement:
        spec = ProtocolSpec(m, Direction.REVERSE)
        print(f"{str(spec):<24}{key_rate_strong_loss(spec, 0.01, InfoUnit.BITS):.6f} bits")


if __name__ == "__main__":
    main()
