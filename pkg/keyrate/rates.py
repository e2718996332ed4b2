"""
密钥率模块
计算各测量方式下 Bob 侧互信息、Eve 侧信息（正向 / 反向 / 无条件），
并组合为精确的密钥率分解
"""

import math

from keyrate.channel import (ChannelPoint, channel_variances,
                             conditional_variance_eve_het, conditional_variance_eve_hom)
from keyrate.entropy import entropy_g
from keyrate.errors import DomainError, UnsupportedSpecError
from keyrate.protocol import Direction, Measurement, ProtocolSpec, RateBreakdown
from keyrate.units import InfoUnit


def _bob_info_nats(m: Measurement, p: ChannelPoint) -> float:
    V_B, _ = channel_variances(p)
    if m is Measurement.COLLECTIVE:
        return entropy_g(V_B)
    if m is Measurement.HETERODYNE:
        # (V_B + 1)/2 = 1 + T·V_mod/2，写成 log1p 保留 T·V_mod 很小时的有效位
        return math.log1p(p.T * p.v_mod / 2.0)
    return 0.5 * math.log1p(p.T * p.v_mod)


def _eve_direct_nats(m: Measurement, p: ChannelPoint) -> float:
    _, V_E = channel_variances(p)
    if m is Measurement.HOMODYNE:
        # 未被测量的正交分量的调制让 Eve 的条件态为混态，对称化方差为 sqrt(V_E)
        return entropy_g(V_E) - entropy_g(math.sqrt(V_E))
    return entropy_g(V_E)


def _eve_reverse_nats(m: Measurement, p: ChannelPoint) -> float:
    if p.T == 0.0:
        raise DomainError("反向协商要求 T > 0，T = 0 时条件方差退化")
    V_B, V_E = channel_variances(p)
    if m is Measurement.COLLECTIVE:
        # H(BE) = H(A)：联合态由 ρ_A 与真空模式可逆混合而来
        return entropy_g(V_B) + entropy_g(V_E) - entropy_g(p.V_A)
    if m is Measurement.HETERODYNE:
        return entropy_g(V_E) - entropy_g(conditional_variance_eve_het(p))
    return entropy_g(V_E) - entropy_g(eve_conditional_variance_hom(p))


def _eve_unconditional_nats(m: Measurement, p: ChannelPoint) -> float:
    _, V_E = channel_variances(p)
    if m is Measurement.HOMODYNE:
        # 把未测正交分量的调制信息交给 Eve，H(E) 取 g(sqrt(V_E))
        return entropy_g(math.sqrt(V_E))
    return entropy_g(V_E)


def eve_conditional_variance_hom(p: ChannelPoint) -> float:
    """
    零差反向协商中 Eve 条件态的对称化方差

    V_c = sqrt(V_A·(1 - T + T/V_A) / (T + (1-T)/V_A))，
    即 sqrt(V(Q_E|Y)·V(P_E|Y))，其中 V(P_E|Y) = V_E。
    """
    T, V_A = p.T, p.V_A
    return math.sqrt(V_A * (1.0 - T + T / V_A) / (T + (1.0 - T) / V_A))


def mutual_info_bob(m: Measurement, p: ChannelPoint, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    Alice 与 Bob 之间的信息量

    collective: Holevo 信息 g(V_B)（Bob 收到的是纯相干态）；
    heterodyne: log((V_B+1)/2)（外差多引入一份真空噪声）；
    homodyne: (1/2)·log(V_B)（单个正交分量的高斯香农互信息）。

    Args:
        m (Measurement): Bob 的测量方式
        p (ChannelPoint): 信道工作点
        unit (InfoUnit): 输出单位

    Returns:
        float: 互信息
    """
    return unit.convert(_bob_info_nats(m, p))


def eve_info_direct(m: Measurement, p: ChannelPoint, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    正向协商中 Eve 关于 Alice 数据的 Holevo 信息 I_XE

    collective / heterodyne: g(V_E)（已知 Alice 两个正交分量时 Eve 的条件态为纯态）；
    homodyne: g(V_E) - g(sqrt(V_E))。

    Args:
        m (Measurement): Bob 的测量方式
        p (ChannelPoint): 信道工作点
        unit (InfoUnit): 输出单位

    Returns:
        float: Eve 的信息量
    """
    return unit.convert(_eve_direct_nats(m, p))


def eve_info_reverse(m: Measurement, p: ChannelPoint, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    反向协商中 Eve 关于 Bob 数据的信息

    collective: 量子互信息 I_BE = g(V_B) + g(V_E) - g(V_A)；
    heterodyne: I_YE = g(V_E) - g(V_c)，V_c = (2-T+T/V_A)/(T+(2-T)/V_A)；
    homodyne:   I_YE = g(V_E) - g(V_c)，V_c 见 eve_conditional_variance_hom。

    Args:
        m (Measurement): Bob 的测量方式
        p (ChannelPoint): 信道工作点，要求 T > 0
        unit (InfoUnit): 输出单位

    Returns:
        float: Eve 的信息量

    Raises:
        DomainError: T = 0
    """
    return unit.convert(_eve_reverse_nats(m, p))


def eve_entropy_unconditional(m: Measurement, p: ChannelPoint,
                              unit: InfoUnit = InfoUnit.NATS) -> float:
    """无条件安全速率中的 H(E)：零差为 g(sqrt(V_E))，其余为 g(V_E)"""
    return unit.convert(_eve_unconditional_nats(m, p))


def key_rate(spec: ProtocolSpec, p: ChannelPoint, unit: InfoUnit = InfoUnit.NATS) -> RateBreakdown:
    """
    精确密钥率分解

    direct:        ΔI = I_XY - I_XE
    reverse:       ΔI = I_XY - I_YE（collective 时为 I_XB - I_BE）
    unconditional: S  = I_XY - H(E)

    速率可以为负，核心计算不做截断。

    数值下限：反向协商的 Eve 信息是两个 g 值之差，绝对舍入误差约为
    1e-15 nats。T 与 V_A - 1 同时不超过 1e-6 时，真实速率约为 T·(V_A - 1)，
    不超过 1e-12，此时结果可能是 0.0 或 -1e-15 量级的负数，
    应按 |rate| <= 1e-12 解读为零。

    Args:
        spec (ProtocolSpec): 协议规格
        p (ChannelPoint): 信道工作点
        unit (InfoUnit): 输出单位

    Returns:
        RateBreakdown: 密钥率分解
    """
    bob = _bob_info_nats(spec.measurement, p)
    if spec.direction is Direction.DIRECT:
        eve = _eve_direct_nats(spec.measurement, p)
    elif spec.direction is Direction.REVERSE:
        eve = _eve_reverse_nats(spec.measurement, p)
    else:
        eve = _eve_unconditional_nats(spec.measurement, p)
    return RateBreakdown.from_terms(bob, eve, unit)


def holevo_heterodyne_gap(p: ChannelPoint, unit: InfoUnit = InfoUnit.NATS) -> float:
    """Bob 用外差代替最优集体测量时损失的信息量，上限为 1 nat"""
    return unit.convert(_bob_info_nats(Measurement.COLLECTIVE, p)
                        - _bob_info_nats(Measurement.HETERODYNE, p))


def conditional_entropy_eve_het_closed_form(p: ChannelPoint,
                                            unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    外差反向协商中 H(E|Y) 的两项闭式表达

    log((1+1/V_A)/(T+(2-T)/V_A))
      + ((1-T)(1-1/V_A)/(T+(2-T)/V_A))·log((1+1/V_A)/((1-T)(1-1/V_A)))

    与 g(V_c) 代数恒等，用于交叉验证。T = 1 或 V_A = 1 时第二项取极限 0。
    """
    if p.T == 0.0:
        raise DomainError("反向协商要求 T > 0")
    T, V_A = p.T, p.V_A
    denominator = T + (2.0 - T) / V_A
    weight = (1.0 - T) * (1.0 - 1.0 / V_A)
    value = math.log((1.0 + 1.0 / V_A) / denominator)
    if weight > 0.0:
        value += weight / denominator * math.log((1.0 + 1.0 / V_A) / weight)
    return unit.convert(value)


def classical_key_rate(spec: ProtocolSpec, p: ChannelPoint,
                       unit: InfoUnit = InfoUnit.NATS) -> RateBreakdown:
    """
    个体攻击下的参考速率：Eve 对自己的模式做与 Bob 相同的经典测量

    只对外差 / 零差与正向 / 反向协商有定义。由于经典测量达不到
    Holevo 界，该速率不低于同一规格的集体攻击速率。

    Args:
        spec (ProtocolSpec): 协议规格
        p (ChannelPoint): 信道工作点
        unit (InfoUnit): 输出单位

    Returns:
        RateBreakdown: 个体攻击下的密钥率分解
    """
    if spec.measurement is Measurement.COLLECTIVE or spec.direction is Direction.UNCONDITIONAL:
        raise UnsupportedSpecError(f"个体攻击参考速率不适用于 {spec}")
    V_B, V_E = channel_variances(p)
    bob = _bob_info_nats(spec.measurement, p)
    if spec.direction is Direction.REVERSE and p.T == 0.0:
        raise DomainError("反向协商要求 T > 0")
    if spec.measurement is Measurement.HETERODYNE:
        if spec.direction is Direction.DIRECT:
            eve = math.log((V_E + 1.0) / 2.0)
        else:
            eve = math.log((V_E + 1.0) / (conditional_variance_eve_het(p) + 1.0))
    else:
        if spec.direction is Direction.DIRECT:
            eve = 0.5 * math.log(V_E)
        else:
            eve = 0.5 * math.log(V_E / conditional_variance_eve_hom(p))
    return RateBreakdown.from_terms(bob, eve, unit)


def main():
    """测试函数"""
    point = ChannelPoint(T=0.5, V_A=101.0)
    print(f"信道工作点: T = {point.T}, V_A = {point.V_A}")
    for spec in ProtocolSpec.all_specs():
        breakdown = key_rate(spec, point, InfoUnit.BITS)
        print(f"{str(spec):<28} I_Bob = {breakdown.bob_info:9.5f}  "
              f"I_Eve = {breakdown.eve_info:9.5f}  速率 = {breakdown.rate:+9.5f} bits")


if __name__ == "__main__":
    main()
