"""
高斯态熵函数模块
负责以散粒噪声单位（真空方差为1）计算单模高斯态的冯·诺依曼熵 g(V)
及其大调制渐近式、对称化方差
"""

import math

import numpy as np

from keyrate.errors import DomainError
from keyrate.units import InfoUnit

# g 在 V=1 附近的截断容差：V-1 小于该值时直接返回极限值 0
G_ONE_TOLERANCE = 1e-12


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} 必须是有限实数，实际为 {value!r}")
    return value


def log_ratio_term(V: float) -> float:
    """
    计算 ((V-1)/2)·log((1+1/V)/(1-1/V))，单位 nats

    这是 Holevo 信息与外差互信息之间的差额项：V=1 时为 0，
    V→∞ 时趋于 1 nat。对数比写成 log1p(2/(V-1))，大 V 时不丢精度。

    Args:
        V (float): 对称化方差，V >= 1

    Returns:
        float: 差额项（nats）
    """
    V = _check_finite("V", V)
    if V < 1.0 - G_ONE_TOLERANCE:
        raise DomainError(f"g 的定义域为 V >= 1，实际 V = {V!r}")
    half_excess = (V - 1.0) / 2.0
    if half_excess < G_ONE_TOLERANCE / 2.0:
        return 0.0
    return float(half_excess * np.log1p(1.0 / half_excess))


def entropy_g(V: float, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    单模高斯态的冯·诺依曼熵 g(V)

    g(V) = ((V+1)/2)·log((V+1)/2) - ((V-1)/2)·log((V-1)/2)
         = log((V+1)/2) + ((V-1)/2)·log((1+1/V)/(1-1/V))

    采用第二种写法并配合 log1p，V 可到 1e12 仍保持数值稳定。
    低于 1 但在 1e-12 容差内的输入按 V=1 处理。

    Args:
        V (float): 对称化方差（散粒噪声单位）
        unit (InfoUnit): 输出单位，默认 nats

    Returns:
        float: 熵值

    Raises:
        DomainError: V < 1（超出容差）或非有限数
    """
    V = _check_finite("V", V)
    if V < 1.0 - G_ONE_TOLERANCE:
        raise DomainError(f"g 的定义域为 V >= 1，实际 V = {V!r}")
    if V - 1.0 < G_ONE_TOLERANCE:
        return 0.0
    value = float(np.log1p((V - 1.0) / 2.0)) + log_ratio_term(V)
    return unit.convert(value)


def entropy_g_asymptotic(V: float, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    g(V) 的大方差渐近式 log V + log(e/2)

    与 g 的差随 V 增大单调趋于零（误差不超过 O(1/V)，
    实际首项为 -1/(6V²)）。

    Args:
        V (float): 方差，V > 0
        unit (InfoUnit): 输出单位

    Returns:
        float: 渐近值
    """
    V = _check_finite("V", V)
    if V <= 0.0:
        raise DomainError(f"渐近式要求 V > 0，实际 V = {V!r}")
    return unit.convert(math.log(V) + 1.0 - math.log(2.0))


def symmetrized_variance(V_Q: float, V_P: float) -> float:
    """
    对称化方差 sqrt(V_Q·V_P)

    Args:
        V_Q (float): Q 正交分量方差
        V_P (float): P 正交分量方差

    Returns:
        float: 对称化方差
    """
    V_Q = _check_finite("V_Q", V_Q)
    V_P = _check_finite("V_P", V_P)
    if V_Q <= 0.0 or V_P <= 0.0:
        raise DomainError(f"方差必须为正，实际 V_Q = {V_Q!r}, V_P = {V_P!r}")
    return math.sqrt(V_Q * V_P)


def main():
    """测试函数"""
    print("g(V) 取值示例:")
    for V in (1.0, 3.0, 10.0, 200.0, 1e6):
        exact = entropy_g(V)
        asym = entropy_g_asymptotic(V)
        print(f"V = {V:>10g}: g = {exact:.12f} nats, "
              f"{entropy_g(V, InfoUnit.BITS):.12f} bits, 渐近差 {exact - asym:.3e}")


if __name__ == "__main__":
    main()
