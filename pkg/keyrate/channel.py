"""
有损信道模块
将信道建模为透射率 T 的分束器，反射光束交给 Eve，
计算 Bob、Eve 两端的方差以及经典条件方差
"""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

from keyrate.errors import DomainError
from keyrate.protocol import Measurement


def vmod_to_va(v_mod: float) -> float:
    """调制方差换算为 Alice 态的总方差 V_A = V_mod + 1"""
    v_mod = float(v_mod)
    if not math.isfinite(v_mod) or v_mod < 0.0:
        raise DomainError(f"调制方差必须 >= 0，实际为 {v_mod!r}")
    return v_mod + 1.0


def va_to_vmod(va: float) -> float:
    """Alice 态的总方差换算为调制方差 V_mod = V_A - 1"""
    return ChannelPoint(1.0, va).v_mod


@dataclass(frozen=True)
class ChannelPoint:
    """
    信道工作点

    Attributes:
        T (float): 信道透射率，0 <= T <= 1
        V_A (float): Alice 每个正交分量的总方差（调制 + 散粒噪声），V_A >= 1
    """

    T: float
    V_A: float

    def __post_init__(self):
        T = float(self.T)
        V_A = float(self.V_A)
        if not math.isfinite(T) or not 0.0 <= T <= 1.0:
            raise DomainError(f"透射率必须在 [0, 1] 内，实际 T = {self.T!r}")
        if not math.isfinite(V_A) or V_A < 1.0:
            raise DomainError(f"V_A 必须 >= 1，实际 V_A = {self.V_A!r}")
        object.__setattr__(self, 'T', T)
        object.__setattr__(self, 'V_A', V_A)

    @classmethod
    def from_vmod(cls, T: float, v_mod: float) -> 'ChannelPoint':
        """由调制方差构造工作点"""
        return cls(T, vmod_to_va(v_mod))

    @property
    def v_mod(self) -> float:
        return self.V_A - 1.0


def _mix(t: float, V_A: float) -> float:
    # 透射率 t 的分束器把方差 V_A 与真空混合后的输出方差
    return t * V_A + 1.0 - t


def channel_variances(p: ChannelPoint) -> Tuple[float, float]:
    """
    Bob 与 Eve 收到的模式方差

    V_B = T·V_A + 1 - T，V_E = (1-T)·V_A + T。
    两者用同一个混合函数计算，T 与 1-T 互换时结果严格对调。

    Args:
        p (ChannelPoint): 信道工作点

    Returns:
        Tuple[float, float]: (V_B, V_E)
    """
    return _mix(p.T, p.V_A), _mix(1.0 - p.T, p.V_A)


def conditional_variance_eve_het(p: ChannelPoint) -> float:
    """外差探测下 Eve 单个正交分量在已知 Bob 结果时的条件方差"""
    T, V_A = p.T, p.V_A
    return (2.0 - T + T / V_A) / (T + (2.0 - T) / V_A)


def conditional_variance_eve_hom(p: ChannelPoint) -> float:
    """零差探测下 Eve 被测正交分量在已知 Bob 结果时的条件方差"""
    return 1.0 / (p.T + (1.0 - p.T) / p.V_A)


def conditional_variances(p: ChannelPoint, measurement: Measurement) -> Dict[str, float]:
    """
    经典条件方差（每个正交分量）

    Args:
        p (ChannelPoint): 信道工作点
        measurement (Measurement): 仅支持外差或零差

    Returns:
        Dict[str, float]: 键为 var_y、cond_y_x、cond_e_y、cond_e_other_y
    """
    V_B, V_E = channel_variances(p)
    if measurement is Measurement.HETERODYNE:
        cond_e = conditional_variance_eve_het(p)
        return {
            'var_y': V_B + 1.0,
            'cond_y_x': 2.0,
            'cond_e_y': cond_e,
            'cond_e_other_y': cond_e,
        }
    if measurement is Measurement.HOMODYNE:
        return {
            'var_y': V_B,
            'cond_y_x': 1.0,
            'cond_e_y': conditional_variance_eve_hom(p),
            'cond_e_other_y': V_E,
        }
    raise DomainError(f"经典条件方差只对外差/零差测量有定义，实际为 {measurement}")


def main():
    """测试函数"""
    V_A = 11.0
    print(f"V_A = {V_A} 时的方差与条件方差:")
    for T in (0.1, 0.5, 0.9):
        point = ChannelPoint(T, V_A)
        V_B, V_E = channel_variances(point)
        print(f"T = {T}: V_B = {V_B:.4f}, V_E = {V_E:.4f}, "
              f"V(E|Y) 外差 = {conditional_variance_eve_het(point):.6f}, "
              f"零差 = {conditional_variance_eve_hom(point):.6f}")


if __name__ == "__main__":
    main()
