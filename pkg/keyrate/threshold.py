"""
安全阈值模块
求解密钥率由负变正的最小信道透射率，以及透射率与损耗（dB）之间的换算
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import bisect

from keyrate.channel import ChannelPoint
from keyrate.errors import DomainError, NoRootError
from keyrate.protocol import Direction, Measurement, ProtocolSpec
from keyrate.rates import key_rate

logger = logging.getLogger(__name__)

# 二分搜索区间 (ε, 1-ε) 与透射率的绝对容差
BRACKET_EPSILON = 1e-9
BISECTION_XTOL = 1e-10


def losses_db(T: float) -> float:
    """透射率换算为损耗 -10·log10(T)，T = 0 时为正无穷"""
    T = float(T)
    if not 0.0 <= T <= 1.0:
        raise DomainError(f"透射率必须在 [0, 1] 内，实际 T = {T!r}")
    if T == 0.0:
        return math.inf
    return -10.0 * math.log10(T)


def transmission_from_db(loss_db: float) -> float:
    """损耗（dB）换算为透射率 10^(-L/10)"""
    loss_db = float(loss_db)
    if math.isnan(loss_db) or loss_db < 0.0:
        raise DomainError(f"损耗必须 >= 0 dB，实际为 {loss_db!r}")
    return 10.0 ** (-loss_db / 10.0)


@dataclass(frozen=True)
class ThresholdQuery:
    """
    阈值查询

    Attributes:
        spec (ProtocolSpec): 协议规格
        va (Optional[float]): 有限调制下的 V_A；None 表示无穷大调制
    """

    spec: ProtocolSpec
    va: Optional[float] = None

    def __post_init__(self):
        if self.va is not None and not float(self.va) >= 1.0:
            raise DomainError(f"有限调制要求 V_A >= 1，实际 V_A = {self.va!r}")

    @property
    def infinite_modulation(self) -> bool:
        return self.va is None


@dataclass(frozen=True)
class ThresholdResult:
    """阈值求解结果：透射率及对应的损耗"""

    query: ThresholdQuery
    transmission: float

    @property
    def losses_db(self) -> float:
        return losses_db(self.transmission)

    def to_dict(self) -> dict:
        return {
            'direction': self.query.spec.direction.value,
            'measurement': self.query.spec.measurement.value,
            'va': self.query.va,
            'T': self.transmission,
            'losses_db': self.losses_db,
        }


def _analytic_threshold(spec: ProtocolSpec) -> float:
    if spec.direction is Direction.REVERSE:
        # 反向协商对任意 T > 0 都有正速率
        return 0.0
    if spec.measurement is Measurement.HETERODYNE:
        return math.e / (math.e + 1.0)
    if spec.measurement is Measurement.HOMODYNE and spec.direction is Direction.UNCONDITIONAL:
        return math.e ** 2 / (math.e ** 2 + 4.0)
    return 0.5


def threshold_transmission(query: ThresholdQuery) -> float:
    """
    密钥率为零的信道透射率

    无穷大调制时直接返回渐近式的解析根；有限 V_A 时在 (ε, 1-ε) 上
    对精确速率二分搜索，返回其下速率为负的根。

    Args:
        query (ThresholdQuery): 阈值查询

    Returns:
        float: 阈值透射率

    Raises:
        NoRootError: 区间内速率不变号（例如反向协商全程为正）
    """
    if query.infinite_modulation:
        return _analytic_threshold(query.spec)

    spec, va = query.spec, float(query.va)

    def rate_at(T: float) -> float:
        return key_rate(spec, ChannelPoint(T, va)).rate

    lo, hi = BRACKET_EPSILON, 1.0 - BRACKET_EPSILON
    rate_lo, rate_hi = rate_at(lo), rate_at(hi)
    if rate_lo >= 0.0:
        raise NoRootError(f"{spec} 在 V_A = {va} 时速率在整个区间上非负，没有阈值")
    if rate_hi <= 0.0:
        raise NoRootError(f"{spec} 在 V_A = {va} 时速率在整个区间上非正，没有阈值")
    root = bisect(rate_at, lo, hi, xtol=BISECTION_XTOL)
    logger.debug("阈值求解 %s V_A=%g: T=%.12f", spec, va, root)
    return float(root)


def solve_threshold(query: ThresholdQuery) -> ThresholdResult:
    """求解阈值并附带损耗换算"""
    return ThresholdResult(query, threshold_transmission(query))


def main():
    """测试函数"""
    for spec in ProtocolSpec.all_specs():
        result = solve_threshold(ThresholdQuery(spec))
        line = f"{str(spec):<24} V_A → ∞: T = {result.transmission:.6f} ({result.losses_db:.3f} dB)"
        try:
            finite = solve_threshold(ThresholdQuery(spec, va=100.0))
            line += f"；V_A = 100: T = {finite.transmission:.6f}"
        except NoRootError:
            line += "；V_A = 100: 无阈值"
        print(line)


if __name__ == "__main__":
    main()
