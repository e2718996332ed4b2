"""
扫描与对比模块
按 (T, V_A, 协议规格) 网格生成输出行，以及精确速率与渐近式的误差量级拟合
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from keyrate.asymptotic import key_rate_asymptotic, predicted_error_scale
from keyrate.channel import ChannelPoint
from keyrate.errors import DomainError, KeyRateError
from keyrate.protocol import ProtocolSpec
from keyrate.rates import classical_key_rate, key_rate
from keyrate.threshold import losses_db, transmission_from_db
from keyrate.units import InfoUnit

logger = logging.getLogger(__name__)

SWEEP_HEADERS = ['T', 'losses_db', 'va', 'measurement', 'direction',
                 'bob_info', 'eve_info', 'rate', 'asymptotic_rate']
ERROR_HEADER = 'error'
COMPARE_HEADERS = ['T', 'va', 'measurement', 'direction', 'exact_rate', 'asymptotic_rate',
                   'difference', 'predicted_scale', 'scaled_error']
INDIVIDUAL_HEADER = 'individual_rate'


@dataclass(frozen=True)
class SweepSpec:
    """
    扫描配置

    Attributes:
        t_start (float): 起始透射率
        t_stop (float): 终止透射率
        steps (int): 取点数
        spacing (str): 'linear' 按透射率等间隔，'db' 按损耗等间隔
        vas (Tuple[float, ...]): V_A 列表
        specs (Tuple[ProtocolSpec, ...]): 协议规格列表
        unit (InfoUnit): 输出单位
    """

    t_start: float
    t_stop: float
    steps: int
    vas: Tuple[float, ...]
    specs: Tuple[ProtocolSpec, ...] = field(default_factory=lambda: tuple(ProtocolSpec.all_specs()))
    spacing: str = 'linear'
    unit: InfoUnit = InfoUnit.BITS

    def __post_init__(self):
        if self.steps < 1:
            raise DomainError(f"取点数必须 >= 1，实际为 {self.steps}")
        for T in (self.t_start, self.t_stop):
            if not 0.0 <= T <= 1.0:
                raise DomainError(f"透射率必须在 [0, 1] 内，实际 T = {T!r}")
        if self.spacing not in ('linear', 'db'):
            raise DomainError(f"未知的取点方式: {self.spacing!r}")
        if self.spacing == 'db' and min(self.t_start, self.t_stop) == 0.0:
            raise DomainError("按 dB 取点时透射率必须为正")
        if not self.vas or not self.specs:
            raise DomainError("V_A 列表与协议规格列表不能为空")
        for va in self.vas:
            if not va >= 1.0:
                raise DomainError(f"V_A 必须 >= 1，实际 V_A = {va!r}")

    @classmethod
    def from_db_range(cls, db_start: float, db_stop: float, steps: int,
                      vas: Sequence[float], **kwargs) -> 'SweepSpec':
        """由损耗范围构造按 dB 等间隔的扫描"""
        return cls(transmission_from_db(db_start), transmission_from_db(db_stop), steps,
                   tuple(vas), spacing='db', **kwargs)

    def transmissions(self) -> List[float]:
        """按配置生成透射率序列，端点取给定值"""
        if self.steps == 1:
            return [float(self.t_start)]
        if self.spacing == 'linear':
            values = np.linspace(self.t_start, self.t_stop, self.steps)
        else:
            losses = np.linspace(losses_db(self.t_start), losses_db(self.t_stop), self.steps)
            values = 10.0 ** (-losses / 10.0)
        values = [float(value) for value in values]
        values[0], values[-1] = float(self.t_start), float(self.t_stop)
        return values


@dataclass(frozen=True)
class OutputRow:
    """扫描输出行；计算失败时速率字段为空并填写 error"""

    T: float
    losses_db: float
    va: float
    measurement: str
    direction: str
    bob_info: Optional[float] = None
    eve_info: Optional[float] = None
    rate: Optional[float] = None
    asymptotic_rate: Optional[float] = None
    error: Optional[str] = None

    def to_dict(self, clamp: bool = False) -> dict:
        row = asdict(self)
        if clamp and self.rate is not None:
            row['rate'] = max(0.0, self.rate)
        return row


def _asymptotic_or_none(spec: ProtocolSpec, T: float, unit: InfoUnit) -> Optional[float]:
    # 渐近式只在 0 < T < 1 上有定义
    if 0.0 < T < 1.0:
        return key_rate_asymptotic(spec, T, unit)
    return None


def evaluate_point(spec: ProtocolSpec, T: float, va: float,
                   unit: InfoUnit = InfoUnit.BITS) -> OutputRow:
    """
    计算单个 (T, V_A, 协议规格) 的输出行

    Raises:
        KeyRateError: 参数超出定义域
    """
    breakdown = key_rate(spec, ChannelPoint(T, va), unit)
    return OutputRow(T=T, losses_db=losses_db(T), va=va,
                     measurement=spec.measurement.value, direction=spec.direction.value,
                     bob_info=breakdown.bob_info, eve_info=breakdown.eve_info,
                     rate=breakdown.rate, asymptotic_rate=_asymptotic_or_none(spec, T, unit))


def run_sweep(sweep: SweepSpec) -> Iterator[OutputRow]:
    """
    按 T 外层、V_A 中层、协议规格内层的固定顺序生成输出行

    单点的定义域错误记录在该行的 error 字段中，不中断扫描。

    Args:
        sweep (SweepSpec): 扫描配置

    Yields:
        OutputRow: 输出行
    """
    failures = 0
    for T in sweep.transmissions():
        for va in sweep.vas:
            for spec in sweep.specs:
                try:
                    yield evaluate_point(spec, T, va, sweep.unit)
                except KeyRateError as exc:
                    failures += 1
                    logger.debug("扫描点失败 %s T=%g V_A=%g: %s", spec, T, va, exc)
                    yield OutputRow(T=T, losses_db=losses_db(T), va=va,
                                    measurement=spec.measurement.value,
                                    direction=spec.direction.value,
                                    error=f"{exc.kind}: {exc}")
    logger.info("扫描完成: %d 个透射率, %d 个 V_A, %d 种协议, 失败 %d 行",
                sweep.steps, len(sweep.vas), len(sweep.specs), failures)


def sweep_headers(rows: Sequence[OutputRow]) -> List[str]:
    """九列固定表头；存在失败行时追加 error 列"""
    if any(row.error is not None for row in rows):
        return SWEEP_HEADERS + [ERROR_HEADER]
    return list(SWEEP_HEADERS)


@dataclass(frozen=True)
class CompareRow:
    """精确速率与渐近速率的对比行"""

    T: float
    va: float
    measurement: str
    direction: str
    exact_rate: float
    asymptotic_rate: float
    difference: float
    predicted_scale: float
    scaled_error: float
    individual_rate: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CompareSummary:
    """
    误差量级拟合结果

    Attributes:
        spec (ProtocolSpec): 协议规格
        fitted_constant (float): C = max |exact - asymptotic| / 预测尺度
        slopes (Dict[float, float]): 每个透射率下 log|差值| 对 log V_A 的拟合斜率
    """

    spec: ProtocolSpec
    fitted_constant: float
    slopes: Dict[float, float] = field(default_factory=dict)

    def describe(self) -> str:
        slopes = ' '.join(f"slope(T={T:g})={slope:.4f}" for T, slope in self.slopes.items())
        return f"summary[compare]: spec={self.spec} C={self.fitted_constant:.6g} {slopes}".rstrip()


def fit_loglog_slope(vas: Sequence[float], differences: Sequence[float]) -> Optional[float]:
    """
    log|差值| 对 log V_A 的最小二乘斜率

    少于两个不同的 V_A 或存在零差值时无法拟合，返回 None。
    """
    vas = np.asarray(vas, dtype=np.float64)
    magnitudes = np.abs(np.asarray(differences, dtype=np.float64))
    if len(np.unique(vas)) < 2 or np.any(magnitudes == 0.0):
        return None
    slope, _ = np.polyfit(np.log(vas), np.log(magnitudes), 1)
    return float(slope)


def run_compare(spec: ProtocolSpec, transmissions: Sequence[float], vas: Sequence[float],
                unit: InfoUnit = InfoUnit.BITS,
                individual: bool = False) -> Tuple[List[CompareRow], CompareSummary]:
    """
    在 (T, V_A) 网格上对比精确速率与渐近式

    Args:
        spec (ProtocolSpec): 协议规格
        transmissions (Sequence[float]): 透射率列表，须在 (0, 1) 内
        vas (Sequence[float]): V_A 列表
        unit (InfoUnit): 输出单位
        individual (bool): 是否附加个体攻击参考速率

    Returns:
        Tuple[List[CompareRow], CompareSummary]: 对比行与拟合结果
    """
    rows: List[CompareRow] = []
    for T in transmissions:
        asymptotic = key_rate_asymptotic(spec, T, unit)
        for va in vas:
            exact = key_rate(spec, ChannelPoint(T, va), unit).rate
            difference = exact - asymptotic
            scale = predicted_error_scale(spec, T, va)
            reference = classical_key_rate(spec, ChannelPoint(T, va), unit).rate if individual else None
            rows.append(CompareRow(T=T, va=va, measurement=spec.measurement.value,
                                   direction=spec.direction.value, exact_rate=exact,
                                   asymptotic_rate=asymptotic, difference=difference,
                                   predicted_scale=scale, scaled_error=abs(difference) / scale,
                                   individual_rate=reference))

    summary = CompareSummary(spec, max((row.scaled_error for row in rows), default=math.nan))
    for T in transmissions:
        subset = [row for row in rows if row.T == T]
        slope = fit_loglog_slope([row.va for row in subset], [row.difference for row in subset])
        if slope is not None:
            summary.slopes[T] = slope
    logger.info(summary.describe())
    return rows, summary


def compare_headers(individual: bool) -> List[str]:
    return COMPARE_HEADERS + [INDIVIDUAL_HEADER] if individual else list(COMPARE_HEADERS)
