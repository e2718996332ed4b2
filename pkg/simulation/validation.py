"""
验证报告模块
把解析公式（gaussian-core / rates）与蒙特卡罗经验值逐项对比，
给出标准误和 z 分数，并标记 |z| > 4 的行
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from keyrate.channel import ChannelPoint, channel_variances, conditional_variances
from keyrate.protocol import Measurement
from keyrate.rates import mutual_info_bob
from keyrate.symplectic import joint_output_covariance
from keyrate.units import InfoUnit
from simulation.moments import MomentReport, estimate_moments
from simulation.montecarlo import MonteCarloSimulator, SampleBatch, SimConfig

logger = logging.getLogger(__name__)

# 超过该 |z| 的行被标记
Z_FLAG_LIMIT = 4.0


@dataclass(frozen=True)
class ValidationRow:
    """报告中的一行：解析值、经验值、标准误与 z 分数"""

    quantity: str
    analytic: float
    empirical: float
    stderr: float
    z_score: float

    @property
    def flagged(self) -> bool:
        return abs(self.z_score) > Z_FLAG_LIMIT

    def to_dict(self) -> dict:
        return {
            'quantity': self.quantity,
            'analytic': self.analytic,
            'empirical': self.empirical,
            'stderr': self.stderr,
            'z_score': self.z_score,
            'flagged': self.flagged,
        }


@dataclass
class ValidationReport:
    """验证报告"""

    point: ChannelPoint
    config: SimConfig
    rows: List[ValidationRow] = field(default_factory=list)
    batch: Optional[SampleBatch] = None

    @property
    def flagged_rows(self) -> List[ValidationRow]:
        return [row for row in self.rows if row.flagged]

    def row(self, quantity: str) -> ValidationRow:
        for candidate in self.rows:
            if candidate.quantity == quantity:
                return candidate
        raise KeyError(quantity)


def _z_score(difference: float, stderr: float) -> float:
    if stderr > 0.0:
        return difference / stderr
    # 标准误为零只出现在经验值与解析值严格一致的退化情形
    return 0.0 if abs(difference) <= 1e-12 else math.copysign(math.inf, difference)


def _compare(quantity: str, analytic: float, moments: MomentReport, key: str,
             scale: float = 1.0) -> ValidationRow:
    estimate = moments[key]
    empirical, stderr = estimate.value * scale, estimate.stderr * scale
    return ValidationRow(quantity, analytic, empirical, stderr,
                         _z_score(empirical - analytic, stderr))


def validation_report(p: ChannelPoint, measurement: Measurement, n: int, seed: int,
                      simulator: Optional[MonteCarloSimulator] = None,
                      unit: InfoUnit = InfoUnit.NATS,
                      keep_batch: bool = False) -> ValidationReport:
    """
    生成解析值与蒙特卡罗经验值的对比表

    覆盖 V_A、V_B、V_E、B/E 协方差、能量守恒、Var(Y)、V(Y|X)、V(E|Y)
    以及经典互信息 I(X;Y)。

    Args:
        p (ChannelPoint): 信道工作点
        measurement (Measurement): 外差或零差
        n (int): 样本数
        seed (int): 随机种子
        simulator (MonteCarloSimulator, optional): 模拟器，默认新建
        unit (InfoUnit): 互信息行的单位
        keep_batch (bool): 是否在报告中保留原始记录（用于导出）

    Returns:
        ValidationReport: 验证报告
    """
    config = SimConfig(T=p.T, v_mod=p.v_mod, measurement=measurement, n=n, seed=seed)
    batch = (simulator or MonteCarloSimulator()).simulate_batch(config)
    moments = estimate_moments(batch, condition_on_modulation=p.v_mod > 0.0)

    V_B, V_E = channel_variances(p)
    correlation = float(joint_output_covariance(p).block_c[0, 0])
    expected = conditional_variances(p, measurement)
    report = ValidationReport(point=p, config=config, batch=batch if keep_batch else None)
    rows = report.rows

    for q, label in (('q', 'Q'), ('p', 'P')):
        rows.append(_compare(f'V_A ({label})', p.V_A, moments, f'var(a_{q})'))
        rows.append(_compare(f'V_B ({label})', V_B, moments, f'var(b_{q})'))
        rows.append(_compare(f'V_E ({label})', V_E, moments, f'var(e_{q})'))
        rows.append(_compare(f'Cov(B,E) ({label})', correlation, moments, f'cov(b_{q},e_{q})'))
        rows.append(_compare(f'energy balance ({label})', 1.0, moments, f'energy({q})'))

    if measurement is Measurement.HETERODYNE:
        for q, label in (('q', 'Q'), ('p', 'P')):
            rows.append(_compare(f'Var(Y) ({label})', expected['var_y'], moments, f'var(y_{q})'))
            rows.append(_compare(f'V(Y|X) ({label})', expected['cond_y_x'], moments,
                                 f'cond(y_{q}|x_{q})'))
            rows.append(_compare(f'V(E|Y) ({label})', expected['cond_e_y'], moments,
                                 f'cond(e_{q}|y_{q})'))
    else:
        rows.append(_compare('Var(Y)', expected['var_y'], moments, 'var(y)'))
        rows.append(_compare('V(Y|X)', expected['cond_y_x'], moments, 'cond(y|x)'))
        rows.append(_compare('V(E|Y) measured', expected['cond_e_y'], moments, 'cond(e|y)'))
        rows.append(_compare('V(E|Y) other', expected['cond_e_other_y'], moments,
                             'cond(e_other|y)'))

    rows.append(_compare('I(X;Y)', mutual_info_bob(measurement, p, unit), moments, 'mi(x;y)',
                         scale=unit.convert(1.0)))

    for row in report.flagged_rows:
        logger.warning("验证偏差: %s 解析值 %.6g, 经验值 %.6g, z = %.2f",
                       row.quantity, row.analytic, row.empirical, row.z_score)
    return report
