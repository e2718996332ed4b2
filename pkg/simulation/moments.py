"""
矩估计模块
从模拟记录中估计方差、协方差、条件方差（最小二乘回归残差）与高斯互信息，
并按渐近正态理论给出标准误
"""

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from keyrate.errors import DegenerateInputError, DomainError
from keyrate.protocol import Measurement
from keyrate.units import InfoUnit
from simulation.montecarlo import SampleBatch


@dataclass(frozen=True)
class Estimate:
    """带标准误的估计值"""

    value: float
    stderr: float
    count: int


def _as_array(u: np.ndarray, minimum: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.shape[0] < minimum:
        raise DomainError(f"至少需要 {minimum} 个样本，实际为 {u.shape}")
    return u


def sample_variance(u: np.ndarray) -> Estimate:
    """
    无偏样本方差，标准误 s²·sqrt(2/(n-1))

    Args:
        u (np.ndarray): 样本

    Returns:
        Estimate: 方差估计
    """
    u = _as_array(u, 2)
    n = u.shape[0]
    value = float(np.var(u, ddof=1))
    return Estimate(value, value * math.sqrt(2.0 / (n - 1)), n)


def sample_covariance(u: np.ndarray, w: np.ndarray) -> Estimate:
    """无偏样本协方差，标准误 sqrt((s_u²·s_w² + c²)/(n-1))"""
    u, w = _as_array(u, 2), _as_array(w, 2)
    n = u.shape[0]
    matrix = np.cov(u, w, ddof=1)
    c = float(matrix[0, 1])
    stderr = math.sqrt((float(matrix[0, 0]) * float(matrix[1, 1]) + c * c) / (n - 1))
    return Estimate(c, stderr, n)


def conditional_variance(u: np.ndarray, w: np.ndarray) -> Estimate:
    """
    条件方差 V(u|w)：u 对 w 做带截距的最小二乘回归后的残差方差

    Args:
        u (np.ndarray): 因变量
        w (np.ndarray): 自变量

    Returns:
        Estimate: 残差方差，标准误 s²·sqrt(2/(n-2))

    Raises:
        DegenerateInputError: 自变量方差为零
    """
    u, w = _as_array(u, 3), _as_array(w, 3)
    n = u.shape[0]
    if float(np.ptp(w)) == 0.0:
        raise DegenerateInputError("回归自变量方差为零，条件方差无定义")
    design = np.column_stack([np.ones(n), w])
    coefficients, _, _, _ = np.linalg.lstsq(design, u, rcond=None)
    residual = u - design @ coefficients
    value = float(residual @ residual) / (n - 2)
    return Estimate(value, value * math.sqrt(2.0 / (n - 2)), n)


def gaussian_mi(V: float, V_cond: float, unit: InfoUnit = InfoUnit.NATS) -> float:
    """
    单个正交分量的高斯香农互信息 (1/2)·log(V/V_cond)

    Args:
        V (float): 总方差
        V_cond (float): 条件方差，0 < V_cond <= V
        unit (InfoUnit): 输出单位

    Returns:
        float: 互信息
    """
    if not V_cond > 0.0:
        raise DomainError(f"条件方差必须为正，实际为 {V_cond!r}")
    if V < V_cond:
        raise DomainError(f"要求 V >= V_cond，实际 V = {V!r}, V_cond = {V_cond!r}")
    return unit.convert(0.5 * math.log(V / V_cond))


def _empirical_mi(total: Estimate, residual: Estimate) -> Estimate:
    # 方差对数之差的标准误：Var ≈ (4/n)(1 - s_res²/s_y²)
    ratio = min(residual.value / total.value, 1.0)
    value = 0.5 * math.log(total.value / residual.value)
    return Estimate(value, math.sqrt((1.0 - ratio) / total.count), total.count)


@dataclass
class MomentReport:
    """一批记录的经验矩汇总"""

    measurement: Measurement
    count: int
    estimates: Dict[str, Estimate] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Estimate:
        return self.estimates[name]

    def __contains__(self, name: str) -> bool:
        return name in self.estimates


def estimate_moments(batch: SampleBatch, condition_on_modulation: bool = True) -> MomentReport:
    """
    估计一批记录的全部经验矩

    外差时逐分量给出 V(y|x)、V(e|y)；零差时先按基矢筛选，
    两个基矢的记录合并估计（两分量统计对称）。

    Args:
        batch (SampleBatch): 模拟记录，至少 3 条
        condition_on_modulation (bool): 为 False 时以边缘方差代替以调制值为条件的方差
            （无调制时调制值恒为零）

    Returns:
        MomentReport: 经验矩汇总

    Raises:
        DegenerateInputError: 回归自变量方差为零
    """
    if len(batch) < 3:
        raise DomainError(f"矩估计至少需要 3 条记录，实际为 {len(batch)}")
    report = MomentReport(batch.config.measurement, len(batch))
    est = report.estimates

    for q in ('q', 'p'):
        a, b, e = getattr(batch, f'a_{q}'), getattr(batch, f'b_{q}'), getattr(batch, f'e_{q}')
        est[f'var(a_{q})'] = sample_variance(a)
        est[f'var(b_{q})'] = sample_variance(b)
        est[f'var(e_{q})'] = sample_variance(e)
        est[f'cov(b_{q},e_{q})'] = sample_covariance(b, e)
        # b、e 是 (a, 真空) 的正交变换，三者方差之差就是真空噪声的样本方差
        balance = est[f'var(b_{q})'].value + est[f'var(e_{q})'].value - est[f'var(a_{q})'].value
        est[f'energy({q})'] = Estimate(balance, balance * math.sqrt(2.0 / (len(batch) - 1)),
                                       len(batch))

    def given_x(u: np.ndarray, x: np.ndarray) -> Estimate:
        return conditional_variance(u, x) if condition_on_modulation else sample_variance(u)

    if batch.config.measurement is Measurement.HETERODYNE:
        mi_value, mi_var = 0.0, 0.0
        for q in ('q', 'p'):
            x, y, e = getattr(batch, f'x_{q}'), getattr(batch, f'y_{q}'), getattr(batch, f'e_{q}')
            est[f'var(y_{q})'] = sample_variance(y)
            est[f'cond(y_{q}|x_{q})'] = given_x(y, x)
            est[f'cond(e_{q}|y_{q})'] = conditional_variance(e, y)
            mi = _empirical_mi(est[f'var(y_{q})'], est[f'cond(y_{q}|x_{q})'])
            mi_value += mi.value
            mi_var += mi.stderr ** 2
        est['mi(x;y)'] = Estimate(mi_value, math.sqrt(mi_var), len(batch))
    else:
        sifted = batch.sift()
        est['var(y)'] = sample_variance(sifted['y'])
        est['cond(y|x)'] = given_x(sifted['y'], sifted['x'])
        est['cond(e|y)'] = conditional_variance(sifted['e'], sifted['y'])
        est['cond(e_other|y)'] = conditional_variance(sifted['e_other'], sifted['y'])
        est['mi(x;y)'] = _empirical_mi(est['var(y)'], est['cond(y|x)'])
    return report
