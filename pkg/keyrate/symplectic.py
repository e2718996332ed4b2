"""
双模协方差矩阵模块
构造 Bob、Eve 两个输出模式的联合协方差矩阵，计算辛本征值，
用于独立验证 H(BE) = H(A)
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from keyrate.channel import ChannelPoint, channel_variances
from keyrate.entropy import entropy_g
from keyrate.errors import CovarianceError

# 辛本征值与对称性检查的容差
SYMPLECTIC_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class TwoModeCovariance:
    """
    双模协方差矩阵，正交分量顺序为 (Q_B, P_B, Q_E, P_E)，散粒噪声单位

    构造时检查形状、对称性、正定性；物理性（辛本征值 >= 1）
    在 symplectic_eigenvalues 中检查。
    """

    matrix: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.matrix, dtype=np.float64)
        if sigma.shape != (4, 4):
            raise CovarianceError(f"协方差矩阵必须是 4x4，实际形状 {sigma.shape}")
        if not np.all(np.isfinite(sigma)):
            raise CovarianceError("协方差矩阵含有非有限元素")
        scale = max(1.0, float(np.max(np.abs(sigma))))
        if not np.allclose(sigma, sigma.T, rtol=0.0, atol=SYMPLECTIC_TOLERANCE * scale):
            raise CovarianceError("协方差矩阵不对称")
        sigma = (sigma + sigma.T) / 2.0
        if float(np.min(np.linalg.eigvalsh(sigma))) <= 0.0:
            raise CovarianceError("协方差矩阵不是正定的")
        object.__setattr__(self, 'matrix', sigma)

    @property
    def block_a(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def block_b(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def block_c(self) -> np.ndarray:
        return self.matrix[:2, 2:]


def joint_output_covariance(p: ChannelPoint) -> TwoModeCovariance:
    """
    分束器输出 (B, E) 的联合协方差矩阵

    约定 B = √T·A + √(1-T)·N，E = √(1-T)·A - √T·N，N 为真空模式。
    对角块为 V_B·I 与 V_E·I，非对角块为 sqrt(T(1-T))·(V_A-1)·I。
    分束器相位的选择不影响与熵有关的不变量。

    Args:
        p (ChannelPoint): 信道工作点

    Returns:
        TwoModeCovariance: 联合协方差矩阵
    """
    V_B, V_E = channel_variances(p)
    c = math.sqrt(p.T * (1.0 - p.T)) * (p.V_A - 1.0)
    identity = np.eye(2)
    sigma = np.block([
        [V_B * identity, c * identity],
        [c * identity, V_E * identity],
    ])
    return TwoModeCovariance(sigma)


def symplectic_eigenvalues(sigma: TwoModeCovariance) -> Tuple[float, float]:
    """
    双模协方差矩阵的辛本征值

    ν±² = (Δ ± sqrt(Δ² - 4·det σ)) / 2，Δ = det A + det B + 2·det C。
    ν₋² 用 det σ / ν₊² 计算，避免两个相近大数相减。

    Args:
        sigma (TwoModeCovariance): 协方差矩阵

    Returns:
        Tuple[float, float]: (ν₊, ν₋)，ν₊ >= ν₋

    Raises:
        CovarianceError: 判别式明显为负或辛本征值小于 1
    """
    delta = (float(np.linalg.det(sigma.block_a)) + float(np.linalg.det(sigma.block_b))
             + 2.0 * float(np.linalg.det(sigma.block_c)))
    det_sigma = float(np.linalg.det(sigma.matrix))
    discriminant = delta * delta - 4.0 * det_sigma
    if discriminant < -SYMPLECTIC_TOLERANCE * max(1.0, delta * delta):
        raise CovarianceError(f"辛本征值判别式为负: {discriminant!r}")
    if det_sigma <= 0.0:
        raise CovarianceError(f"协方差矩阵行列式非正: {det_sigma!r}")
    nu_plus_sq = (delta + math.sqrt(max(discriminant, 0.0))) / 2.0
    nu_minus_sq = det_sigma / nu_plus_sq
    nu_plus, nu_minus = math.sqrt(nu_plus_sq), math.sqrt(nu_minus_sq)
    if nu_minus < 1.0 - SYMPLECTIC_TOLERANCE:
        raise CovarianceError(f"违反不确定性关系: ν₋ = {nu_minus!r} < 1")
    return nu_plus, nu_minus


def two_mode_entropy(sigma: TwoModeCovariance) -> float:
    """
    双模高斯态的冯·诺依曼熵 g(ν₊) + g(ν₋)，单位 nats

    容差内略小于 1 的辛本征值按 1 处理。
    """
    nu_plus, nu_minus = symplectic_eigenvalues(sigma)
    return entropy_g(max(nu_plus, 1.0)) + entropy_g(max(nu_minus, 1.0))


def main():
    """测试函数"""
    for T in (0.2, 0.5, 0.8):
        point = ChannelPoint(T, 101.0)
        sigma = joint_output_covariance(point)
        nu_plus, nu_minus = symplectic_eigenvalues(sigma)
        # 纯损耗信道下 BE 联合态与 Alice 的态同熵
        print(f"T = {T}: ν₊ = {nu_plus:.6f}, ν₋ = {nu_minus:.6f}, "
              f"S(BE) = {two_mode_entropy(sigma):.9f}, g(V_A) = {entropy_g(point.V_A):.9f}")


if __name__ == "__main__":
    main()
