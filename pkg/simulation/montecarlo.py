"""
蒙特卡罗模拟模块
在经典层面模拟高斯调制、分束器信道以及零差/外差测量结果，
作为方差、条件方差和香农互信息公式的独立验证
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from keyrate.channel import ChannelPoint, channel_variances
from keyrate.errors import DomainError, ResourceError
from keyrate.protocol import Measurement

logger = logging.getLogger(__name__)

# 零差记录中基矢字段的取值
BASIS_Q = 0
BASIS_P = 1
BASIS_NONE = -1

# 单批样本数默认上限：每个样本约 160 字节，10^7 个约 1.6 GB
DEFAULT_MAX_SAMPLES = 10 ** 7

# 每个块在批内的字段顺序
_FIELDS = ('x_q', 'x_p', 'a_q', 'a_p', 'b_q', 'b_p', 'e_q', 'e_p', 'y_q', 'y_p')


@dataclass(frozen=True)
class SimConfig:
    """
    模拟配置

    Attributes:
        T (float): 信道透射率
        v_mod (float): 每个正交分量的调制方差（= V_A - 1）
        measurement (Measurement): 外差或零差
        n (int): 脉冲数
        seed (int): 64 位随机种子
    """

    T: float
    v_mod: float
    measurement: Measurement
    n: int
    seed: int

    def __post_init__(self):
        if not math.isfinite(self.T) or not 0.0 <= self.T <= 1.0:
            raise DomainError(f"透射率必须在 [0, 1] 内，实际 T = {self.T!r}")
        if not math.isfinite(self.v_mod) or self.v_mod < 0.0:
            raise DomainError(f"调制方差必须 >= 0，实际为 {self.v_mod!r}")
        if self.measurement not in (Measurement.HETERODYNE, Measurement.HOMODYNE):
            raise DomainError(f"模拟只支持外差或零差测量，实际为 {self.measurement}")
        if int(self.n) < 1:
            raise DomainError(f"样本数必须 >= 1，实际为 {self.n!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError(f"种子必须是 64 位无符号整数，实际为 {self.seed!r}")

    @property
    def va(self) -> float:
        return self.v_mod + 1.0


@dataclass(eq=False)
class SampleBatch:
    """
    一批逐脉冲记录

    x_*: Alice 的调制值；a_*: Alice 发出模式的正交分量；
    b_*: Bob 收到模式的正交分量；e_*: Eve 反射模式的正交分量（测量前的经典替身）；
    y_*: Bob 的测量结果，零差时未测量的分量为 NaN；
    basis: 零差的测量基矢（0 = Q，1 = P），外差为 -1。
    """

    config: SimConfig
    x_q: np.ndarray
    x_p: np.ndarray
    a_q: np.ndarray
    a_p: np.ndarray
    b_q: np.ndarray
    b_p: np.ndarray
    e_q: np.ndarray
    e_p: np.ndarray
    y_q: np.ndarray
    y_p: np.ndarray
    basis: np.ndarray

    def __len__(self) -> int:
        return int(self.x_q.shape[0])

    def sift(self) -> Dict[str, np.ndarray]:
        """
        零差筛选：按 Bob 公布的基矢保留对应的正交分量

        Returns:
            Dict[str, np.ndarray]: x（Alice 被测分量的调制值）、y（Bob 结果）、
            e（Eve 同一分量）、e_other（Eve 另一分量）
        """
        if self.config.measurement is not Measurement.HOMODYNE:
            raise DomainError("只有零差记录需要筛选")
        on_q = self.basis == BASIS_Q
        return {
            'x': np.where(on_q, self.x_q, self.x_p),
            'y': np.where(on_q, self.y_q, self.y_p),
            'e': np.where(on_q, self.e_q, self.e_p),
            'e_other': np.where(on_q, self.e_p, self.e_q),
        }


class MonteCarloSimulator:
    """蒙特卡罗模拟器类"""

    def __init__(self, max_samples: int = DEFAULT_MAX_SAMPLES, chunk_size: int = 2 ** 16,
                 workers: int = 1):
        """
        初始化模拟器

        每个块使用由 SeedSequence 派生的独立 Philox 计数器流，
        因此同一种子的结果与块的执行顺序、线程数无关。

        Args:
            max_samples (int): 单批样本数上限
            chunk_size (int): 每块脉冲数
            workers (int): 并行线程数
        """
        if chunk_size < 1 or workers < 1:
            raise DomainError("chunk_size 与 workers 必须 >= 1")
        self.max_samples = max_samples
        self.chunk_size = chunk_size
        self.workers = workers

    def _draw_chunk(self, config: SimConfig, seed_seq: np.random.SeedSequence,
                    size: int) -> Dict[str, np.ndarray]:
        rng = np.random.Generator(np.random.Philox(seed_seq))
        sigma = math.sqrt(config.v_mod)
        t, r = math.sqrt(config.T), math.sqrt(1.0 - config.T)

        x_q = rng.normal(0.0, sigma, size)
        x_p = rng.normal(0.0, sigma, size)
        # 相干态：调制值加上单位方差的真空噪声
        a_q = x_q + rng.standard_normal(size)
        a_p = x_p + rng.standard_normal(size)
        v_q = rng.standard_normal(size)
        v_p = rng.standard_normal(size)
        b_q, b_p = t * a_q + r * v_q, t * a_p + r * v_p
        e_q, e_p = r * a_q - t * v_q, r * a_p - t * v_p

        if config.measurement is Measurement.HETERODYNE:
            # 外差对每个分量各引入一份单位噪声
            y_q = b_q + rng.standard_normal(size)
            y_p = b_p + rng.standard_normal(size)
            basis = np.full(size, BASIS_NONE, dtype=np.int8)
        else:
            basis = rng.integers(0, 2, size, dtype=np.int8)
            y_q = np.where(basis == BASIS_Q, b_q, np.nan)
            y_p = np.where(basis == BASIS_P, b_p, np.nan)

        return {
            'x_q': x_q, 'x_p': x_p, 'a_q': a_q, 'a_p': a_p,
            'b_q': b_q, 'b_p': b_p, 'e_q': e_q, 'e_p': e_p,
            'y_q': y_q, 'y_p': y_p, 'basis': basis,
        }

    def simulate_batch(self, config: SimConfig) -> SampleBatch:
        """
        生成一批模拟记录

        Args:
            config (SimConfig): 模拟配置

        Returns:
            SampleBatch: 逐脉冲记录

        Raises:
            ResourceError: 样本数超过上限
        """
        n = int(config.n)
        if n > self.max_samples:
            raise ResourceError(f"样本数 {n} 超过上限 {self.max_samples}")

        sizes = [self.chunk_size] * (n // self.chunk_size)
        if n % self.chunk_size:
            sizes.append(n % self.chunk_size)
        children = np.random.SeedSequence(int(config.seed)).spawn(len(sizes))

        if self.workers > 1 and len(sizes) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                chunks: List[Dict[str, np.ndarray]] = list(
                    pool.map(lambda job: self._draw_chunk(config, *job), zip(children, sizes)))
        else:
            chunks = [self._draw_chunk(config, child, size) for child, size in zip(children, sizes)]

        columns = {name: np.concatenate([chunk[name] for chunk in chunks])
                   for name in _FIELDS + ('basis',)}
        logger.info("模拟完成: %s, T=%g, V_mod=%g, n=%d, seed=%d, 分块 %d",
                    config.measurement, config.T, config.v_mod, n, config.seed, len(sizes))
        return SampleBatch(config=config, **columns)


def simulate_batch(config: SimConfig, simulator: Optional[MonteCarloSimulator] = None) -> SampleBatch:
    """使用默认或给定的模拟器生成一批记录"""
    return (simulator or MonteCarloSimulator()).simulate_batch(config)


def main():
    """测试函数"""
    config = SimConfig(T=0.5, v_mod=10.0, measurement=Measurement.HETERODYNE, n=100_000, seed=2024)
    batch = MonteCarloSimulator(workers=2).simulate_batch(config)
    V_B, V_E = channel_variances(ChannelPoint(config.T, config.va))
    print(f"{len(batch)} 个脉冲, T = {config.T}, V_A = {config.va}")
    print(f"Var(b_q) = {np.var(batch.b_q, ddof=1):.4f} (解析值 {V_B:.4f})")
    print(f"Var(e_q) = {np.var(batch.e_q, ddof=1):.4f} (解析值 {V_E:.4f})")

    sifted = simulate_batch(SimConfig(0.5, 10.0, Measurement.HOMODYNE, 1000, 2024)).sift()
    print(f"零差筛选后保留 {len(sifted['y'])} 条记录")


if __name__ == "__main__":
    main()
