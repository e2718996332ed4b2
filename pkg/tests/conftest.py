"""
共享测试夹具
Fock 基下热态光子数分布的熵求和，作为 g(V) 的独立参照
"""

import math

import numpy as np
import pytest


def thermal_entropy(V: float, tail: float = 1e-12) -> float:
    """
    V = 2·n̄ + 1 的热态熵 -Σ pₙ ln pₙ（nats），pₙ = n̄ⁿ/(n̄+1)ⁿ⁺¹

    求和截断在剩余概率质量小于 tail 处。
    """
    n_bar = (V - 1.0) / 2.0
    if n_bar == 0.0:
        return 0.0
    log_q = math.log(n_bar) - math.log1p(n_bar)
    terms = int(math.ceil(math.log(tail) / log_q)) + 1
    n = np.arange(terms, dtype=np.float64)
    log_p = -math.log1p(n_bar) + n * log_q
    return float(-np.sum(np.exp(log_p) * log_p))


@pytest.fixture
def fock_entropy():
    return thermal_entropy
