"""
协议描述模块
定义测量方式、协商方向、协议规格与密钥率分解结果
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import List

from keyrate.units import InfoUnit


class Measurement(Enum):
    """Bob 的测量方式"""

    COLLECTIVE = "collective"  # 最优集体测量（Holevo 信息）
    HETERODYNE = "heterodyne"
    HOMODYNE = "homodyne"

    def __str__(self):
        return self.value


class Direction(Enum):
    """密钥协商方向"""

    DIRECT = "direct"
    REVERSE = "reverse"
    UNCONDITIONAL = "unconditional"  # 与方向无关的无条件安全速率

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ProtocolSpec:
    """协议规格：测量方式 × 协商方向"""

    measurement: Measurement
    direction: Direction

    def __str__(self):
        return f"{self.direction.value}:{self.measurement.value}"

    @classmethod
    def parse(cls, text: str) -> 'ProtocolSpec':
        """
        解析 "direction:measurement" 形式的字符串

        Args:
            text (str): 例如 "reverse:homodyne"

        Returns:
            ProtocolSpec: 协议规格
        """
        try:
            direction, measurement = text.strip().lower().split(":", 1)
            return cls(Measurement(measurement), Direction(direction))
        except ValueError as exc:
            raise ValueError(f"无法解析协议规格: {text!r}，格式为 direction:measurement") from exc

    @classmethod
    def all_specs(cls) -> List['ProtocolSpec']:
        """按方向、测量方式的声明顺序列出全部 9 种组合"""
        return [cls(m, d) for d, m in product(Direction, Measurement)]


@dataclass(frozen=True)
class RateBreakdown:
    """密钥率分解：Bob 侧信息、Eve 侧信息与净速率"""

    bob_info: float
    eve_info: float
    rate: float
    unit: InfoUnit

    @classmethod
    def from_terms(cls, bob_info_nats: float, eve_info_nats: float,
                   unit: InfoUnit) -> 'RateBreakdown':
        """由 nats 表示的两项构造，换算只在这里做一次，速率不做截断"""
        bob_info = unit.convert(bob_info_nats)
        eve_info = unit.convert(eve_info_nats)
        return cls(bob_info=bob_info, eve_info=eve_info,
                   rate=bob_info - eve_info, unit=unit)

    def to_dict(self) -> dict:
        return {
            'bob_info': self.bob_info,
            'eve_info': self.eve_info,
            'rate': self.rate,
            'unit': self.unit.value,
        }
