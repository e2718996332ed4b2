"""
信息单位模块
内部计算统一使用自然单位（nats），只在输出边界处换算为比特
"""

import math
from enum import Enum


class InfoUnit(Enum):
    """信息量单位：对数底的选择"""

    BITS = "bits"  # 以2为底
    NATS = "nats"  # 以e为底

    def __str__(self):
        return self.value

    def convert(self, value_nats: float) -> float:
        """
        将以nats表示的数值换算到当前单位

        Args:
            value_nats (float): 以nats为单位的数值

        Returns:
            float: 当前单位下的数值
        """
        if self is InfoUnit.BITS:
            return value_nats / math.log(2.0)
        return value_nats
