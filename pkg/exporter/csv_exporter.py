"""
CSV导出器模块
负责将密钥率扫描、阈值、验证报告以及蒙特卡罗原始记录导出为CSV格式
"""

import csv
import logging
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Optional, TextIO

import numpy as np

from keyrate.protocol import Measurement
from simulation.montecarlo import BASIS_P, BASIS_Q, SampleBatch, SimConfig, simulate_batch

logger = logging.getLogger(__name__)

# 批量记录导出的列
BATCH_HEADERS = ['index', 'basis', 'x_Q', 'x_P', 'y_Q', 'y_P', 'e_Q', 'e_P']


class CSVExporter:
    """CSV导出器类"""

    def __init__(self, float_format: str = '.17g'):
        """
        初始化CSV导出器

        Args:
            float_format (str): 浮点数格式，默认 17 位有效数字以保证双精度往返
        """
        self.default_float_format = float_format
        self.line_terminator = '\n'

    def format_value(self, value: Any) -> str:
        """
        把单元格的值格式化为与区域设置无关的文本

        None 与 NaN 输出空串，无穷大输出 inf / -inf，枚举输出其取值。
        """
        if value is None:
            return ''
        if isinstance(value, Enum):
            return str(value.value)
        if isinstance(value, (bool, np.bool_)):
            return 'true' if value else 'false'
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if math.isnan(value):
                return ''
            if math.isinf(value):
                return 'inf' if value > 0 else '-inf'
            return format(value, self.default_float_format)
        return str(value)

    def write_rows(self, rows: Iterable[Mapping[str, Any]], headers: List[str],
                   stream: TextIO) -> int:
        """
        把字典行写入文本流

        Args:
            rows (Iterable[Mapping[str, Any]]): 数据行，缺失的键输出空串
            headers (List[str]): 表头，同时决定列顺序
            stream (TextIO): 输出流

        Returns:
            int: 写入的数据行数
        """
        writer = csv.writer(stream, lineterminator=self.line_terminator)
        writer.writerow(headers)
        count = 0
        for row in rows:
            writer.writerow([self.format_value(row.get(name)) for name in headers])
            count += 1
        return count

    def export_rows(self, rows: Iterable[Mapping[str, Any]], headers: List[str],
                    filename: str) -> bool:
        """
        导出数据行到CSV文件

        Args:
            rows (Iterable[Mapping[str, Any]]): 数据行
            headers (List[str]): 表头
            filename (str): 输出文件名（包含路径）

        Returns:
            bool: 导出是否成功
        """
        try:
            # 确保输出目录存在
            output_path = Path(filename)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, 'w', newline='', encoding='utf-8') as csvfile:
                count = self.write_rows(rows, headers, csvfile)
        except OSError as e:
            logger.error("导出CSV文件失败: %s", e)
            return False

        logger.info("已导出 %d 行到: %s", count, filename)
        return True

    def batch_rows(self, batch: SampleBatch) -> Iterable[dict]:
        """
        把模拟记录逐脉冲展开为字典行

        零差记录的基矢列为 Q 或 P，未测量的分量留空；外差记录的基矢列为 QP。
        """
        labels = {BASIS_Q: 'Q', BASIS_P: 'P'}
        for i in range(len(batch)):
            yield {
                'index': i,
                'basis': labels.get(int(batch.basis[i]), 'QP'),
                'x_Q': batch.x_q[i], 'x_P': batch.x_p[i],
                'y_Q': batch.y_q[i], 'y_P': batch.y_p[i],
                'e_Q': batch.e_q[i], 'e_P': batch.e_p[i],
            }

    def export_batch(self, batch: SampleBatch, filename: str) -> bool:
        """
        导出蒙特卡罗原始记录

        Args:
            batch (SampleBatch): 模拟记录
            filename (str): 输出文件名

        Returns:
            bool: 导出是否成功
        """
        if len(batch) == 0:
            logger.warning("模拟记录为空，无法导出")
            return False
        return self.export_rows(self.batch_rows(batch), BATCH_HEADERS, filename)


def read_rows(filename: str, headers: Optional[List[str]] = None) -> List[dict]:
    """读取CSV文件为字典行（字符串值），headers 给定时校验表头"""
    with open(filename, newline='', encoding='utf-8') as csvfile:
        reader = csv.DictReader(csvfile)
        if headers is not None and reader.fieldnames != headers:
            raise ValueError(f"表头不匹配: {reader.fieldnames} != {headers}")
        return list(reader)


def main():
    """测试函数"""
    exporter = CSVExporter()
    batch = simulate_batch(SimConfig(0.5, 10.0, Measurement.HOMODYNE, 5, 7))
    exporter.write_rows(exporter.batch_rows(batch), BATCH_HEADERS, sys.stdout)


if __name__ == "__main__":
    main()
