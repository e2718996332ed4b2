"""
JSON导出器模块
每行一个对象组成数组，键与CSV表头一致；非有限浮点数输出为 null
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Mapping, TextIO

import numpy as np

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


class JSONExporter:
    """JSON导出器类"""

    def __init__(self, indent: int = 2):
        self.default_indent = indent

    def to_objects(self, rows: Iterable[Mapping[str, Any]],
                   headers: List[str] = None) -> List[dict]:
        """按表头顺序整理为纯 Python 对象，headers 为空时保留原键顺序"""
        objects = []
        for row in rows:
            keys = headers if headers is not None else list(row.keys())
            objects.append({key: _plain(row.get(key)) for key in keys})
        return objects

    def dumps(self, rows: Iterable[Mapping[str, Any]], headers: List[str] = None) -> str:
        """
        序列化为 JSON 文本

        浮点数使用 Python 的最短往返表示，重新解析后与原值逐位一致。
        """
        return json.dumps(self.to_objects(rows, headers), indent=self.default_indent,
                          ensure_ascii=False, allow_nan=False)

    def write_rows(self, rows: Iterable[Mapping[str, Any]], stream: TextIO,
                   headers: List[str] = None) -> None:
        stream.write(self.dumps(rows, headers))
        stream.write('\n')

    def write_object(self, row: Mapping[str, Any], stream: TextIO,
                     headers: List[str] = None) -> None:
        """单个结果（rate / threshold）输出为一个对象而不是数组"""
        obj = self.to_objects([row], headers)[0]
        stream.write(json.dumps(obj, indent=self.default_indent, ensure_ascii=False,
                                allow_nan=False))
        stream.write('\n')

    def export_rows(self, rows: Iterable[Mapping[str, Any]], filename: str,
                    headers: List[str] = None) -> bool:
        """
        导出数据行到JSON文件

        Args:
            rows (Iterable[Mapping[str, Any]]): 数据行
            filename (str): 输出文件名
            headers (List[str], optional): 键顺序

        Returns:
            bool: 导出是否成功
        """
        try:
            output_path = Path(filename)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, 'w', newline='', encoding='utf-8') as jsonfile:
                self.write_rows(rows, jsonfile, headers)
        except OSError as e:
            logger.error("导出JSON文件失败: %s", e)
            return False

        logger.info("已导出JSON到: %s", filename)
        return True
