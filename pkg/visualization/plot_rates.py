"""
密钥率曲线绘制器模块
根据扫描结果绘制密钥率随信道损耗（dB）变化的静态图
"""

import logging
import math
from typing import Dict, Iterable, List, Mapping, Tuple

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)


class RatePlotter:
    """密钥率曲线绘制器类"""

    def __init__(self):
        """初始化绘制器"""
        plt.rcParams['font.sans-serif'] = ['Arial', 'DejaVu Sans', 'Liberation Sans']
        plt.rcParams['axes.unicode_minus'] = False

        # 默认样式设置
        self.default_figsize = (10, 7)
        self.title_fontsize = 16
        self.label_fontsize = 12
        self.line_styles = {'direct': '-', 'reverse': '--', 'unconditional': ':'}

    def group_curves(self, rows: Iterable[Mapping]) -> Dict[Tuple[str, str, float],
                                                          List[Tuple[float, float, float]]]:
        """
        按 (direction, measurement, V_A) 分组，每条曲线为 (losses_db, rate, asymptotic_rate) 列表

        速率缺失或非有限的点被跳过。
        """
        curves: Dict[Tuple[str, str, float], List[Tuple[float, float, float]]] = {}
        for row in rows:
            rate, loss = row.get('rate'), row.get('losses_db')
            if rate is None or loss is None or not math.isfinite(rate) or not math.isfinite(loss):
                continue
            key = (str(row['direction']), str(row['measurement']), float(row['va']))
            asymptotic = row.get('asymptotic_rate')
            curves.setdefault(key, []).append(
                (loss, rate, asymptotic if asymptotic is not None else math.nan))
        for points in curves.values():
            points.sort()
        return curves

    def create_rate_chart(self, rows: Iterable[Mapping],
                          title: str = "密钥率与信道损耗",
                          unit: str = 'bits',
                          show_asymptotic: bool = True) -> plt.Figure:
        """
        创建密钥率随损耗变化的曲线图

        Args:
            rows (Iterable[Mapping]): 扫描输出行
            title (str): 图表标题
            unit (str): 纵轴单位
            show_asymptotic (bool): 是否以细线叠加大调制极限

        Returns:
            plt.Figure: matplotlib图形对象
        """
        curves = self.group_curves(rows)
        if not curves:
            raise ValueError("没有可绘制的速率数据")

        fig, ax = plt.subplots(figsize=self.default_figsize)
        for (direction, measurement, va), points in curves.items():
            losses = [point[0] for point in points]
            line, = ax.plot(losses, [point[1] for point in points],
                            linestyle=self.line_styles.get(direction, '-'),
                            label=f"{direction}:{measurement} V_A={va:g}")
            if show_asymptotic:
                asymptotic = [point[2] for point in points]
                if any(math.isfinite(value) for value in asymptotic):
                    ax.plot(losses, asymptotic, color=line.get_color(),
                            linewidth=0.8, alpha=0.5)

        ax.axhline(0.0, color='gray', linewidth=0.8)
        ax.set_title(title, fontsize=self.title_fontsize, fontweight='bold')
        ax.set_xlabel('损耗 (dB)', fontsize=self.label_fontsize)
        ax.set_ylabel(f'密钥率 ({unit}/脉冲)', fontsize=self.label_fontsize)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=9)
        plt.tight_layout()
        return fig

    def save_chart(self, fig: plt.Figure, filename: str, dpi: int = 150) -> bool:
        """
        保存图表到文件并关闭图形

        Args:
            fig (plt.Figure): matplotlib图形对象
            filename (str): 保存的文件名
            dpi (int): 图像分辨率

        Returns:
            bool: 保存是否成功
        """
        try:
            fig.savefig(filename, dpi=dpi, bbox_inches='tight',
                        facecolor='white', edgecolor='none')
        except (OSError, ValueError) as e:
            logger.error("保存图表失败: %s", e)
            return False
        finally:
            plt.close(fig)
        logger.info("图表已保存到: %s", filename)
        return True
