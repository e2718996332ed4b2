"""
命令行参数解析模块
定义 rate / sweep / threshold / compare / validate 五个子命令及公共选项
"""

import argparse
import math

from keyrate.protocol import Direction, Measurement, ProtocolSpec
from keyrate.units import InfoUnit


class UsageError(Exception):
    """命令行用法错误，对应退出码 2"""

    kind = "usage"


class ArgumentParser(argparse.ArgumentParser):
    """解析失败时抛出 UsageError 而不是直接退出进程"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _enum_parser(enum_type, label: str):
    def convert(text: str):
        try:
            return enum_type(text.strip().lower())
        except ValueError as exc:
            choices = ', '.join(member.value for member in enum_type)
            raise argparse.ArgumentTypeError(f"{label} 取值为 {choices}，实际为 {text!r}") from exc
    convert.__name__ = label
    return convert


def finite_float(text: str) -> float:
    """有限浮点数"""
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!a} 不是浮点数") from exc
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!a} 不是有限值")
    return value


def fraction_float(text: str) -> float:
    """[0, 1] 内的透射率"""
    value = finite_float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} 不在区间 [0, 1] 内")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!a} 不是整数") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} 必须 >= 1")
    return value


def seed_int(text: str) -> int:
    """64 位无符号随机种子"""
    try:
        value = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!a} 不是整数") from exc
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"{value} 不是 64 位无符号整数")
    return value


def spec_type(text: str) -> ProtocolSpec:
    try:
        return ProtocolSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common_options() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('--unit', type=_enum_parser(InfoUnit, 'unit'), choices=list(InfoUnit),
                        default=InfoUnit.BITS, help="信息单位 (默认: %(default)s)")
    common.add_argument('--format', dest='output_format', choices=['csv', 'json'], default=None,
                        help="输出格式；rate/threshold 默认 json，其余默认 csv")
    common.add_argument('--clamp', action='store_true', help="速率按 max(0, rate) 输出")
    common.add_argument('--output', metavar='FILE', default=None, help="输出文件，默认标准输出")
    common.add_argument('--verbose', action='store_true', help="输出 INFO 级日志")
    common.add_argument('--debug', action='store_true', help="输出 DEBUG 级日志")
    return common


def _add_protocol_options(parser: ArgumentParser, measurements=None) -> None:
    parser.add_argument('--direction', type=_enum_parser(Direction, 'direction'),
                        choices=list(Direction), required=True, help="协商方向")
    measurements = list(Measurement) if measurements is None else measurements
    parser.add_argument('--measurement', type=_enum_parser(Measurement, 'measurement'),
                        choices=measurements, required=True, help="测量方式")


def _add_variance_options(parser: ArgumentParser, many: bool = False,
                          required: bool = True, infinite: bool = False) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    nargs = '+' if many else None
    group.add_argument('--va', type=finite_float, nargs=nargs, help="Alice 态总方差 V_A (>= 1)")
    group.add_argument('--vmod', type=finite_float, nargs=nargs, help="调制方差 V_mod = V_A - 1")
    if infinite:
        group.add_argument('--infinite-modulation', action='store_true',
                           help="V_A → ∞ 的解析阈值")


def build_parser() -> ArgumentParser:
    """
    构造命令行解析器

    Returns:
        ArgumentParser: 顶层解析器
    """
    common = _common_options()
    parser = ArgumentParser(prog='keyrate',
                            description="相干态连续变量量子密钥分发的密钥率计算与验证工具")
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    rate = commands.add_parser('rate', parents=[common], help="单点密钥率")
    _add_protocol_options(rate)
    rate.add_argument('--T', dest='T', type=fraction_float, required=True, help="信道透射率")
    _add_variance_options(rate)

    sweep = commands.add_parser('sweep', parents=[common], help="(T, V_A) 网格扫描")
    t_range = sweep.add_mutually_exclusive_group(required=True)
    t_range.add_argument('--t-range', nargs=2, type=fraction_float, metavar=('START', 'STOP'),
                         help="透射率范围")
    t_range.add_argument('--db-range', nargs=2, type=finite_float, metavar=('START', 'STOP'),
                         help="损耗范围 (dB)，按 dB 等间隔取点")
    sweep.add_argument('--steps', type=positive_int, default=11, help="取点数 (默认: %(default)s)")
    sweep.add_argument('--spacing', choices=['linear', 'db'], default=None,
                       help="--t-range 的取点方式 (默认 linear)")
    _add_variance_options(sweep, many=True)
    sweep.add_argument('--spec', type=spec_type, nargs='+', default=None, metavar='DIR:MEAS',
                       help="协议规格列表，例如 reverse:homodyne；默认全部 9 种")
    sweep.add_argument('--plot', metavar='FILE.png', default=None, help="同时绘制速率-损耗曲线")

    threshold = commands.add_parser('threshold', parents=[common], help="安全阈值透射率")
    _add_protocol_options(threshold)
    _add_variance_options(threshold, infinite=True)

    compare = commands.add_parser('compare', parents=[common], help="精确速率与渐近式对比")
    _add_protocol_options(compare)
    compare.add_argument('--T', dest='T', type=fraction_float, nargs='+', required=True,
                         help="透射率列表")
    _add_variance_options(compare, many=True)
    compare.add_argument('--individual', action='store_true', help="附加个体攻击参考速率列")

    validate = commands.add_parser('validate', parents=[common], help="蒙特卡罗验证")
    validate.add_argument('--measurement', type=_enum_parser(Measurement, 'measurement'),
                          choices=[Measurement.HETERODYNE, Measurement.HOMODYNE], required=True,
                          help="测量方式")
    validate.add_argument('--T', dest='T', type=fraction_float, required=True, help="信道透射率")
    _add_variance_options(validate)
    validate.add_argument('--n', type=positive_int, default=10 ** 6, help="样本数 (默认: %(default)s)")
    validate.add_argument('--seed', type=seed_int, required=True, help="随机种子（必填）")
    validate.add_argument('--workers', type=positive_int, default=1, help="并行线程数")
    validate.add_argument('--dump', metavar='FILE.csv', default=None, help="导出原始记录")
    return parser
