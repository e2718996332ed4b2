"""
子命令分发模块
解析参数、调用计算核心并把结果以 CSV / JSON 写到标准输出或文件

退出码：0 成功，1 领域错误（KeyRateError 或文件写入失败），2 用法错误。
所有错误以单行 ``error[<kind>]: <message>`` 写到标准错误。
"""

import contextlib
import logging
import sys
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO

from cli.parser import UsageError, build_parser
from cli.sweep import (SWEEP_HEADERS, SweepSpec, compare_headers, evaluate_point, run_compare,
                       run_sweep, sweep_headers)
from exporter.csv_exporter import CSVExporter
from exporter.json_exporter import JSONExporter
from keyrate.channel import ChannelPoint, vmod_to_va
from keyrate.errors import KeyRateError
from keyrate.protocol import ProtocolSpec
from keyrate.threshold import ThresholdQuery, solve_threshold
from simulation.montecarlo import MonteCarloSimulator
from simulation.validation import validation_report
from visualization.plot_rates import RatePlotter

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

THRESHOLD_HEADERS = ['direction', 'measurement', 'va', 'T', 'losses_db']
VALIDATION_HEADERS = ['quantity', 'analytic', 'empirical', 'stderr', 'z_score', 'flagged']

# 未指定 --format 时各子命令的默认输出格式
DEFAULT_FORMATS = {'rate': 'json', 'threshold': 'json'}


class OutputError(Exception):
    """结果文件无法写入"""

    kind = "io"


def configure_logging(verbose: bool = False, debug: bool = False) -> None:
    """日志写到标准错误，标准输出只留给数据"""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def _report_error(kind: str, message: str) -> None:
    text = ' '.join(str(message).split())
    print(f"error[{kind}]: {text}", file=sys.stderr)


@contextlib.contextmanager
def _open_output(filename: Optional[str]) -> Iterator[TextIO]:
    if filename is None:
        yield sys.stdout
        return
    try:
        path = Path(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        handle = open(path, 'w', newline='', encoding='utf-8')
    except OSError as exc:
        raise OutputError(f"无法写入 {filename}: {exc}") from exc
    with handle:
        yield handle
    logger.info("结果已写入: %s", filename)


def _emit_rows(args, rows: Sequence[dict], headers: List[str]) -> None:
    with _open_output(args.output) as stream:
        if args.output_format == 'json':
            JSONExporter().write_rows(rows, stream, headers)
        else:
            CSVExporter().write_rows(rows, headers, stream)


def _emit_object(args, row: dict, headers: List[str]) -> None:
    with _open_output(args.output) as stream:
        if args.output_format == 'json':
            JSONExporter().write_object(row, stream, headers)
        else:
            CSVExporter().write_rows([row], headers, stream)


def _single_va(args) -> float:
    return vmod_to_va(args.vmod) if args.vmod is not None else args.va


def _va_list(args) -> List[float]:
    if args.vmod is not None:
        return [vmod_to_va(v) for v in args.vmod]
    return list(args.va)


def cmd_rate(args) -> int:
    spec = ProtocolSpec(args.measurement, args.direction)
    row = evaluate_point(spec, args.T, _single_va(args), args.unit).to_dict(clamp=args.clamp)
    row['unit'] = args.unit.value
    headers = SWEEP_HEADERS + ['unit'] if args.output_format == 'json' else SWEEP_HEADERS
    _emit_object(args, row, headers)
    return 0


def cmd_sweep(args) -> int:
    vas = tuple(_va_list(args))
    specs = tuple(args.spec) if args.spec else tuple(ProtocolSpec.all_specs())
    if args.db_range is not None:
        if args.spacing == 'linear':
            raise UsageError("--db-range 只能按 dB 等间隔取点")
        sweep = SweepSpec.from_db_range(args.db_range[0], args.db_range[1], args.steps, vas,
                                        specs=specs, unit=args.unit)
    else:
        sweep = SweepSpec(args.t_range[0], args.t_range[1], args.steps, vas, specs=specs,
                          spacing=args.spacing or 'linear', unit=args.unit)

    rows = list(run_sweep(sweep))
    _emit_rows(args, [row.to_dict(clamp=args.clamp) for row in rows], sweep_headers(rows))
    if args.plot:
        plotter = RatePlotter()
        try:
            figure = plotter.create_rate_chart([row.to_dict() for row in rows],
                                               unit=args.unit.value)
        except ValueError as exc:
            raise OutputError(f"无法绘制图表 {args.plot}: {exc}") from exc
        if not plotter.save_chart(figure, args.plot):
            raise OutputError(f"无法保存图表 {args.plot}")
    return 0


def cmd_threshold(args) -> int:
    spec = ProtocolSpec(args.measurement, args.direction)
    va = None if args.infinite_modulation else _single_va(args)
    result = solve_threshold(ThresholdQuery(spec, va))
    logger.info("阈值 %s: T = %.12g (%.6g dB)", spec, result.transmission, result.losses_db)
    _emit_object(args, result.to_dict(), THRESHOLD_HEADERS)
    return 0


def cmd_compare(args) -> int:
    spec = ProtocolSpec(args.measurement, args.direction)
    rows, summary = run_compare(spec, args.T, _va_list(args), args.unit, args.individual)
    _emit_rows(args, [row.to_dict() for row in rows], compare_headers(args.individual))
    print(summary.describe(), file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    point = ChannelPoint(args.T, _single_va(args))
    simulator = MonteCarloSimulator(workers=args.workers)
    report = validation_report(point, args.measurement, args.n, args.seed,
                               simulator=simulator, unit=args.unit,
                               keep_batch=args.dump is not None)
    _emit_rows(args, [row.to_dict() for row in report.rows], VALIDATION_HEADERS)
    if args.dump is not None and not CSVExporter().export_batch(report.batch, args.dump):
        raise OutputError(f"无法导出原始记录到 {args.dump}")
    return 0


COMMANDS = {
    'rate': cmd_rate,
    'sweep': cmd_sweep,
    'threshold': cmd_threshold,
    'compare': cmd_compare,
    'validate': cmd_validate,
}


def dispatch(argv: Sequence[str]) -> int:
    """
    命令行入口

    Args:
        argv (Sequence[str]): 不含程序名的参数列表

    Returns:
        int: 退出码
    """
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        _report_error(exc.kind, exc)
        return 2
    except SystemExit as exc:
        # --help 正常退出
        return int(exc.code or 0)

    configure_logging(args.verbose, args.debug)
    if args.output_format is None:
        args.output_format = DEFAULT_FORMATS.get(args.command, 'csv')

    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _report_error(exc.kind, exc)
        return 2
    except (KeyRateError, OutputError) as exc:
        _report_error(exc.kind, exc)
        return 1
