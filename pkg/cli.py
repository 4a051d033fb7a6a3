"""
linecover 命令行入口
子命令: generate（生成实例）、solve（求解）、bench（基准测试）
"""

import argparse
import os
import sys
from typing import List, Optional, Sequence
import logging

from config_manager import ConfigManager, bnb_params, dual_params, merge_config
from core import (CoverPlan, LineCoverError, denormalize_plan, expand_copies,
                  load_instance, normalize, save_instance, save_plan)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TIMEOUT = 2

SEED_ENV = "LINECOVER_SEED"
METHODS = ("bnb", "heuristic", "oracle", "uniform")


class UsageError(Exception):
    """命令行参数错误"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linecover", description="线段圆盘覆盖问题求解器")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    parser.add_argument("--quiet", action="store_true", help="只输出警告和错误")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    gen = sub.add_parser("generate", help="生成 (q, s, t, u) 类别实例")
    gen.add_argument("--q", type=int, help="圆盘数")
    gen.add_argument("--s", type=float, help="b 放大系数")
    gen.add_argument("--t", type=float, help="f/b 比例")
    gen.add_argument("--u", type=int, default=0, help="结构扰动 (0,1,2,3,5)")
    gen.add_argument("--seed", type=int, default=0, help=f"随机种子（环境变量 {SEED_ENV} 优先）")
    gen.add_argument("--random", action="store_true", help="随机基础类（默认确定性 b_i = i）")
    gen.add_argument("--copies", nargs=3, action="append", metavar=("F", "B", "COUNT"),
                     help="按类型生成多个相同圆盘，可重复")
    gen.add_argument("--length", type=float, default=1.0, help="线段长度（仅用于 --copies）")
    gen.add_argument("-o", "--output", required=True, help="输出实例 JSON")
    gen.add_argument("--config", help="配置文件（JSON）")

    solve = sub.add_parser("solve", help="求解实例")
    solve.add_argument("file", help="实例 JSON")
    solve.add_argument("--method", choices=METHODS, default="bnb")
    solve.add_argument("--time-limit", type=float, help="分支定界时间上限（秒）")
    solve.add_argument("--alpha0", type=float, help="次梯度初始步长系数 (0, 2)")
    solve.add_argument("--max-iters", type=int, help="根节点次梯度迭代上限")
    solve.add_argument("--json", dest="json_out", help="方案输出 JSON")
    solve.add_argument("--config", help="配置文件（JSON）")

    bench = sub.add_parser("bench", help="批量基准测试")
    bench.add_argument("--classes", required=True, help="类别列表（JSON 或 CSV）")
    bench.add_argument("--reps", type=int, default=1, help="每个类别的重复次数")
    bench.add_argument("--time-limit", type=float, help="每次求解的时间上限（秒）")
    bench.add_argument("--csv", required=True, help="结果 CSV")
    bench.add_argument("--jobs", type=int, help="并行进程数")
    bench.add_argument("--config", help="配置文件（JSON）")
    return parser


def _setup_logging(args):
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return merge_config(None)
    if not os.path.exists(path):
        raise UsageError(f"配置文件不存在: {path}")
    config = ConfigManager(path).load_config()
    if config is None:
        raise UsageError(f"配置文件无效: {path}")
    return config


def _apply_solver_flags(config: dict, args) -> dict:
    dual = dict(config["dual"])
    if args.alpha0 is not None:
        if not 0 < args.alpha0 < 2:
            raise UsageError(f"--alpha0 必须满足 0 < alpha0 < 2，实际为 {args.alpha0}")
        dual["alpha0"] = args.alpha0
    if args.max_iters is not None:
        if args.max_iters < 1:
            raise UsageError(f"--max-iters 必须 ≥ 1，实际为 {args.max_iters}")
        dual["root_max_iters"] = args.max_iters
        dual["node_max_iters"] = min(dual["node_max_iters"], args.max_iters)
    bnb = dict(config["bnb"])
    if args.time_limit is not None:
        if not args.time_limit > 0:
            raise UsageError(f"--time-limit 必须 > 0，实际为 {args.time_limit}")
        bnb["time_limit"] = args.time_limit
    return merge_config({**config, "dual": dual, "bnb": bnb})


def _print_plan(method: str, plan: CoverPlan):
    print(f"方法: {method}")
    print(f"目标值: {plan.objective:.12g}")
    print(f"  固定成本: {plan.fixed_cost:.12g}")
    print(f"  可变成本: {plan.variable_cost:.12g}")
    print(f"选中圆盘: {plan.selected}")
    for e in plan.entries:
        print(f"  圆盘 {e.disc_id}: 直径 {e.diameter:.9g}，圆心 {e.center:.9g}")


def cmd_generate(args) -> int:
    from instgen_bench import ClassSpec, generate_instance

    config = _load_config(args.config)
    if args.copies:
        try:
            types = [(float(f), float(b), int(count)) for f, b, count in args.copies]
        except ValueError as e:
            raise UsageError(f"--copies 参数无效: {str(e)}") from None
        instance = expand_copies(types, args.length)
    else:
        missing = [name for name in ("q", "s", "t") if getattr(args, name) is None]
        if missing:
            raise UsageError("缺少参数: " + ", ".join(f"--{name}" for name in missing))
        seed = args.seed
        env_seed = os.environ.get(SEED_ENV)
        if env_seed:
            try:
                seed = int(env_seed)
            except ValueError:
                raise UsageError(f"环境变量 {SEED_ENV} 不是整数: {env_seed!r}") from None
        spec = ClassSpec(q=args.q, amp_s=args.s, setup_t=args.t, config_u=args.u,
                         seed=seed, deterministic=not args.random)
        gen = config["generator"]
        instance = generate_instance(spec, gen["increment_low"], gen["increment_high"])
    save_instance(instance, args.output)
    print(f"已生成实例: {args.output}（q={instance.q}，ℓ={instance.length:g}）")
    return EXIT_OK


def cmd_solve(args) -> int:
    config = _apply_solver_flags(_load_config(args.config), args)
    instance = load_instance(args.file)
    code = EXIT_OK

    if args.method == "bnb":
        from branch_bound import solve_exact

        plan, stats = solve_exact(instance, bnb_params(config))
        _print_plan("bnb", plan)
        print(f"节点数: {stats.nodes}，最大深度: {stats.max_depth}")
        print(f"根节点 UB: {stats.ub_root:.12g}，LB: {stats.lb_root:.12g}，gap: {stats.gap:.6f}")
        print(f"用时: {stats.wall_time:.3f}s")
        if stats.optimum is None:
            print(f"状态: 未证明最优（全局下界 {stats.lb_final:.12g}）")
            code = EXIT_TIMEOUT
        else:
            print("状态: 最优")
    elif args.method == "heuristic":
        from heuristic import root_heuristic

        unit, record = normalize(instance)
        heur = config["heuristic"]
        unit_plan, dual = root_heuristic(unit, dual_params(config, at_root=True),
                                         heur["iter_cap"], heur["best_improvement"])
        plan = denormalize_plan(unit_plan, record, instance)
        _print_plan("heuristic", plan)
        print(f"根节点下界: {dual.best_lb:.12g}")
    elif args.method == "oracle":
        from oracle import solve_brute_force

        plan = solve_brute_force(instance)
        _print_plan("oracle", plan)
    else:
        from closed_form import uniform_plan

        plan = uniform_plan(instance)
        _print_plan("uniform", plan)
        print(f"k*: {len(plan.entries)}")

    if args.json_out:
        save_plan(plan, args.json_out)
    return code


def cmd_bench(args) -> int:
    from instgen_bench import load_class_specs, run_benchmark

    config = _load_config(args.config)
    if args.reps < 1:
        raise UsageError(f"--reps 必须 ≥ 1，实际为 {args.reps}")
    time_limit = args.time_limit if args.time_limit is not None else config["bnb"]["time_limit"]
    if not time_limit > 0:
        raise UsageError(f"--time-limit 必须 > 0，实际为 {time_limit}")
    jobs = args.jobs if args.jobs is not None else config["bench"]["jobs"]
    if jobs < 1:
        raise UsageError(f"--jobs 必须 ≥ 1，实际为 {jobs}")
    specs = load_class_specs(args.classes)
    table = run_benchmark(specs, args.reps, time_limit, args.csv, jobs=jobs, config=config)
    print(f"基准测试完成: {len(specs)} 个类别，{len(table)} 行 → {args.csv}")
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "bench": cmd_bench}


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    解析命令行并执行子命令

    Returns:
        int: 0 成功；1 参数或输入错误；2 求解超时未证明最优（方案仍会写出）
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    _setup_logging(args)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LineCoverError, ValueError, OSError) as e:
        logger.error(f"{args.command} 失败: {str(e)}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None):
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
