"""
上界启发式：由拉格朗日乘子得到初始选中集合，再做删除/加入的贪心局部搜索
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple
import logging

from closed_form import restricted_cost, restricted_plan
from config_manager import IMPROVE_TOL
from core import CoverPlan, EmptySelectionError, Instance, InvalidMultipliersError
from lagrangian import KappaLike, as_multipliers, solve_lrp_prime
from subgradient import DualParams, DualResult, optimize_dual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeuristicResult:
    S: FrozenSet[int]
    cost: float
    initial_cost: float
    sweeps: int
    moves: int


def active_set_from_multipliers(instance: Instance, free: Iterable[int],
                                kappa: KappaLike) -> FrozenSet[int]:
    """按 κ 排序后由 LRP′ 得到的前缀集合，即 x_i > 0 的圆盘"""
    prime = solve_lrp_prime(instance, free, kappa)
    return frozenset(i for i, x in prime.x.items() if x > 0)


def _improves(candidate: float, current: float) -> bool:
    return candidate < current - IMPROVE_TOL * max(1.0, abs(current))


def local_search(instance: Instance, T: Iterable[int] = (), off: Iterable[int] = (),
                 kappa: KappaLike = None, iter_cap: Optional[int] = None,
                 best_improvement: bool = False) -> HeuristicResult:
    """
    删除/加入局部搜索

    每一轮先按 f 非增顺序尝试删除一个非强制圆盘，再按 f 非减顺序尝试加入一个
    未被禁止的圆盘（f 相同时按 id 升序）；默认接受第一个改进，
    best_improvement=True 时接受本次扫描中最好的改进

    Args:
        instance: 单位长度实例
        T: 强制选中的圆盘（永不删除）
        off: 禁止使用的圆盘（永不加入）
        kappa: 初始乘子，缺省为 0
        iter_cap: 最大轮数，缺省为 2·q

    Returns:
        HeuristicResult: 最终集合 S 及其成本 z(S)
    """
    forced = frozenset(T)
    banned = frozenset(off)
    if forced & banned:
        raise InvalidMultipliersError(f"强制集合与禁止集合相交: {sorted(forced & banned)}")
    available = frozenset(instance.ids) - banned
    if not available:
        raise EmptySelectionError("所有圆盘都被禁止，无法构造可行解")
    cap = iter_cap if iter_cap is not None else 2 * instance.q

    mult = as_multipliers(kappa)
    seed_kappa = {i: (0.0 if i in forced else mult.get(i)) for i in available}
    S = set(forced | active_set_from_multipliers(instance, available, seed_kappa))
    current = restricted_cost(instance, S)
    initial = current
    moves = 0
    sweeps = 0

    def scan(candidates, build):
        best = None
        for i in candidates:
            trial = build(i)
            cost = restricted_cost(instance, trial)
            if _improves(cost, current) and (best is None or cost < best[1]):
                best = (i, cost)
                if not best_improvement:
                    break
        return best

    while sweeps < cap:
        sweeps += 1
        moved = False

        if len(S) > 1:
            droppable = sorted(S - forced, key=lambda i: (-instance.disc(i).f, i))
            found = scan(droppable, lambda i: S - {i})
            if found is not None:
                S.discard(found[0])
                current = found[1]
                moves += 1
                moved = True

        addable = sorted(available - S, key=lambda i: (instance.disc(i).f, i))
        found = scan(addable, lambda i: S | {i})
        if found is not None:
            S.add(found[0])
            current = found[1]
            moves += 1
            moved = True

        if not moved:
            break

    logger.debug(f"局部搜索: 初始 {initial:.12g} → {current:.12g}，{sweeps} 轮 {moves} 次移动")
    return HeuristicResult(S=frozenset(S), cost=current, initial_cost=initial,
                           sweeps=sweeps, moves=moves)


def heuristic_solve(instance: Instance, T: Iterable[int] = (), off: Iterable[int] = (),
                    kappa: KappaLike = None, iter_cap: Optional[int] = None,
                    best_improvement: bool = False) -> CoverPlan:
    """启发式可行解：局部搜索得到 S，再用受限问题的 KKT 直径构造方案"""
    result = local_search(instance, T, off, kappa, iter_cap, best_improvement)
    return restricted_plan(instance, result.S)


def root_heuristic(instance: Instance, dual_params: Optional[DualParams] = None, iter_cap: Optional[int] = None,
                   best_improvement: bool = False,
                   deadline: Optional[float] = None) -> Tuple[CoverPlan, DualResult]:
    """
    根节点上界：先以 κ = 0 运行启发式得到 UB，再用次梯度求对偶，
    以对偶最佳乘子再运行一次启发式，取两者中较好的方案

    Args:
        instance: 单位长度实例

    Returns:
        (最好的方案, 根节点 DualResult)
    """
    first = heuristic_solve(instance, kappa=None, iter_cap=iter_cap,
                            best_improvement=best_improvement)
    dual = optimize_dual(instance, (), instance.ids, first.objective, dual_params,
                         deadline=deadline)
    second = heuristic_solve(instance, kappa=dual.best_kappa, iter_cap=iter_cap,
                             best_improvement=best_improvement)
    best = second if second.objective < first.objective else first
    logger.info(f"根节点启发式: κ=0 → {first.objective:.12g}，对偶乘子 → {second.objective:.12g}")
    return best, dual
