"""
用次梯度法求解拉格朗日对偶 max_{κ≥0} z_LRP(κ)
根节点与分支定界内部节点共用；内部节点可从父节点的最佳乘子热启动
"""

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, List, Optional
import logging

from config_manager import IMPROVE_TOL
from core import CoverPlan, Instance, InvalidUpperBoundError, make_plan
from lagrangian import KappaLike, LrpSolution, Multipliers, as_multipliers, lrp_value

logger = logging.getLogger(__name__)

# 互补松弛检验的相对容差
COMPLEMENTARITY_TOL = 1e-12


@dataclass(frozen=True)
class DualParams:
    """次梯度参数：初始步长系数 α0、迭代上限、停滞容忍次数、相对间隙停止阈值"""

    alpha0: float = 1.95
    max_iters: int = 300
    stall_patience: int = 20
    stop_gap: float = 1e-9

    def __post_init__(self):
        if not 0 < self.alpha0 < 2:
            raise ValueError(f"alpha0 无效: {self.alpha0!r}（必须满足 0 < alpha0 < 2）")
        if self.max_iters < 1:
            raise ValueError(f"max_iters 无效: {self.max_iters!r}（必须 ≥ 1）")
        if self.stall_patience < 1:
            raise ValueError(f"stall_patience 无效: {self.stall_patience!r}（必须 ≥ 1）")


@dataclass
class DualResult:
    best_lb: float
    best_kappa: Multipliers
    iterations: int
    proven_optimal_plan: Optional[CoverPlan]
    best_solution: Optional[LrpSolution] = None
    lb_history: List[float] = field(default_factory=list)
    alpha: float = 0.0
    halvings: int = 0


def is_primal_optimal(solution: LrpSolution, kappa: Multipliers, free: Iterable[int]) -> bool:
    """x ≤ y 且 κ_i(y_i − x_i) = 0 对所有自由圆盘成立"""
    for i in free:
        x = solution.x[i]
        y = solution.y[i]
        # x 在单纯形上，y = 1 时 x ≤ y 自然成立
        if y == 0 and x > 0:
            return False
        k = kappa.get(i)
        if abs(k * (y - x)) > COMPLEMENTARITY_TOL * max(1.0, k):
            return False
    return True


def optimize_dual(instance: Instance, T: Iterable[int], free: Iterable[int], ub: float,
                  params: Optional[DualParams] = None, kappa0: KappaLike = None,
                  check_ub: bool = True, deadline: Optional[float] = None) -> DualResult:
    """
    次梯度优化拉格朗日对偶

    Args:
        instance: 单位长度实例
        T: 强制选中的圆盘
        free: 未固定的圆盘
        ub: 上界（步长公式中的 UB）
        params: 次梯度参数
        kappa0: 初始乘子（缺省为 0）
        check_ub: ub 是否为本子问题的有效上界；为 True 时下界越过 ub 视为调用错误
        deadline: time.perf_counter() 截止时刻

    Returns:
        DualResult: 最佳下界、对应乘子、迭代次数，以及通过最优性检验时的方案
    """
    params = params or DualParams()
    forced = frozenset(T)
    free_ids = sorted(set(free))
    kappa = {i: as_multipliers(kappa0).get(i) for i in free_ids}

    alpha = params.alpha0
    halvings = 0
    stall = 0
    best_lb = -math.inf
    best_kappa = Multipliers(dict(kappa))
    best_solution = None
    history: List[float] = []
    proven = None
    iterations = 0

    while True:
        current = Multipliers(dict(kappa))
        solution = lrp_value(instance, forced, free_ids, current)
        iterations += 1
        z = solution.value

        if check_ub and z > ub + 1e-6 * abs(ub):
            raise InvalidUpperBoundError(f"上界 {ub:.12g} 低于已算出的下界 {z:.12g}")

        improved = z > best_lb + IMPROVE_TOL * max(1.0, abs(best_lb)) if math.isfinite(best_lb) else True
        if z > best_lb:
            best_lb = z
            best_kappa = current
            best_solution = solution
        if improved:
            stall = 0
        else:
            stall += 1
            if stall >= params.stall_patience:
                alpha /= 2.0
                halvings += 1
                stall = 0
                logger.debug(f"下界连续 {params.stall_patience} 次未改进，α 减半为 {alpha:.6g}")
        history.append(best_lb)

        if is_primal_optimal(solution, current, free_ids):
            proven = make_plan(instance, solution.x)
            best_lb = max(best_lb, z)
            best_kappa = current
            best_solution = solution
            logger.debug(f"第 {iterations} 次迭代通过最优性检验，值 {z:.12g}")
            break

        subgrad = {i: solution.x[i] - solution.y[i] for i in free_ids}
        norm2 = math.fsum(s * s for s in subgrad.values())
        if norm2 == 0.0:
            break
        if iterations >= params.max_iters:
            break
        if ub - best_lb <= params.stop_gap * abs(ub):
            break
        if deadline is not None and time.perf_counter() >= deadline:
            logger.debug("次梯度优化到达时间上限")
            break

        step = alpha * (ub - best_lb) / norm2
        for i, s in subgrad.items():
            kappa[i] = max(0.0, kappa[i] + step * s)

    logger.debug(f"次梯度结束: 迭代 {iterations} 次, LB={best_lb:.12g}, UB={ub:.12g}")
    return DualResult(best_lb=best_lb, best_kappa=best_kappa, iterations=iterations,
                      proven_optimal_plan=proven, best_solution=best_solution,
                      lb_history=history, alpha=alpha, halvings=halvings)
