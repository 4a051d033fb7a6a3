"""
线段圆盘覆盖问题的精确分支定界
对 y 变量分支，节点下界来自拉格朗日对偶（次梯度），按下界最优优先搜索
"""

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Mapping, Optional, Tuple
import logging

from config_manager import FATHOM_TOL
from core import CoverPlan, Instance, denormalize_plan, make_plan, normalize
from heuristic import heuristic_solve, root_heuristic
from lagrangian import KappaLike, Multipliers, as_multipliers
from subgradient import (COMPLEMENTARITY_TOL, DualParams, DualResult, optimize_dual)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BnbParams:
    root_dual: DualParams = field(default_factory=lambda: DualParams(max_iters=300))
    node_dual: DualParams = field(default_factory=lambda: DualParams(max_iters=60))
    time_limit: float = 3600.0
    node_limit: Optional[int] = None
    heuristic_every_node: bool = True
    heuristic_iter_cap: Optional[int] = None
    best_improvement: bool = False

    def __post_init__(self):
        if not self.time_limit > 0:
            raise ValueError(f"time_limit 无效: {self.time_limit!r}（必须 > 0）")


@dataclass
class Node:
    """子问题 P(T, ν)：T 强制选中，off 禁用，其余圆盘未固定"""

    T: FrozenSet[int]
    off: FrozenSet[int]
    depth: int
    lb: float
    kappa: Multipliers
    branch_id: Optional[int] = None


@dataclass
class BnbStats:
    nodes: int = 0
    max_depth: int = 0
    ub_root: float = math.inf
    lb_root: float = -math.inf
    optimum: Optional[float] = None
    gap: float = math.nan
    wall_time: float = 0.0
    lb_final: float = -math.inf
    heuristic_hit: bool = False
    proven_at_root: bool = False
    timed_out: bool = False


def select_branch_variable(x: Mapping[int, float], y: Mapping[int, int],
                           kappa: KappaLike, free: Iterable[int]) -> Optional[int]:
    """
    分支变量选择

    第一层：y_i* = 0 且 x_i* > 0，取 x_i* 最大者；
    第二层：y_i* = 1、x_i* < 1 且 κ_i* > 0，取 κ_i*(y_i* − x_i*) 最大者；
    都不存在时返回 None（互补松弛成立，节点已解）
    """
    mult = as_multipliers(kappa)
    ids = sorted(free)
    tier1 = [i for i in ids if y[i] == 0 and x[i] > 0]
    if tier1:
        return max(tier1, key=lambda i: (x[i], -i))
    tier2 = []
    for i in ids:
        k = mult.get(i)
        if y[i] == 1 and x[i] < 1 and k > 0 and k * (1 - x[i]) > COMPLEMENTARITY_TOL * max(1.0, k):
            tier2.append(i)
    if tier2:
        return max(tier2, key=lambda i: (mult.get(i) * (y[i] - x[i]), -i))
    return None


class BranchAndBound:
    """最优优先分支定界；所有计算都在单位长度实例上进行"""

    def __init__(self, instance: Instance, params: Optional[BnbParams] = None):
        self.instance = instance
        self.params = params or BnbParams()
        self.all_ids = frozenset(instance.ids)
        self.incumbent: Optional[CoverPlan] = None
        self.stats = BnbStats()
        self._heap: List[Tuple[float, int, int, Node]] = []
        self._counter = itertools.count()
        self._deadline = math.inf

    def _offer(self, plan: CoverPlan, source: str):
        if self.incumbent is None or plan.objective < self.incumbent.objective:
            logger.debug(f"更新最好解 ({source}): {plan.objective:.12g}")
            self.incumbent = plan

    def _fathomed(self, lb: float) -> bool:
        ub = self.incumbent.objective
        return lb >= ub * (1 - FATHOM_TOL) - 1e-12

    def _out_of_budget(self) -> bool:
        if time.perf_counter() >= self._deadline:
            return True
        limit = self.params.node_limit
        return limit is not None and self.stats.nodes >= limit

    def _close(self, node: Node, dual: DualResult, free: List[int]):
        """节点求解完成后：已解则更新最好解，否则决定分支变量并入堆"""
        self.stats.nodes += 1
        self.stats.max_depth = max(self.stats.max_depth, node.depth)
        node.lb = max(dual.best_lb, node.lb)
        node.kappa = dual.best_kappa

        if dual.proven_optimal_plan is not None:
            self._offer(dual.proven_optimal_plan, "对偶最优性检验")
            return
        if self._fathomed(node.lb):
            return
        sol = dual.best_solution
        branch = select_branch_variable(sol.x, sol.y, dual.best_kappa, free)
        if branch is None:
            self._offer(make_plan(self.instance, sol.x), "互补松弛")
            return
        node.branch_id = branch
        heapq.heappush(self._heap, (node.lb, -node.depth, next(self._counter), node))

    def _evaluate(self, node: Node):
        available = self.all_ids - node.off
        free = sorted(available - node.T)
        kappa0 = node.kappa.restricted(free)
        if self.params.heuristic_every_node:
            plan = heuristic_solve(self.instance, node.T, node.off, kappa0,
                                   self.params.heuristic_iter_cap, self.params.best_improvement)
            self._offer(plan, "节点启发式")
            ub, check_ub = plan.objective, True
        else:
            ub, check_ub = self.incumbent.objective, False
        dual = optimize_dual(self.instance, node.T, free, ub, self.params.node_dual,
                             kappa0=kappa0, check_ub=check_ub, deadline=self._deadline)
        self._close(node, dual, free)

    def _children(self, node: Node) -> List[Node]:
        i = node.branch_id
        kappa = node.kappa
        children = [Node(T=node.T | {i}, off=node.off, depth=node.depth + 1, lb=node.lb, kappa=kappa)]
        if self.all_ids - node.off - {i}:
            children.append(Node(T=node.T, off=node.off | {i}, depth=node.depth + 1,
                                 lb=node.lb, kappa=kappa))
        return children

    def _global_lb(self) -> float:
        bounds = [item[0] for item in self._heap]
        return min(bounds + [self.incumbent.objective])

    def solve(self) -> Tuple[CoverPlan, BnbStats]:
        start = time.perf_counter()
        self._deadline = start + self.params.time_limit
        p = self.params

        # 根节点
        plan, dual = root_heuristic(self.instance, p.root_dual, p.heuristic_iter_cap,
                                    p.best_improvement, deadline=self._deadline)
        self._offer(plan, "根节点启发式")
        self.stats.ub_root = self.incumbent.objective
        self.stats.lb_root = dual.best_lb
        self.stats.gap = (self.stats.ub_root - dual.best_lb) / self.stats.ub_root
        self.stats.proven_at_root = dual.proven_optimal_plan is not None
        root = Node(T=frozenset(), off=frozenset(), depth=0, lb=-math.inf, kappa=dual.best_kappa)
        self._close(root, dual, sorted(self.all_ids))
        logger.info(f"根节点: UB={self.stats.ub_root:.12g}, LB={self.stats.lb_root:.12g}, "
                    f"gap={self.stats.gap:.4%}")

        completed = True
        while self._heap:
            lb, _, _, node = heapq.heappop(self._heap)
            if self._fathomed(lb):
                # 最优优先：堆中其余节点的下界都不更小
                self._heap.clear()
                break
            children = self._children(node)
            for k, child in enumerate(children):
                if self._out_of_budget():
                    completed = False
                    # 未评估的子节点继承父节点下界
                    for rest in children[k:]:
                        heapq.heappush(self._heap, (rest.lb, -rest.depth, next(self._counter), rest))
                    break
                self._evaluate(child)
            if not completed:
                break

        self.stats.wall_time = time.perf_counter() - start
        if completed and not self._heap:
            self.stats.optimum = self.incumbent.objective
            self.stats.lb_final = self.incumbent.objective
            ub = self.stats.optimum
            self.stats.heuristic_hit = abs(self.stats.ub_root - ub) <= FATHOM_TOL * abs(ub)
            logger.info(f"分支定界完成: 最优值 {ub:.12g}，节点 {self.stats.nodes}，"
                        f"深度 {self.stats.max_depth}，用时 {self.stats.wall_time:.3f}s")
        else:
            self.stats.timed_out = True
            self.stats.lb_final = self._global_lb()
            logger.warning(f"分支定界在预算内未完成: 最好解 {self.incumbent.objective:.12g}，"
                           f"下界 {self.stats.lb_final:.12g}，节点 {self.stats.nodes}")
        return self.incumbent, self.stats


def solve_exact(instance: Instance, params: Optional[BnbParams] = None) -> Tuple[CoverPlan, BnbStats]:
    """
    精确求解任意长度的实例：先归一化，在单位实例上分支定界，再映射回原线段

    Args:
        instance: 实例
        params: 分支定界参数（对偶参数、时间上限、节点上限）

    Returns:
        (最好的方案, 运行统计)；超时时 stats.optimum 为 None
    """
    unit, record = normalize(instance)
    plan, stats = BranchAndBound(unit, params).solve()
    return denormalize_plan(plan, record, instance), stats
