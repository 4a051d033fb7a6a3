"""
两类多项式可解情形的闭式解：
选中集合固定的受限问题（KKT 直径），以及同型圆盘问题（等直径 + 对 k 的二分搜索）
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Optional
import logging

from core import (CoverPlan, EmptySelectionError, Instance, InvalidInstanceError,
                  UnsupportedConfigurationError, make_plan)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RestrictedSolution:
    """受限问题的最优解：x_i = λ*/(2b_i)，cost = z(S)"""

    S: FrozenSet[int]
    x: Dict[int, float]
    lam: float
    cost: float


def _selection(instance: Instance, S: Iterable[int]) -> FrozenSet[int]:
    chosen = frozenset(S)
    if not chosen:
        raise EmptySelectionError("选中集合 S 为空")
    for i in chosen:
        instance.disc(i)
    return chosen


def solve_restricted(instance: Instance, S: Iterable[int]) -> RestrictedSolution:
    """
    求解选中集合固定时的受限问题（单位长度实例）

    Args:
        instance: 单位长度实例
        S: 非空的选中圆盘 id 集合

    Returns:
        RestrictedSolution: λ* = 1/Σ 1/(2b_j)，x_i = λ*/(2b_i)
    """
    chosen = _selection(instance, S)
    weights = {i: 1.0 / (2.0 * instance.disc(i).b) for i in chosen}
    total = math.fsum(weights.values())
    lam = 1.0 / total
    x = {i: w / total for i, w in weights.items()}
    cost = math.fsum(instance.disc(i).f + instance.disc(i).b * xi * xi for i, xi in x.items())
    return RestrictedSolution(S=chosen, x=x, lam=lam, cost=cost)


def restricted_cost(instance: Instance, S: Iterable[int]) -> float:
    """z(S) = Σ_{i∈S} f_i + 1/Σ_{i∈S} (1/b_i)，O(|S|)"""
    chosen = _selection(instance, S)
    fixed = 0.0
    inv = 0.0
    for i in chosen:
        disc = instance.disc(i)
        fixed += disc.f
        inv += 1.0 / disc.b
    return fixed + 1.0 / inv


def restricted_plan(instance: Instance, S: Iterable[int]) -> CoverPlan:
    """受限问题的解作为覆盖方案"""
    return make_plan(instance, solve_restricted(instance, S).x)


@dataclass(frozen=True)
class UniformCost:
    """
    同型圆盘的成本 c(x) = f + g(x)，g 凸且 g(0) = 0

    给出 b 时 g(x) = b·x²（快速路径），否则使用可调用对象 g
    """

    f: float
    b: Optional[float] = None
    g: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if (self.b is None) == (self.g is None):
            raise InvalidInstanceError("UniformCost 需要且只需要 b 或 g 之一")
        if self.f < 0:
            raise InvalidInstanceError(f"字段 f 无效: {self.f!r}（必须 ≥ 0）")
        if self.b is not None and self.b <= 0:
            raise InvalidInstanceError(f"字段 b 无效: {self.b!r}（必须 > 0）")

    def total(self, k: int) -> float:
        """F(k) = k·f + k·g(1/k)"""
        if self.b is not None:
            return k * self.f + self.b / k
        return k * self.f + k * self.g(1.0 / k)

    def step(self, k: int) -> float:
        """F(k+1) − F(k)"""
        if self.b is not None:
            return self.f - self.b / (k * (k + 1.0))
        return self.total(k + 1) - self.total(k)


@dataclass(frozen=True)
class UniformSolution:
    k: int
    diameter: float
    cost: float


def solve_uniform(cost: UniformCost, q: int) -> UniformSolution:
    """
    同型圆盘问题：在 1..q 中找使 F(k) 最小的 k*（相等时取较小的 k）

    F 关于 k 凸，因此 F(k+1) − F(k) 单调不减，二分查找第一个非负差分

    Args:
        cost: 成本描述
        q: 可用圆盘数

    Returns:
        UniformSolution: k*、每个圆盘的直径 1/k*、总成本 F(k*)
    """
    if q < 1:
        raise InvalidInstanceError(f"圆盘数 q 无效: {q!r}（必须 ≥ 1）")
    lo, hi = 1, q
    while lo < hi:
        mid = (lo + hi) // 2
        if cost.step(mid) >= 0:
            hi = mid
        else:
            lo = mid + 1
    logger.debug(f"同型圆盘最优数量 k*={lo}（q={q}）")
    return UniformSolution(k=lo, diameter=1.0 / lo, cost=cost.total(lo))


def uniform_plan(instance: Instance) -> CoverPlan:
    """
    所有圆盘同型时的最优方案：取 id 最小的 k* 个圆盘，每个直径 ℓ/k*

    Raises:
        UnsupportedConfigurationError: 圆盘不完全相同
    """
    first = instance.discs[0]
    if any(d.f != first.f or d.b != first.b for d in instance.discs):
        raise UnsupportedConfigurationError("uniform 方法要求所有圆盘的 f 和 b 都相同")
    # 单位长度下 b ← ℓ²·b
    unit_b = first.b * instance.length * instance.length
    solution = solve_uniform(UniformCost(f=first.f, b=unit_b), instance.q)
    chosen = sorted(instance.ids)[:solution.k]
    width = instance.length / solution.k
    return make_plan(instance, {i: width for i in chosen})
