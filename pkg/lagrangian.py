"""
拉格朗日松弛子问题
LRP′：在单纯形上最小化 Σ b_i x_i² + κ_i x_i，按乘子排序后 O(q log q) 求解；
LRP(T, ν)：在 LRP′ 的基础上加入 y 的取值规则与固定成本项，给出节点下界
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Union

import numpy as np
import logging

from core import EmptySelectionError, Instance, InvalidMultipliersError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Multipliers:
    """非负拉格朗日乘子 κ（按圆盘 id 索引，缺省为 0）"""

    kappa: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for i, k in self.kappa.items():
            if not k >= 0:
                raise InvalidMultipliersError(f"圆盘 {i} 的乘子为负或无效: {k!r}")

    def get(self, disc_id: int) -> float:
        return self.kappa.get(disc_id, 0.0)

    def restricted(self, ids: Iterable[int]) -> "Multipliers":
        return Multipliers({i: self.get(i) for i in ids})

    @classmethod
    def zeros(cls, ids: Iterable[int]) -> "Multipliers":
        return cls({i: 0.0 for i in ids})


KappaLike = Union[Multipliers, Mapping[int, float], None]


def as_multipliers(kappa: KappaLike) -> Multipliers:
    if kappa is None:
        return Multipliers()
    if isinstance(kappa, Multipliers):
        return kappa
    return Multipliers(dict(kappa))


@dataclass(frozen=True)
class LrpPrimeSolution:
    x: Dict[int, float]
    lam: float
    h: int
    value_x: float


@dataclass(frozen=True)
class LrpSolution:
    """LRP(T, ν) 的最优解；value 为 z_LRP(κ)"""

    x: Dict[int, float]
    y: Dict[int, int]
    lam: float
    h: int
    value: float
    value_x: float


def solve_lrp_prime(instance: Instance, free: Iterable[int], kappa: KappaLike) -> LrpPrimeSolution:
    """
    求解 LRP′

    自由圆盘按 κ 非减排序（相同 κ 按 id 升序），线性扫描找到第一个前缀 h 使
    λ*(h) ≤ κ_{h+1}（κ_{q+1} = +∞），等价于 Σ_{j≤h} (κ_{h+1} − κ_j)·w_j ≥ 1，w_j = 1/(2b_j)。
    判定量与 λ* − κ_i 都由非负的乘子差累加得到；x 最后按 Σx = 1 归一

    Args:
        instance: 单位长度实例
        free: 参与的圆盘 id（非空）
        kappa: 乘子，缺省项视为 0

    Returns:
        LrpPrimeSolution: x、λ*、前缀长度 h、Σ b x² + κ x
    """
    ids = sorted(set(free))
    if not ids:
        raise EmptySelectionError("LRP′ 的自由圆盘集合为空")
    mult = as_multipliers(kappa)

    kap = np.array([mult.get(i) for i in ids], dtype=float)
    b = np.array([instance.disc(i).b for i in ids], dtype=float)

    order = np.argsort(kap, kind="stable")
    kap_sorted = kap[order]
    w = 1.0 / (2.0 * b[order])
    weight = np.cumsum(w)
    # gap[p] = Σ_{j<p} (κ_p − κ_j)·w_j，只累加非负项
    gap = np.concatenate([[0.0], np.cumsum(np.diff(kap_sorted) * weight[:-1])])
    reached = np.nonzero(gap[1:] >= 1.0)[0]
    h = int(reached[0]) + 1 if len(reached) else len(ids)

    # λ − κ_h ≥ 0，κ_h − κ_i ≥ 0
    last = (1.0 - gap[h - 1]) / weight[h - 1]
    shift = last + (kap_sorted[h - 1] - kap_sorted[:h])
    lam = float(kap_sorted[h - 1] + last)
    xs = shift * w[:h]
    xs = xs / math.fsum(xs)

    x = {i: 0.0 for i in ids}
    terms = []
    for pos in range(h):
        k = order[pos]
        xi = float(xs[pos])
        x[ids[k]] = xi
        terms.append(b[k] * xi * xi)
        terms.append(kap[k] * xi)
    return LrpPrimeSolution(x=x, lam=lam, h=h, value_x=math.fsum(terms))


def lrp_value(instance: Instance, T: Iterable[int], free: Iterable[int],
              kappa: KappaLike) -> LrpSolution:
    """
    计算节点松弛 LRP(T, ν) 的最优值 z_LRP(κ)

    T 中圆盘的乘子固定为 0，x 的取值范围为 T ∪ free；
    自由圆盘 y_i = 1 当且仅当 f_i < κ_i（f_i = κ_i 时取 0）

    Returns:
        LrpSolution: value = LRP′ 值 + Σ_{free, f<κ}(f − κ) + Σ_{T} f
    """
    forced = set(T)
    free_ids = set(free)
    if forced & free_ids:
        raise InvalidMultipliersError(f"强制集合与自由集合相交: {sorted(forced & free_ids)}")
    mult = as_multipliers(kappa)
    node_kappa = {i: mult.get(i) for i in free_ids}
    node_kappa.update({i: 0.0 for i in forced})

    prime = solve_lrp_prime(instance, forced | free_ids, node_kappa)

    y: Dict[int, int] = {i: 1 for i in forced}
    y_terms = []
    for i in free_ids:
        f = instance.disc(i).f
        if f < node_kappa[i]:
            y[i] = 1
            y_terms.append(f - node_kappa[i])
        else:
            y[i] = 0
    fixed = math.fsum(instance.disc(i).f for i in forced)
    value = math.fsum([prime.value_x, fixed] + y_terms)
    return LrpSolution(x=prime.x, y=y, lam=prime.lam, h=prime.h,
                       value=value, value_x=prime.value_x)
