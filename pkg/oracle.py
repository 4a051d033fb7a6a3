"""
穷举求解（校验用）：枚举所有非空选中集合 S，用受限问题闭式成本 z(S) 打分
"""

from typing import List, Tuple
import logging

import numpy as np

from closed_form import restricted_plan
from core import CoverPlan, Instance, UnsupportedConfigurationError, denormalize_plan, normalize

logger = logging.getLogger(__name__)

# 低位表的最大位数（2^20 个条目）
_LOW_BITS = 20
_TIE_TOL = 1e-12


def _subset_table(values: np.ndarray) -> np.ndarray:
    """table[mask] = Σ_{bit j ∈ mask} values[j]"""
    table = np.zeros(1)
    for v in values:
        table = np.concatenate([table, table + v])
    return table


def _mask_ids(mask: int, ids: List[int]) -> Tuple[int, ...]:
    return tuple(i for j, i in enumerate(ids) if mask >> j & 1)


def _lexicographic_min(masks: np.ndarray) -> int:
    """按升序 id 元组的字典序取最小的子集掩码"""
    prefix = 0
    while True:
        rest = masks ^ prefix
        if np.any(rest == 0):
            return prefix
        lowest = rest & -rest
        bit = int(lowest.min())
        masks = masks[lowest == bit]
        prefix |= bit


def solve_brute_force(instance: Instance, max_q: int = 25) -> CoverPlan:
    """
    枚举 2^q − 1 个非空子集求精确最优

    成本相同（相对 1e-12 内）的子集取 id 元组字典序最小者

    Args:
        instance: 实例（任意长度）
        max_q: 允许的最大圆盘数

    Returns:
        CoverPlan: 最优方案

    Raises:
        UnsupportedConfigurationError: q > max_q
    """
    if instance.q > max_q:
        raise UnsupportedConfigurationError(f"穷举仅支持 q ≤ {max_q}，当前 q = {instance.q}")
    unit, record = normalize(instance)
    ids = sorted(unit.ids)
    q = len(ids)
    f = np.array([unit.disc(i).f for i in ids], dtype=float)
    inv_b = np.array([1.0 / unit.disc(i).b for i in ids], dtype=float)

    low = min(q, _LOW_BITS)
    low_f = _subset_table(f[:low])
    low_inv = _subset_table(inv_b[:low])
    high_f = _subset_table(f[low:])
    high_inv = _subset_table(inv_b[low:])

    best_cost = np.inf
    masks: List[np.ndarray] = []
    costs_kept: List[np.ndarray] = []
    with np.errstate(divide="ignore"):
        for hi in range(len(high_f)):
            costs = low_f + high_f[hi] + 1.0 / (low_inv + high_inv[hi])
            m = float(costs.min())
            if m > best_cost * (1 + _TIE_TOL):
                continue
            best_cost = min(best_cost, m)
            near = np.nonzero(costs <= best_cost * (1 + _TIE_TOL))[0]
            masks.append((np.int64(hi) << low) | near.astype(np.int64))
            costs_kept.append(costs[near])

    all_masks = np.concatenate(masks)
    all_costs = np.concatenate(costs_kept)
    # 去掉被后来更小值淘汰的候选
    tied = all_masks[all_costs <= best_cost * (1 + _TIE_TOL)]
    chosen = _mask_ids(int(_lexicographic_min(tied)), ids)
    logger.debug(f"穷举完成: q={q}，最优集合 {list(chosen)}，z={best_cost:.12g}")
    return denormalize_plan(restricted_plan(unit, chosen), record, instance)
