"""
线段圆盘覆盖问题的领域模型
包含圆盘类型、实例、覆盖方案，以及目标值计算、单位长度归一化、
端到端布局、支配关系检查和 JSON 读写
"""

import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import logging

from config_manager import FEASIBILITY_TOL

logger = logging.getLogger(__name__)

INSTANCE_FORMAT_VERSION = 1


class LineCoverError(Exception):
    """linecover 所有异常的基类"""


class InvalidInstanceError(LineCoverError, ValueError):
    """实例或输入字段不合法（消息中指明字段）"""


class CoverageInfeasibleError(LineCoverError, ValueError):
    """直径之和不等于线段长度"""


class EmptySelectionError(LineCoverError, ValueError):
    """选择集合或可用圆盘集合为空"""


class InvalidMultipliersError(LineCoverError, ValueError):
    """拉格朗日乘子为负，或强制集合与自由集合相交"""


class InvalidUpperBoundError(LineCoverError, RuntimeError):
    """传入的上界低于已算出的下界"""


class UnsupportedConfigurationError(LineCoverError, ValueError):
    """不支持的配置（如 u 取值、oracle 规模、非同型圆盘）"""


@dataclass(frozen=True)
class DiscType:
    """一个可用圆盘：固定成本 f，二次成本系数 b，成本 c(x) = f + b·x²"""

    id: int
    f: float
    b: float

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id < 1:
            raise InvalidInstanceError(f"字段 id 无效: {self.id!r}（必须是 ≥ 1 的整数）")
        if not math.isfinite(self.f) or self.f < 0:
            raise InvalidInstanceError(f"圆盘 {self.id} 的字段 f 无效: {self.f!r}（必须 ≥ 0）")
        if not math.isfinite(self.b) or self.b <= 0:
            raise InvalidInstanceError(f"圆盘 {self.id} 的字段 b 无效: {self.b!r}（必须 > 0）")

    def cost(self, x: float) -> float:
        return 0.0 if x <= 0 else self.f + self.b * x * x


@dataclass(frozen=True)
class Instance:
    """线段长度 ℓ 加上有序的圆盘目录"""

    discs: Tuple[DiscType, ...]
    length: float = 1.0
    _by_id: Dict[int, DiscType] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "discs", tuple(self.discs))
        if not math.isfinite(self.length) or self.length <= 0:
            raise InvalidInstanceError(f"字段 length 无效: {self.length!r}（必须 > 0）")
        if not self.discs:
            raise InvalidInstanceError("字段 discs 为空（至少需要一个圆盘）")
        by_id: Dict[int, DiscType] = {}
        for disc in self.discs:
            if disc.id in by_id:
                raise InvalidInstanceError(f"字段 discs 中圆盘 id 重复: {disc.id}")
            by_id[disc.id] = disc
        object.__setattr__(self, "_by_id", by_id)

    @property
    def q(self) -> int:
        return len(self.discs)

    @property
    def ids(self) -> List[int]:
        return [d.id for d in self.discs]

    def disc(self, disc_id: int) -> DiscType:
        try:
            return self._by_id[disc_id]
        except KeyError:
            raise InvalidInstanceError(f"未知的圆盘 id: {disc_id}") from None

    def has(self, disc_id: int) -> bool:
        return disc_id in self._by_id


@dataclass(frozen=True)
class PlanEntry:
    disc_id: int
    diameter: float
    center: float


@dataclass(frozen=True)
class CoverPlan:
    """可行覆盖方案：按 id 升序排列的选中圆盘、直径、圆心以及成本分解"""

    entries: Tuple[PlanEntry, ...]
    objective: float
    fixed_cost: float
    variable_cost: float

    @property
    def selected(self) -> List[int]:
        return [e.disc_id for e in self.entries]

    @property
    def diameters(self) -> Dict[int, float]:
        return {e.disc_id: e.diameter for e in self.entries}


@dataclass(frozen=True)
class ScaleRecord:
    """归一化记录，足以把单位长度解映射回原线段"""

    length: float

    def to_original(self, x: float) -> float:
        return self.length * x


def _check_coverage(total: float, length: float):
    if abs(total - length) > FEASIBILITY_TOL * length:
        raise CoverageInfeasibleError(
            f"直径之和 {total:.12g} 与线段长度 {length:.12g} 不一致"
        )


def evaluate(instance: Instance, diameters: Mapping[int, float]) -> float:
    """
    计算覆盖方案的目标值 Σ_{x_i>0} (f_i + b_i·x_i²)

    Args:
        instance: 实例（任意长度；直径与 b 使用同一长度单位）
        diameters: 圆盘 id → 非负直径

    Returns:
        float: 目标值
    """
    fixed, variable = _cost_parts(instance, diameters)
    return fixed + variable


def _cost_parts(instance: Instance, diameters: Mapping[int, float]) -> Tuple[float, float]:
    total = 0.0
    fixed = 0.0
    variable = 0.0
    for disc_id, x in diameters.items():
        disc = instance.disc(disc_id)
        if x < 0 or not math.isfinite(x):
            raise CoverageInfeasibleError(f"圆盘 {disc_id} 的直径无效: {x!r}")
        total += x
        if x > 0:
            fixed += disc.f
            variable += disc.b * x * x
    _check_coverage(total, instance.length)
    return fixed, variable


def normalize(instance: Instance) -> Tuple[Instance, ScaleRecord]:
    """
    把长度为 ℓ 的实例变换为单位长度实例：f 不变，b ← ℓ²·b

    Returns:
        (单位实例, 归一化记录)
    """
    length = instance.length
    if length == 1.0:
        return instance, ScaleRecord(1.0)
    scale = length * length
    unit = Instance(
        discs=tuple(DiscType(d.id, d.f, d.b * scale) for d in instance.discs),
        length=1.0,
    )
    return unit, ScaleRecord(length)


def layout(diameters: Sequence[float], length: float) -> List[float]:
    """
    端到端排列圆盘，从坐标 0 开始，返回各圆心坐标

    Args:
        diameters: 有序的正直径列表
        length: 线段长度

    Returns:
        List[float]: 圆心坐标 center_k = Σ_{j<k} x_j + x_k/2
    """
    _check_coverage(math.fsum(diameters), length)
    centers = []
    start = 0.0
    for x in diameters:
        if x <= 0:
            raise CoverageInfeasibleError(f"布局中的直径必须为正: {x!r}")
        centers.append(start + x / 2.0)
        start += x
    return centers


def make_plan(instance: Instance, diameters: Mapping[int, float]) -> CoverPlan:
    """由直径映射构造 CoverPlan（丢弃零直径，按 id 升序布局）"""
    positive = {i: x for i, x in diameters.items() if x > 0}
    fixed, variable = _cost_parts(instance, positive)
    order = sorted(positive)
    centers = layout([positive[i] for i in order], instance.length)
    entries = tuple(PlanEntry(i, positive[i], c) for i, c in zip(order, centers))
    return CoverPlan(entries=entries, objective=fixed + variable,
                     fixed_cost=fixed, variable_cost=variable)


def denormalize_plan(plan: CoverPlan, record: ScaleRecord, original: Instance) -> CoverPlan:
    """把单位实例上的方案映射回原实例：x ← ℓ·x，目标值不变"""
    if record.length == 1.0:
        return plan
    return make_plan(original, {e.disc_id: record.to_original(e.diameter) for e in plan.entries})


def dominated_pairs(instance: Instance) -> List[Tuple[int, int]]:
    """
    找出所有支配对 (i, j)：b_i ≤ b_j、f_i ≤ f_j 且 (b_i, f_i) ≠ (b_j, f_j)

    Returns:
        List[Tuple[int, int]]: (支配者 id, 被支配者 id)
    """
    pairs = []
    for a in instance.discs:
        for c in instance.discs:
            if a.id == c.id:
                continue
            if a.b <= c.b and a.f <= c.f and (a.b, a.f) != (c.b, c.f):
                pairs.append((a.id, c.id))
    return pairs


def expand_copies(types: Iterable[Tuple[float, float, int]], length: float = 1.0) -> Instance:
    """
    用若干个相同的圆盘表示同一类型的多个副本

    Args:
        types: (f, b, 副本数) 序列
        length: 线段长度

    Returns:
        Instance: id 从 1 开始连续编号
    """
    discs = []
    next_id = 1
    for f, b, count in types:
        if int(count) < 1:
            raise InvalidInstanceError(f"副本数无效: {count!r}（必须 ≥ 1）")
        for _ in range(int(count)):
            discs.append(DiscType(next_id, float(f), float(b)))
            next_id += 1
    return Instance(discs=tuple(discs), length=float(length))


# ---- JSON 读写 ----

def instance_to_dict(instance: Instance) -> Dict:
    return {
        "version": INSTANCE_FORMAT_VERSION,
        "length": instance.length,
        "discs": [{"id": d.id, "f": d.f, "b": d.b} for d in instance.discs],
    }


def _number(value, field_name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInstanceError(f"字段 {field_name} 必须是数值，实际为 {value!r}")
    return float(value)


def instance_from_dict(data: Dict) -> Instance:
    """从 JSON 字典解析实例，出错时异常消息指明字段"""
    if not isinstance(data, dict):
        raise InvalidInstanceError("实例 JSON 顶层必须是对象")
    version = data.get("version", INSTANCE_FORMAT_VERSION)
    if version != INSTANCE_FORMAT_VERSION:
        raise InvalidInstanceError(f"字段 version 不受支持: {version!r}")
    if "length" not in data:
        raise InvalidInstanceError("缺少字段 length")
    length = _number(data["length"], "length")
    discs_data = data.get("discs")
    if not isinstance(discs_data, list):
        raise InvalidInstanceError("字段 discs 必须是数组")
    discs = []
    for k, item in enumerate(discs_data):
        if not isinstance(item, dict):
            raise InvalidInstanceError(f"字段 discs[{k}] 必须是对象")
        for name in ("id", "f", "b"):
            if name not in item:
                raise InvalidInstanceError(f"缺少字段 discs[{k}].{name}")
        disc_id = item["id"]
        if isinstance(disc_id, bool) or not isinstance(disc_id, int):
            raise InvalidInstanceError(f"字段 discs[{k}].id 必须是整数，实际为 {disc_id!r}")
        try:
            discs.append(DiscType(disc_id, _number(item["f"], f"discs[{k}].f"),
                                  _number(item["b"], f"discs[{k}].b")))
        except InvalidInstanceError as e:
            raise InvalidInstanceError(f"字段 discs[{k}]: {str(e)}") from None
    return Instance(discs=tuple(discs), length=length)


def save_instance(instance: Instance, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(instance_to_dict(instance), f, ensure_ascii=False, indent=2)
    logger.info(f"实例已保存: {path}（q={instance.q}, ℓ={instance.length:g}）")


def load_instance(path: str) -> Instance:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise InvalidInstanceError(f"实例文件不是合法 JSON: {str(e)}") from None
    return instance_from_dict(data)


def plan_to_dict(plan: CoverPlan) -> Dict:
    return {
        "objective": plan.objective,
        "fixed_cost": plan.fixed_cost,
        "variable_cost": plan.variable_cost,
        "selected": [
            {"id": e.disc_id, "diameter": e.diameter, "center": e.center}
            for e in plan.entries
        ],
    }


def plan_from_dict(data: Dict, instance: Optional[Instance] = None) -> CoverPlan:
    """解析方案 JSON；给定实例时重新计算并核对目标值"""
    try:
        entries = tuple(
            PlanEntry(int(s["id"]), float(s["diameter"]), float(s["center"]))
            for s in data["selected"]
        )
        plan = CoverPlan(entries=entries, objective=float(data["objective"]),
                         fixed_cost=float(data["fixed_cost"]),
                         variable_cost=float(data["variable_cost"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInstanceError(f"方案 JSON 字段无效: {str(e)}") from None
    if instance is not None:
        recomputed = evaluate(instance, plan.diameters)
        if abs(recomputed - plan.objective) > FEASIBILITY_TOL * max(1.0, abs(recomputed)):
            raise InvalidInstanceError(
                f"字段 objective 与重新计算的值不一致: {plan.objective!r} ≠ {recomputed!r}"
            )
    return plan


def save_plan(plan: CoverPlan, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(plan_to_dict(plan), f, ensure_ascii=False, indent=2)
    logger.info(f"方案已保存: {path}")


def load_plan(path: str, instance: Optional[Instance] = None) -> CoverPlan:
    with open(path, 'r', encoding='utf-8') as f:
        return plan_from_dict(json.load(f), instance)
