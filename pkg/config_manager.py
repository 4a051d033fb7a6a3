import copy
import json
import os
from typing import Dict, Optional
import logging

logger = logging.getLogger(__name__)

# 数值容差（全局共享）
FEASIBILITY_TOL = 1e-9   # 覆盖约束，相对 ℓ
OPTIMALITY_TOL = 1e-7    # 最优性比较，相对
KKT_TOL = 1e-10          # KKT 残差
FATHOM_TOL = 1e-9        # 剪枝，相对于当前最好解
IMPROVE_TOL = 1e-12      # 下界/目标值"严格改进"的阈值

DEFAULT_CONFIG: Dict = {
    "version": "1.0",
    "dual": {
        "alpha0": 1.95,
        "root_max_iters": 300,
        "node_max_iters": 60,
        "stall_patience": 20,
        "stop_gap": 1e-9,
    },
    "heuristic": {
        "iter_cap": None,          # None 表示 2·q
        "best_improvement": False,
    },
    "bnb": {
        "time_limit": 3600.0,
        "node_limit": None,
        "heuristic_every_node": True,
    },
    "generator": {
        "increment_low": 0.5,
        "increment_high": 1.5,
    },
    "bench": {
        "jobs": 1,
    },
}


class ConfigManager:
    """配置管理器，用于加载、校验和保存求解器配置"""

    def __init__(self, config_file: str = "linecover_config.json"):
        """
        初始化配置管理器

        Args:
            config_file: 配置文件路径
        """
        self.config_file = config_file

    def save_config(self, config: Dict) -> bool:
        """
        保存配置到文件

        Args:
            config: 配置字典（可以只包含需要覆盖的部分）

        Returns:
            bool: 保存是否成功
        """
        try:
            merged = merge_config(config)
            if not self._validate_config(merged):
                logger.error("配置验证失败")
                return False

            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(merged, f, ensure_ascii=False, indent=2)

            logger.info(f"配置保存成功: {self.config_file}")
            return True

        except Exception as e:
            logger.error(f"保存配置失败: {str(e)}")
            return False

    def load_config(self) -> Optional[Dict]:
        """
        从文件加载配置，缺失的字段使用默认值

        Returns:
            Dict: 配置字典；文件不存在时返回默认配置，文件无效时返回None
        """
        try:
            if not os.path.exists(self.config_file):
                logger.debug("配置文件不存在，使用默认配置")
                return copy.deepcopy(DEFAULT_CONFIG)

            with open(self.config_file, 'r', encoding='utf-8') as f:
                config_data = json.load(f)

            merged = merge_config(config_data)
            if self._validate_config(merged):
                logger.info(f"配置加载成功: {self.config_file}")
                return merged
            else:
                logger.error("加载的配置验证失败")
                return None

        except Exception as e:
            logger.error(f"加载配置失败: {str(e)}")
            return None

    def _validate_config(self, config: Dict) -> bool:
        """
        验证配置有效性

        Args:
            config: 配置字典（已与默认值合并）

        Returns:
            bool: 配置是否有效
        """
        try:
            dual = config["dual"]
            if not 0 < float(dual["alpha0"]) < 2:
                logger.error("配置字段 dual.alpha0 无效，必须满足 0 < alpha0 < 2")
                return False
            for field in ("root_max_iters", "node_max_iters", "stall_patience"):
                if int(dual[field]) < 1:
                    logger.error(f"配置字段 dual.{field} 无效，必须 ≥ 1")
                    return False
            if float(dual["stop_gap"]) < 0:
                logger.error("配置字段 dual.stop_gap 无效，不能为负")
                return False

            iter_cap = config["heuristic"]["iter_cap"]
            if iter_cap is not None and int(iter_cap) < 1:
                logger.error("配置字段 heuristic.iter_cap 无效，必须 ≥ 1")
                return False

            bnb = config["bnb"]
            if float(bnb["time_limit"]) <= 0:
                logger.error("配置字段 bnb.time_limit 无效，必须 > 0")
                return False
            if bnb["node_limit"] is not None and int(bnb["node_limit"]) < 1:
                logger.error("配置字段 bnb.node_limit 无效，必须 ≥ 1")
                return False

            gen = config["generator"]
            if not 0 < float(gen["increment_low"]) < float(gen["increment_high"]):
                logger.error("配置字段 generator.increment_low/increment_high 无效")
                return False

            if int(config["bench"]["jobs"]) < 1:
                logger.error("配置字段 bench.jobs 无效，必须 ≥ 1")
                return False

        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"配置字段缺失或类型错误: {str(e)}")
            return False

        return True

    def delete_config(self) -> bool:
        """
        删除配置文件

        Returns:
            bool: 删除是否成功
        """
        try:
            if os.path.exists(self.config_file):
                os.remove(self.config_file)
                logger.info("配置文件已删除")
            return True
        except Exception as e:
            logger.error(f"删除配置文件失败: {str(e)}")
            return False


def merge_config(overrides: Optional[Dict]) -> Dict:
    """把覆盖项按节合并到默认配置上，返回新字典"""
    merged = copy.deepcopy(DEFAULT_CONFIG)
    for section, values in (overrides or {}).items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return merged


def dual_params(config: Dict, at_root: bool = True):
    """根据配置构造次梯度参数（根节点与内部节点的迭代上限不同）"""
    from subgradient import DualParams

    dual = config["dual"]
    max_iters = dual["root_max_iters"] if at_root else dual["node_max_iters"]
    return DualParams(
        alpha0=float(dual["alpha0"]),
        max_iters=int(max_iters),
        stall_patience=int(dual["stall_patience"]),
        stop_gap=float(dual["stop_gap"]),
    )


def bnb_params(config: Dict):
    """根据配置构造分支定界参数"""
    from branch_bound import BnbParams

    bnb = config["bnb"]
    heur = config["heuristic"]
    return BnbParams(
        root_dual=dual_params(config, at_root=True),
        node_dual=dual_params(config, at_root=False),
        time_limit=float(bnb["time_limit"]),
        node_limit=None if bnb["node_limit"] is None else int(bnb["node_limit"]),
        heuristic_every_node=bool(bnb["heuristic_every_node"]),
        heuristic_iter_cap=None if heur["iter_cap"] is None else int(heur["iter_cap"]),
        best_improvement=bool(heur["best_improvement"]),
    )


# 创建全局实例
config_manager = ConfigManager()
