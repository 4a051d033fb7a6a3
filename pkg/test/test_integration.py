#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
端到端集成测试
测试从实例生成、保存、求解到方案写出与复核的完整流程
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math
import tempfile
import unittest

from branch_bound import solve_exact
from closed_form import uniform_plan
from core import (Instance, expand_copies, load_instance, load_plan, save_instance, save_plan)
from heuristic import root_heuristic
from instgen_bench import ClassSpec, generate_instance
from oracle import solve_brute_force


class TestEndToEndIntegration(unittest.TestCase):
    """端到端集成测试类"""

    def setUp(self):
        """测试前准备"""
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def assert_abutting(self, plan, length: float):
        """圆盘首尾相接地覆盖 [0, ℓ]"""
        start = 0.0
        for entry in plan.entries:
            self.assertAlmostEqual(entry.center - entry.diameter / 2.0, start, delta=1e-9 * length)
            start += entry.diameter
        self.assertAlmostEqual(start, length, delta=1e-9 * length)

    def test_generate_solve_workflow(self):
        """测试完整的生成到求解工作流程"""
        print("\n=== 测试完整工作流程 ===")

        # Step 1: 生成实例并保存
        print("   📥 步骤1: 生成 (10,10,1,0) 实例...")
        inst_path = os.path.join(self.tmp, "inst.json")
        save_instance(generate_instance(ClassSpec(10, 10.0, 1.0)), inst_path)
        instance = load_instance(inst_path)
        self.assertEqual(instance.q, 10)

        # Step 2: 启发式上界
        print("   🧭 步骤2: 根节点启发式...")
        heur_plan, dual = root_heuristic(instance)
        self.assertLessEqual(dual.best_lb, heur_plan.objective + 1e-9)

        # Step 3: 精确求解
        print("   🌳 步骤3: 分支定界...")
        plan, stats = solve_exact(instance)
        self.assertIsNotNone(stats.optimum)
        self.assertAlmostEqual(plan.objective, 77.368, delta=1e-3)
        self.assertLessEqual(plan.objective, heur_plan.objective + 1e-9)
        self.assertLessEqual(stats.lb_root, plan.objective + 1e-9)

        # Step 4: 写出方案并按实例复核
        print("   💾 步骤4: 写出并复核方案...")
        plan_path = os.path.join(self.tmp, "plan.json")
        save_plan(plan, plan_path)
        reloaded = load_plan(plan_path, instance)
        self.assertEqual(reloaded.selected, plan.selected)
        self.assert_abutting(reloaded, instance.length)
        print(f"   ✅ 最优值 {plan.objective:.6f}，选中 {plan.selected}")

    def test_scaled_instance_workflow(self):
        """测试任意长度实例：求解结果与单位长度实例一致"""
        print("\n=== 测试任意长度实例 ===")
        unit = generate_instance(ClassSpec(8, 1.0, 10.0, seed=5, deterministic=False))
        length = 25.0
        scaled = Instance(discs=tuple(type(d)(d.id, d.f, d.b / (length * length)) for d in unit.discs),
                          length=length)

        unit_plan, _ = solve_exact(unit)
        scaled_plan, _ = solve_exact(scaled)
        self.assertAlmostEqual(scaled_plan.objective, unit_plan.objective,
                               delta=1e-9 * unit_plan.objective)
        self.assertEqual(scaled_plan.selected, unit_plan.selected)
        for entry in scaled_plan.entries:
            self.assertAlmostEqual(entry.diameter, length * unit_plan.diameters[entry.disc_id],
                                   delta=1e-9 * length)
        self.assert_abutting(scaled_plan, length)
        self.assertAlmostEqual(solve_brute_force(scaled).objective, scaled_plan.objective,
                               delta=1e-9 * scaled_plan.objective)
        print("   ✅ 缩放前后最优值一致")

    def test_uniform_workflow(self):
        """测试同型圆盘：闭式解、分支定界与穷举一致"""
        print("\n=== 测试同型圆盘 ===")
        instance = expand_copies([(2.0, 50.0, 9)], length=3.0)
        closed = uniform_plan(instance)
        exact, _ = solve_exact(instance)
        brute = solve_brute_force(instance)
        self.assertAlmostEqual(closed.objective, brute.objective, delta=1e-9 * brute.objective)
        self.assertAlmostEqual(exact.objective, brute.objective, delta=1e-9 * brute.objective)
        self.assertEqual(closed.selected, brute.selected)
        k = len(closed.entries)
        self.assertTrue(all(math.isclose(e.diameter, 3.0 / k) for e in closed.entries))
        print(f"   ✅ k* = {k}")


def print_integration_test_guide():
    """打印集成测试指南"""
    print("\n" + "=" * 60)
    print("🔗 端到端集成测试指南")
    print("=" * 60)
    print("\n📖 测试覆盖范围：")
    print("   1. 类别实例生成与 JSON 读写")
    print("   2. 根节点启发式与对偶下界")
    print("   3. 分支定界精确求解")
    print("   4. 方案写出与目标值复核")
    print("   5. 任意长度实例的缩放")
    print("   6. 同型圆盘闭式解")


def run_integration_tests():
    """运行集成测试"""
    print("🔗 开始端到端集成测试...")
    print("=" * 60)

    suite = unittest.TestLoader().loadTestsFromTestCase(TestEndToEndIntegration)
    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print("\n" + "=" * 60)
    print("📊 集成测试结果摘要:")
    print(f"   总测试数: {result.testsRun}")
    print(f"   成功: {result.testsRun - len(result.failures) - len(result.errors)}")
    print(f"   失败: {len(result.failures)}")
    print(f"   错误: {len(result.errors)}")

    print_integration_test_guide()

    if result.wasSuccessful():
        print("\n🎉 端到端集成测试通过！")
        return True
    else:
        print("\n⚠️ 部分集成测试未通过，请检查相关功能")
        return False


if __name__ == "__main__":
    run_integration_tests()
