#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
拉格朗日松弛测试
测试lagrangian模块的LRP′求解与节点松弛值
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math
import unittest

import numpy as np

from closed_form import restricted_cost
from core import DiscType, EmptySelectionError, Instance, InvalidMultipliersError
from lagrangian import Multipliers, lrp_value, solve_lrp_prime
from oracle import solve_brute_force


def random_instance(rng, q: int) -> Instance:
    return Instance(discs=tuple(DiscType(i + 1, float(rng.uniform(0, 20)), float(rng.uniform(0.5, 10)))
                                for i in range(q)))


def project_simplex(v: np.ndarray) -> np.ndarray:
    """欧氏投影到单纯形 {x ≥ 0, Σx = 1}"""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > css - 1)[0][-1]
    theta = (css[rho] - 1) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def reference_minimum(b: np.ndarray, kappa: np.ndarray) -> float:
    """投影梯度法求 min Σ b x² + κ x（单纯形约束）"""
    x = np.full(len(b), 1.0 / len(b))
    step = 1.0 / (2.0 * b.max())
    for _ in range(2000):
        x = project_simplex(x - step * (2.0 * b * x + kappa))
    return float(np.sum(b * x * x + kappa * x))


class TestLrpPrime(unittest.TestCase):
    """LRP′ 测试类"""

    def test_examples(self):
        """测试 LRP′ 示例"""
        print("\n=== 测试LRP′示例 ===")
        inst = Instance(discs=(DiscType(1, 0.0, 1.0), DiscType(2, 0.0, 1.0)))
        sol = solve_lrp_prime(inst, [1, 2], {1: 0.0, 2: 1.0})
        self.assertEqual(sol.h, 2)
        self.assertAlmostEqual(sol.lam, 1.5)
        self.assertAlmostEqual(sol.x[1], 0.75)
        self.assertAlmostEqual(sol.x[2], 0.25)
        self.assertAlmostEqual(sol.value_x, 0.875)

        sol = solve_lrp_prime(inst, [1, 2], {1: 0.0, 2: 10.0})
        self.assertEqual(sol.h, 1)
        self.assertAlmostEqual(sol.lam, 2.0)
        self.assertEqual(sol.x, {1: 1.0, 2: 0.0})
        self.assertAlmostEqual(sol.value_x, 1.0)
        print("   ✅ λ*、h、x 与目标值正确")

    def test_zero_multipliers_reduce_to_restricted(self):
        """测试 κ = 0 时退化为全集受限问题"""
        rng = np.random.default_rng(1)
        inst = random_instance(rng, 7)
        sol = solve_lrp_prime(inst, inst.ids, None)
        self.assertEqual(sol.h, 7)
        total = sum(1.0 / inst.disc(i).b for i in inst.ids)
        for i in inst.ids:
            self.assertAlmostEqual(sol.x[i], (1.0 / inst.disc(i).b) / total, places=12)

    def test_matches_reference_and_kkt(self):
        """测试与投影梯度参考解一致且 KKT 残差足够小"""
        print("\n=== 测试LRP′与参考解一致 ===")
        rng = np.random.default_rng(42)
        for _ in range(100):
            q = int(rng.integers(1, 9))
            inst = random_instance(rng, q)
            kappa = {i: float(rng.uniform(0, 5)) if rng.random() < 0.7 else 0.0 for i in inst.ids}
            sol = solve_lrp_prime(inst, inst.ids, kappa)

            b = np.array([inst.disc(i).b for i in inst.ids])
            k = np.array([kappa[i] for i in inst.ids])
            ref = reference_minimum(b, k)
            self.assertLessEqual(abs(sol.value_x - ref), 1e-6)

            self.assertAlmostEqual(math.fsum(sol.x.values()), 1.0, delta=1e-12)
            self.assertGreater(sol.lam, 0.0)
            for i in inst.ids:
                x = sol.x[i]
                if x > 0:
                    self.assertLessEqual(abs(2 * inst.disc(i).b * x + kappa[i] - sol.lam), 1e-10 * max(1.0, sol.lam))
                    self.assertLess(kappa[i], sol.lam)
                else:
                    self.assertGreaterEqual(kappa[i], sol.lam - 1e-12 * max(1.0, sol.lam))
        print("   ✅ 100 个随机实例通过")

    def test_permutation_invariance(self):
        """测试圆盘顺序不影响结果"""
        rng = np.random.default_rng(9)
        inst = random_instance(rng, 6)
        shuffled = Instance(discs=tuple(reversed(inst.discs)))
        kappa = {i: float(rng.uniform(0, 3)) for i in inst.ids}
        a = solve_lrp_prime(inst, inst.ids, kappa)
        b = solve_lrp_prime(shuffled, shuffled.ids, kappa)
        self.assertEqual(a.x, b.x)
        self.assertEqual(a.value_x, b.value_x)

    def test_tied_multipliers(self):
        """测试相同乘子按 id 顺序处理"""
        inst = Instance(discs=(DiscType(1, 0.0, 1.0), DiscType(2, 0.0, 1.0), DiscType(3, 0.0, 1.0)))
        sol = solve_lrp_prime(inst, inst.ids, {1: 5.0, 2: 5.0, 3: 0.0})
        self.assertEqual(sol.h, 1)
        self.assertEqual(sol.x[3], 1.0)

    def test_wide_range_parameters(self):
        """测试参数跨多个数量级时 Σx = 1 且满足 KKT"""
        print("\n=== 测试大跨度参数 ===")
        inst = Instance(discs=(DiscType(1, 1e4, 1e-6), DiscType(2, 1e4, 1.0)))
        sol = solve_lrp_prime(inst, [1, 2], {1: 1e4, 2: 2e4})
        self.assertEqual(sol.h, 1)
        self.assertEqual(sol.x[1], 1.0)
        self.assertEqual(sol.x[2], 0.0)
        self.assertAlmostEqual(sol.value_x, 1e4 + 1e-6, delta=1e-8)

        rng = np.random.default_rng(17)
        for _ in range(200):
            q = int(rng.integers(10, 17))
            b = 10.0 ** rng.uniform(-8, 8, q)
            kappa = 10.0 ** rng.uniform(-8, 8, q)
            inst = Instance(discs=tuple(DiscType(i + 1, 1.0, float(b[i])) for i in range(q)))
            kap = {i + 1: float(kappa[i]) for i in range(q)}
            sol = solve_lrp_prime(inst, inst.ids, kap)
            self.assertLessEqual(abs(math.fsum(sol.x.values()) - 1.0), 1e-12)
            scale = max(1.0, sol.lam)
            for i in range(q):
                xi = sol.x[i + 1]
                self.assertGreaterEqual(xi, 0.0)
                if xi > 0:
                    self.assertLessEqual(abs(2.0 * b[i] * xi + kappa[i] - sol.lam), 1e-10 * scale)
                else:
                    self.assertGreaterEqual(kappa[i], sol.lam - 1e-12 * scale)
        print("   ✅ 200 个大跨度实例通过")

    def test_invalid_inputs(self):
        """测试非法输入"""
        inst = Instance(discs=(DiscType(1, 0.0, 1.0),))
        with self.assertRaises(EmptySelectionError):
            solve_lrp_prime(inst, [], None)
        with self.assertRaises(InvalidMultipliersError):
            solve_lrp_prime(inst, [1], {1: -0.5})
        with self.assertRaises(InvalidMultipliersError):
            Multipliers({1: float("nan")})


class TestLrpValue(unittest.TestCase):
    """节点松弛测试类"""

    def test_examples(self):
        """测试节点松弛示例"""
        print("\n=== 测试节点松弛示例 ===")
        base = Instance(discs=tuple(DiscType(i, float(11 - i), float(i)) for i in range(1, 11)))
        sol = lrp_value(base, (), base.ids, None)
        harmonic = sum(1.0 / i for i in range(1, 11))
        self.assertAlmostEqual(sol.value, 1.0 / harmonic, places=12)
        self.assertAlmostEqual(sol.value, 0.3414, delta=1e-4)

        one = Instance(discs=(DiscType(1, 5.0, 2.0),))
        sol = lrp_value(one, (), [1], {1: 5.0})
        self.assertEqual(sol.y[1], 0)
        self.assertAlmostEqual(sol.value, 7.0)

        sol = lrp_value(base, base.ids, (), None)
        self.assertAlmostEqual(sol.value, restricted_cost(base, base.ids), places=9)
        print("   ✅ 节点松弛值正确")

    def test_y_rule(self):
        """测试 y 的取值规则"""
        inst = Instance(discs=(DiscType(1, 2.0, 1.0), DiscType(2, 3.0, 1.0)))
        sol = lrp_value(inst, (), [1, 2], {1: 2.5, 2: 3.0})
        self.assertEqual(sol.y, {1: 1, 2: 0})
        self.assertAlmostEqual(sol.value, sol.value_x + (2.0 - 2.5))

    def test_forced_discs(self):
        """测试强制圆盘的乘子视为 0 且计入固定成本"""
        inst = Instance(discs=(DiscType(1, 2.0, 1.0), DiscType(2, 3.0, 1.0)))
        sol = lrp_value(inst, [1], [2], {1: 100.0, 2: 0.0})
        self.assertEqual(sol.y[1], 1)
        self.assertAlmostEqual(sol.value, sol.value_x + 2.0)
        self.assertAlmostEqual(sol.x[1], 0.5)
        with self.assertRaises(InvalidMultipliersError):
            lrp_value(inst, [1], [1, 2], None)

    def test_dual_validity(self):
        """测试任意 κ ≥ 0 的松弛值不超过精确最优"""
        print("\n=== 测试对偶下界有效性 ===")
        rng = np.random.default_rng(1000)
        for _ in range(1000):
            q = int(rng.integers(1, 11))
            inst = random_instance(rng, q)
            kappa = {i: float(rng.uniform(0, 30)) for i in inst.ids}
            opt = solve_brute_force(inst).objective
            value = lrp_value(inst, (), inst.ids, kappa).value
            self.assertLessEqual(value, opt + 1e-9)
        print("   ✅ 1000 组 (实例, κ) 通过")


def run_lagrangian_tests():
    """运行拉格朗日松弛测试"""
    print("🔻 开始拉格朗日松弛测试...")
    print("=" * 60)

    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    suite.addTests(loader.loadTestsFromTestCase(TestLrpPrime))
    suite.addTests(loader.loadTestsFromTestCase(TestLrpValue))
    result = unittest.TextTestRunner(verbosity=2).run(suite)

    print("\n" + "=" * 60)
    print("📊 拉格朗日松弛测试结果摘要:")
    print(f"   总测试数: {result.testsRun}")
    print(f"   失败: {len(result.failures)}")
    print(f"   错误: {len(result.errors)}")
    return result.wasSuccessful()


if __name__ == "__main__":
    run_lagrangian_tests()
