#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
线段圆盘覆盖求解器启动脚本
检查依赖后把命令行参数交给 cli.dispatch
"""

import sys


def check_dependencies():
    """检查依赖是否已安装"""
    try:
        import numpy
        import pandas
        return True
    except ImportError as e:
        print(f"❌ 缺少依赖: {e}", file=sys.stderr)
        print("请运行: pip install -r requirements.txt", file=sys.stderr)
        return False


def main():
    """主函数"""
    if not check_dependencies():
        sys.exit(1)

    from cli import dispatch

    try:
        sys.exit(dispatch(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\n👋 已中断", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
