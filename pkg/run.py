"""
快速启动入口

使用方式:
    python run.py synthesize --preset ex2-truth         # 合成 Cauchy 数据
    python run.py image --preset ex1-kite               # 成像（默认 tilde 变体）
    python run.py coeffs --preset ex2 --variant classical
    python run.py polygon --preset ex3-centered
    python run.py reproduce ex2                         # 一个例子的全部面板
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.main import main

if __name__ == "__main__":
    sys.exit(main())
