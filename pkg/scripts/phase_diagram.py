"""Verdict map for tridiagonal symbols (a, b, c) over a grid of (|b|, |c|) with a fixed.

Writes CSV rows ``a, b, c, margin, status, codes``.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from toeplitz_dyn.classifier import classify_tridiagonal
from toeplitz_dyn.errors import DegenerateEllipse
from toeplitz_dyn.export import csv_text
from toeplitz_dyn.symbol import TridiagonalSymbol, ellipse_intersects_unit_circle


@dataclass
class PhaseConfig:
    a: float = 2.0
    b_max: float = 4.0
    c_max: float = 1.9
    steps: int = 40


def run(cfg: PhaseConfig):
    rows = []
    for b in np.linspace(0, cfg.b_max, cfg.steps):
        for c in np.linspace(0.05, cfg.c_max, cfg.steps):
            tri = TridiagonalSymbol(cfg.a, b, c)
            try:
                margin = ellipse_intersects_unit_circle(tri).margin
            except DegenerateEllipse:
                margin = float("nan")
            v = classify_tridiagonal(tri)
            rows.append((cfg.a, float(b), float(c), float(margin), v.status.value, "|".join(v.codes)))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--a", type=float, default=PhaseConfig.a)
    p.add_argument("--steps", type=int, default=PhaseConfig.steps)
    args = p.parse_args()
    rows = run(PhaseConfig(a=args.a, steps=args.steps))
    sys.stdout.write(csv_text(["a", "b", "c", "margin", "status", "codes"], rows))


if __name__ == "__main__":
    main()
