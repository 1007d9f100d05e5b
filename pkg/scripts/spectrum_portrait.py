"""Winding-number portrait of a symbol's curve, one CSV row per grid cell.

Example: ``python scripts/spectrum_portrait.py --coeffs '{"-1": 2, "0": 10, "1": 0.5}' --res 128``
"""

import argparse
import sys
from dataclasses import dataclass

from toeplitz_dyn.export import csv_text
from toeplitz_dyn.spectral import components, spectrum_grid
from toeplitz_dyn.cli import parse_coeffs


@dataclass
class PortraitConfig:
    coeffs: str = '{"-1": 2, "1": 0.5}'
    res: int = 128


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--coeffs", default=PortraitConfig.coeffs)
    p.add_argument("--res", type=int, default=PortraitConfig.res)
    args = p.parse_args()
    grid = spectrum_grid(parse_coeffs(args.coeffs), resolution=(args.res, args.res))
    sys.stdout.write(csv_text(["x", "y", "class", "winding"], grid.rows()))
    for comp in components(grid).components:
        print(comp, file=sys.stderr)


if __name__ == "__main__":
    main()
