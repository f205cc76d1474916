"""mirs: exact algebra of multiindex models with a noise lab.

Usage:
    python main.py <command> [options]

Commands: index, enumerate, classify-two, gamma, pi-minus, counterterms,
deps, appell, simulate, check. Run `python main.py <command> -h` for options.
"""

import sys

from src.cli import run_cli


if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
