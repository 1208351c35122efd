"""Run every preset table through the CLI and write the comparisons to one directory.

    python scripts/reproduce_all.py --out results/ [--fast] [--max-truncation 12]
"""

import argparse
import sys

from fdcv import presets
from fdcv.cli import main as cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--fast", action="store_true")
    ap.add_argument("--max-truncation", type=int)
    ap.add_argument("--tables", nargs="+", default=list(presets.IDENTIFIERS))
    args = ap.parse_args()
    status = 0
    for ident in args.tables:
        argv = ["reproduce", ident, "--output-dir", args.out, "-v"]
        if args.fast:
            argv.append("--fast")
        if args.max_truncation is not None:
            argv += ["--max-truncation", str(args.max_truncation)]
        status = max(status, cli(argv))
    return status


if __name__ == "__main__":
    sys.exit(main())
