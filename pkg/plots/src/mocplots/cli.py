"""`plot <figure-kind> --in <csv...> --out <path>`.

Exit codes: 0 success (including empty inputs), 1 schema error,
2 usage error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import RENDERERS
from .tables import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot")
    parser.add_argument("kind", choices=sorted(RENDERERS))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV")
    parser.add_argument("--out", required=True, metavar="PATH")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        RENDERERS[args.kind](args.inputs, args.out)
    except SchemaError as exc:
        print(f"error (schema): {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error (io): {exc}", file=sys.stderr)
        return 5
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
