#!/usr/bin/env python3
"""Exhaustive survey of every normalized phi over GF(5) up to a given degree."""

import argparse
import json
import sys

from qhyp5.rational import scan


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("degree", type=int, help="maximum degree (1..9)")
    args = ap.parse_args()
    if not 1 <= args.degree <= 9:
        ap.error("degree must lie in 1..9")
    rep = scan(args.degree)
    print(json.dumps(rep.to_json(), indent=2))
    return 2 if rep.unmatched else 0


if __name__ == "__main__":
    sys.exit(main())
