#!/usr/bin/env python3
"""Re-derive the rational classification table and print a row-by-row diff.

Exit status follows the CLI contract: 0 if every row verifies, 2 otherwise.
"""

import argparse
import json
import sys

from qhyp5.rational import enumerate_candidates, verify_table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-ext", type=int, default=2, help="extension degree for section search")
    ap.add_argument("--json", action="store_true", help="emit machine-readable output")
    args = ap.parse_args()

    checks = verify_table(args.max_ext)
    combos = enumerate_candidates()
    if args.json:
        print(json.dumps({
            "rows": [{"row": c.row, "ok": c.ok, "detail": c.detail} for c in checks],
            "combos": [c.to_json() for c in combos],
        }, indent=2))
    else:
        for c in checks:
            print(f"row {c.row:2d}: {'ok  ' if c.ok else 'FAIL'} {c.detail}")
        for c in combos:
            print(f"combo {c.label:>4}: {c.describe()} -> "
                  f"{'realizable' if c.realizable else 'not realizable'}")
        print(f"{sum(c.ok for c in checks)}/{len(checks)} rows verified")
    return 0 if all(c.ok for c in checks) else 2


if __name__ == "__main__":
    sys.exit(main())
