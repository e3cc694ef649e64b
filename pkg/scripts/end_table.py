#!/usr/bin/env python3
"""Print dim End^0 of K(x^a, x^{d-a}) and compare against the frozen goldens."""

import argparse

from schoberlab.suites import END_GOLDENS, end_table

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--dmax", type=int, default=5)
args = ap.parse_args()

table = end_table(args.dmax)
for key, dim in table.items():
    d, a = key.split(",")
    golden = END_GOLDENS.get(key)
    mark = "" if golden is None else ("ok" if golden == dim else f"MISMATCH (golden {golden})")
    print(f"d={d} a={a} dim={dim} {mark}")
