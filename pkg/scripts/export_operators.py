"""Dump b and B on reduced forms as sparse triplets "degree row col value"."""
import argparse

from nch.algebra import load
from nch.forms import export_triplets, forms

ap = argparse.ArgumentParser()
ap.add_argument("--algebra", default="dual")
ap.add_argument("--N", type=int, default=4)
ap.add_argument("--op", choices=("b", "B", "d", "kappa"), default="b")
args = ap.parse_args()

F = forms(load(args.algebra), args.N)
lo = 1 if args.op == "b" else 0
for n in range(lo, args.N):
    for line in export_triplets(getattr(F, args.op)(n), n):
        print(line)
