"""Print HH and HC dimension tables for the built-in algebras."""
import argparse

from nch.algebra import BUILTINS, builtin
from nch.homology import cyclic_homology, hochschild


def row(res):
    return " ".join("%3d%s" % (r.dim, "" if r.trusted else "?") for r in res)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--algebras", default=",".join(BUILTINS))
    args = ap.parse_args()
    top = args.max_degree
    print("%-14s %-6s %s" % ("algebra", "theory", " ".join("%3d" % n for n in range(top + 1))))
    for name in args.algebras.split(","):
        A = builtin(name)
        if A.unital:
            print("%-14s %-6s %s" % (name, "HH", row(hochschild(A, top))))
            print("%-14s %-6s %s" % (name, "HC", row(cyclic_homology(A, top, model="mixed"))))
        print("%-14s %-6s %s" % (name, "HC(C)", row(cyclic_homology(A, top, model="connes"))))


if __name__ == "__main__":
    main()
