"""tr_sigma independence and coinvariant dimensions over small (r, n)."""
from nch.algebra import builtin
from nch.lie import coinvariants, stable_range_report

PAIRS = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 2), (3, 3)]

print("%2s %2s %5s %4s %12s %5s" % ("r", "n", "rank", "n!", "independent", "r>=n"))
for d in stable_range_report(PAIRS):
    print("%2d %2d %5d %4d %12s %5s" % (d["r"], d["n"], d["rank"], d["n!"], d["independent"], d["r>=n"]))

print()
print("%-4s %2s %2s %-9s %5s %5s" % ("A", "r", "n", "power", "lie", "perm"))
for name, r, n in (("C", 1, 1), ("C", 2, 2), ("C2", 2, 2), ("dual", 2, 2)):
    for power in ("exterior", "tensor"):
        rep = coinvariants(builtin(name), r, n, power=power)
        print("%-4s %2d %2d %-9s %5d %5d" % (name, r, n, power, rep.lie_side, rep.permutation_side))
