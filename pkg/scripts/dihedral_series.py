"""Coefficient tables for the dihedral log series L and the path W_t."""
import sys

from nch.cuntz import dihedral_report

N = int(sys.argv[1]) if len(sys.argv) > 1 else 8
rep = dihedral_report(N)
for label, rows in (("L", rep.L_rows), ("W", rep.W_rows)):
    print("# %s up to degree %d" % (label, N))
    for k, word, c in rows:
        print("%3d  %-12s %s" % (k, word, c))
checks = {k: v for k, v in rep.as_json().items() if isinstance(v, bool)}
for k, v in checks.items():
    print("%s  %s" % ("PASS" if v else "FAIL", k))
sys.exit(0 if all(checks.values()) else 1)
