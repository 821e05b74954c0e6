"""Truncated Toeplitz parametrix index against the winding number."""
import sys

from nch.toeplitz import LaurentSymbol, index_report

SYMBOLS = ["z", "z^2", "2+z", "1+2*z", "z^-1", "z^-1*(1+z/3)", "(z-1/2)*(z-1/3)", "z^2-2*z-1/2"]


def main(symbols):
    Ns = list(range(1, 11))
    print("%-18s %4s  %-8s %s" % ("symbol", "wind", "exact", "index for N = 1..10"))
    for s in symbols:
        r = index_report(LaurentSymbol.parse(s), Ns).as_json()
        per = " ".join("%4s" % r["index_per_N"][str(N)] for N in Ns)
        print("%-18s %4d  %-8s %s" % (s, r["winding"], r.get("exact"), per))


if __name__ == "__main__":
    main(sys.argv[1:] or SYMBOLS)
