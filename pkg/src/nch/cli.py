"""Command line entry point: nch describe | homology | verify | chern | index | toeplitz.

Exit status: 0 all assertions pass, 1 an assertion failed, 2 bad input,
3 a resource cap was hit.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

from .scalars import fmt, parse_scalar


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    algebra: str = "C"
    N: int = None
    max_degree: int = 4
    suite: str = None
    format: str = "table"
    seed: int = 0
    theory: str = "hc"
    symbol: str = None
    Ns: list = field(default_factory=list)
    levels: list = field(default_factory=lambda: [1, 2])
    ideal: list = None
    weights: dict = None
    parity: str = "even"
    m: int = 1
    element: list = None

    def check(self):
        if self.command == "homology":
            if self.N is None:
                self.N = self.max_degree + 2
            if self.N < self.max_degree + 2:
                raise InputError("N=%d below max degree + 2 = %d" % (self.N, self.max_degree + 2))
        return self


@dataclass
class Report:
    command: str
    config: dict
    results: list = field(default_factory=list)
    assertions: list = field(default_factory=list)

    def check(self, name, passed, detail=""):
        self.assertions.append({"name": name, "pass": bool(passed), "detail": detail})

    @property
    def ok(self):
        return all(a["pass"] for a in self.assertions)


def _range(text):
    """"1..12", "3,5,8" or "6"."""
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError("bad range %r" % text) from None


def _load_algebra(source, check=True):
    from .algebra import AlgebraError, load, validate
    try:
        A = load(source)
    except (OSError, json.JSONDecodeError, KeyError, AlgebraError) as exc:
        raise InputError("cannot load algebra %r: %s" % (source, exc)) from None
    if not check:
        return A
    rep = validate(A)
    if not rep.ok:
        raise InputError("algebra %s fails validation: associativity %s unit %s"
                         % (A.name, rep.associativity[:1], rep.unit[:1]))
    return A


def _vec(x):
    if isinstance(x, dict):
        return {int(k): parse_scalar(v) for k, v in x.items()}
    return {i: parse_scalar(v) for i, v in enumerate(x) if parse_scalar(v)}


# -- commands --------------------------------------------------------------------

def cmd_describe(cfg, rep):
    from .algebra import validate
    A = _load_algebra(cfg.algebra, check=False)
    v = validate(A)
    rep.results.append({"name": A.name, "dim": A.dim, "unital": A.unital, "basis": A.basis,
                        "commutative": A.is_commutative()})
    rep.check("associative", not v.associativity, "" if not v.associativity else
              "first offending basis tuple %r" % (v.associativity[0],))
    rep.check("unit axioms", not v.unit)


def cmd_homology(cfg, rep):
    from .homology import cyclic_homology, hochschild
    A = _load_algebra(cfg.algebra)
    if cfg.theory == "hh":
        res = hochschild(A, cfg.max_degree, N=cfg.N)
    elif cfg.theory in ("hc", "hc-connes"):
        model = "connes" if cfg.theory == "hc-connes" or not A.unital else "mixed"
        res = cyclic_homology(A, cfg.max_degree, model=model, N=cfg.N)
    else:
        raise InputError("unknown theory %r" % cfg.theory)
    for r in res:
        rep.results.append({"degree": r.degree, "dim": r.dim, "trusted": r.trusted})
    rep.check("all degrees trusted", all(r.trusted for r in res))


def cmd_verify(cfg, rep):
    from .suites import SUITES, run_suite
    if cfg.suite not in SUITES:
        raise InputError("unknown suite %r (choose from %s)" % (cfg.suite, ", ".join(SUITES)))
    A = _load_algebra(cfg.algebra) if cfg.algebra else None
    for a in run_suite(cfg.suite, A, cfg.N, cfg.seed):
        rep.check(a.name, a.passed, a.detail)
    rep.results.append({"suite": cfg.suite, "count": len(rep.assertions),
                        "failed": sum(not a["pass"] for a in rep.assertions)})


def _kclass(A, element, parity):
    from .algebra import AlgebraElement, Mat, invert
    from .k_index import KClass
    if element is None:
        element = [[{0: 1}]]
    if not isinstance(element[0], list):
        element = [[element]]
    M = Mat([[AlgebraElement(A, _vec(x)) for x in row] for row in element])
    if parity == "even":
        return KClass.idempotent(M)
    return KClass.invertible(M, invert(M))


def cmd_chern(cfg, rep):
    from .algebra import AlgebraError
    from .k_index import chern_character
    A = _load_algebra(cfg.algebra)
    try:
        kc = _kclass(A, cfg.element, cfg.parity)
    except AlgebraError as exc:
        raise InputError(str(exc)) from None
    for n in cfg.levels:
        ch = chern_character(kc, n)
        rep.results.append({"n": n, "degree": ch["degree"],
                            "chain": {" ".join(map(str, t)): fmt(c) for t, c in sorted(ch["chain"].items())}})
        rep.check("Ch_%d is a cyclic cycle" % n, ch["cycle"])
        rep.check("N Ch_%d = (2n+1) Ch_%d" % (n, n), ch["norm_identity"])


def cmd_index(cfg, rep):
    from .algebra import AlgebraError, Mat
    from .k_index import KClass, fd_trace, index_report, toeplitz_trace
    if cfg.symbol is not None:
        from .toeplitz import LaurentSymbol, SymbolError, winding_number
        try:
            f = LaurentSymbol.parse(cfg.symbol)
        except SymbolError as exc:
            raise InputError(str(exc)) from None
        if len(f.c) != 1:
            raise InputError("odd index needs a monomial symbol (exact inverse in the Laurent ring)")
        (k, c), = f.c.items()
        finv = LaurentSymbol.monomial(-k, 1 / c)
        ht = toeplitz_trace()
        other = toeplitz_trace(perturb_seed=cfg.seed)
        kc = KClass.invertible(Mat([[f]]), Mat([[finv]]))
        out = index_report(ht, kc, cfg.levels, other)
        w, _ = winding_number(f)
        rep.results.append({"symbol": cfg.symbol, "winding": w, **out})
        rep.check("direct = paired", out["equal"])
        rep.check("stable in n", out["stable_in_n"])
        rep.check("lift independent", out["lift_independent"])
        rep.check("index = -winding", out["value"] == str(-w), "index %s, winding %d" % (out["value"], w))
        return
    R = _load_algebra(cfg.algebra)
    gens = [_vec(g) for g in (cfg.ideal or [])]
    weights = {int(k): parse_scalar(v) for k, v in (cfg.weights or {0: 1}).items()}
    try:
        ht = fd_trace(R, gens, cfg.parity, cfg.m, weights)
        other = fd_trace(R, gens, cfg.parity, cfg.m, weights, lift_seed=cfg.seed)
        kc = _kclass(ht.A, cfg.element, cfg.parity)
    except AlgebraError as exc:
        raise InputError(str(exc)) from None
    rep.check("higher trace conditions", all(ht.verify().values()), str(ht.verify()))
    out = index_report(ht, kc, cfg.levels, other)
    rep.results.append(out)
    rep.check("direct = paired", out["equal"])
    rep.check("stable in n", out["stable_in_n"])
    rep.check("lift independent", out["lift_independent"])


def cmd_toeplitz(cfg, rep):
    from .toeplitz import LaurentSymbol, SymbolError, commutator_trace, index_report
    try:
        f = LaurentSymbol.parse(cfg.symbol or "z")
    except SymbolError as exc:
        raise InputError(str(exc)) from None
    Ns = cfg.Ns or list(range(1, 13))
    r = index_report(f, Ns)
    rep.results.append(r.as_json())
    rep.check("index stabilizes", r.stabilized is not None, "from N=%s" % r.stable_from)
    rep.check("|index| = |winding|", r.stabilized is not None and abs(r.stabilized) == abs(r.winding),
              "index %s, winding %d" % (r.stabilized, r.winding))
    g = LaurentSymbol.parse("z^-1")
    Nmin = f.width + g.width
    vals = [commutator_trace(f, g, N) for N in range(max(Nmin, 1), max(Nmin, 1) + 3)]
    rep.check("tr[T_f, T_z^-1] = Fourier pairing, stable in N",
              all(a == b for a, b in vals) and len({a for a, _ in vals}) == 1, fmt(vals[0][0]))


COMMANDS = {"describe": cmd_describe, "homology": cmd_homology, "verify": cmd_verify,
            "chern": cmd_chern, "index": cmd_index, "toeplitz": cmd_toeplitz}


def run(cfg):
    """Execute a RunConfig; returns (exit status, Report)."""
    from .lie import ResourceError
    cfg.check()
    rep = Report(cfg.command, {k: v for k, v in asdict(cfg).items() if v is not None})
    try:
        COMMANDS[cfg.command](cfg, rep)
    except ResourceError as exc:
        rep.check("resource cap", False, str(exc))
        return 3, rep
    return (0 if rep.ok else 1), rep


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    return fmt(x)


def emit(rep, fmt_="table"):
    if fmt_ == "json":
        doc = {"command": rep.command, "config": _jsonable(rep.config),
               "results": _jsonable(rep.results), "assertions": _jsonable(rep.assertions)}
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    lines = ["# %s  seed=%s" % (rep.command, rep.config.get("seed"))]
    for r in rep.results:
        if rep.command == "homology":
            lines.append("%4d  %4d%s" % (r["degree"], r["dim"], "" if r["trusted"] else "  (untrusted)"))
        else:
            for k, v in r.items():
                lines.append("%-22s %s" % (k, json.dumps(_jsonable(v), sort_keys=True)))
    for a in rep.assertions:
        lines.append("%s  %s%s" % ("PASS" if a["pass"] else "FAIL", a["name"],
                                   ("  [%s]" % a["detail"]) if a["detail"] else ""))
    return ("\n".join(lines) + "\n").encode()


def build_parser():
    p = argparse.ArgumentParser(prog="nch", description="Exact cyclic homology and index computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra="C"):
        sp.add_argument("--algebra", default=algebra, help="built-in name or JSON file")
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("describe"))
    h = sub.add_parser("homology")
    common(h)
    h.add_argument("--theory", choices=("hh", "hc", "hc-connes"), default="hc")
    h.add_argument("--max-degree", type=int, default=4)
    h.add_argument("--N", type=int)
    v = sub.add_parser("verify")
    common(v, algebra=None)
    v.add_argument("--suite", required=True)
    v.add_argument("--N", type=int)
    c = sub.add_parser("chern")
    common(c)
    c.add_argument("--element", help="JSON matrix of coordinate lists")
    c.add_argument("--parity", choices=("even", "odd"), default="even")
    c.add_argument("--levels", default="1,2")
    i = sub.add_parser("index")
    common(i, algebra="dual")
    i.add_argument("--symbol", help="odd Toeplitz class of a monomial symbol, e.g. z^2")
    i.add_argument("--ideal", help='JSON list of generators, e.g. [[0,1]]')
    i.add_argument("--weights", help='JSON {basis index: weight}')
    i.add_argument("--parity", choices=("even", "odd"), default="even")
    i.add_argument("--m", type=int, default=1)
    i.add_argument("--element", help="JSON matrix over R/I")
    i.add_argument("--levels", default="1,2")
    t = sub.add_parser("toeplitz")
    common(t)
    t.add_argument("--symbol", default="z")
    t.add_argument("--N", dest="Ns", default="1..12")
    return p


def config_from_args(ns):
    d = vars(ns)
    cfg = RunConfig(command=d["command"], format=d.get("format", "table"), seed=d.get("seed", 0))
    cfg.algebra = d.get("algebra")
    for key in ("N", "suite", "theory", "symbol", "parity", "m"):
        if d.get(key) is not None:
            setattr(cfg, key, d[key])
    if d.get("max_degree") is not None:
        cfg.max_degree = d["max_degree"]
    if d.get("levels"):
        cfg.levels = _range(d["levels"])
    if d.get("Ns"):
        cfg.Ns = _range(d["Ns"])
    try:
        for key in ("ideal", "weights", "element"):
            if d.get(key):
                setattr(cfg, key, json.loads(d[key]))
    except json.JSONDecodeError as exc:
        raise InputError("bad JSON argument: %s" % exc) from None
    return cfg


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        status, rep = run(cfg)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit(rep, cfg.format))
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
