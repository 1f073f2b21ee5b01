"""``grpforge`` command-line tool.

Exit status: 0 when every check passes, 1 on a failed check, 2 on a usage
error (bad arguments or group spec), 3 when a size bound or time budget is hit.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import random
import sys
import time
from pathlib import Path

from grpforge import __version__, fp
from grpforge.errors import GroupSpecError, GrpforgeError, InvalidAction, SearchBoundExceeded, SearchTimeout
from grpforge.report import Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3

SUITES = ("lemma-aut", "p3", "genrel", "multilinear", "lie", "outhol", "pettet-full", "cornulier-struct")
KINDS = ("pettet", "cornulier", "holomorph", "cayley")
BIG_COORDS = 60_000


class UsageError(Exception):
    pass


# -- witt --------------------------------------------------------------------


def cmd_witt(args, rep: Report) -> None:
    from grpforge.freenil import hall_basis

    n, c = args.rank, args.cls
    if n < 1 or c < 1:
        raise UsageError("n and c must be >= 1")
    dims = [fp.witt_dim(n, k) for k in range(1, c + 1)]
    rep.data["degrees"] = dims
    rep.data["total"] = sum(dims)
    if n ** c <= 5000:
        counts = hall_basis(n, c).counts()
        rep.check("Hall basis counts equal the Witt dimensions", counts == dims, None if counts == dims else counts)


# -- construct ---------------------------------------------------------------


def _realize(args):
    from grpforge.groupspec import realize

    if not args.spec:
        raise UsageError("a group spec is required")
    G = realize(args.spec, args.bound)
    return G


def construct_pettet(args, rep: Report) -> None:
    from grpforge.constructions import pettet_construct

    G = _realize(args)
    T = pettet_construct(G, p=args.p, q=args.q)
    rep.primes.update(p=T.p, q=T.q)
    rep.fingerprint = G.fingerprint()
    rep.data["enumeration"] = [str(e) for e in G.elements]
    rep.order("Ghat", T.order_factored())
    rep.order("P", {T.p: T.n * (T.n + 1) // 2})
    rep.order("Q", {T.q: T.n})
    bad = T.check_conjugation_identities()
    rep.check("conjugation identities on generators", not bad, bad[:3] or None)
    if T.order <= args.bound:
        Gh = T.enumerate(args.bound)
        rep.check("enumerated order equals the formula", Gh.order == T.order, value=Gh.order)
        rep.check("Z(N) = P'", T.center_of_N_is_derived_P(args.bound))
    if T.p ** (T.n * (T.n + 1) // 2) <= args.bound:
        rep.check("kernel of gamma on P is P'", T.kernel_of_gamma_is_derived(args.bound))


def construct_cornulier(args, rep: Report) -> None:
    from grpforge.constructions import (
        CornulierGroup,
        centralizer_of_qj,
        compare_with_holomorph,
        cornulier_construct,
        verify_alpha_outer,
    )

    G = _realize(args)
    rep.fingerprint = G.fingerprint()
    rep.data["enumeration"] = [str(e) for e in G.elements]
    big = BIG_COORDS if args.big else None
    cg = cornulier_construct(G, p=args.p, max_coords=big)
    if not isinstance(cg, CornulierGroup):
        rep.data["reduction"] = f"|G| = {G.order}: H = {cg.name}"
        rep.order("H", cg.order)
        return
    n, p = cg.n, cg.p
    rep.primes["p"] = p
    rep.order("F", {p: fp.witt_total(n, n)})
    rep.order("P", {p: cg.p_exponent})
    rep.order("H", cg.order_factored())
    rep.data["ideal_rank"] = cg.ideal.rank
    rep.check("ideal rank equals |G|", cg.ideal.rank == n, value=cg.ideal.rank)
    rep.check("ideal invariant under every q_i", cg.ideal_q_invariant())
    rep.check("ideal invariant under every alpha_h", cg.ideal_alpha_invariant())
    out = verify_alpha_outer(cg)
    rep.check("alpha injective with alpha(G) meeting Inn(H) trivially", out["passed"], out["witness"])
    # the remaining checks need Hall bases of the top degree
    if cg.F.size <= 400:
        rep.check("spanning commutators and their alpha images vanish in P", cg.relations_vanish())
        bad = cg.check_alpha(args.samples, random.Random(args.seed))
        rep.check("every alpha_h is an automorphism; alpha is a homomorphism; compatible with q_j",
                  not bad, bad[:3] or None)
        for j in range(n):
            r = centralizer_of_qj(cg, j)
            rep.check(f"C_P(q_{j + 1}) = <x_i : i != {j + 1}>", r["passed"], None if r["passed"] else r["per_degree"])
        r = compare_with_holomorph(cg)
        rep.check("H/P' matches the holomorph power", r["passed"], None if r["passed"] else r)


def construct_holomorph(args, rep: Report) -> None:
    from grpforge.constructions import holomorph_power

    p, n = args.p or 3, args.n or 1
    H = holomorph_power(p, n, args.bound)
    rep.primes["p"] = p
    rep.order("G", H.order)
    rep.fingerprint = H.fingerprint()
    rep.check("order equals (p(p-1))^n", H.order == (p * (p - 1)) ** n, value=H.order)


def construct_cayley(args, rep: Report) -> None:
    from grpforge.aut import isomorphic
    from grpforge.constructions import cayley_color_autos

    G = _realize(args)
    rep.fingerprint = G.fingerprint()
    C, is_left = cayley_color_autos(G, G.gens)
    rep.order("G", G.order)
    rep.order("ColAut", C.order)
    rep.check("colour-preserving group equals the left translations", is_left)
    rep.check("colour-preserving group is isomorphic to G", isomorphic(C, G) is not None)


def cmd_construct(args, rep: Report) -> None:
    {
        "pettet": construct_pettet,
        "cornulier": construct_cornulier,
        "holomorph": construct_holomorph,
        "cayley": construct_cayley,
    }[args.kind](args, rep)


# -- verify ------------------------------------------------------------------


def verify_lemma_aut(args, rep: Report) -> None:
    from grpforge.aut import verify_lemma_aut

    for m, units, label in ((7, [2], "C3"), (5, [2], "C4"), (9, [4], "C3")):
        r = verify_lemma_aut(m, units, timeout=args.timeout)
        rep.check(f"C{m} ⋊ {label}: every normalizing automorphism centralizes the quotient",
                  r["passed"], r["witness"], aut_order=r["aut_order"], checked=r["checked"])


def p3_reference(p: int, tag: str):
    from grpforge.class2 import build_p3
    from grpforge.groupspec import realize

    if tag in ("D8", "Q8"):
        return realize(tag)
    if tag == "extraspecial-exponent-p":
        return build_p3(p, 0, 0)[0]
    return realize(f"C{p * p} |x[pow{1 + p}] C{p}")


def verify_p3(args, rep: Report) -> None:
    from grpforge.aut import isomorphic
    from grpforge.class2 import build_p3

    p = args.p or 2
    for a, b in itertools.product(range(p), repeat=2):
        G, tag = build_p3(p, a, b)
        ok = G.order == p**3 and not G.is_abelian()
        ref = p3_reference(p, tag)
        iso = isomorphic(G, ref) is not None
        rep.check(f"(a,b)=({a},{b}) -> {tag}", ok and iso, None if ok and iso else {"order": G.order})


def verify_genrel(args, rep: Report) -> None:
    from grpforge.class2 import build_lemgenrel

    n, p = args.n or 2, args.p or 3
    rng = random.Random(args.seed)
    npairs = n * (n - 1) // 2
    for t in range(args.trials):
        c = [[rng.randrange(p) for _ in range(npairs)] for _ in range(n)]
        G = build_lemgenrel(n, p, c, args.bound)
        D = G.derived_subgroup
        ok_order = G.order == p ** (n * (n + 1) // 2)
        elementary = len(D) == p**npairs and all(G.orders[d] in (1, p) for d in D)
        abelian = all(G.mul(int(x), int(y)) == G.mul(int(y), int(x)) for x in D for y in D)
        rep.check(f"trial {t}: order p^(n(n+1)/2), G' elementary abelian of rank n(n-1)/2",
                  ok_order and elementary and abelian, None if ok_order else G.order, c_words=c)


def verify_multilinear(args, rep: Report) -> None:
    from grpforge.freenil import FreeNilpotentGroup, multilinearity_check
    from grpforge.unitri import UnitriangularGroup

    for name, grp in (("F(3,3,5)", FreeNilpotentGroup(3, 3, 5)), ("UT(4,5)", UnitriangularGroup(4, 5))):
        for k in (2, 3):
            ok, wit = multilinearity_check(grp, k, args.samples, random.Random(args.seed))
            rep.check(f"{name}, k={k}: {args.samples} random instances", ok,
                      None if ok else {"trial": wit["trial"], "position": wit["position"]})


def verify_lie(args, rep: Report) -> None:
    from grpforge.freenil import FreeNilpotentGroup, lie_congruence_holds
    from grpforge.unitri import lemLie_matrix_witness

    n, p = args.n or 3, args.p or 5
    if n < 3 or not fp.is_prime(p) or p <= n:
        raise UsageError("need n >= 3 and a prime p > n")
    F = FreeNilpotentGroup(n, n, p, max_coords=BIG_COORDS if args.big else 341)
    ident = tuple(range(1, n))
    solutions = []
    for pi in itertools.permutations(range(1, n)):
        for a in range(p):
            holds = lie_congruence_holds(F, pi, a)
            m1, m2 = lemLie_matrix_witness(n, p, pi, a)
            if holds:
                solutions.append((pi, a))
            expected = (pi == ident and a == 1)
            rep.check(f"pi={pi}, a={a}: congruence {'holds' if holds else 'fails'}", holds == expected
                      and (expected or not (m1 and m2)))
    rep.data["solutions"] = [[list(pi), a] for pi, a in solutions]


def verify_outhol(args, rep: Report) -> None:
    from grpforge.aut import automorphism_group, isomorphic
    from grpforge.constructions import holomorph_power
    from grpforge.groups import symmetric

    p, n = args.p or 3, args.n or 2
    H = holomorph_power(p, n, args.bound)
    res = automorphism_group(H, bound=args.bound, timeout=args.timeout)
    rep.order("G", H.order)
    rep.order("Aut", res.aut_order)
    rep.order("Out", res.out_order)
    rep.check("|Out| = n!", res.out_order == math.factorial(n), value=res.out_order)
    Out = res.out_group()
    rep.check("Out is isomorphic to S_n", isomorphic(Out, symmetric(n)) is not None)


def verify_pettet_full(args, rep: Report) -> None:
    from grpforge.constructions import pettet_construct, verify_pettet_full

    args.spec = args.spec or "C2"
    G = _realize(args)
    T = pettet_construct(G, p=args.p, q=args.q)
    rep.primes.update(p=T.p, q=T.q)
    r = verify_pettet_full(T, timeout=args.timeout, bound=args.bound)
    rep.order("Ghat", r["order"])
    rep.order("Aut", r["aut_order"])
    rep.order("Out", r["out_order"])
    rep.data.update({k: r[k] for k in ("checked", "normalize_Q", "normalize_N", "inner_on_quotient", "search_nodes")})
    rep.check("every automorphism normalizes Q and N and induces an inner map on Ghat/N",
              r["passed"], r["witness"])


def verify_cornulier(args, rep: Report) -> None:
    args.spec = args.spec or "C3"
    construct_cornulier(args, rep)


def cmd_verify(args, rep: Report) -> None:
    {
        "lemma-aut": verify_lemma_aut,
        "p3": verify_p3,
        "genrel": verify_genrel,
        "multilinear": verify_multilinear,
        "lie": verify_lie,
        "outhol": verify_outhol,
        "pettet-full": verify_pettet_full,
        "cornulier-struct": verify_cornulier,
    }[args.suite](args, rep)


# -- aut ---------------------------------------------------------------------

SMALL_NAMES = {
    1: ["C1"], 2: ["C2"], 3: ["C3"], 4: ["C4", "C2xC2"], 5: ["C5"], 6: ["C6", "S3"], 7: ["C7"],
    8: ["C8", "C4xC2", "C2xC2xC2", "D8", "Q8"], 9: ["C9", "C3xC3"], 10: ["C10", "D10"],
    12: ["C12", "C6xC2", "D12", "C3|xC4", "perm[(1 2 3),(1 2)(3 4)]"], 24: ["S4"],
}


def identify_small(G) -> str | None:
    from grpforge.aut import isomorphic
    from grpforge.groupspec import realize

    for name in SMALL_NAMES.get(G.order, []):
        if isomorphic(G, realize(name)) is not None:
            return "A4" if name.startswith("perm") else name
    return None


def _load_cache(path: Path):
    try:
        data = json.loads(path.read_text())
        if data.get("schema") == 1 and {"aut", "inn", "out"} <= data.keys():
            return data
    except (OSError, ValueError, AttributeError):
        pass
    return None


def cmd_aut(args, rep: Report) -> None:
    from grpforge.aut import automorphism_group

    G = _realize(args)
    rep.fingerprint = G.fingerprint()
    rep.order("G", G.order)
    cache_file = None
    cached = None
    if args.cache:
        if G.order > args.bound:
            raise SearchBoundExceeded(f"order {G.order} exceeds the search bound {args.bound}")
        cache_file = Path(args.cache) / f"{G.table_hash()}.json"
        cached = _load_cache(cache_file)
    if cached is None:
        res = automorphism_group(G, bound=args.bound, timeout=args.timeout)
        entry = {"schema": 1, "aut": res.aut_order, "inn": res.inn_order, "out": res.out_order, "out_name": None}
        if res.out_order <= 24 and res.aut_order <= 50_000:
            entry["out_name"] = identify_small(res.out_group())
        if cache_file is not None:
            cache_file.parent.mkdir(parents=True, exist_ok=True)
            cache_file.write_text(json.dumps(entry))
        rep.data["cache"] = "miss" if cache_file else "off"
    else:
        entry = cached
        rep.data["cache"] = "hit"
    rep.order("Aut", entry["aut"])
    rep.order("Inn", entry["inn"])
    rep.order("Out", entry["out"])
    rep.data["summary"] = f"{entry['aut']} / {entry['inn']} / {entry['out']}"
    if entry.get("out_name"):
        rep.data["Out"] = entry["out_name"]
    rep.check("|Aut| = |Inn| |Out|", entry["aut"] == entry["inn"] * entry["out"])


# -- entry point -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"grpforge: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(sp):
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--c", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--trials", type=int, default=5, help="random presentations for genrel")
    sp.add_argument("--bound", type=int, default=5000, help="enumeration / search bound")
    sp.add_argument("--timeout", type=float, default=900.0, help="seconds per search")
    sp.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")
    sp.add_argument("--cache", metavar="DIR", help="directory for cached automorphism results")
    sp.add_argument("--big", action="store_true", help="lift the coordinate cap of free nilpotent groups")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="grpforge", description="Finite group constructions and checks.")
    ap.add_argument("--version", action="version", version=f"grpforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("witt", help="free Lie algebra dimensions per degree")
    w.add_argument("rank", type=int)
    w.add_argument("cls", type=int, metavar="c")
    _common(w)

    c = sub.add_parser("construct", help="build a construction and check its invariants")
    c.add_argument("kind", choices=KINDS)
    c.add_argument("spec", nargs="?")
    _common(c)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("spec", nargs="?")
    _common(v)

    a = sub.add_parser("aut", help="automorphism group orders")
    a.add_argument("spec")
    _common(a)
    return ap


def run(argv: list[str]) -> tuple[int, Report | None]:
    args = build_parser().parse_args(argv)
    rep = Report(command=list(argv), spec=getattr(args, "spec", None), seed=args.seed)
    handler = {"witt": cmd_witt, "construct": cmd_construct, "verify": cmd_verify, "aut": cmd_aut}[args.command]
    start = time.monotonic()
    try:
        handler(args, rep)
    except (GroupSpecError, UsageError, InvalidAction) as exc:
        print(f"grpforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except (SearchBoundExceeded, SearchTimeout) as exc:
        print(f"grpforge: resource limit: {exc}", file=sys.stderr)
        return EXIT_BOUND, None
    except (GrpforgeError, ValueError) as exc:
        print(f"grpforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    rep.timed(args.command, start)
    if args.json == "-":
        print(rep.to_json())
    else:
        print(rep.render())
        if args.json:
            Path(args.json).write_text(rep.to_json())
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep


def main(argv: list[str] | None = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
