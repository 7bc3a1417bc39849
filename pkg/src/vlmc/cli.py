"""Command line interface.

Subcommands: validate, stationary, simulate, map-export, orbit,
dirichlet, occurrence, check.  Trees are JSON documents (see README);
--numeric-mode (or VLMC_NUMERIC_MODE) selects exact rational or float
arithmetic.  Exit codes: 0 ok, 1 validation error, 2 numeric or
convergence error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import context_tree as ct
from . import dirichlet as dl
from . import dynsource as dyn
from . import occurrences as oc
from . import simulate as sim
from . import stationary as st
from .errors import (
    DirichletError,
    SolverError,
    ValidationError,
    VlmcError,
)
from .numeric import format_scalar


def _tree_path(args):
    path = getattr(args, "tree_flag", None) or args.tree
    if path is None:
        raise ValidationError("no tree file given")
    return path


def _load_tree(args):
    mode = args.numeric_mode or os.environ.get("VLMC_NUMERIC_MODE")
    exact = None if mode is None else (mode == "rational")
    with open(_tree_path(args)) as fh:
        spec = json.load(fh)
    return ct.validate(spec, exact=exact)


def _out(args):
    return open(args.out, "w", newline="") if args.out else sys.stdout


def _fmt(x) -> str:
    if isinstance(x, (Fraction, int)):
        return format_scalar(x)
    if x is None:
        return ""
    return repr(float(x))


def cmd_validate(args) -> int:
    tree = _load_tree(args)
    height = "inf" if tree.height is None else tree.height
    print(f"valid {tree.kind} tree, height {height}")
    print(f"numeric mode: {'rational' if tree.exact else 'float'}")
    print(f"minimal contexts: {tree.minimal_contexts()}")
    print(f"contexts up to depth 6: {tree.leaves_to_depth(6)}")
    return 0


def cmd_stationary(args) -> int:
    tree = _load_tree(args)
    a = Fraction(args.a) if (args.a and tree.exact) else (float(args.a) if args.a else None)
    m = st.solve(tree, a=a)
    b = m.backend
    doc = {"case": getattr(b, "case_tag", "finite-tree"), "pi": {}, "node_probabilities": {}}
    doc["pi"]["1"] = _fmt(m.measure_of("1"))
    doc["pi"]["00"] = _fmt(m.measure_of("00"))
    if isinstance(b, st.CombSolution):
        doc["S1"] = _fmt(b.S1) if b.S1 is not math.inf else "inf"
    elif isinstance(b, st.BambooSolution):
        doc["S1"] = _fmt(b.S1)
        doc["S00"] = _fmt(b.S00) if b.S00 is not math.inf else "inf"
    nodes = [""]
    for d in range(args.depth):
        nodes = [u + ch for u in nodes for ch in "01"]
        for u in nodes:
            if tree.in_tree(u):
                doc["node_probabilities"][u] = _fmt(m.measure_of(u[::-1]))
    with _out(args) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_simulate(args) -> int:
    tree = _load_tree(args)
    m = st.solve(tree, a=_opt_param(args, tree))
    seq = sim.generate(m, args.n, args.seed)
    if args.report and args.n >= 1000:
        report = sim.empirical_report(tree, m, args.n, args.seed, word=args.word)
    else:
        report = {"n_letters": args.n, "seed": args.seed}
    with _out(args) as fh:
        fh.write(seq + "\n")
        json.dump(report, fh, indent=2, default=float)
        fh.write("\n")
    return 0


def cmd_map_export(args) -> int:
    tree = _load_tree(args)
    m = st.solve(tree, a=_opt_param(args, tree))
    tmap = dyn.build_map(tree, m, args.depth)
    with _out(args) as fh:
        wr = csv.writer(fh)
        wr.writerow(["word", "left", "right", "slope", "target_left", "target_right"])
        for p in tmap.pieces:
            wr.writerow(
                [
                    p.word,
                    _fmt(p.source.lo),
                    _fmt(p.source.hi),
                    _fmt(1 / p.q),
                    _fmt(p.target.lo),
                    _fmt(p.target.hi),
                ]
            )
    if tmap.residual:
        print(f"truncation residual mass: {_fmt(tmap.residual)}", file=sys.stderr)
    return 0


def cmd_orbit(args) -> int:
    tree = _load_tree(args)
    m = st.solve(tree, a=_opt_param(args, tree))
    tmap = dyn.build_map(tree, m, args.depth)
    x = Fraction(args.x) if tree.exact else float(args.x)
    with _out(args) as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "x_n", "Y_n"])
        for n in range(args.n):
            wr.writerow([n, _fmt(x), tmap.coding(x)])
            x = tmap.apply(x)
    return 0


def _opt_param(args, tree):
    a = getattr(args, "a", None)
    if a is None:
        return None
    return Fraction(a) if tree.exact else float(a)


def _s_values(args):
    if args.grid:
        a, b, step = (float(x) for x in args.grid.split(":"))
        out = []
        v = a
        while v <= b + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    s = args.s
    if s is None:
        raise ValidationError("need --s or --grid")
    f = float(s)
    return [int(f) if f.is_integer() else f]


def cmd_dirichlet(args) -> int:
    tree = _load_tree(args)
    m = st.solve(tree, a=_opt_param(args, tree))
    with _out(args) as fh:
        wr = csv.writer(fh)
        wr.writerow(["s", "value", "tail_bound", "oracle_partial"])
        for s in _s_values(args):
            if isinstance(m.backend, st.CombSolution):
                ev = dl.comb_dirichlet(m.backend, s, trunc=args.trunc)
            elif isinstance(m.backend, st.BambooSolution):
                ev = dl.bamboo_dirichlet(m.backend, s, trunc=args.trunc)
            else:
                raise SolverError("Dirichlet closed forms exist for comb and bamboo only")
            partial = (
                dl.brute_force_dirichlet(m, s, args.oracle_maxlen)
                if args.oracle_maxlen
                else None
            )
            wr.writerow([s, _fmt(ev.value), _fmt(ev.tail_bound), _fmt(partial)])
    return 0


def cmd_occurrence(args) -> int:
    tree = _load_tree(args)
    m = st.solve(tree, a=_opt_param(args, tree))
    if isinstance(m.backend, st.CombSolution):
        gf = oc.occurrence_gf_comb(m, args.word, args.r, args.nmax)
    elif isinstance(m.backend, st.BambooSolution):
        gf = oc.occurrence_gf_bamboo(m, args.word, args.r, args.nmax)
    else:
        gf = None
    oracle = (
        oc.oracle_occurrence_pmf(m, args.word, args.r, args.nmax)
        if (args.oracle or gf is None)
        else None
    )
    with _out(args) as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "pmf_formula", "pmf_oracle", "abs_diff"])
        for n in range(args.nmax + 1):
            f = gf.phi_coeffs[n] if gf else None
            o = oracle[n] if oracle else None
            d = abs(f - o) if (f is not None and o is not None) else None
            wr.writerow([n, _fmt(f), _fmt(o), _fmt(d)])
    return 0


def cmd_check(args) -> int:
    """Run the property suite on a tree; nonzero exit on any violation."""
    import random

    tree = _load_tree(args)
    m = st.solve(tree, a=_opt_param(args, tree))
    rng = random.Random(args.seed)
    failures = []

    def report(name, ok, detail=""):
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        if not ok:
            failures.append(name)

    pal = st.check_palindrome_identity(m, 8)
    report("palindrome pi(1 0^n) = pi(0^n 1)", pal["max_discrepancy"] == 0
           if tree.exact else pal["max_discrepancy"] <= 1e-12, str(pal["max_discrepancy"]))

    words = ["", "0", "1", "01", "10", "0010", "110"]
    ok = all(
        abs(m.measure_of(w + "0") + m.measure_of(w + "1") - m.measure_of(w)) == 0
        if tree.exact
        else abs(m.measure_of(w + "0") + m.measure_of(w + "1") - m.measure_of(w)) <= 1e-12
        for w in words
    )
    report("additivity pi(w0) + pi(w1) = pi(w)", ok)

    items, leftover = m.folded_context_distribution()
    total = sum(p for _, p in items) + leftover
    report("context masses sum to 1", total == 1 if tree.exact else abs(total - 1) <= 1e-9)

    try:
        tmap = dyn.build_map(tree, m, args.depth)
        ok = True
        import itertools

        for ell in range(0, 5):
            for w in (
                [""] if ell == 0 else ("".join(t) for t in itertools.product("01", repeat=ell))
            ):
                for a in "01":
                    img = tmap.image(tmap.sub.interval(a + w))
                    if not dyn.same_endpoints(img, tmap.sub.interval(w)):
                        ok = False
        report("map identity T(I_aw) = I_w (|w| <= 4)", ok)

        ok, n_done = True, 0
        while n_done < 25:
            a, b = sorted(Fraction(rng.randrange(0, 1 << 16), 1 << 16) for _ in range(2))
            if a == b:
                continue
            try:
                L = tmap.preimage_length(dyn.Iv(a if tree.exact else float(a), b if tree.exact else float(b)))
            except dyn.UnresolvedRegion:
                continue
            want = (b - a) if tree.exact else float(b - a)
            if (L != want) if tree.exact else abs(L - want) > 1e-12:
                ok = False
            n_done += 1
        report("Lebesgue invariance |T^-1 B| = |B| (25 intervals)", ok)

        ok = True
        for ell in range(1, 6):
            import itertools

            for w in ("".join(t) for t in itertools.product("01", repeat=ell)):
                got = dyn.seed_interval(tmap, w)
                if not dyn.same_endpoints(got, tmap.sub.interval(w)):
                    ok = False
        report("seed sets B_w = I_w (|w| <= 5)", ok)
    except dyn.ZeroMassTree:
        report("map construction skipped (Dirac measure)", True)

    if isinstance(m.backend, (st.CombSolution, st.BambooSolution)) and not getattr(
        m.backend, "is_trivial", lambda: False
    )():
        build = (
            oc.occurrence_gf_comb
            if isinstance(m.backend, st.CombSolution)
            else oc.occurrence_gf_bamboo
        )
        ok = True
        for w, r in (("1", 1), ("10", 1), ("1100", 2)):
            try:
                gf = build(m, w, r, 18)
            except VlmcError:
                continue
            orc = oc.oracle_occurrence_pmf(m, w, r, 18)
            if tree.exact:
                ok &= gf.phi_coeffs == orc
            else:
                ok &= max(abs(a - b) for a, b in zip(gf.phi_coeffs, orc)) <= 1e-12
        report("occurrence formulas match the DP oracle", ok)

    rep = sim.empirical_report(tree, m, 100000, args.seed, max_len=4)
    worst = max(abs(r["z"]) for r in rep["frequencies"])
    report("simulation frequencies within 5 sigma", worst <= 5, f"max |z| = {worst:.2f}")

    return 2 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vlmc", description=__doc__)
    ap.add_argument(
        "--numeric-mode", choices=["rational", "float"], default=None,
        help="override the tree file's numeric mode (env: VLMC_NUMERIC_MODE)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("tree", nargs="?", help="tree-spec JSON file")
        p.add_argument("--tree", dest="tree_flag", help=argparse.SUPPRESS)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, help="check a tree-spec document")

    p = add("stationary", cmd_stationary, help="solve the stationary measure")
    p.add_argument("--a", default=None, help="free parameter for one-parameter families")
    p.add_argument("--depth", type=int, default=6, help="node probability depth")

    p = add("simulate", cmd_simulate, help="generate letters from the stationary chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--word", default=None)
    p.add_argument("--a", default=None)
    p.add_argument("--no-report", dest="report", action="store_false")

    p = add("map-export", cmd_map_export, help="export the interval map pieces as CSV")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--a", default=None)

    p = add("orbit", cmd_orbit, help="iterate the map from a seed")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--a", default=None)

    p = add("dirichlet", cmd_dirichlet, help="evaluate the Dirichlet series")
    p.add_argument("--s", default=None)
    p.add_argument("--grid", default=None, help="a:b:step")
    p.add_argument("--trunc", type=int, default=64)
    p.add_argument("--oracle-maxlen", type=int, default=None)
    p.add_argument("--a", default=None)

    p = add("occurrence", cmd_occurrence, help="word occurrence generating function")
    p.add_argument("--word", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--nmax", type=int, default=25)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--a", default=None)

    p = add("check", cmd_check, help="run the property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--a", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return 1
    except (SolverError, DirichletError, VlmcError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
