"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch (formula against trace form,
or computed against the claimed theorem value with ``--strict``), 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .catalog.setups import ENV_VAR, CatalogError, code_rate, load_catalog

log = logging.getLogger("natorder")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        json.dump(obj, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _setup_or_usage(catalog, sid):
    try:
        return catalog.get(sid)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None


def _catalog_meta(catalog) -> dict:
    return {"version": catalog.version, "sha256": catalog.checksum, "source": catalog.source}


# -- list -----------------------------------------------------------------------
def cmd_list(args, catalog) -> int:
    rows = []
    for s in list(catalog.setups) + list(catalog.extras):
        rows.append(
            {
                "id": s.id,
                "base": "Q" if s.F.__class__.__name__ == "RationalField" else s.F.name,
                "n": s.n,
                "n_r": s.n_r,
                "n_t": s.n_t,
                "rate": str(code_rate(s)),
                "gamma": str(s.gamma),
                "extra": s.extra,
            }
        )
    lines = [f"{'id':8} {'F':4} {'n':>2} {'n_r':>3} {'n_t':>3} {'rate':>5}  gamma"]
    for r in rows:
        tag = "  (extra)" if r["extra"] else ""
        lines.append(f"{r['id']:8} {r['base']:4} {r['n']:>2} {r['n_r']:>3} {r['n_t']:>3} {r['rate']:>5}  {r['gamma']}{tag}")
    _emit({"tool_version": __version__, "catalog": _catalog_meta(catalog), "setups": rows}, args.json, "\n".join(lines))
    return EXIT_OK


# -- verify ---------------------------------------------------------------------
def _verify_text(doc) -> str:
    def v(x):
        if x is None:
            return "-"
        return x["text"] if x["text"] == x["value"] else f"{x['value']} = {x['text']}"

    def mark(flag):
        return "n/a" if flag is None else "agrees" if flag else "DIFFERS"

    out = [f"{doc['setup']}:"]
    out.append(
        f"  |Nm disc(O/O_F)| = {v(doc['formula'])} (formula), {v(doc['traceform'])} (trace form): "
        + ("equal" if doc["formula_equals_traceform"] else "MISMATCH")
    )
    out.append(f"  over O_L: {v(doc['formula_over_L'])} (formula), {v(doc['traceform_over_L'])} (trace form)")
    out.append(
        f"  claimed: table {v(doc['claimed']['table'])} [{mark(doc['matches_table'])}], "
        f"theorem {v(doc['claimed']['theorem'])} [{mark(doc['matches_theorem'])}]"
    )
    out.append(
        f"  lower bound {v(doc['bound'])} ({'tight' if doc['bound_tight'] else 'holds' if doc['bound_ok'] else 'VIOLATED'}); "
        f"lambda {doc['lambda']['computed']} ({doc['lambda']['flag']}), printed {doc['lambda']['printed']}"
    )
    if doc.get("balance_D"):
        out.append(f"  balance D = {v(doc['balance_D'])}")
    for ev in doc.get("nonnorm", []):
        out.append(f"  non-norm [{ev['kind']}] {ev['element']}: {ev['status']} ({ev['reason']})")
    for key, chk in doc.get("cited_checks", {}).items():
        if "agrees" in chk:
            out.append(f"  cited {key}: {chk['cited']} vs {chk['computed']} [{mark(chk['agrees'])}]")
        else:
            out.append(f"  competitor {chk['field']}: D = {chk['balance_D']}, ours {chk['ours']}")
    met = doc.get("lattice")
    if met:
        m = met["metrics"]
        md = met["min_determinant"]
        how = "exhaustive" if md["certified"] else "sampled"
        out.append(
            f"  lattice ({met['mode']}, k={met['k']}, n={met['n']}): nu={m['nu']:.6g}, "
            f"Delta_min={md['exact'] or md['delta_min']} ({how}), delta={m['delta']:.6g}, mu={m['mu']:.6g}"
        )
    return "\n".join(out)


def cmd_verify(args, catalog) -> int:
    from .cda.discriminant import DiscriminantMismatchError, discriminant_formula_over_L, verify_setup

    if args.setup == "all":
        setups = list(catalog.setups)
    else:
        setups = [_setup_or_usage(catalog, args.setup)]
    docs, code = [], EXIT_OK
    for s in setups:
        try:
            report = verify_setup(s, raise_on_mismatch=True)
        except DiscriminantMismatchError as exc:
            log.error("%s", exc)
            report = exc.report
            code = EXIT_MISMATCH
        doc = report.to_json()
        if args.strict and report.matches_theorem is False:
            doc["strict_failure"] = "computed value differs from the claimed theorem value"
            code = EXIT_MISMATCH
        if not args.no_metrics:
            from .stlattice.report import setup_metrics

            doc["lattice"] = setup_metrics(s, disc_over_L=discriminant_formula_over_L(s).value)
        docs.append(doc)
    result = {"tool_version": __version__, "catalog": _catalog_meta(catalog), "strict": args.strict, "reports": docs}
    _emit(result, args.json, "\n".join(_verify_text(d) for d in docs))
    return code


# -- mindet -----------------------------------------------------------------------
def cmd_mindet(args, catalog) -> int:
    from .stlattice.lattice import LatticeError, gram_and_volume, lattice_basis, normalized_metrics
    from .stlattice.report import default_mode
    from .stlattice.search import min_determinant

    s = _setup_or_usage(catalog, args.setup)
    if args.bound is None and args.constellation is None:
        raise UsageError("mindet needs --bound or --constellation")
    try:
        basis = lattice_basis(s, args.mode or default_mode(s))
        res = min_determinant(
            basis,
            bound=None if args.constellation else args.bound,
            constellation=args.constellation,
            sample=args.sample,
            seed=args.seed,
            workers=args.workers,
        )
    except (LatticeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    gv = gram_and_volume(basis)
    m = normalized_metrics(res.delta_min, gv.nu, basis.k, basis.n, gv.gram, res.exact)
    doc = {
        "tool_version": __version__,
        "catalog": _catalog_meta(catalog),
        "setup": s.id,
        "mode": basis.mode,
        "flags": basis.flags,
        "min_determinant": res.to_json(),
        "metrics": m.to_json(),
    }
    text = (
        f"{s.id} ({basis.mode}, k={basis.k}, n={basis.n}), {res.search}: "
        f"Delta_min = {res.exact if res.exact is not None else res.delta_min}"
        f" ({'certified exactly' if res.certified else 'not certified'}) at {list(res.argmin)} "
        f"over {res.points} points\n"
        f"nu = {m.nu:.10g}, delta = {m.delta:.10g}, mu = {m.mu:.10g}"
    )
    _emit(doc, args.json, text)
    return EXIT_OK


# -- export -----------------------------------------------------------------------
def cmd_export(args, catalog) -> int:
    from .stlattice.codebook import build_codebook, write_codebook
    from .stlattice.lattice import LatticeError, lattice_basis

    s = _setup_or_usage(catalog, args.setup)
    try:
        basis = lattice_basis(s, args.mode)
        cb = build_codebook(basis, args.constellation)
    except (LatticeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    write_codebook(cb, args.out, args.variant)
    log.info("wrote %d codewords to %s", len(cb), args.out)
    _emit(
        {"setup": s.id, "mode": basis.mode, "words": len(cb), "out": args.out, "variant": args.variant},
        args.json,
        f"{s.id}: {len(cb)} codewords ({basis.mode}, {args.constellation}"
        + (f", {args.variant}" if args.variant else "")
        + f") -> {args.out}",
    )
    return EXIT_OK


# -- simulate ---------------------------------------------------------------------
def cmd_simulate(args, catalog) -> int:
    from .mimosim.simulate import SimConfig, SimulationError, simulate

    try:
        cfg = SimConfig.load(args.config)
        if args.workers:
            cfg.workers = args.workers
        table = simulate(cfg)
    except (OSError, KeyError, TypeError, json.JSONDecodeError, SimulationError) as exc:
        raise UsageError(f"simulate: {exc}") from None
    table.write(args.out)
    lines = [f"{'snr_db':>7} {'trials':>7} {'errors':>7} {'cwer':>10} {'ci95':>10}"]
    for r in table.rows:
        lines.append(f"{r.snr_db:7.2f} {r.trials:7d} {r.errors:7d} {r.cwer:10.3e} {r.ci95_halfwidth:10.3e}")
    _emit({"out": args.out, "rows": [vars(r) for r in table.rows]}, args.json, "\n".join(lines))
    return EXIT_OK


# -- enumerate --------------------------------------------------------------------
def cmd_enumerate(args, catalog) -> int:
    from .catalog.formulas import ParameterError, enumerate_minimality

    try:
        rep = enumerate_minimality(args.family, args.bound)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    w = rep.winner
    lines = [
        f"family {rep.family}, parameters up to {rep.bound}: {len(rep.candidates)} candidates",
        f"minimizer {w.params} (case {w.case}): disc {w.disc}, bound {w.bound}"
        + (" (unique)" if rep.unique else " (NOT unique)"),
        f"expected {rep.expected_params}: {'agrees' if rep.field_agrees else 'DIFFERS'}; "
        f"claimed bound {rep.claimed_bound}: {'agrees' if rep.bound_agrees else 'differs'}",
    ]
    runners = sorted(rep.rejected(), key=lambda c: (c.bound, c.params))[:5]
    for c in runners:
        lines.append(f"  rejected {c.params} (case {c.case}): bound {c.bound}")
    lines += [f"  note: {n}" for n in rep.notes]
    _emit({"tool_version": __version__, **rep.to_json()}, args.json, "\n".join(lines))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="natorder",
        description="Natural orders of cyclic division algebras: discriminants, certificates, lattices, simulation.",
        epilog=f"The catalog path defaults to ${ENV_VAR} or the bundled catalog.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--catalog", help="catalog JSON path (overrides $%s)" % ENV_VAR)
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output on stdout")
        return sp

    add("list", "list catalog setups")

    sp = add("verify", "discriminants, bounds and non-norm certificates")
    sp.add_argument("--setup", required=True, help="setup id or 'all'")
    sp.add_argument("--strict", action="store_true", help="fail when computed differs from the claimed theorem value")
    sp.add_argument("--no-metrics", action="store_true", help="skip the lattice metrics")

    sp = add("mindet", "exact minimum determinant search")
    sp.add_argument("--setup", required=True)
    sp.add_argument("--bound", type=int, help="coordinates in -M..M")
    sp.add_argument("--constellation", help="search the difference set of int:m, qam4 or qam16")
    sp.add_argument("--mode", choices=("symmetric", "block"))
    sp.add_argument("--sample", type=int, help="random points instead of exhaustive search")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("export", "write a codebook CSV")
    sp.add_argument("--setup", required=True)
    sp.add_argument("--mode", required=True, choices=("symmetric", "block"))
    sp.add_argument("--out", required=True)
    sp.add_argument("--constellation", default="qam4")
    sp.add_argument("--variant", choices=("repeat-row",), help="rank-deficient baseline")

    sp = add("simulate", "Monte Carlo codeword error rate")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--workers", type=int)

    sp = add("enumerate", "minimality search over a parameter family")
    sp.add_argument("--family", required=True, choices=("Q-2", "Q-2-2"))
    sp.add_argument("--bound", type=int, default=30)
    return p


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "mindet": cmd_mindet,
    "export": cmd_export,
    "simulate": cmd_simulate,
    "enumerate": cmd_enumerate,
}


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        catalog = load_catalog(args.catalog)
    except (CatalogError, OSError) as exc:
        print(f"natorder: cannot load catalog: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.info("natorder %s, catalog %s (sha256 %s)", __version__, catalog.version, catalog.checksum)
    try:
        return COMMANDS[args.command](args, catalog)
    except UsageError as exc:
        print(f"natorder {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
