"""Command-line front end: ``mixedgoldbach <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import report as rp
from .arith import ArgumentError

COMMANDS = ("sieve", "classify", "gamma", "series", "arcs", "verify")


def _grid(text: str) -> list[int]:
    """Comma list of integers; ``a:b:k`` gives k odd points log-spaced in [a, b]."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            a, b, k = (int(float(x)) for x in part.split(":"))
            out += sorted({int(x) | 1 for x in np.geomspace(a, b, k) if int(x) | 1 <= b})
        else:
            out.append(int(float(part)))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixedgoldbach", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=lambda s: int(float(s)), help="single N (or table limit for sieve)")
    p.add_argument("--n-grid", type=_grid, default=[], help="e.g. 10001,100003 or 10001:10000000:25")
    p.add_argument("--c", default="11/10", help="exponent as num/den")
    p.add_argument("--exploration", action="store_true", help="allow c outside (1, 73/64)")
    p.add_argument("--a-param", type=float, default=2.0)
    p.add_argument("--b-param", type=float, default=1.0)
    p.add_argument("--prime-bound", type=lambda s: int(float(s)), default=10**6)
    p.add_argument("--oracle-ceiling", type=lambda s: int(float(s)), default=20_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=20170101)
    p.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                   help="write the JSON report to PATH (stdout if no PATH)")
    p.add_argument("--csv-out", default=None)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--quick", action="store_true", help="reduced sizes for the verify suite")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> rp.RunConfig:
    return rp.RunConfig(
        n=args.n, n_grid=args.n_grid, c=args.c, exploration=args.exploration,
        A_param=args.a_param, B_param=args.b_param, prime_bound=args.prime_bound,
        oracle_ceiling=args.oracle_ceiling, threads=args.threads, seed=args.seed,
        csv_out=args.csv_out, cache_dir=args.cache_dir, quick=args.quick,
    )


def _print_table(rows: list[dict], keys: list[str], out) -> None:
    def cell(v):
        if v is None:
            return "-"
        if isinstance(v, float):
            return f"{v:.6g}"
        return str(v)

    body = [[cell(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(b[i]) for b in body)) if body else len(k) for i, k in enumerate(keys)]
    print("  ".join(k.rjust(w) for k, w in zip(keys, widths)), file=out)
    for b in body:
        print("  ".join(v.rjust(w) for v, w in zip(b, widths)), file=out)


def _human(report: dict, out) -> None:
    print(rp.header_line(report), file=out)
    cmd, t = report["command"], report["tables"]
    if cmd in ("sieve",):
        for k, v in t.items():
            print(f"{k:>14s}: {v}", file=out)
    elif cmd == "classify":
        _print_table(t["rows"], ["n", "prime", "ps", "linnik", "pi", "ps_count", "linnik_count"], out)
    elif cmd == "gamma":
        _print_table(t["rows"], ["N", "gamma", "gamma1", "gamma2", "gamma3", "main_term", "ratio",
                                 "D", "oracle_rel_gap", "even_flag"], out)
    elif cmd == "series":
        _print_table(t["rows"], ["N", "sigma", "sigma_gamma", "N0", "F0"], out)
        for r in t["rows"]:
            if "partial_sums" in r:
                print(f"N={r['N']} partial sums vs F(0):", file=out)
                _print_table(r["partial_sums"], ["D", "sum", "gap"], out)
    elif cmd == "arcs":
        for r in t["rows"]:
            print(f"N={r['N']} Q={r['Q']:.4g} tau={r['tau']:.6g} arcs={r['arcs']} "
                  f"disjoint={r['disjoint']} minor_measure={r['minor_measure']:.6f}", file=out)
            _print_table(r["major_arc_errors"], ["a", "q", "offset", "err_S_over_N", "err_Sc_over_N"], out)
            if "dft" in r:
                d = r["dft"]
                print(f"DFT M={d['M']}: {d['via_dft']:.12g} vs direct {d['direct']:.12g}", file=out)
    for ch in report["checks"] if cmd != "verify" else []:
        print(f"[{ch['status'].upper()}] {ch['name']}", file=out)
    if cmd == "verify":
        for f in report.get("failed", []):
            print(f"FAILED {f}", file=out)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    # tables go to stderr when the JSON report owns stdout
    human = sys.stderr if args.json == "-" else sys.stdout
    try:
        config = config_from_args(args)
        code = 0
        if args.command == "verify":
            print(rp.header_line(rp._header(config, "verify")), file=human)
            report, code = rp.cmd_verify(config, echo=lambda s: print(s, file=human, flush=True))
        else:
            report = getattr(rp, f"cmd_{args.command}")(config)
            if any(ch["status"] == "fail" for ch in report["checks"]):
                code = 1
        _human(report, human)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        text = rp.to_json(report)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w") as fh:
                fh.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
