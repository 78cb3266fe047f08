"""Command-line workbench.

Subcommands: k, constants, approx, ratio-scan, optimum, witness, deficit,
champions, verify.  Values go to stdout, diagnostics to stderr.  Exit status:
0 success, 1 domain/precondition/convergence error, 2 resource error.

Output is byte-reproducible for a fixed argv.  Exact integers print in full
decimal; reals print to --digits significant digits (12 by default).  CSV is
comma-separated with a header row and no quoting; bracketed lists such as
signatures keep their internal commas, so split rows with brackets in mind
(see split_csv_row).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from . import champions as ch
from . import constants as cn
from . import evans as ev
from . import exact as ex
from . import optimize as op
from . import verify as vf
from .errors import DomainError, KalmarError, ResourceLimitError
from .primes import factorize, is_prime

ENV_CACHE = "KALMAR_CACHE"
ENV_SIEVE = "KALMAR_SIEVE_BOUND"


@dataclass
class RunConfig:
    precision: float = 1e-12
    sieve_bound: int | None = None
    kappa: float = 1.5
    omega_max: int = 12
    cache_path: str | None = None
    output_format: str = "text"
    digits: int = 12
    worker_count: int = 1   # accepted for interface stability; work is sequential

    def validate(self) -> None:
        if not 1e-15 <= self.precision <= 1e-6:
            raise DomainError(f"precision {self.precision} outside [1e-15, 1e-6]")
        if self.worker_count < 1:
            raise DomainError("worker count must be >= 1")
        if self.sieve_bound is not None and self.sieve_bound < 10_000:
            raise DomainError("sieve bound must be >= 10000")
        if self.output_format not in ("text", "csv"):
            raise DomainError(f"unknown format {self.output_format!r}")


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    env_sieve = os.environ.get(ENV_SIEVE)
    if env_sieve:
        cfg.sieve_bound = int(env_sieve)
    cfg.cache_path = os.environ.get(ENV_CACHE) or None
    for field in ("precision", "sieve_bound", "kappa", "omega_max",
                  "cache_path", "digits", "worker_count"):
        v = getattr(args, field, None)
        if v is not None:
            setattr(cfg, field, v)
    if getattr(args, "output_format", None):
        cfg.output_format = args.output_format
    cfg.validate()
    return cfg


# --- formatting -------------------------------------------------------------

def fmt_real(x: float, digits: int = 12) -> str:
    return f"{x:.{digits}g}"


def fmt_signature(sig) -> str:
    return "[" + ",".join(str(a) for a in sig) + "]"


def parse_signature(text: str) -> tuple[int, ...]:
    text = text.strip().strip("[]")
    if not text:
        return ()
    return ex.canonical_signature(int(t) for t in text.split(","))


def split_csv_row(line: str) -> list[str]:
    """Split a no-quoting CSV row on commas that are outside brackets."""
    out, cur, depth = [], [], 0
    for c in line:
        if c == "[":
            depth += 1
        elif c == "]":
            depth -= 1
        if c == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(c)
    out.append("".join(cur))
    return out


def factor_string(n: int) -> str:
    """'2^15*19' style factorization; a non-prime remainder is marked."""
    if n == 1:
        return "1"
    parts = []
    for p, e in factorize(n):
        base = str(p) if is_prime(p) else f"{p}?"
        parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts)


def _emit_table(header: list[str], rows: list[list[str]], cfg: RunConfig, out) -> None:
    if cfg.output_format == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(row) + "\n")
        return
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _emit_pairs(pairs: list[tuple[str, str]], cfg: RunConfig, out) -> None:
    _emit_table(["name", "value"], [[n, v] for n, v in pairs], cfg, out)


# --- subcommands ------------------------------------------------------------

def _cmd_k(args, cfg: RunConfig, out) -> int:
    if (args.n is None) == (args.signature is None):
        raise DomainError("give exactly one of --n or --signature")
    sig = ex.signature_of(args.n) if args.n is not None else parse_signature(args.signature)
    methods = {
        "macmahon": ex.kalmar_macmahon,
        "recursive": ex.kalmar_recursive,
        "series": ex.kalmar_series_exact,
    }
    if args.check:
        values = {name: fn(sig) for name, fn in methods.items()}
        if len(set(values.values())) != 1:
            raise KalmarError(f"methods disagree: {values}")
        out.write(f"{values['macmahon']}\n")
        return 0
    out.write(f"{methods[args.method](sig)}\n")
    return 0


def _cmd_constants(args, cfg: RunConfig, out) -> int:
    tab = cn.model_constants(tol=cfg.precision)
    d = cfg.digits
    pairs = [
        ("rho", fmt_real(tab.rho, d)),
        ("a", fmt_real(tab.a, d)),
        ("b", fmt_real(tab.b, d)),
        ("T0", fmt_real(tab.T0, d)),
        ("B0", fmt_real(tab.B0, d)),
        ("delta", fmt_real(tab.delta, d)),
        ("mu", fmt_real(tab.mu, d)),
        ("kappa_max", fmt_real(tab.kappa_max, d)),
        ("rho_gap_coefficient", fmt_real(cn.rho_gap_coefficient(), d)),
        ("precision", fmt_real(tab.precision, 3)),
    ]
    if args.k is not None:
        trunc = cn.truncated_constants(args.k, cfg.precision)
        pairs.append((f"rho_{trunc.k}", fmt_real(trunc.rho_k, d)))
        pairs.append((f"a_{trunc.k}", fmt_real(trunc.a_k, d)))
    if cfg.sieve_bound is not None:
        for name, (value, err) in cn.prime_sum_check(cfg.sieve_bound, cfg.precision).items():
            pairs.append((f"sieve_{name}", fmt_real(value, d)))
            pairs.append((f"sieve_{name}_tail_err", fmt_real(err, 3)))
    _emit_pairs(pairs, cfg, out)
    return 0


def _cmd_approx(args, cfg: RunConfig, out) -> int:
    sig = parse_signature(args.signature)
    if not sig:
        raise DomainError("the estimate needs a non-empty signature")
    est = ev.evans_estimate([float(a) for a in sig])
    k_exact = ex.kalmar_macmahon(sig)
    ratio = math.exp(math.log(k_exact) - est.log_estimate)
    d = cfg.digits
    _emit_pairs([
        ("signature", fmt_signature(sig)),
        ("c", fmt_real(est.c, d)),
        ("T", fmt_real(est.t, d)),
        ("F", fmt_real(est.f, d)),
        ("log_A", fmt_real(est.log_a, d)),
        ("B", fmt_real(est.b, d)),
        ("log_estimate", fmt_real(est.log_estimate, d)),
        ("estimate", fmt_real(est.estimate, d)),
        ("K", str(k_exact)),
        ("ratio", fmt_real(ratio, d)),
    ], cfg, out)
    return 0


def _cmd_ratio_scan(args, cfg: RunConfig, out) -> int:
    rows = ev.ratio_scan(cfg.omega_max)
    d = cfg.digits
    _emit_table(
        ["omega", "min_ratio", "argmin", "max_ratio", "argmax"],
        [[str(r.omega), fmt_real(r.min_ratio, d), fmt_signature(r.argmin),
          fmt_real(r.max_ratio, d), fmt_signature(r.argmax)] for r in rows],
        cfg, out,
    )
    return 0


def _cmd_optimum(args, cfg: RunConfig, out) -> int:
    p = op.optimum(args.k, args.budget, tol=cfg.precision)
    d = cfg.digits
    _emit_pairs([
        ("k", str(p.k)),
        ("A", fmt_real(p.budget, d)),
        ("rho_k", fmt_real(p.rho_k, d)),
        ("a_k", fmt_real(p.a_k, d)),
        ("c_star", fmt_real(p.c_star, d)),
        ("F_star", fmt_real(p.f_star, d)),
        ("x_star", "[" + ",".join(fmt_real(x, d) for x in p.x_star) + "]"),
    ], cfg, out)
    return 0


def _cmd_witness(args, cfg: RunConfig, out) -> int:
    log_ns = [float(t) for t in str(args.log_n).split(",") if t]
    d = cfg.digits
    if len(log_ns) == 1:
        w = op.witness_m(log_ns[0], cfg.kappa)
        _emit_pairs([
            ("log_n", fmt_real(w.n_log, d)),
            ("kappa", fmt_real(w.kappa, d)),
            ("k", str(w.k)),
            ("exponents", fmt_signature(w.exponents)),
            ("signature", fmt_signature(w.m_signature)),
            ("Omega_m", str(sum(w.m_signature))),
            ("ratio_n_over_m", fmt_real(w.ratio_n_over_m, d)),
            ("log_K_lower", fmt_real(w.log_k_lower, d)),
            ("exact", str(w.exact).lower()),
        ], cfg, out)
        return 0
    rows = []
    for ln in log_ns:       # sweep mode: one row per budget
        w = op.witness_m(ln, cfg.kappa)
        rows.append([fmt_real(w.n_log, d), str(w.k), str(sum(w.m_signature)),
                     fmt_real(w.ratio_n_over_m, d), fmt_real(w.log_k_lower, d),
                     str(w.exact).lower()])
    _emit_table(["log_n", "k", "Omega_m", "ratio_n_over_m", "log_K_lower", "exact"],
                rows, cfg, out)
    return 0


def _cmd_deficit(args, cfg: RunConfig, out) -> int:
    sig = parse_signature(args.signature)
    k = args.k if args.k is not None else len(sig)
    rep = op.deficit_check([float(a) for a in sig], k, args.budget)
    d = cfg.digits
    _emit_pairs([
        ("F_alpha", fmt_real(rep.f_alpha, d)),
        ("F_star", fmt_real(rep.f_star, d)),
        ("deficit", fmt_real(rep.deficit, d)),
        ("deficit_weak", fmt_real(rep.deficit_weak, d)),
        ("bound", fmt_real(rep.bound, d)),
        ("bound_weak", fmt_real(rep.bound_weak, d)),
        ("slack", fmt_real(rep.slack, d)),
        ("slack_weak", fmt_real(rep.slack_weak, d)),
    ], cfg, out)
    return 0


def _candidates_with_cache(x: int, cfg: RunConfig):
    if cfg.cache_path:
        cached = ch.load_candidates(cfg.cache_path, x)
        if cached is not None:
            print(f"loaded {len(cached)} candidates from {cfg.cache_path}",
                  file=sys.stderr)
            return cached
    cands = list(ch.enumerate_candidates(x))
    if cfg.cache_path:
        ch.save_candidates(cfg.cache_path, x, cands)
        print(f"saved {len(cands)} candidates to {cfg.cache_path}", file=sys.stderr)
    return cands


def _cmd_champions(args, cfg: RunConfig, out) -> int:
    x = int(args.x)
    cands = _candidates_with_cache(x, cfg)
    if args.census:
        cen = ch.census(x, candidates=cands)
        pairs = [
            ("X", str(cen.bound)),
            ("candidates", str(cen.candidate_count)),
            ("champions", str(cen.champion_count)),
            ("alpha_gt1", str(cen.alpha_gt1_count)),
        ]
        if cen.largest_alpha_gt1 is not None:
            rec = cen.largest_alpha_gt1
            pairs += [
                ("largest_alpha_gt1_rank", str(rec.rank)),
                ("largest_alpha_gt1_N", str(rec.candidate.value)),
                ("largest_alpha_gt1_signature", fmt_signature(rec.candidate.signature)),
            ]
        _emit_pairs(pairs, cfg, out)
        return 0
    records = ch.champions_from_candidates(cands)
    if args.stats:
        tab = cn.model_constants(tol=cfg.precision)
        d = cfg.digits
        rows = []
        for rec in records:
            st = ch.champion_stats(rec, tab)
            rows.append([
                str(rec.rank), str(rec.candidate.value),
                str(rec.omega), str(rec.big_omega),
                fmt_real(st.omega_residual, d) if st.omega_residual is not None else "-",
                fmt_real(st.omega_ratio, d) if st.omega_ratio is not None else "-",
                fmt_real(st.p_profile_ratios[0][1], d) if st.p_profile_ratios else "-",
            ])
        _emit_table(["rank", "N", "omega", "Omega", "Omega_residual",
                     "omega_ratio", "P1_ratio"], rows, cfg, out)
        return 0
    header = ["rank", "N", "K", "signature"]
    with_factors = args.table == "fig2"
    if with_factors:
        header.append("K_factorization")
    rows = []
    for rec in records:
        row = [str(rec.rank), str(rec.candidate.value), str(rec.candidate.k_value),
               fmt_signature(rec.candidate.signature)]
        if with_factors:
            row.append(factor_string(rec.candidate.k_value))
        rows.append(row)
    _emit_table(header, rows, cfg, out)
    return 0


def _cmd_verify(args, cfg: RunConfig, out) -> int:
    results = vf.full_suite(fast=args.fast)
    failed = 0
    for r in results:
        tag = "PASS" if r.ok else "FAIL"
        out.write(f"{tag} {r.name}: {r.detail}\n")
        if not r.ok:
            failed += 1
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 1 if failed else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad usage, not argparse's 2
        print(f"error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    top = _Parser(prog="kalmar",
                  description="Workbench for the Kalmar ordered-factorization "
                              "function, its analytic model and its champions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("text", "csv"),
                        help="output format (default text)")
    common.add_argument("--digits", type=int, help="significant digits for reals (default 12)")
    common.add_argument("--precision", type=float, help="solver tolerance (default 1e-12)")
    common.add_argument("--sieve-bound", dest="sieve_bound", type=int,
                        help=f"prime sieve bound (also ${ENV_SIEVE})")
    common.add_argument("--workers", dest="worker_count", type=int,
                        help="worker hint; evaluation is sequential and deterministic")
    sub = top.add_subparsers(dest="command")

    k = sub.add_parser("k", parents=[common], help="exact K(n)")
    k.add_argument("--n", type=int)
    k.add_argument("--signature", type=str, help="exponents, e.g. 8,3,1")
    k.add_argument("--method", choices=("macmahon", "recursive", "series"),
                   default="macmahon")
    k.add_argument("--check", action="store_true", help="run all methods and compare")
    k.set_defaults(fn=_cmd_k)

    c = sub.add_parser("constants", parents=[common], help="analytic constants table")
    c.add_argument("--k", type=int, help="also print rho_k and a_k")
    c.set_defaults(fn=_cmd_constants)

    a = sub.add_parser("approx", parents=[common],
                       help="estimate of K at a signature, against exact K")
    a.add_argument("--signature", type=str, required=True)
    a.set_defaults(fn=_cmd_approx)

    r = sub.add_parser("ratio-scan", parents=[common],
                       help="extremes of K/estimate per signature weight")
    r.add_argument("--omega-max", dest="omega_max", type=int)
    r.set_defaults(fn=_cmd_ratio_scan)

    o = sub.add_parser("optimum", parents=[common], help="closed-form maximizer of F")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--A", dest="budget", type=float, required=True)
    o.set_defaults(fn=_cmd_optimum)

    w = sub.add_parser("witness", parents=[common],
                       help="integer witness with certified log K lower bound")
    w.add_argument("--log-n", dest="log_n", type=str, required=True,
                   help="budget log n, or a comma list for a sweep table")
    w.add_argument("--kappa", type=float)
    w.set_defaults(fn=_cmd_witness)

    d = sub.add_parser("deficit", parents=[common], help="penalty below the optimum")
    d.add_argument("--signature", type=str, required=True)
    d.add_argument("--A", dest="budget", type=float, required=True)
    d.add_argument("--k", type=int)
    d.set_defaults(fn=_cmd_deficit)

    h = sub.add_parser("champions", parents=[common], help="champion enumeration")
    h.add_argument("--x", type=str, required=True, help="enumeration bound (decimal)")
    h.add_argument("--table", choices=("plain", "fig2"), default="plain",
                   help="fig2 adds the K factorization column")
    h.add_argument("--census", action="store_true")
    h.add_argument("--stats", action="store_true")
    h.add_argument("--cache", dest="cache_path", type=str,
                   help=f"candidate cache file (also ${ENV_CACHE})")
    h.set_defaults(fn=_cmd_champions)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("--fast", action="store_true", help="shrink the random harnesses")
    v.set_defaults(fn=_cmd_verify)
    return top


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg = _config(args)
        return args.fn(args, cfg, sys.stdout)
    except ResourceLimitError as e:
        print(f"resource error: {e}", file=sys.stderr)
        return 2
    except (KalmarError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
