"""Command-line front end.

Exit codes: 0 success, 1 verification failure or method mismatch, 2 parse or
argument error, 3 precision or horizon error. Every run starts its output
with a header naming the version, p, q, N and seed; nothing in the output
depends on the clock, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .commutator import commutator_direct, commutator_recurrence
from .construct import closure_explore, promote_to_unit_class
from .errors import BudgetExhausted, HorizonError, NottinghamError, PrecisionError
from .fp import binom_mod_p, check_prime, prime_power_exponent
from .lemmas import LEMMAS, LemmaCheckConfig, LemmaReport, verify, verify_all, verify_lemma_41
from .notation import parse_series, print_series, series_to_json
from .series import GroupSeries, compose, depth, group_pow, invert, pow_formal
from .subgroups import IndexSet, closure_probe, klopsch_check, member, torsion_verdict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    p: int
    q: int
    precision: int
    seed: int
    profile: str
    fmt: str
    truncate: bool

    def __post_init__(self):
        check_prime(self.p)
        prime_power_exponent(self.q, self.p)
        if self.precision < 2:
            raise ValueError("precision must be at least 2")

    def header(self) -> dict:
        return {"version": __version__, "p": self.p, "q": self.q, "N": self.precision, "seed": self.seed}

    def header_line(self) -> str:
        h = self.header()
        return "# nottingham " + " ".join(f"{k}={v}" for k, v in h.items())

    def parse(self, text: str, kind: str | None = None):
        return parse_series(text, self.p, self.precision, truncate=self.truncate, kind=kind)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="prime modulus (default 3)")
    common.add_argument("--q", type=int, default=None, help="power of p for the T filtration (default p)")
    common.add_argument("--prec", type=int, default=32, help="precision N: series are exact mod t^(N+1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    common.add_argument("--profile", choices=("quick", "full"), default="quick")
    common.add_argument("--truncate", action="store_true", help="drop input terms above t^N instead of failing")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="nottingham", description="Exact computation in the Nottingham group over F_p.")
    parser.add_argument("--version", action="version", version=f"nottingham {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("binom", parents=[common], help="C(a, b) mod p")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)

    s = sub.add_parser("compose", parents=[common], help="u(v(t))")
    s.add_argument("u")
    s.add_argument("v")

    s = sub.add_parser("invert", parents=[common], help="compositional inverse")
    s.add_argument("series")

    s = sub.add_parser("power", parents=[common], help="e-fold composition (or formal product with --formal)")
    s.add_argument("series")
    s.add_argument("e", type=int)
    s.add_argument("--formal", action="store_true")

    s = sub.add_parser("commutator", parents=[common], help="[v, u] = v o u o v^-1 o u^-1")
    s.add_argument("v")
    s.add_argument("u")
    s.add_argument("--method", choices=("direct", "recurrence", "both"), default="both")

    s = sub.add_parser("depth", parents=[common], help="filtration level in J, T or S")
    s.add_argument("series")
    s.add_argument("--kind", choices=("J", "T", "S"), default="J")

    lam = sub.add_parser("lambda", help="index subgroups J(Lambda)")
    lam_sub = lam.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for action, text in (
        ("check", "run the closure criterion on Lambda"),
        ("probe", "random closure probe of J(Lambda)"),
        ("member", "test membership of a series in J(Lambda)"),
    ):
        s = lam_sub.add_parser(action, parents=[common], help=text)
        if action == "member":
            s.add_argument("series")
        s.add_argument("--family", default="B", help="A, B, C, D, qN, full or explicit")
        s.add_argument("--param", type=int, default=None, help="d for A, i for C")
        s.add_argument("--elements", default="", help="comma-separated set for --family explicit")
        s.add_argument("--horizon", type=int, default=200)
        s.add_argument("--trials", type=int, default=100)
        s.add_argument("--all-witnesses", action="store_true")

    s = sub.add_parser("verify", parents=[common], help="check the commutator laws")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--lemma", choices=LEMMAS)
    g.add_argument("--all", action="store_true")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--z-rule", choices=("literal", "strict"), default="literal", help="divisibility rule for z in 4.1")

    s = sub.add_parser("explore", parents=[common], help="normal closure of a series in S_level")
    s.add_argument("series")
    s.add_argument("--u-level", type=int, default=1)
    s.add_argument("--cap", type=int, default=20000)
    s.add_argument("--json", action="store_true", help="same as --format json")

    s = sub.add_parser("torsion", parents=[common], help="order verdict, optionally promoting to infinite order")
    s.add_argument("series")
    s.add_argument("--promote", action="store_true", help="also run the unit-class promotion")
    s.add_argument("--budget", type=int, default=20)
    return parser


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


class Output:
    def __init__(self, cfg: RunConfig, stream):
        self.cfg, self.stream = cfg, stream
        self.payload: dict = {"header": cfg.header()}
        if cfg.fmt != "json":
            self.line(cfg.header_line())

    def line(self, text: str = ""):
        print(text, file=self.stream)

    def record(self, key: str, value, text: str | None = None):
        """Store for JSON, print for text/tsv (``text`` overrides the printed form)."""
        self.payload[key] = value
        if self.cfg.fmt == "tsv":
            self.line(f"{key}\t{value if text is None else text}")
        elif self.cfg.fmt == "text":
            self.line(f"{key}: {value if text is None else text}")

    def series(self, key: str, s):
        self.payload[key] = series_to_json(s) | {"text": print_series(s)}
        if self.cfg.fmt == "tsv":
            self.line(f"{key}\t{print_series(s)}")
        elif self.cfg.fmt == "text":
            self.line(f"{key}: {print_series(s)}")

    def table(self, key: str, columns: list[str], rows: list[list]):
        self.payload[key] = [dict(zip(columns, r)) for r in rows]
        if self.cfg.fmt in ("tsv", "text"):
            self.line("\t".join(columns))
            for r in rows:
                self.line("\t".join(str(x) for x in r))

    def finish(self):
        if self.cfg.fmt == "json":
            print(json.dumps(self.payload, indent=1, sort_keys=False), file=self.stream)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _group(cfg: RunConfig, text: str) -> GroupSeries:
    return cfg.parse(text, kind="group")


def cmd_binom(args, cfg, out):
    out.record("binom", binom_mod_p(args.a, args.b, cfg.p).value)
    return EXIT_OK


def cmd_compose(args, cfg, out):
    out.series("result", compose(_group(cfg, args.u), _group(cfg, args.v)))
    return EXIT_OK


def cmd_invert(args, cfg, out):
    out.series("result", invert(_group(cfg, args.series)))
    return EXIT_OK


def cmd_power(args, cfg, out):
    if args.formal:
        out.series("result", pow_formal(cfg.parse(args.series), args.e))
    else:
        out.series("result", group_pow(_group(cfg, args.series), args.e))
    return EXIT_OK


def cmd_commutator(args, cfg, out):
    v, u = _group(cfg, args.v), _group(cfg, args.u)
    results = {}
    if args.method in ("direct", "both"):
        results["direct"] = commutator_direct(v, u)
    if args.method in ("recurrence", "both"):
        results["recurrence"] = commutator_recurrence(v, u)
    for name, res in results.items():
        out.series(name, res.value)
        lead = "IDENTITY" if res.is_identity else f"{res.leading_coefficient.value}*t^{res.leading_exponent}"
        out.record(f"{name}_leading", lead)
    if len(results) == 2:
        same = results["direct"].value == results["recurrence"].value
        out.record("verdict", "match" if same else "mismatch")
        return EXIT_OK if same else EXIT_FAIL
    return EXIT_OK


def cmd_depth(args, cfg, out):
    d = depth(_group(cfg, args.series), args.kind, cfg.q if args.kind == "T" else None)
    out.record("depth", "IDENTITY" if d.is_identity else d.value)
    out.record("kind", d.kind)
    return EXIT_OK


def index_set_from_args(args, cfg: RunConfig) -> IndexSet:
    fam, p, h = args.family, cfg.p, args.horizon
    if fam == "A":
        return IndexSet.family_a(args.param or 1, p, h)
    if fam == "B":
        return IndexSet.family_b(p, h)
    if fam == "C":
        return IndexSet.family_c(args.param or 1, p, h)
    if fam == "D":
        return IndexSet.family_d(p, h)
    if fam == "qN":
        return IndexSet.multiples(cfg.q, p, h)
    if fam == "full":
        return IndexSet.full(p, h)
    if fam == "explicit":
        try:
            elements = [int(x) for x in args.elements.split(",") if x.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --elements {args.elements!r}") from exc
        return IndexSet.explicit(elements, p, h)
    raise UsageError(f"unknown family {fam!r}; choose A, B, C, D, qN, full or explicit")


def cmd_lambda(args, cfg, out):
    lam = index_set_from_args(args, cfg)
    if args.action == "check":
        rep = klopsch_check(lam, args.horizon, all_witnesses=args.all_witnesses)
        out.table(
            "criterion",
            ["lambda_family", "p", "horizon", "passed", "n_witnesses"],
            [[lam.label, cfg.p, rep.horizon, str(rep.passed).lower(), len(rep.witnesses)]],
        )
        if rep.witnesses:
            out.table("witnesses", ["lambda", "mu", "k"], [list(w) for w in rep.witnesses])
        return EXIT_OK if rep.passed else EXIT_FAIL
    if args.action == "probe":
        crit = klopsch_check(lam, min(args.horizon, lam.horizon))
        rep = closure_probe(lam, args.trials, cfg.precision, cfg.seed, crit.witnesses)
        out.table(
            "probe",
            ["lambda_family", "p", "precision", "trials", "seed", "n_violations"],
            [[lam.label, cfg.p, cfg.precision, rep.trials, rep.seed, len(rep.violations)]],
        )
        if rep.violations:
            out.table(
                "violations",
                ["trial", "operation", "result"],
                [[v.trial, v.operation, print_series(v.result)] for v in rep.violations[:20]],
            )
        return EXIT_OK
    ok = member(_group(cfg, args.series), lam)
    out.record("member", str(ok).lower())
    return EXIT_OK


def _emit_report(out: Output, report: LemmaReport):
    out.table("checks", ["lemma", "params", "status", "witness"], [[r.lemma, r.params, r.status, r.witness] for r in report.rows])
    out.record("passed", str(report.passed).lower())


def cmd_verify(args, cfg, out):
    lc = LemmaCheckConfig(
        p=cfg.p,
        q=cfg.q,
        precision=cfg.precision if args.prec_given else None,
        trials=args.trials,
        seed=cfg.seed,
        profile=cfg.profile,
    )
    if args.all:
        report = verify_all(lc)
    elif args.lemma == "4.1":
        report = verify_lemma_41(cfg.p, cfg.q, 1, z_rule=args.z_rule, cross_check=cfg.profile == "full")
    else:
        report = verify(args.lemma, lc)
    _emit_report(out, report)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_explore(args, cfg, out):
    g = _group(cfg, args.series)
    rep = closure_explore(g, args.u_level, cap=args.cap, seed=cfg.seed)
    for key, value in rep.to_dict().items():
        out.record(key, value, " ".join(map(str, value)) if isinstance(value, list) else None)
    return EXIT_OK


def cmd_torsion(args, cfg, out):
    u = _group(cfg, args.series)
    verdict = torsion_verdict(u)
    out.record("verdict", verdict.verdict)
    out.record("trace", list(verdict.certificate), " ".join(map(str, verdict.certificate)))
    if args.promote and verdict.verdict not in ("IDENTITY", "INFINITE_ORDER_CERTIFIED"):
        try:
            prom = promote_to_unit_class(u, args.budget)
        except BudgetExhausted as exc:
            out.record("promotion", f"failed: {exc}")
            return EXIT_FAIL
        out.series("promoted", prom.element)
        out.record("promotion_steps", prom.steps)
        out.record("promoted_verdict", torsion_verdict(prom.element).verdict)
    return EXIT_OK


COMMANDS = {
    "binom": cmd_binom,
    "compose": cmd_compose,
    "invert": cmd_invert,
    "power": cmd_power,
    "commutator": cmd_commutator,
    "depth": cmd_depth,
    "lambda": cmd_lambda,
    "verify": cmd_verify,
    "explore": cmd_explore,
    "torsion": cmd_torsion,
}


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc).rstrip(), file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.command is None:
        print(parser.format_usage().rstrip(), file=stderr)
        return EXIT_USAGE
    args.prec_given = any(a == "--prec" or a.startswith("--prec=") for a in argv)
    try:
        fmt = "json" if getattr(args, "json", False) else args.format
        cfg = RunConfig(args.p, args.q or args.p, args.prec, args.seed, args.profile, fmt, args.truncate)
        out = Output(cfg, stdout)
        code = COMMANDS[args.command](args, cfg, out)
        out.finish()
        return code
    except (PrecisionError, HorizonError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PRECISION
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_FAIL
    except (UsageError, NottinghamError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
