"""Command-line entry point: ``schoberlab verify ...`` and ``schoberlab mf ...``.

Exit codes: 0 all checks pass, 1 any failure, 2 undetermined (and no
failure), 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import cyktheory, gradedmf, suites
from .report import Report, emit_report, timed

EXIT_OK, EXIT_FAIL, EXIT_UNDETERMINED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class SuiteConfig:
    suite: str
    seed: int
    trials: int
    output: str | None
    format: str


def exit_code(reports: list[Report]) -> int:
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return EXIT_FAIL
    if "undetermined" in statuses:
        return EXIT_UNDETERMINED
    return EXIT_OK


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("SCHOBERLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SCHOBERLAB_SEED must be an integer, got {env!r}")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--output", "-o", default=None, help="write to this path instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $SCHOBERLAB_SEED or 0)")
    common.add_argument("--trials", type=_positive, default=None,
                        help="random trials (default: 100 for braid, 32 otherwise)")

    p = _Parser(prog="schoberlab", description=__doc__.splitlines()[0])
    top = p.add_subparsers(dest="group", required=True)

    verify = top.add_parser("verify", help="run a verification suite")
    vs = verify.add_subparsers(dest="suite", required=True)
    ic = vs.add_parser("ic", parents=[common], help="decategorified schober vs IC object")
    ic.add_argument("--n", type=_positive, nargs="+", required=True)
    vs.add_parser("elliptic", parents=[common], help="elliptic curve schober")
    br = vs.add_parser("braid", parents=[common], help="braid group action suite")
    br.add_argument("--n", type=_positive, default=3)
    win = vs.add_parser("window", parents=[common], help="window-shift conjugation")
    win.add_argument("--n", type=_positive, nargs="+", required=True)
    win.add_argument("--kmax", type=int, default=3)
    pair = vs.add_parser("pairing", parents=[common], help="Euler pairing sign law")
    pair.add_argument("--nmax", type=_positive, default=6)
    hrr = vs.add_parser("hrr", parents=[common], help="Riemann-Roch against the binomial oracle")
    hrr.add_argument("--nmax", type=_positive, default=6)
    hrr.add_argument("--kmax", type=int, default=3)
    vs.add_parser("mf", parents=[common], help="matrix factorization suite")

    mf = top.add_parser("mf", help="graded matrix factorization tools")
    ms = mf.add_subparsers(dest="suite", required=True)
    val = ms.add_parser("validate", parents=[common])
    val.add_argument("file")
    kz = ms.add_parser("koszul", parents=[common])
    kz.add_argument("--w", required=True, help='potential, e.g. "x^3+y^3"')
    kz.add_argument("--s", required=True, help="comma-separated sections")
    kz.add_argument("--t", required=True, help="comma-separated cosections")
    du = ms.add_parser("dual", parents=[common])
    du.add_argument("file")
    co = ms.add_parser("cone", parents=[common], help="cone of c·id")
    co.add_argument("file")
    co.add_argument("--scalar", default="1")
    hom = ms.add_parser("hom", parents=[common])
    hom.add_argument("source")
    hom.add_argument("target")
    hom.add_argument("--kmin", type=int, default=-2)
    hom.add_argument("--kmax", type=int, default=2)
    wm = ms.add_parser("window", parents=[common])
    wm.add_argument("file")
    wm.add_argument("--lo", type=int, required=True)
    wm.add_argument("--hi", type=int, required=True, help="exclusive unless --closed")
    wm.add_argument("--closed", action="store_true")
    return p


# -- verify ------------------------------------------------------------------

def _config(args) -> SuiteConfig:
    trials = args.trials or (100 if args.suite == "braid" else 32)
    return SuiteConfig(args.suite, _resolve_seed(args.seed), trials, args.output, args.format)


def _verify(args, cfg: SuiteConfig) -> list[Report]:
    seed, trials = cfg.seed, cfg.trials
    if args.suite == "ic":
        return [cyktheory.n1_failure_report() if n == 1
                else cyktheory.verify_thm66(n, trials=trials, seed=seed)
                for n in args.n]
    if args.suite == "elliptic":
        return [cyktheory.elliptic_schober(trials=trials, seed=seed)[1]]
    if args.suite == "braid":
        return [suites.braid_suite(args.n, trials, seed)]
    if args.suite == "window":
        return [cyktheory.window_shift_identity(n, k)
                for n in args.n for k in range(-args.kmax, args.kmax + 1)]
    if args.suite == "pairing":
        return [cyktheory.pairing_sign_report(n) for n in range(1, args.nmax + 1)]
    if args.suite == "hrr":
        return [_hrr_report(n, args.kmax) for n in range(1, args.nmax + 1)]
    if args.suite == "mf":
        return suites.mf_suite(seed)
    raise UsageError(f"unknown suite {args.suite}")  # pragma: no cover


def _hrr_report(n: int, kmax: int) -> Report:
    rep = Report(check=f"hrr.n{n}")
    with timed(rep):
        ctx = cyktheory.CYContext.create(n)
        rows = {}
        for k in range(-kmax, kmax + 1):
            got = cyktheory.euler_char(ctx, cyktheory.HSeries.exp(n, k))
            want = cyktheory.hrr_oracle(n, k)
            rows[str(k)] = {"chi": str(got), "oracle": str(want), "equal": got == want}
        rep.status = "pass" if all(r["equal"] for r in rows.values()) else "fail"
        rep.witness = {"n": n, "values": rows}
    return rep


# -- mf ----------------------------------------------------------------------

def _read_mf(path: str) -> gradedmf.GradedMF:
    with open(path, encoding="utf-8") as fh:
        return gradedmf.load_mf(fh.read())


def _write_text(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _mf(args) -> tuple[list[Report], str | None]:
    """Reports plus, for constructors, the MF file text to write."""
    if args.suite == "validate":
        E = _read_mf(args.file)
        problems = gradedmf.validate_mf(E)
        return [Report("mf.validate", "fail" if problems else "pass",
                       {"file": args.file, "violations": problems})], None
    if args.suite == "koszul":
        s_txt, t_txt = args.s.split(","), args.t.split(",")
        names = gradedmf.poly_variables(args.w, *s_txt, *t_txt)
        W, _ = gradedmf.parse_potential(args.w, names)
        E = gradedmf.koszul(W, [gradedmf.parse_poly(x, names) for x in s_txt],
                            [gradedmf.parse_poly(x, names) for x in t_txt])
    elif args.suite == "dual":
        E = gradedmf.mf_dual(_read_mf(args.file))
    elif args.suite == "cone":
        E = _read_mf(args.file)
        E = gradedmf.cone(gradedmf.MFMorphism.scalar(E, Fraction(args.scalar)))
    elif args.suite == "hom":
        E, F = _read_mf(args.source), _read_mf(args.target)
        dims = {str(k): gradedmf.hmf_hom_dim(E, F, k) for k in range(args.kmin, args.kmax + 1)}
        return [Report("mf.hom", "pass", {"dims": dims})], None
    elif args.suite == "window":
        E = _read_mf(args.file)
        inside = (gradedmf.window_member_closed(E, args.lo, args.hi) if args.closed
                  else gradedmf.window_member(E, args.lo, args.hi))
        return [Report("mf.window", "pass", {"member": inside, "lo": args.lo, "hi": args.hi,
                                             "closed": args.closed})], None
    else:  # pragma: no cover
        raise UsageError(f"unknown mf command {args.suite}")
    problems = gradedmf.validate_mf(E)
    rep = Report(f"mf.{args.suite}", "fail" if problems else "pass", {"violations": problems})
    return [rep], gradedmf.dump_mf(E)


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE

    try:
        if args.group == "verify":
            reports = _verify(args, cfg)
            text = emit_report(reports, cfg.format, cfg.output)
            if cfg.output is None or cfg.output == "-":
                sys.stdout.write(text)
            return exit_code(reports)
        reports, mf_text = _mf(args)
        if mf_text is not None:
            _write_text(mf_text, args.output)
            if args.output is not None and args.output != "-":
                sys.stdout.write(emit_report(reports, args.format))
        else:
            _write_text(emit_report(reports, args.format), args.output)
        return exit_code(reports)
    except (gradedmf.PolyError, gradedmf.PairingMismatch, gradedmf.NotClosed,
            gradedmf.WrongDegree, gradedmf.ShapeMismatch, json.JSONDecodeError,
            KeyError, ValueError) as exc:
        print(f"schoberlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"schoberlab: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
