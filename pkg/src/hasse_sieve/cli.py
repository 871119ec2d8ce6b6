"""Command-line front end.

Exit codes (stable):

    0  success
    1  verification failed (audit failure, insoluble place, or a point found)
    2  usage error
    3  a hypothesis of the construction does not hold
    4  a search budget was exhausted
    5  the certificate document could not be parsed
    6  a computation was undecided within its budget
    7  reproduction diverged from the reference values
    8  the ledger contains assumed entries that were not allowed

The environment variable ``HASSE_SIEVE_BUDGET`` overrides the default
prime-generation budget of ``construct`` and ``reproduce``.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import arith
from .certificate import Certificate
from .construct import ConstructionError, construct_deg4, construct_even, construct_odd
from .cubicfield import (
    FieldError,
    PureCubicField,
    UndecidedError,
    aacm_scan,
    class_number,
    fundamental_unit,
)
from .forms import PlaneCurve
from .local import LocalReport, check_local_at, check_local_everywhere
from .points import NotApplicableError, quotient_points, search_points
from .primegen import DEFAULT_BUDGET, BudgetExhausted
from .serialize import CertificateParseError, curve_section_matches, dumps, loads
from .verify import cas_export, verify_full

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_BUDGET = 4
EXIT_PARSE = 5
EXIT_UNDECIDED = 6
EXIT_MISMATCH = 7
EXIT_ASSUMED = 8

BUDGET_ENV = "HASSE_SIEVE_BUDGET"
AACM_CEILING = 100_000

GOLDEN = {
    "even": dict(primes=(197,), pairs=((1, 1),), l=419, norm_rep=(-11, 5, 0),
                 b0=365, c0=169, sign=1, k=6),
    "deg4": dict(primes=(19751,), pairs=((5, 1),), l=4919, norm_rep=(-59, 11, 0),
                 b0=73441, c0=2359, sign=-1, k=5),
}
GOLDEN_QUOTIENT = {
    "even": (0, 1, Fraction(182, 419)),
    "deg4": (1, 0, Fraction(1355, 4919)),
}


class UsageError(Exception):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV}={raw!r} is not an integer")


def _out(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _assumed_exit(cert: Certificate, allowed) -> int:
    bad = [e.key for e in cert.assumed if e.key not in allowed]
    if bad:
        print(f"assumed ledger entries not allowed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_ASSUMED
    return EXIT_OK


# --- commands -----------------------------------------------------------------------


def cmd_construct(args) -> int:
    budget = args.budget if args.budget is not None else default_budget()
    common = dict(budget=budget, allow_assumed_class_number=args.allow_assumed_class_number)
    if args.variant == "even":
        if args.u is None or args.n is None:
            raise UsageError("--even needs -u and -n")
        if args.n < 8 or args.n % 2:
            raise UsageError(f"n = {args.n} must be even and at least 8")
        cert = construct_even(args.u, args.n, args.m or 3,
                              quotient_point=not args.no_quotient_point, **common)
    elif args.variant == "deg4":
        if args.u is None or args.n is None:
            raise UsageError("--deg4 needs -u and -n")
        if args.n < 8 or args.n % 4:
            raise UsageError(f"n = {args.n} must be a multiple of 4 and at least 8")
        cert = construct_deg4(args.u, args.n, quotient_point=not args.no_quotient_point, **common)
    else:
        if args.p is None or args.n is None:
            raise UsageError("--odd needs -p and -n")
        cert = construct_odd(args.p, args.n, P=args.P, **common)
    _out(dumps(cert), args.output)
    if cert.failed:
        return EXIT_VERIFY
    return _assumed_exit(cert, args.allow_assumed)


def _read_cert(path: str) -> tuple[Certificate, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    return loads(text), text


def cmd_verify(args) -> int:
    cert, text = _read_cert(args.path)
    rep = verify_full(cert, H=args.height, local=not args.no_local, points=not args.no_points)
    if curve_section_matches(text) is False:
        rep.errors.append("stored curve section disagrees with the certificate fields")
    allowed = tuple(args.allow_assumed)
    print(rep.text(allowed))
    if args.cas:
        _out(cas_export(cert), args.cas)
    undecided = rep.local is not None and bool(rep.local.undecided)
    local_bad = rep.local is not None and any(r.verdict == "insoluble" for r in rep.local.reports)
    if (rep.audit.failures or rep.audit.mismatches or rep.errors or local_bad
            or (rep.nonsingular is not None and not rep.nonsingular)
            or (rep.points is not None and not rep.points.empty)):
        return EXIT_VERIFY
    if undecided:
        return EXIT_UNDECIDED
    if not rep.audit.ok(allowed):
        return EXIT_ASSUMED
    return EXIT_OK


def _golden_diffs(variant: str, cert: Certificate) -> list[str]:
    diffs = []
    for key, want in GOLDEN[variant].items():
        got = getattr(cert, key)
        if got != want:
            diffs.append(f"{variant}.{key}: expected {want}, got {got}")
    return diffs


def cmd_reproduce(args) -> int:
    budget = args.budget if args.budget is not None else default_budget()
    status = EXIT_OK
    builds = (
        ("even", lambda: construct_even(7, 8, 3, budget=budget)),
        ("deg4", lambda: construct_deg4(79, 8, budget=budget)),
    )
    for variant, build in builds:
        cert = build()
        diffs = _golden_diffs(variant, cert)
        rep = verify_full(cert, H=args.height)
        _, qrep = quotient_points(cert.curve(), 50)
        want_pt = GOLDEN_QUOTIENT[variant]
        found = want_pt in qrep.points
        P, iota = cert.P, cert.iota
        lhs = P**iota * cert.b0 - cert.l * cert.c0
        print(f"[{variant}] P={P} q={list(cert.primes)} pairs={list(cert.pairs)} l={cert.l} "
              f"rep={cert.norm_rep} (b0, c0, sign, k)=({cert.b0}, {cert.c0}, "
              f"{'+' if cert.sign > 0 else '-'}, {cert.k})")
        print(f"  identity: {P}^{iota}*{cert.b0} - {cert.l}*{cert.c0} = {lhs}")
        print(f"  quotient point [{want_pt[0]} : {want_pt[1]} : {want_pt[2]}]: {'found' if found else 'MISSING'}")
        print(f"  verification: {'PASS' if rep.ok() else 'FAIL'}")
        for d in diffs:
            print(f"  divergent field {d}")
        if diffs or not found:
            status = max(status, EXIT_MISMATCH)
        elif not rep.ok():
            status = max(status, EXIT_VERIFY)
    return status


def cmd_scan_aacm(args) -> int:
    if args.limit > AACM_CEILING:
        raise UsageError(f"limit {args.limit} exceeds the ceiling {AACM_CEILING}")
    print("p\tP\talpha_mod_p\tbeta_mod_p\tgamma_mod_p\tverdict")
    status = EXIT_OK
    for p in arith.primes_up_to(args.limit - 1) if args.limit > 2 else []:
        for variant in ("p",) if p == 2 else ("p", "2p"):
            try:
                row = aacm_scan(p, variant)
            except UndecidedError as exc:
                print(f"{p}\t{p if variant == 'p' else 2 * p}\t-\t-\t-\tundecided ({exc})")
                status = EXIT_UNDECIDED
                continue
            if row.verdict == "inapplicable" and variant == "2p" and row.reason == "P not squarefree":
                continue
            res = row.residues or ("-", "-", "-")
            print(f"{row.p}\t{row.P}\t{res[0]}\t{res[1]}\t{res[2]}\t{row.verdict}")
            if row.verdict == "fails":
                status = max(status, EXIT_VERIFY)
    return status


def _field(P: int) -> PureCubicField:
    try:
        return PureCubicField(P)
    except FieldError as exc:
        raise UsageError(str(exc))


def cmd_unit(args) -> int:
    F = _field(args.P)
    eps = fundamental_unit(F)
    a, b, c = eps.element.coords
    print(f"P\t{args.P}")
    print(f"unit\t{a}\t{b}\t{c}")
    print(f"norm\t{eps.element.norm()}")
    print(f"regulator\t{float(eps.regulator_estimate):.12g}")
    return EXIT_OK


def cmd_classnumber(args) -> int:
    F = _field(args.P)
    print(f"P\t{args.P}")
    print(f"class_number\t{class_number(F)}")
    return EXIT_OK


def _curve_from_args(args) -> PlaneCurve:
    if args.certificate:
        cert, _ = _read_cert(args.certificate)
        return cert.curve()
    if not args.factor or args.L is None:
        raise UsageError("give a certificate path or --factor ... with -L")
    try:
        factors = tuple(tuple(int(v) for v in f.split(",")) for f in args.factor)
    except ValueError:
        raise UsageError("factors are comma-separated integer coefficient lists")
    n = sum(len(f) - 1 for f in factors)
    if args.n is not None and args.n != n:
        raise UsageError(f"factor degrees sum to {n}, not {args.n}")
    if args.L == 0:
        raise UsageError("L must be nonzero")
    return PlaneCurve(factors, args.L, n)


def _report_row(r: LocalReport) -> str:
    extra = r.witness if r.witness is not None else (f"level {r.level}" if r.level else "")
    prec = r.precision if r.precision is not None else "-"
    return f"{r.place}\t{r.verdict}\t{r.method}\t{prec}\t{extra}"


def cmd_local(args) -> int:
    curve = _curve_from_args(args)
    print("place\tverdict\tmethod\tprecision\twitness")
    if args.q:
        reports = []
        for q in args.q:
            if not arith.is_prime(q):
                raise UsageError(f"{q} is not prime")
            reports.append(check_local_at(curve, q))
    else:
        reports = list(check_local_everywhere(curve).reports)
    for r in reports:
        print(_report_row(r))
    if any(r.verdict == "insoluble" for r in reports):
        return EXIT_VERIFY
    if any(r.verdict == "undecided" for r in reports):
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_points(args) -> int:
    curve = _curve_from_args(args)
    if args.height < 1:
        raise UsageError("height must be at least 1")
    if args.quotient:
        try:
            Q, rep = quotient_points(curve, args.height)
        except NotApplicableError as exc:
            raise UsageError(str(exc))
        print(f"# {Q.describe()}")
    else:
        rep = search_points(curve, args.height)
        print(f"# {curve.describe()}")
    print(f"# H={rep.height} pairs={rep.pairs_tested} survivors={rep.survivors} points={len(rep.points)}")
    for pt in rep.points:
        print("\t".join(str(v) for v in pt))
    return EXIT_OK


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hasse-sieve",
        description="Construct and verify plane curves violating the local-global principle.",
    )
    cmds = parser.add_subparsers(dest="command", required=True)

    cmd = cmds.add_parser("construct", help="build a certificate")
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--even", dest="variant", action="store_const", const="even")
    group.add_argument("--odd", dest="variant", action="store_const", const="odd")
    group.add_argument("--deg4", dest="variant", action="store_const", const="deg4")
    cmd.add_argument("-u", type=int, help="odd squarefree u with P = 2u (even, deg4)")
    cmd.add_argument("-p", type=int, help="odd prime p (odd variant)")
    cmd.add_argument("-P", type=int, help="field parameter for the odd variant (p or 2p)")
    cmd.add_argument("-n", type=int, help="degree of the curve")
    cmd.add_argument("-m", type=int, help="odd exponent of l in L for the even variant (default 3)")
    cmd.add_argument("-o", "--output", metavar="path", help="certificate file (default stdout)")
    cmd.add_argument("--budget", type=int, help=f"prime search budget (env {BUDGET_ENV})")
    cmd.add_argument("--no-quotient-point", action="store_true",
                     help="drop the square condition that puts a point on the quotient")
    cmd.add_argument("--allow-assumed-class-number", type=int, metavar="h",
                     help="record h as an assumed class number if it cannot be computed")
    cmd.add_argument("--allow-assumed", action="append", default=[], metavar="key",
                     help="ledger key allowed to be 'assumed' (repeatable)")
    cmd.set_defaults(func=cmd_construct)

    cmd = cmds.add_parser("verify", help="audit a certificate and check its curve")
    cmd.add_argument("path")
    cmd.add_argument("-H", "--height", type=int, default=1000)
    cmd.add_argument("--no-local", action="store_true")
    cmd.add_argument("--no-points", action="store_true")
    cmd.add_argument("--cas", metavar="path", help="write the CAS cross-check assertions")
    cmd.add_argument("--allow-assumed", action="append", default=[], metavar="key")
    cmd.set_defaults(func=cmd_verify)

    cmd = cmds.add_parser("reproduce", help="rebuild and check the two degree-8 reference curves")
    cmd.add_argument("-H", "--height", type=int, default=1000)
    cmd.add_argument("--budget", type=int)
    cmd.set_defaults(func=cmd_reproduce)

    cmd = cmds.add_parser("scan-aacm", help="beta of the fundamental unit mod p for P in {p, 2p}")
    cmd.add_argument("limit", type=int)
    cmd.set_defaults(func=cmd_scan_aacm)

    cmd = cmds.add_parser("unit", help="fundamental unit of Q(P^(1/3))")
    cmd.add_argument("P", type=int)
    cmd.set_defaults(func=cmd_unit)

    cmd = cmds.add_parser("classnumber", help="class number of Q(P^(1/3))")
    cmd.add_argument("P", type=int)
    cmd.set_defaults(func=cmd_classnumber)

    for name, func, hlp in (("local", cmd_local, "local solubility reports"),
                            ("points", cmd_points, "bounded rational point search")):
        cmd = cmds.add_parser(name, help=hlp)
        cmd.add_argument("certificate", nargs="?")
        cmd.add_argument("--factor", action="append", metavar="a0,a1,...",
                         help="binary factor of G, highest X power first (repeatable)")
        cmd.add_argument("-L", type=int)
        cmd.add_argument("-n", type=int)
        if name == "local":
            cmd.add_argument("-q", type=int, action="append", help="single prime (repeatable)")
        else:
            cmd.add_argument("-H", "--height", type=int, default=100)
            cmd.add_argument("--quotient", action="store_true", help="search G = L W^2 instead")
        cmd.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"hypothesis failure [{exc.hypothesis}]: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificateParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UndecidedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except FieldError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
