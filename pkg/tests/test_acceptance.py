"""Acceptance criteria, one test each.  Every test prints a single
``CRITERION k: PASS|FAIL ...`` line (visible with or without ``-s``)."""

import json
import random
import time
from fractions import Fraction

import pytest

from hasse_sieve.cli import EXIT_ASSUMED, EXIT_OK, main
from hasse_sieve.construct import construct_deg4, construct_even, construct_odd
from hasse_sieve.cubicfield import (
    PureCubicField,
    aacm_scan,
    class_number,
    fundamental_unit,
    norm,
    unit_order_mod,
)
from hasse_sieve.forms import PlaneCurve, diagonal_cubic
from hasse_sieve.local import INSOLUBLE, SOLUBLE, check_local_everywhere, tree_search, witness_ok
from hasse_sieve.points import quotient_points, search_points
from hasse_sieve.serialize import dumps
from hasse_sieve.verify import check_nonsingular
from oracles import brute_unit, cubic_norm, primitive_solution_mod, singular_points_mod, unit_is_fundamental

ASSUMED_WHITELIST = ("fermat.nonresidue_lemma",)


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return emit


def _construct_via_cli(tmp_path, name, *argv):
    path = tmp_path / f"{name}.json"
    t0 = time.perf_counter()
    code = main(["construct", *argv, "-o", str(path)])
    elapsed = time.perf_counter() - t0
    return code, json.loads(path.read_text())["certificate"], elapsed


def test_criterion_1_even_golden(tmp_path, report):
    code, c, dt = _construct_via_cli(tmp_path, "even", "--even", "-u", "7", "-n", "8", "-m", "3")
    ok = (
        code == EXIT_OK
        and c["primes"] == [197] and c["pairs"] == [[1, 1]]
        and c["l"] == 419 and c["norm_rep"] == [-11, 5, 0]
        and (c["b0"], c["c0"], c["sign"], c["k"]) == (365, 169, 1, 6)
        and 196 * 365 - 419 * 169 == 729 == 3**6
        and c["P"] ** c["iota"] * c["b0"] - c["l"] * c["c0"] == c["sign"] * 3 ** c["k"]
        and dt < 10
    )
    assert report(1, ok, f"q1=197 (b1,c1)=(1,1) l=419 rep=(-11,5,0) (365,169,+,6) in {dt:.2f}s (< 10s)")


def test_criterion_2_deg4_golden(tmp_path, report):
    code, c, dt = _construct_via_cli(tmp_path, "deg4", "--deg4", "-u", "79", "-n", "8")
    ok = (
        code == EXIT_OK
        and c["primes"] == [19751] and c["pairs"] == [[5, 1]]
        and c["l"] == 4919 and c["norm_rep"] == [-59, 11, 0]
        and (c["b0"], c["c0"], c["sign"], c["k"]) == (73441, 2359, -1, 5)
        and 158 * 73441 - 4919 * 2359 == -243 == -(3**5)
        and c["P"] ** c["iota"] * c["b0"] - c["l"] * c["c0"] == c["sign"] * 3 ** c["k"]
        and dt < 30
    )
    assert report(2, ok, f"q1=19751 (b1,c1)=(5,1) l=4919 rep=(-59,11,0) (73441,2359,-,5) in {dt:.2f}s (< 30s)")


def test_criterion_3_local_solubility(cert_even, cert_deg4, report):
    t0 = time.perf_counter()
    details = []
    ok = True
    for name, cert in (("even", cert_even), ("deg4", cert_deg4)):
        curve = cert.curve()
        s = check_local_everywhere(curve)
        real = s.reports[0]
        good = [r for r in s.reports if r.method == "exhaustive-count"]
        ok &= s.all_soluble and real.place == "real" and real.verdict == SOLUBLE
        ok &= s.threshold == 1764 and curve.genus == 21
        ok &= all(witness_ok(curve, r.place, r.witness, r.precision)
                  for r in s.reports if r.method in ("hensel-lift", "exhaustive-count"))
        details.append(f"{name}: real + {len(s.bad)} bad + {len(good)} good primes soluble")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    assert report(3, ok, f"{'; '.join(details)}; threshold 1764; {dt:.1f}s (< 300s)")


def test_criterion_4_global_sanity(cert_even, cert_deg4, report):
    t0 = time.perf_counter()
    empty = all(search_points(c.curve(), 1000).empty for c in (cert_even, cert_deg4))
    _, q_even = quotient_points(cert_even.curve(), 50)
    _, q_deg4 = quotient_points(cert_deg4.curve(), 50)
    p_even = (0, 1, Fraction(182, 419))
    p_deg4 = (1, 0, Fraction(1355, 4919))
    ok = empty and p_even in q_even.points and p_deg4 in q_deg4.points
    ok &= Fraction(13 * 14, 419) == p_even[2] and Fraction(5 * 271, 4919) == p_deg4[2]
    dt = time.perf_counter() - t0
    assert report(4, ok, f"H=1000 searches empty: {empty}; quotient points [0:1:182/419], "
                         f"[1:0:1355/4919] found; {dt:.1f}s")


def test_criterion_5_unit_orders(report):
    F = PureCubicField(2)
    e = F.element(1, 1, 1)
    orders = [unit_order_mod(e, 2**iota) for iota in (1, 2, 3)]
    ok = orders == [4, 8, 16] == [2 ** (iota + 1) for iota in (1, 2, 3)]
    assert report(5, ok, f"orders of 1+pi+pi^2 mod 2^iota, iota=1,2,3: {orders}")


def test_criterion_6_hypothesis_table(report):
    from conftest import load_table

    analytic_h = {P: h for P, _, h in load_table()}
    rows = []
    ok = True
    for u in (3, 7, 17, 21, 35, 39):
        P = 2 * u
        F = PureCubicField(P)
        a, b, c = fundamental_unit(F).element.coords
        h = class_number(F)
        ok &= b % 2 == 0 and h % 2 == 1 and h == analytic_h[P]
        if c <= 40_000:
            oracle = brute_unit(P, c + 10)
            match = oracle == (a, b, c)
            how = "brute force"
        else:
            # gamma ~ 5e11: exhaustive search is out of reach, use root extraction
            match = cubic_norm(a, b, c, P) == 1 and unit_is_fundamental(P, (a, b, c))
            how = f"root extraction, exhaustive search infeasible at gamma={c}"
        ok &= match
        rows.append(f"u={u} beta={b} h={h} unit {'matches' if match else 'DIFFERS'} ({how})")
    assert report(6, ok, "; ".join(rows))


def test_criterion_7_aacm(report):
    t0 = time.perf_counter()
    checked, failures = 0, []
    from hasse_sieve import arith

    for p in arith.primes_up_to(99):
        for variant in ("p", "2p"):
            row = aacm_scan(p, variant)
            if row.verdict in ("inapplicable", "special"):
                continue
            checked += 1
            if row.verdict != "holds" or row.residues[1] % p == 0:
                failures.append((p, row.P))
    dt = time.perf_counter() - t0
    ok = checked > 30 and not failures and dt < 120
    assert report(7, ok, f"{checked} valid (p, P) with p < 100, beta != 0 mod p in all; "
                         f"failures {failures}; {dt:.1f}s (< 120s)")


def test_criterion_8_property_suites(report):
    from test_local import FORMS
    from test_verify import random_curves

    # norm multiplicativity
    norm_bad = 0
    for P in (2, 6, 14, 158):
        F = PureCubicField(P)
        rng = random.Random(1000 + P)
        for _ in range(10_000):
            x = F.element(*(rng.randint(-50, 50) for _ in range(3)))
            y = F.element(*(rng.randint(-50, 50) for _ in range(3)))
            norm_bad += norm(x * y) != norm(x) * norm(y)
    # local engine vs mod q^6 brute force
    engine_bad = 0
    for co, q in FORMS:
        r = tree_search(co, q)
        if r.verdict == SOLUBLE:
            engine_bad += not (witness_ok(co, q, r.witness, r.precision) and primitive_solution_mod(co, q, 6))
        elif r.verdict == INSOLUBLE:
            engine_bad += primitive_solution_mod(co, q, max(6, r.level))
        else:
            engine_bad += 1
    # nonsingularity vs gradient search over F_q
    from hasse_sieve.local import _disc_of_curve

    curves = random_curves(120)
    ns_bad = 0
    for c in curves:
        if check_nonsingular(c):
            bad = c.n * c.L * _disc_of_curve(c)
            ns_bad += any(singular_points_mod(c.coefficients, q) for q in (7, 13, 19, 31) if bad % q)
        else:
            ns_bad += not all(singular_points_mod(c.coefficients, q) for q in (7, 13, 19))
    # Selmer
    selmer = PlaneCurve((diagonal_cubic(3, 4),), 5, 3)
    selmer_ok = check_local_everywhere(selmer).all_soluble and search_points(selmer, 10_000).empty
    ok = norm_bad == 0 and engine_bad == 0 and ns_bad == 0 and selmer_ok and len(FORMS) >= 200
    assert report(8, ok, f"norm 4x10^4 pairs: {norm_bad} bad; local engine {len(FORMS)} forms: "
                         f"{engine_bad} disagreements; nonsingular {len(curves)} curves: {ns_bad} "
                         f"disagreements; Selmer locally soluble + empty to 10^4: {selmer_ok}")


def test_criterion_9_closed_loop(tmp_path, capsys, report):
    matrix = [
        ("even n=8", lambda: construct_even(7, 8, 3)),
        ("even n=10", lambda: construct_even(7, 10, 3)),
        ("deg4 n=8", lambda: construct_deg4(79, 8)),
        ("deg4 n=12", lambda: construct_deg4(79, 12)),
        ("odd (3,9)", lambda: construct_odd(3, 9)),
        ("odd (5,5)", lambda: construct_odd(5, 5)),
    ]
    results = []
    ok = True
    for i, (name, build) in enumerate(matrix):
        cert = build()
        path = tmp_path / f"c{i}.json"
        path.write_text(dumps(cert))
        allow = [a for key in ASSUMED_WHITELIST for a in ("--allow-assumed", key)]
        code = main(["verify", str(path), *allow])
        out = capsys.readouterr().out
        ok &= code == EXIT_OK and "result: PASS" in out
        if cert.assumed:
            # without the whitelist the same file must be rejected
            strict = main(["verify", str(path), "--no-local", "--no-points"])
            capsys.readouterr()
            ok &= strict == EXIT_ASSUMED
        results.append(f"{name}: exit {code}" + (f" (assumed {[e.key for e in cert.assumed]} whitelisted)"
                                                  if cert.assumed else ""))
    assert report(9, ok, "; ".join(results))
