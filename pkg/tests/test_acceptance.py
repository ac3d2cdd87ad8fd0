"""Acceptance criteria, one test each.

Every criterion runs its single CLI invocation (in-process, timed where a
runtime bound applies) and re-checks the stated tolerances through the library.
A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import json
import time

import gmpy2
from gmpy2 import mpfr, mpq

from turanpoly import arithfn, classical, favard, polycore, turan, zeros
from turanpoly.cli import run
from turanpoly.polycore import Poly


def cli(capsys, *argv):
    start = time.perf_counter()
    code = run(list(argv))
    elapsed = time.perf_counter() - start
    out, err = capsys.readouterr()
    return code, out, elapsed


def report(n, ok, detail):
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


def s_grid_specs():
    return [arithfn.power(mpq(k, 10)) for k in range(11)]


def test_criterion_01_identity_suite(capsys):
    code, out, elapsed = cli(capsys, "verify", "--n-max", "20")
    doc = json.loads(out)
    resolved = doc["sign_variant_identities"]["p_h1_laguerre"]["resolved_variant"]
    sgn = -1 if resolved == "-x" else 1
    one = polycore.generate_three_term(arithfn.ONE, 20)
    ident = polycore.generate_three_term(arithfn.IDENTITY, 20)
    cheb = all(one[n] == classical.chebyshev_U(n - 1).compose_affine(mpq(1, 2), 1).mul_x() for n in range(1, 21))
    lag = all(
        ident[n] == classical.laguerre(n - 1, 1).compose_affine(sgn, 0).mul_x().scale(mpq(1, n)) for n in range(1, 21)
    )
    ok = code == 0 and doc["identities"]["p_h0_chebyshev"]["holds"] and cheb and lag and elapsed < 5
    report(1, ok, f"variant {resolved}, {elapsed:.2f}s")
    assert code == 0
    assert cheb and lag
    assert elapsed < 5


def test_criterion_02_chebyshev_special_identity(capsys):
    code, out, _ = cli(capsys, "verify", "--n-max", "25")
    doc = json.loads(out)
    U = classical.chebyshev_U
    direct = all(U(n) * U(n) - U(n - 1) * U(n + 1) == Poly.constant(1) for n in range(0, 26))
    ok = code == 0 and doc["identities"]["chebyshev_turan"]["holds"] and direct
    report(2, ok, "n <= 25, exact")
    assert ok


def test_criterion_03_generator_equivalence(capsys):
    code, out, _ = cli(capsys, "gen", "--h", "one", "--h", "id", "--h", "power:1/2", "--n", "40",
                       "--check-generators", "--rel", "1e-20", "--format", "json")
    doc = json.loads(out)
    exact = all(
        polycore.generate_convolution(arithfn.IDENTITY, h, 40).polys == polycore.generate_three_term(h, 40).polys
        for h in (arithfn.ONE, arithfn.IDENTITY)
    )
    half = arithfn.power(mpq(1, 2))
    a = polycore.generate_convolution(arithfn.IDENTITY, half, 40)
    b = polycore.generate_three_term(half, 40)
    worst = max(
        (p.max_difference(q) / max(p.max_abs(), q.max_abs()) for p, q in zip(a.polys, b.polys)),
        default=mpfr(0),
    )
    ok = code == 0 and all(c["agree"] for c in doc["generator_comparison"]) and exact and worst <= mpq(1, 10**20)
    report(3, ok, f"power:1/2 worst relative difference {float(worst):.2e}")
    assert ok


def test_criterion_04_favard_hankel(capsys):
    code, out, elapsed = cli(capsys, "favard", "--h", "one", "--h", "id", "--h", "altsign", "--n", "10")
    doc = json.loads(out)
    ok = code == 0 and elapsed < 30
    for h in (arithfn.ONE, arithfn.IDENTITY, arithfn.ALTSIGN):
        rec = favard.q_recurrence(h, 20)
        hank = favard.hankel_determinants(favard.moments_from_recurrence(rec, 20), 10)
        assert all(isinstance(d, type(mpq())) for d in hank.determinants)
        if h is arithfn.ALTSIGN:
            ok = ok and all(d != 0 for d in hank.determinants) and hank.verdict is favard.Verdict.QUASI_DEFINITE
        else:
            ok = ok and all(d > 0 for d in hank.determinants)
        ok = ok and favard.orthogonality_defects(rec, 10) == ([], [])
    verdicts = [r["verdict"] for r in doc["reports"]]
    ok = ok and verdicts == ["positive-definite", "positive-definite", "quasi-definite"]
    report(4, ok, f"{elapsed:.2f}s")
    assert ok


def test_criterion_05_turan_sweep(capsys):
    code, out, _ = cli(capsys, "turan", "--s-grid", "0:1:0.1", "--n-max", "30")
    doc = json.loads(out)
    ok = code == 0 and len(doc["reports"]) == 11
    worst = None
    for h in s_grid_specs():
        rep = turan.turan_sweep(h, 30)
        ok = ok and rep.passed and rep.zero_row_exact
        for n, x, t in rep.values:
            p = polycore.evaluate_three_term(h, n + 1, x)
            scale = max(p[n] ** 2, abs(p[n - 1] * p[n + 1]))
            ok = ok and t >= -mpq(1, 10**9) * scale
            if x == 0:
                ok = ok and t == 0
            worst = t if worst is None or t < worst else worst
    report(5, ok, f"11 values of s, n in [2, 30], min T = {float(worst):.3e}")
    assert ok


def test_criterion_06_v_monotone_and_d(capsys):
    code, out, _ = cli(capsys, "bounds", "--s-grid", "0:1:0.1", "--n-max", "30", "--checks", "monotone,d")
    doc = json.loads(out)
    ok = code == 0
    for entry in doc["reports"]:
        ok = ok and entry["v_monotone"]["passed"] and entry["d_criterion"]["agrees"]
    for s in (0, 1):
        rows = turan.d_sign_agreement(arithfn.power(mpq(s)), 30)
        ok = ok and all(r.d_sign == 0 for r in rows[1:])
        ok = ok and all(gmpy2.is_zero(mpfr(r.d_value)) for r in rows[1:])
    report(6, ok, "v-monotone on the grid, D-sign agreement, D = 0 for s in {0, 1}, n >= 2")
    assert ok


def test_criterion_07_induction_bound(capsys):
    code, out, _ = cli(capsys, "bounds", "--s-grid", "0:1:0.1", "--n-max", "30", "--checks", "ratio")
    doc = json.loads(out)
    ok = code == 0
    for entry in doc["reports"]:
        ok = ok and entry["ratio_bound"]["passed"] and entry["ratio_bound"]["base_case_equal"]
    report(7, ok, "v_{n,2} <= P_n/P_{n-1} for x > 0, P_2/P_1 = v_{1,2}")
    assert ok


def test_criterion_08_zeros(capsys):
    code, out, _ = cli(capsys, "zeros", "--h", "one", "--h", "id", "--h", "power:1/2", "--n-max", "20")
    doc = json.loads(out)
    ok = code == 0
    worst_oracle = mpq(0)
    for h in (arithfn.ONE, arithfn.IDENTITY, arithfn.power(mpq(1, 2))):
        fam = polycore.generate_three_term(h, 13)
        prev = None
        for n in range(1, 21):
            zs = zeros.zeros_of_P(h, n)
            ok = ok and len(zs) == n and all(z <= mpq(1, 10**10) for z in zs)
            gap = zeros.min_gap(zs)
            ok = ok and (gap is None or gap > mpq(1, 10**11))
            if prev is not None:
                ok = ok and zeros.interlacing_check(prev, zs[:-1])
            prev = zs[:-1]
            if 2 <= n <= 12:
                oracle = zeros.sturm_roots(fam[n].div_x()) + [mpq(0)]
                worst_oracle = max([worst_oracle] + [abs(a - b) for a, b in zip(zs, oracle)])
    ok = ok and worst_oracle <= mpq(1, 10**11) and all(r["passed"] for r in doc["reports"])
    report(8, ok, f"eigenvalue vs Sturm max error {float(worst_oracle):.2e}")
    assert ok


def test_criterion_09_zero_trajectory(capsys):
    code, out, elapsed = cli(capsys, "trajectory", "--n", "7", "--s-grid", "0:1:0.01", "--format", "json")
    doc = json.loads(out)
    cheb = mpfr(doc["chebyshev_endpoint_error"])
    lag = mpfr(doc["laguerre_endpoint_error"])
    rows = [[mpfr(z) for z in zs] for zs in doc["zeros"]]
    consistent = len(rows) == 101 and all(len(zs) == 7 and zs == sorted(zs) for zs in rows)
    ok = code == 0 and cheb <= 1e-10 and lag <= 1e-10 and consistent and elapsed < 10
    report(9, ok, f"endpoint errors {float(cheb):.1e} / {float(lag):.1e}, {elapsed:.2f}s, flags: {len(doc['flags'])}")
    assert ok


def test_criterion_10_lemma_side_conditions(capsys):
    code, out, _ = cli(capsys, "bounds", "--h", "id", "--h", "one", "--n-max", "50", "--checks", "lemma")
    doc = json.loads(out)
    ok = code == 0 and all(e["lemma_side_conditions"]["all_hold"] for e in doc["reports"])
    ok = ok and all(arithfn.lemma_side_conditions(h, 50).all_hold for h in (arithfn.IDENTITY, arithfn.ONE))
    report(10, ok, "n <= 50")
    assert ok
