import json

import pytest
import sympy
from gmpy2 import mpfr, mpq
from hypothesis import given, strategies as st

from turanpoly import polycore
from turanpoly.arithfn import ALTSIGN, IDENTITY, ONE, SIGMA, power, table
from turanpoly.errors import SpecError, UnsupportedGError
from turanpoly.polycore import (
    X,
    Poly,
    evaluate_three_term,
    families_agree,
    generate,
    generate_convolution,
    generate_three_term,
    poly_gcd,
)

x_sym, t_sym = sympy.symbols("x t")

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
polys = st.lists(rationals, max_size=6).map(Poly)


def to_sympy(p: Poly):
    terms = (sympy.Rational(int(c.numerator), int(c.denominator)) * x_sym**k for k, c in enumerate(p.coeffs))
    return sum(terms, sympy.Integer(0))


def test_trailing_zeros_stripped():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]).degree == -1
    assert not Poly()


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly()


@given(polys, polys)
def test_divmod_reconstructs(a, b):
    if not b:
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, rationals, rationals)
def test_compose_affine_matches_sympy(p, a, b):
    got = to_sympy(p.compose_affine(a, b))
    ref = sympy.expand(to_sympy(p).subs(x_sym, sympy.Rational(a) * x_sym + sympy.Rational(b)))
    assert sympy.expand(got - ref) == 0


@given(polys, rationals)
def test_horner_evaluation(p, v):
    assert p(v) == sum(c * mpq(v) ** k for k, c in enumerate(p.coeffs))


def test_derivative_and_div_x():
    p = Poly([0, 3, 0, 5])
    assert p.derivative() == Poly([3, 0, 15])
    assert p.div_x() == Poly([3, 0, 5])
    with pytest.raises(ArithmeticError):
        Poly([1, 1]).div_x()


def test_gcd():
    a = (X + 1) * (X + 2) * (X + 3)
    b = (X + 2) * (X - 5)
    assert poly_gcd(a, b) == X + 2


def test_json_roundtrip():
    p = Poly([mpq(1, 3), mpfr("2.5"), -7])
    assert Poly.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_spec_examples():
    fam = generate_three_term(IDENTITY, 3)
    assert fam[1] == X
    assert fam[2] == Poly([0, 1, mpq(1, 2)])
    assert fam[3] == Poly([0, 1, 1, mpq(1, 6)])
    assert generate_three_term(ONE, 3)[3] == Poly([0, 3, 4, 1])


@pytest.mark.parametrize("h", [ONE, IDENTITY, SIGMA, table([1, 2, 5, 3, 7, 1, 4])])
def test_convolution_matches_generating_function(h):
    # g = id: sum_n h(1)..h(n) P_n t^n is not simple, so check the defining sum directly via sympy
    N = 7
    fam = generate_convolution(IDENTITY, h, N)
    ref = [sympy.Integer(1)]
    for n in range(1, N + 1):
        hn = sympy.Rational(str(h(n)))
        ref.append(sympy.expand(x_sym / hn * sum(k * ref[n - k] for k in range(1, n + 1))))
    for n in range(N + 1):
        assert sympy.expand(to_sympy(fam[n]) - ref[n]) == 0


def test_h_one_generating_function():
    # g = id, h = 1: sum P_n t^n = 1 / (1 - x t / (1 - t)^2)
    N = 8
    series = sympy.series(1 / (1 - x_sym * t_sym / (1 - t_sym) ** 2), t_sym, 0, N + 1).removeO()
    fam = generate_three_term(ONE, N)
    for n in range(N + 1):
        assert sympy.expand(series.coeff(t_sym, n) - to_sympy(fam[n])) == 0


@pytest.mark.parametrize("h", [ONE, IDENTITY, ALTSIGN, SIGMA])
def test_generators_agree_exactly(h):
    a, b = generate_convolution(IDENTITY, h, 25), generate_three_term(h, 25)
    assert a.polys == b.polys
    assert families_agree(a, b) == (True, None)


def test_generators_agree_power_half():
    a = generate_convolution(IDENTITY, power(mpq(1, 2)), 40)
    b = generate_three_term(power(mpq(1, 2)), 40)
    assert families_agree(a, b, mpq(1, 10**20)) == (True, None)


def test_families_agree_reports_first_mismatch():
    a = generate_three_term(IDENTITY, 5)
    polys = list(a.polys)
    polys[3] = polys[3] + Poly.constant(1)
    b = polycore.GeneratedFamily(a.g, a.h, tuple(polys), "edited")
    assert families_agree(a, b) == (False, 3)


def test_other_g_uses_convolution():
    fam = generate(ONE, IDENTITY, 3, method="convolution")
    # g = 1, h = id: P_1 = x, P_2 = (x/2)(P_1 + P_0)
    assert fam[2] == Poly([0, mpq(1, 2), mpq(1, 2)])
    with pytest.raises(UnsupportedGError):
        generate(ONE, IDENTITY, 3, method="three-term")
    with pytest.raises(SpecError):
        generate(IDENTITY, IDENTITY, 3, method="spline")


def test_unnormalized_h_rejected():
    with pytest.raises(SpecError):
        generate_three_term(table([2, 3]), 2)
    with pytest.raises(SpecError):
        table([1, 0, 1])


def test_pointwise_values_match_polynomials():
    h = power(mpq(1, 3))
    fam = generate_three_term(h, 12)
    for v in (mpq(-3), mpq(1, 7), mpq(5)):
        vals = evaluate_three_term(h, 12, v)
        assert all(abs(a - fam[n](v)) <= mpfr(2) ** -90 * (1 + abs(a)) for n, a in enumerate(vals))


def test_family_serialisation():
    fam = generate_three_term(IDENTITY, 2)
    assert fam.to_csv() == "n,k,coefficient\n0,0,1\n1,0,0\n1,1,1\n2,0,0\n2,1,1\n2,2,1/2\n"
    doc = json.loads(fam.to_json())
    assert doc["polynomials"][2] == ["0", "1", "1/2"]
