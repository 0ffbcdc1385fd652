from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from segrekit.fps import (I, GaussianRational, ParseError, Series, SeriesVector, implicit_solve,
                          invert_unit, matrix_rank, parse_poly, series_det)

V = ("w1", "zeta1")
N = 5


def P(text, vars=V, order=N):
    return parse_poly(text, vars, order)


small = st.fractions(min_value=-4, max_value=4, max_denominator=4)
gauss = st.builds(GaussianRational, small, small)


@st.composite
def series(draw, vars=V, order=N, constant=True):
    s = Series.zero(vars, order)
    for _ in range(draw(st.integers(0, 5))):
        exps = draw(st.lists(st.integers(0, order - 1), min_size=len(vars), max_size=len(vars)))
        if sum(exps) >= order or (not constant and sum(exps) == 0):
            continue
        s = s + Series.monomial(dict(zip(vars, exps)), draw(gauss), vars, order)
    return s


# --- coefficients -----------------------------------------------------------

@given(gauss)
def test_conjugation_is_involution(x):
    assert x.conj().conj() == x


def test_gaussian_lowest_terms():
    x = GaussianRational(Fraction(4, 6), Fraction(-3, 9))
    assert (x.re.numerator, x.re.denominator) == (2, 3)
    assert (x.im.numerator, x.im.denominator) == (-1, 3)


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        GaussianRational(0.5)


# --- ring operations --------------------------------------------------------

def test_difference_of_squares():
    assert P("1 + w1", order=4) * P("1 - w1", order=4) == P("1 - w1^2", order=4)


def test_additive_identity_and_binomial():
    f = P("w1 + zeta1")
    assert f + Series.zero(V, N) == f
    assert f * f == P("w1^2 + 2*w1*zeta1 + zeta1^2")


def test_mul_drops_high_degree():
    assert (P("w1^3") * P("zeta1^2")).is_zero()


def test_mismatched_rings_rejected():
    with pytest.raises(ValueError):
        P("w1") + parse_poly("w1", ("w1",), N)
    with pytest.raises(ValueError):
        P("w1") + P("w1", order=4)


@settings(max_examples=40, deadline=None)
@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Series.zero(V, N)


@settings(max_examples=40, deadline=None)
@given(series())
def test_no_stored_zero_or_high_degree(a):
    for e, c in a.items():
        assert c != 0 and sum(e) < a.order


# --- derivatives ------------------------------------------------------------

def test_derive_examples():
    assert P("w1^2*zeta1").derive("w1") == P("2*w1*zeta1", order=N - 1)
    assert P("w1").derive("zeta1").is_zero()
    assert P("w1").derive("w1").order == N - 1


@settings(max_examples=40, deadline=None)
@given(series(), series())
def test_leibniz_and_mixed_partials(f, g):
    lhs = (f * g).derive("w1")
    rhs = f.derive("w1") * g.truncate(N - 1) + f.truncate(N - 1) * g.derive("w1")
    assert lhs == rhs
    assert f.derive("w1").derive("zeta1") == f.derive("zeta1").derive("w1")


@settings(max_examples=30, deadline=None)
@given(series(vars=("u1", "u2")), series(constant=False), series(constant=False))
def test_chain_rule(f, u1, u2):
    subs = {"u1": u1, "u2": u2}
    lhs = f.compose(subs).derive("w1")
    rhs = Series.zero(V, N - 1)
    for name, u in subs.items():
        rhs = rhs + f.derive(name).compose({k: v.truncate(N - 1) for k, v in subs.items()}) * u.derive("w1")
    assert lhs == rhs


# --- composition ------------------------------------------------------------

def test_compose_examples():
    f = parse_poly("u^2", ("u",), N)
    assert f.compose({"u": P("w1 + zeta1")}) == P("w1^2 + 2*w1*zeta1 + zeta1^2")
    g = parse_poly("1 + u + u^2", ("u",), 3)
    assert g.compose({"u": parse_poly("w1", V, 3)}) == parse_poly("1 + w1 + w1^2", V, 3)


def test_compose_without_target_variable_is_unchanged():
    amb = ("w1", "z1", "zeta1", "xi1")
    tb = parse_poly("w1*zeta1", amb, 6)
    sub = {v: Series.var(v, amb, 6) for v in amb}
    sub["xi1"] = parse_poly("z1 - i*w1*zeta1", amb, 6)
    assert tb.compose(sub) == tb


def test_compose_rejects_constant_term():
    f = parse_poly("u^2", ("u",), N)
    with pytest.raises(ValueError):
        f.compose({"u": P("1 + w1")})


@settings(max_examples=30, deadline=None)
@given(series(vars=("u",)), series(vars=("v",), constant=False), series(constant=False))
def test_compose_associative(f, g, h):
    g_u = Series(("v",), N, g.terms)
    left = f.compose({"u": g_u.compose({"v": h})})
    right = f.compose({"u": g_u}).compose({"v": h})
    assert left == right


# --- unit inversion and implicit solving ------------------------------------

def test_invert_unit_examples():
    assert invert_unit(parse_poly("1 - w1", V, 3)) == parse_poly("1 + w1 + w1^2", V, 3)
    assert invert_unit(Series.const(2, V, 3)) == Series.const(Fraction(1, 2), V, 3)
    assert invert_unit(P("1 + i*w1*zeta1")) == P("1 - i*w1*zeta1 - w1^2*zeta1^2")
    with pytest.raises(ZeroDivisionError):
        invert_unit(P("w1"))


@settings(max_examples=30, deadline=None)
@given(series(constant=False), gauss.filter(lambda c: c != 0))
def test_invert_unit_round_trip(f, c):
    u = f + Series.const(c, V, N)
    assert u * invert_unit(u) == Series.const(1, V, N)


def test_implicit_solve_examples():
    xy = ("x", "y")
    y = implicit_solve([parse_poly("y - x^2", xy, 6)], ["y"], 6)
    assert y[0] == parse_poly("x^2", ("x",), 6)
    y = implicit_solve([parse_poly("y - x - x*y", xy, 4)], ["y"], 4)
    assert y[0] == parse_poly("x + x^2 + x^3", ("x",), 4)
    amb = ("w1", "z1", "zeta1", "xi1")
    z = implicit_solve([parse_poly("xi1 - z1 + i*w1*zeta1", amb, 6)], ["z1"], 6)
    assert z[0] == parse_poly("xi1 + i*w1*zeta1", ("w1", "zeta1", "xi1"), 6)


def test_implicit_solve_matches_sympy_series():
    xy = ("x", "y")
    F = parse_poly("y - x - x*y^2", xy, 8)
    y = implicit_solve([F], ["y"], 8)[0]
    x = sympy.Symbol("x")
    # y = (1 - sqrt(1 - 4x^2)) / (2x), the branch through the origin
    ref = sympy.series((1 - sympy.sqrt(1 - 4 * x ** 2)) / (2 * x), x, 0, 8).removeO()
    poly = sympy.Poly(ref, x)
    expected = Series.zero(("x",), 8)
    for (k,), c in poly.terms():
        expected = expected + Series.monomial({"x": k}, Fraction(int(c.p), int(c.q)), ("x",), 8)
    assert y == expected


def test_implicit_solve_singular_jacobian():
    with pytest.raises(ZeroDivisionError):
        implicit_solve([parse_poly("y^2 - x", ("x", "y"), 4)], ["y"], 4)


@settings(max_examples=25, deadline=None)
@given(series(vars=("x", "y"), constant=False))
def test_implicit_solve_residual(g):
    xy = ("x", "y")
    quad = Series(xy, N, {e: c for e, c in g.items() if sum(e) >= 2})
    F = Series.var("y", xy, N) - quad
    y = implicit_solve([F], ["y"], N)[0]
    sub = {"x": Series.var("x", ("x",), N), "y": y}
    assert F.compose(sub).is_zero()


# --- linear algebra ---------------------------------------------------------

def test_series_det_and_rank():
    one, w = Series.const(1, V, N), P("w1")
    assert series_det([[one, w], [w, one]]) == P("1 - w1^2")
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([[1, I], [0, 1]]) == 2


# --- grammar ----------------------------------------------------------------

def test_parse_coefficient_forms():
    f = P("1/2*w1 + 3/4*i*zeta1 + (1/2+1/3*i)*w1*zeta1 - w1^2")
    assert f.coefficient({"w1": 1}) == Fraction(1, 2)
    assert f.coefficient({"zeta1": 1}) == GaussianRational(0, Fraction(3, 4))
    assert f.coefficient({"w1": 1, "zeta1": 1}) == GaussianRational(Fraction(1, 2), Fraction(1, 3))
    assert P("(1 + w1)^2") == P("1 + 2*w1 + w1^2")


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        P("w1 + 1/0")
    assert (e.value.line, e.value.col) == (1, 8)
    with pytest.raises(ParseError) as e:
        P("w1 + q7")
    assert e.value.col == 6
    with pytest.raises(ParseError):
        P("w1 +")
    with pytest.raises(ParseError):
        P("")


@settings(max_examples=40, deadline=None)
@given(series())
def test_print_parse_round_trip(f):
    assert P(f.to_poly()) == f


def test_series_vector_shares_ring():
    with pytest.raises(ValueError):
        SeriesVector([P("w1"), parse_poly("w1", ("w1",), N)])
