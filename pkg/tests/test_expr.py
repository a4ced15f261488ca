import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from g2lab.expr import (BinOp, EvaluationError, ImmersionExpr, Neg, Num, ParseError, Var, differentiate,
                        evaluate, parse_expression, to_string)


def ev(text, **env):
    return evaluate(parse_expression(text), env)


def test_examples():
    assert ev("u^2 - v^2", u=2.0, v=3.0) == -5
    assert ev("sin(u)*cos(v)", u=0.0, v=0.0) == 0
    assert ev("2*u + -v^2", u=1.0, v=2.0) == -2


def test_precedence_against_parenthesized_form():
    assert parse_expression("2*u + -v^2") == parse_expression("(2*u) + (-(v^2))")
    assert parse_expression("-u^2") == Neg(BinOp("^", Var("u"), Num(2.0)))
    assert ev("2^3^2") == 2.0 ** 9
    assert ev("8/2/2") == 2
    assert ev("1 - 2 - 3") == -4
    assert ev("2^-1") == 0.5


@pytest.mark.parametrize("text,pos", [("2u", 1), ("u +", 3), ("(u", 2), ("sin u", 4), ("u $ v", 2),
                                      ("é+u", 0), ("u+é", 2)])
def test_errors_have_byte_offsets(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.position == pos
    assert info.value.expected


def test_multibyte_offset():
    with pytest.raises(ParseError) as info:
        parse_expression("u+é")
    assert info.value.position == len("u+".encode())
    with pytest.raises(ParseError) as info:
        parse_expression("é é")
    assert info.value.position == 0


def test_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier 'w'"):
        parse_expression("u + w")
    assert evaluate(parse_expression("a*u", ("a",)), {"u": 2.0, "a": 3.0}) == 6


def test_non_integer_power_rejected():
    with pytest.raises(EvaluationError):
        ev("u^0.5", u=2.0)


def test_vectorized():
    u = np.linspace(0, 1, 5)
    assert np.allclose(ev("u^2 + v", u=u, v=1.0), u ** 2 + 1)


# random well-formed trees for round trips
leaf = st.one_of(st.floats(0, 1e6, allow_nan=False).map(Num), st.sampled_from([Var("u"), Var("v")]))


def extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(BinOp, st.just("^"), children, st.integers(0, 3).map(float).map(Num)),
    )


trees = st.recursive(leaf, extend, max_leaves=12)


@given(trees)
def test_round_trip(tree):
    assert parse_expression(to_string(tree)) == tree


TOKENS = ["u", "v", "1", "2.5", "1e-3", "+", "-", "*", "/", "^", "(", ")", "sin", "cos", "exp", " ", "x", "@", ".", "sinh("]


def test_fuzz_totality():
    rng = np.random.default_rng(0)
    parsed = errors = 0
    for _ in range(10_000):
        text = "".join(rng.choice(TOKENS, size=rng.integers(0, 12)))
        try:
            tree = parse_expression(text)
        except ParseError as exc:
            assert 0 <= exc.position <= len(text.encode())
            errors += 1
        else:
            parsed += 1
            try:
                evaluate(tree, {"u": 0.3, "v": -0.7})
            except EvaluationError:
                pass
    assert parsed > 0 and errors > 0


@settings(max_examples=50)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_derivative_matches_finite_difference(u, v):
    tree = parse_expression("sin(u*v)^2 / cosh(v) + exp(-u)*u^3 - 2*v")
    h = 1e-6
    for var in ("u", "v"):
        d = evaluate(differentiate(tree, var), {"u": u, "v": v})
        du, dv = (h, 0) if var == "u" else (0, h)
        fd = (evaluate(tree, {"u": u + du, "v": v + dv}) - evaluate(tree, {"u": u - du, "v": v - dv})) / (2 * h)
        assert d == pytest.approx(fd, abs=1e-7)


def test_immersion_expr():
    f = ImmersionExpr.from_strings(["c*cosh(v)*cos(u)", "c*cosh(v)*sin(u)", "c*v", "0", "0", "0", "0"], {"c": 2})
    out = f(np.zeros(3), np.zeros(3))
    assert out.shape == (3, 7)
    assert np.allclose(out[:, 0], 2)
    again = ImmersionExpr.from_strings(f.to_strings(), dict(f.params))
    assert again == f
    with pytest.raises(ValueError, match="7 component"):
        ImmersionExpr.from_strings(["u"], {})
    with pytest.raises(ValueError, match="reserved"):
        ImmersionExpr.from_strings(["u"] * 7, {"sin": 1})
