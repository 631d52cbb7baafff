from fractions import Fraction

import pytest

from errors import ExpressionSyntaxError
from exact_arith import CycloRational
from expr_parser import (
    Expr,
    PrimitiveKind,
    SymMono,
    parse_identity,
    parse_monomial,
)
from qring import Monomial

Z_MONO = Monomial(1, 0, 1)


def first_term(text):
    (expr,) = parse_identity(f"{text} = 0")
    return expr.terms[0]


def test_single_equality_moves_everything_left():
    subs = parse_identity("J(z; q) = J(q z^-1; q)")
    assert len(subs) == 1
    expr = subs[0]
    assert len(expr.terms) == 2
    assert expr.terms[1].scalar == -1
    assert expr.symbols() == {"z"}


def test_chain_gives_one_sub_identity_per_extra_side():
    subs = parse_identity("Tb(0,1) = 2 Tb(1,4) = J(-1; q)")
    assert len(subs) == 2
    assert all(len(e.terms) == 2 for e in subs)


def test_zero_side_is_dropped():
    (expr,) = parse_identity("J(1; q) = 0")
    assert len(expr.terms) == 1


def test_abbreviations():
    (prim, k), = first_term("T(2)").factors
    assert prim.kind is PrimitiveKind.THETA
    assert prim.args == (SymMono(q=2), SymMono(q=6))
    assert k == 1
    (prim, _), = first_term("Tb(1,4)").factors
    assert prim.args == (SymMono(sign=-1, q=1), SymMono(q=4))


def test_several_theta_arguments_share_the_base():
    term = first_term("J(x, y; q^2)")
    assert [p.kind for p, _ in term.factors] == [PrimitiveKind.THETA] * 2
    assert all(p.base == SymMono(q=2) for p, _ in term.factors)


def test_denominators_give_negative_exponents():
    term = first_term("q z / (J(z; q) P(q; q)^2)")
    assert [k for _, k in term.factors] == [-1, -2]
    assert term.mono == SymMono.make(q=1, powers={"z": 1})


def test_splitting_functions_and_appell():
    term = first_term("D3(x, -x^-1, -1; q) m(x, z; q)")
    d3, m = [p for p, _ in term.factors]
    assert d3.kind is PrimitiveKind.DN and d3.n == 3
    assert m.kind is PrimitiveKind.APPELL and len(m.args) == 3


def test_series_type_primitives():
    kinds = {p.kind: p.is_series_type() for p, _ in first_term("J(z; q) P(q; q) m(x, z; q) psi10(q)").factors}
    assert kinds == {
        PrimitiveKind.THETA: False,
        PrimitiveKind.POCH: False,
        PrimitiveKind.APPELL: True,
        PrimitiveKind.EULERIAN: True,
    }


def test_scalars_and_phases():
    term = first_term("[1/3,2/3] psi10(w q)")
    assert term.scalar == CycloRational(Fraction(1, 3), Fraction(2, 3))
    (prim, _), = term.factors
    assert prim.name == "psi10"
    assert prim.args[0].turn == Fraction(1, 3)
    w2 = SymMono.symbol("w2")
    assert w2.sign == -1 and w2.turn == Fraction(1, 6)


@pytest.mark.parametrize("text", [
    "J(z; q",
    "J(z; z) = 1",
    "T(0) = 1",
    "foo(z; q) = 1",
    "phi10(z) = 1",
    "J(z; q)",
    "J(z; q) = @",
    "m(x; q) = 1",
    "J(2 z; q) = 1",
])
def test_syntax_errors(text):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_identity(text)
    assert 0 <= info.value.position <= len(text)


def test_error_position_points_at_the_offender():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_identity("J(z; q) = @")
    assert info.value.position == 10


def test_parse_monomial_and_specialize():
    mono = parse_monomial("-q z^-5")
    assert mono == SymMono.make(-1, 0, 1, {"z": -5})
    assert mono.specialize({"z": Z_MONO}) == Monomial(-1, 1, -5)
    assert mono.specialize({"z": Z_MONO}, scale=2) == Monomial(-1, 2, -5)
    with pytest.raises(KeyError):
        mono.specialize({})


def test_expression_dict_form():
    (expr,) = parse_identity("[1/3,2/3] m(x, z; q^2) / J(-q; q) = q^-1 g(x; q)")
    assert Expr.from_dict(expr.to_dict()) == expr


def test_dict_form_rejects_a_base_outside_q():
    (expr,) = parse_identity("J(z; q^2) = 1")
    data = expr.to_dict()
    data['terms'][0]['factors'][0]['prim']['args'][1]['powers'] = {'z': 1}
    with pytest.raises(ValueError, match="not a positive power of q"):
        Expr.from_dict(data)
