from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stackgame.rational import (
    NEG_INF,
    POS_INF,
    ExtendedRational,
    InfiniteArithmeticError,
    rat,
    vector_str,
)


def test_construction_forms():
    assert rat(3) == rat("3") == ExtendedRational(Fraction(3))
    assert rat("1/3") == ExtendedRational(Fraction(1, 3))
    assert rat("0.1") == rat("1/10")
    assert rat("-inf") == NEG_INF
    assert rat("inf") == POS_INF


def test_floats_rejected():
    with pytest.raises(TypeError):
        ExtendedRational(0.5)


def test_ordering():
    assert NEG_INF < rat(-10**9) < rat(0) < rat("1/3") < POS_INF
    assert not NEG_INF < NEG_INF
    assert POS_INF <= POS_INF
    assert rat(2) >= rat(2)


def test_arithmetic_finite():
    assert rat(2) + rat("1/2") == rat("5/2")
    assert rat(2) - rat(5) == rat(-3)
    assert rat("1/3") * rat(6) == rat(2)
    assert -rat("1/3") == rat("-1/3")


def test_arithmetic_single_infinity():
    assert rat(5) + POS_INF == POS_INF
    assert rat(5) - POS_INF == NEG_INF
    assert NEG_INF - rat(7) == NEG_INF
    assert -NEG_INF == POS_INF


def test_arithmetic_two_infinities_rejected():
    with pytest.raises(InfiniteArithmeticError):
        POS_INF + NEG_INF
    with pytest.raises(InfiniteArithmeticError):
        POS_INF - POS_INF
    with pytest.raises(InfiniteArithmeticError):
        POS_INF * rat(2)


def test_str_forms():
    assert str(rat(3)) == "3"
    assert str(rat("-4/6")) == "-2/3"
    assert str(POS_INF) == "inf"
    assert str(NEG_INF) == "-inf"
    assert vector_str((rat(0), rat(1))) == "(0, 1)"


def test_hash_matches_equality():
    assert hash(rat("2/4")) == hash(rat("1/2"))
    values = {rat(1), rat("1/1"), POS_INF, NEG_INF}
    assert len(values) == 3


_finites = st.fractions(max_denominator=50)
_values = st.one_of(
    _finites.map(lambda f: ExtendedRational(str(f))),
    st.just(POS_INF),
    st.just(NEG_INF),
)


@given(_values, _values)
def test_total_order_antisymmetry(a, b):
    assert (a <= b and b <= a) == (a == b)


@given(_values, _values, _values)
def test_total_order_transitivity(a, b, c):
    if a <= b and b <= c:
        assert a <= c


@given(_values, _values)
def test_comparability(a, b):
    assert a <= b or b <= a
