from fractions import Fraction

import pytest

from jumpseq.fields import Fp, GroundField, QQ, prime_field


def test_rationals_coercion():
    assert QQ(3) == Fraction(3)
    assert QQ("3/4") == Fraction(3, 4)
    assert QQ(Fraction(1, 2)) == Fraction(1, 2)
    assert QQ.zero == 0 and QQ.one == 1


def test_rationals_render_parse_roundtrip():
    for s in ["0", "1", "-2", "3/4", "-5/7"]:
        assert QQ.render(QQ.parse(s)) == s


def test_prime_field_arithmetic():
    F = prime_field(7)
    a, b = F(3), F(5)
    assert a + b == F(1)
    assert a * b == F(1)
    assert a - b == F(5)
    assert b / a == F(4)
    assert a ** 6 == F(1)
    assert -a == F(4)


def test_prime_field_render():
    F = prime_field(101)
    assert F.render(F(-1)) == "100"
    assert F.render(F("13")) == "13"


def test_field_json_roundtrip():
    for fld in (QQ, prime_field(101)):
        assert GroundField.from_json(fld.to_json()) == fld


def test_invalid_fields_rejected():
    with pytest.raises(ValueError):
        GroundField("prime", 6)
    with pytest.raises(ValueError):
        GroundField("reals", 0)


def test_cross_field_elements_rejected():
    F7, F11 = prime_field(7), prime_field(11)
    with pytest.raises(ValueError):
        F11(Fp(3, 7))
    assert F7(Fp(3, 7)) == F7(3)
