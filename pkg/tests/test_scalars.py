import random
from fractions import Fraction

import pytest

from gentlecones.scalars import (CycloScalar, FieldCtx, IrrationalRoot, OrderMismatch, SymbolicRoot,
                                 kth_root, parse_scalar, primitive_unity_root, required_order)


def test_normal_form():
    assert CycloScalar.of(-3) == CycloScalar(Fraction(3), Fraction(1, 2))
    assert str(CycloScalar.of(-3)) == "-3"
    assert str(CycloScalar.of(3, 4, 1)) == "3*z(4)^1"
    assert CycloScalar.of(2, 4, 5) == CycloScalar.of(2, 4, 1)


@pytest.mark.parametrize("text", ["1", "-1", "36", "2/3", "-2/3", "3*z(4)^1", "z(3)^2", "5*z(12)^7"])
def test_parse_round_trip(text):
    s = parse_scalar(text)
    assert parse_scalar(str(s)) == s


def test_parse_rejects():
    for bad in ["", "abc", "1+", "z(0)"]:
        with pytest.raises(ValueError):
            parse_scalar(bad)


def test_group_laws():
    a, b = parse_scalar("-2/3"), parse_scalar("3*z(4)^1")
    assert a * a.inverse() == CycloScalar.of(1)
    assert (a * b) / b == a
    assert b ** 4 == CycloScalar.of(81)
    assert -(-a) == a


def test_kth_root():
    assert kth_root(CycloScalar.of(-9), 2) == parse_scalar("3*z(4)^1")
    r = kth_root(CycloScalar.of(-1), 3)
    assert r ** 3 == CycloScalar.of(-1)
    with pytest.raises(IrrationalRoot):
        kth_root(CycloScalar.of(2), 2)
    assert primitive_unity_root(3) ** 3 == CycloScalar.of(1)


def test_required_order():
    assert required_order([CycloScalar.of(-1), parse_scalar("z(3)^1")]) == 6
    assert required_order([SymbolicRoot(CycloScalar.of(-2), 2)]) == 4


def test_prime_embedding_is_multiplicative():
    F = FieldCtx.default_prime(12).field
    rng = random.Random(0)
    pool = [parse_scalar(t) for t in ["2", "-1/3", "z(12)^5", "4*z(3)^1", "-7*z(4)^3"]]
    for _ in range(30):
        a, b = rng.choice(pool), rng.choice(pool)
        assert F.embed(a * b) == F.mul(F.embed(a), F.embed(b))
    assert F.embed(primitive_unity_root(12)) != 1
    assert pow(F.embed(primitive_unity_root(12)), 12, F.p) == 1


def test_cyclotomic_embedding():
    F = FieldCtx.cyclotomic(4).field
    i = F.embed(parse_scalar("z(4)^1"))
    assert F.mul(i, i) == F.embed(CycloScalar.of(-1))
    assert F.mul(F.inv(i), i) == F.one
    with pytest.raises(IrrationalRoot):
        F.embed(SymbolicRoot(CycloScalar.of(2), 2))


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        FieldCtx.prime(7, 4)
    F = FieldCtx.prime(7, 2).field
    with pytest.raises(OrderMismatch):
        F.embed(parse_scalar("z(3)^1"))


def test_symbolic_roots():
    s = SymbolicRoot(CycloScalar.of(6), 2, 1)
    ctx = FieldCtx.default_prime(required_order([s]), symbolic=[s])
    F = ctx.field
    x = F.embed(s)
    assert F.mul(x, x) == F.embed(CycloScalar.of(6))
    assert F.mul(x, F.embed(s.inverse())) == 1
    both = {F.embed(SymbolicRoot(CycloScalar.of(6), 2, t)) for t in range(2)}
    assert len(both) == 2
