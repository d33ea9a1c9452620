import random

import pytest

from tml.errors import FieldMismatch, ZeroDivisor
from tml.fields import (FieldTower, FiniteField, Poly, RatFunc, frobenius,
                        pth_root, ratfunc_substitute, substitute)


def test_prime_field_tables(f3):
    assert f3.add(2, 2) == 1
    assert f3.mul(2, 2) == 1
    assert f3.neg(1) == 2
    assert f3.sub(0, 1) == 2
    assert f3.inv(2) == 2
    assert f3.pow(2, 4) == 1


def test_extension_field_arithmetic():
    f4 = FiniteField(2, 2)
    # elements encode base-p digit vectors, so the generator is the int p,
    # and it generates the cyclic group of order 3
    g = f4.p
    assert f4.pow(g, 3) == 1
    assert f4.mul(g, f4.inv(g)) == 1
    for a in range(4):
        assert f4.pth_root(f4.mul(a, a)) == a


def test_field_constructor_rejects_bad_input():
    with pytest.raises(ValueError):
        FiniteField(4)
    with pytest.raises(ValueError):
        FiniteField(2, 2, modulus=(1, 0, 1))  # (x+1)^2 is reducible


def test_poly_divmod_round_trip(f3, rng):
    for _ in range(50):
        f = Poly(f3, [rng.randrange(3) for _ in range(6)])
        g = Poly(f3, [rng.randrange(3) for _ in range(3)] + [1])
        q, r = divmod(f, g)
        assert q * g + r == f
        assert r.is_zero() or r.degree < g.degree


def test_poly_gcd_and_monic(f2):
    t = Poly.gen(f2)
    one = Poly.one(f2)
    a = (t + one) * (t * t + t + one)
    b = (t + one) * t
    assert a.gcd(b) == t + one
    assert a.gcd(b).is_monic()


def test_poly_stretch_and_eval(f3):
    t = Poly.gen(f3)
    p = t * t + Poly.constant(f3, 2)
    assert p.stretch(3) == t ** 6 + Poly.constant(f3, 2)
    assert p.eval_elem(1) == 0


def test_poly_expr_round_trips_through_grammar(f2):
    from tml.manifest import poly_from_text
    t = Poly.gen(f2)
    for p in (t ** 5 + t + Poly.one(f2), Poly.zero(f2), Poly.one(f2), t):
        assert poly_from_text(f2, p.to_expr()) == p


def test_ratfunc_canonical_denominator(f3):
    t = Poly.gen(f3)
    two = Poly.constant(f3, 2)
    r = RatFunc(t, two * (t + two))
    assert r.den.is_monic()
    assert r * r.inverse() == RatFunc.one(f3)
    with pytest.raises(ZeroDivisor):
        RatFunc.zero(f3).inverse()


def test_ratfunc_frobenius_is_power(f3, rng):
    for _ in range(20):
        num = Poly(f3, [rng.randrange(3) for _ in range(4)])
        den = Poly(f3, [rng.randrange(3) for _ in range(3)] + [1])
        r = RatFunc(num, den)
        assert r.frob(1) == r * r * r
        assert r.frob(2) == (r * r * r).frob(1)


def test_tower_constants_and_generator(tower2):
    assert tower2.T().to_expr() == "T"
    assert tower2.one() - tower2.one() == tower2.zero()
    ext = tower2.extend("U", (tower2.zero() - tower2.T(),
                              tower2.zero(), tower2.one()))
    u = ext.gen()
    assert u * u == ext.T()
    assert ext.step_degree() == 2
    assert ext.total_degree() == 2
    assert ext.names() == ("U",)


def test_tower_extend_rejects_bad_moduli(tower2):
    with pytest.raises(Exception):
        tower2.extend("U", (tower2.T(),))  # too short
    with pytest.raises(Exception):
        tower2.extend("U", (tower2.T(), tower2.zero(),
                            tower2.T()))  # not monic


def test_tower_embed_and_from_ratfunc(tower2, rng):
    ext = tower2.extend("U", (tower2.zero() - tower2.T(),
                              tower2.zero(), tower2.one()))
    t = tower2.T()
    assert ext.embed(t) == ext.T()
    num = Poly(tower2.fq, (1, 1))
    den = Poly(tower2.fq, (0, 1))
    rf = RatFunc(num, den)
    assert ext.from_ratfunc(rf) == ext.embed(tower2.from_ratfunc(rf))
    with pytest.raises(FieldMismatch):
        t + ext.gen()


def test_frobenius_is_qth_power(tower3, rng):
    ext = tower3.extend("W", (tower3.zero() - tower3.T(),
                              tower3.zero(), tower3.one()))
    for _ in range(20):
        num = Poly(tower3.fq, [rng.randrange(3) for _ in range(3)])
        den = Poly(tower3.fq, [rng.randrange(3) for _ in range(2)] + [1])
        x = ext.from_ratfunc(RatFunc(num, den)) + ext.gen()
        assert x.frob(1) == x ** 3
        assert frobenius(x, 2) == (x ** 3) ** 3


def test_quotient_ring_zero_divisor(tower2):
    # modulus (V + T)^2: the coset of V + T squares to zero
    t = tower2.T()
    ext = tower2.extend("V", (t * t, tower2.zero(), tower2.one()))
    v = ext.gen()
    nil = v + ext.T()
    assert (nil * nil).is_zero()
    with pytest.raises(ZeroDivisor):
        nil.inverse()


def test_tower_inverse_round_trip(tower2, rng):
    ext = tower2.extend("U", (tower2.zero() - tower2.T(),
                              tower2.zero(), tower2.one()))
    for _ in range(20):
        num = Poly(tower2.fq, [rng.randrange(2) for _ in range(3)])
        den = Poly(tower2.fq, [rng.randrange(2) for _ in range(2)] + [1])
        x = ext.from_ratfunc(RatFunc(num, den)) + ext.gen()
        if x.is_zero():
            continue
        assert x * x.inverse() == ext.one()


def test_pth_root_inverts_squaring(tower2, rng):
    ext = tower2.extend("U", (tower2.zero() - tower2.T(),
                              tower2.zero(), tower2.one()))
    for _ in range(20):
        num = Poly(tower2.fq, [rng.randrange(2) for _ in range(3)])
        den = Poly(tower2.fq, [rng.randrange(2) for _ in range(2)] + [1])
        x = ext.from_ratfunc(RatFunc(num, den)) + ext.gen()
        assert pth_root(x * x) == x
    assert pth_root(tower2.T()) is None


def test_flatten_unflatten_round_trip(tower2, rng):
    ext = tower2.extend("U", (tower2.zero() - tower2.T(),
                              tower2.zero(), tower2.one()))
    x = ext.gen() + ext.T()
    vec = ext.flatten(x)
    assert len(vec) == 2
    assert ext.unflatten(vec) == x


def test_substitute_polynomial_at_tower_element(tower2):
    t = tower2.T()
    p = Poly(tower2.fq, (1, 0, 1))  # 1 + T^2
    assert substitute(p, t) == tower2.one() + t * t
    rf = RatFunc(Poly.one(tower2.fq), Poly(tower2.fq, (0, 1)))
    assert ratfunc_substitute(rf, t) == t.inverse()
