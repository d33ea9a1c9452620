"""Exact arithmetic over F_q, the ring F_q[T], the field F_q(T), and
explicit towers of finite extensions on top of it.

Elements of F_q are plain ints in [0, q) packing the polynomial-basis
coefficients base p.  Polynomials are dense coefficient tuples, lowest
degree first, with no trailing zeros.  Rational functions keep a monic,
coprime denominator at all times.  Tower elements are nested reduced
polynomials in the step generators.
"""

from __future__ import annotations

from .errors import FieldMismatch, ZeroDivisor

DEFAULT_P_LIMIT = 13
DEFAULT_E_LIMIT = 4


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p with int-tuple coefficients, used only for moduli


def _fp_strip(c):
    k = len(c)
    while k and c[k - 1] == 0:
        k -= 1
    return tuple(c[:k])


def _fp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_strip(out)


def _fp_mod(a, b, p):
    # remainder of a by b, b monic-normalized on the fly
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] * inv_lead % p
        off = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[off + i] = (a[off + i] - f * bi) % p
        a.pop()
    return _fp_strip(a)


def _fp_is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree at most deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for k in range(p ** d):
            div = _digits(k, p, d) + (1,)
            if not _fp_mod(poly, div, p):
                return False
    return True


def _digits(n, p, width):
    out = []
    for _ in range(width):
        out.append(n % p)
        n //= p
    return tuple(out)


def _undigits(digits, p):
    n = 0
    for d in reversed(digits):
        n = n * p + d
    return n


class FiniteField:
    """F_q with q = p**e in a polynomial basis over the prime field.

    An element sum(c_i * gen**i) is encoded as the int sum(c_i * p**i).
    The defining modulus is the first monic irreducible of degree e in
    lexicographic coefficient order unless one is supplied.
    """

    __slots__ = ("p", "e", "q", "modulus", "gen_name", "key", "_mul_table",
                 "_inv_table", "_high_red")

    def __init__(self, p, e=1, modulus=None, gen_name=None,
                 limits=(DEFAULT_P_LIMIT, DEFAULT_E_LIMIT)):
        if not _is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if e < 1:
            raise ValueError(f"e must be positive, got {e}")
        if limits is not None:
            pl, el = limits
            if p > pl or e > el:
                raise ValueError(f"field size out of configured range: p={p}, e={e}")
        self.p = p
        self.e = e
        self.q = p ** e
        if modulus is None:
            modulus = self._find_modulus(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if e > 1 and not _fp_is_irreducible(modulus, p):
                raise ValueError("modulus is reducible")
        self.modulus = modulus
        if gen_name is None and e > 1:
            gen_name = "g"
        self.gen_name = gen_name
        self.key = (p, e, modulus)
        self._mul_table = None
        self._inv_table = None
        # reductions of gen**e .. gen**(2e-2) as encoded ints
        self._high_red = None

    @staticmethod
    def _find_modulus(p, e):
        if e == 1:
            return (0, 1)
        for k in range(p ** e):
            cand = _digits(k, p, e) + (1,)
            if _fp_is_irreducible(cand, p):
                return cand
        raise AssertionError("no irreducible modulus found")

    # -- encoded element helpers

    def elem(self, n: int) -> int:
        """An integer literal, reduced into the prime subfield."""
        return int(n) % self.p

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        da = _digits(a, p, self.e)
        db = _digits(b, p, self.e)
        return _undigits(tuple((x + y) % p for x, y in zip(da, db)), p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        return _undigits(tuple((-x) % p for x in _digits(a, p, self.e)), p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if self.q <= 256:
            if self._mul_table is None:
                self._build_tables()
            return self._mul_table[a][b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a, b):
        p, e = self.p, self.e
        da = _digits(a, p, e)
        db = _digits(b, p, e)
        conv = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        if self._high_red is None:
            red = []
            for k in range(e, 2 * e - 1):
                mono = (0,) * k + (1,)
                red.append(_fp_mod(mono, self.modulus, p))
            self._high_red = tuple(red)
        out = list(conv[:e])
        for k in range(e, 2 * e - 1):
            c = conv[k]
            if c:
                for i, r in enumerate(self._high_red[k - e]):
                    out[i] = (out[i] + c * r) % p
        return _undigits(out, p)

    def _build_tables(self):
        q = self.q
        self._mul_table = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = self.pow(a, q - 2)
        self._inv_table = inv

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisor("inverse of zero in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self.q <= 256:
            if self._inv_table is None:
                self._build_tables()
            return self._inv_table[a]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, n: int) -> int:
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def pth_root(self, a: int) -> int:
        """The unique b with b**p == a; F_q is perfect."""
        return self.pow(a, self.p ** (self.e - 1))

    def fmt(self, a: int) -> str:
        """Canonical expression string for an encoded element."""
        if self.e == 1:
            return str(a)
        name = self.gen_name
        digits = _digits(a, self.p, self.e)
        terms = []
        for i in reversed(range(self.e)):
            c = digits[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = name if i == 1 else f"{name}^{i}"
                terms.append(var if c == 1 else f"{c}*{var}")
        return "+".join(terms) if terms else "0"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FiniteField(p={self.p}, e={self.e})"


# ---------------------------------------------------------------------------
# packed-bit helpers for polynomials over F_2 (the hot case)


def _gf2_pack(coeffs):
    n = 0
    for i, c in enumerate(coeffs):
        if c:
            n |= 1 << i
    return n


def _gf2_unpack(n):
    if n == 0:
        return ()
    return tuple((n >> i) & 1 for i in range(n.bit_length()))


def _gf2_mul(a, b):
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _gf2_divmod(a, b):
    db = b.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= db:
        sh = a.bit_length() - 1 - db
        q |= 1 << sh
        a ^= b << sh
    return q, a


def _gf2_gcd(a, b):
    while b:
        a, b = b, _gf2_divmod(a, b)[1]
    return a


class Poly:
    """Dense polynomial in T over F_q; coefficients low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        k = len(coeffs)
        while k and coeffs[k - 1] == 0:
            k -= 1
        self.field = field
        self.coeffs = tuple(coeffs[:k])

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def gen(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c,) if c else ())

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly(f, out)

    def __neg__(self):
        f = self.field
        if f.p == 2:
            return self
        return Poly(f, tuple(f.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(f)
        if f.p == 2 and f.e == 1:
            return Poly(f, _gf2_unpack(_gf2_mul(_gf2_pack(a), _gf2_pack(b))))
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Poly(f, out)

    def scale(self, c: int):
        f = self.field
        if c == 0:
            return Poly.zero(f)
        if c == 1:
            return self
        return Poly(f, tuple(f.mul(a, c) for a in self.coeffs))

    def __pow__(self, n: int):
        out = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        self._check(other)
        f = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if f.p == 2 and f.e == 1:
            q, r = _gf2_divmod(_gf2_pack(self.coeffs), _gf2_pack(other.coeffs))
            return Poly(f, _gf2_unpack(q)), Poly(f, _gf2_unpack(r))
        rem = list(self.coeffs)
        db = other.degree
        qc = [0] * max(len(rem) - db, 0)
        inv_lead = f.inv(other.lc())
        while len(rem) - 1 >= db and rem:
            if rem[-1] == 0:
                rem.pop()
                continue
            c = f.mul(rem[-1], inv_lead)
            off = len(rem) - 1 - db
            qc[off] = c
            for i, bi in enumerate(other.coeffs):
                rem[off + i] = f.sub(rem[off + i], f.mul(c, bi))
            rem.pop()
        return Poly(f, qc), Poly(f, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divexact(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def gcd(self, other):
        """Monic greatest common divisor."""
        self._check(other)
        f = self.field
        if f.p == 2 and f.e == 1:
            g = _gf2_gcd(_gf2_pack(self.coeffs), _gf2_pack(other.coeffs))
            return Poly(f, _gf2_unpack(g))
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.scale(f.inv(a.lc()))

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        return self.scale(self.field.inv(self.lc()))

    def stretch(self, k: int):
        """Substitute T -> T**k; with k = q**i this is the i-fold Frobenius."""
        if k == 1 or self.is_zero():
            return self
        out = [0] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly(self.field, out)

    def eval_elem(self, x: int) -> int:
        """Horner evaluation at an encoded F_q element."""
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.key, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def to_expr(self) -> str:
        """Canonical expression string, highest degree first."""
        if not self.coeffs:
            return "0"
        f = self.field
        terms = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = f.fmt(c)
            if i == 0:
                terms.append(cs)
                continue
            var = "T" if i == 1 else f"T^{i}"
            if c == 1:
                terms.append(var)
            elif "+" in cs:
                terms.append(f"({cs})*{var}")
            else:
                terms.append(f"{cs}*{var}")
        return "+".join(terms)

    def __repr__(self):
        return f"Poly({self.to_expr()})"


class RatFunc:
    """Element of F_q(T) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, trusted=False):
        if trusted:
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.field != den.field:
            raise FieldMismatch("numerator and denominator over different fields")
        f = num.field
        if num.is_zero():
            self.num = num
            self.den = Poly.one(f)
            return
        if den.degree == 0:
            c = f.inv(den.coeffs[0])
            self.num = num.scale(c)
            self.den = Poly.one(f)
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num.divexact(g)
            den = den.divexact(g)
        if not den.is_monic():
            c = f.inv(den.lc())
            num = num.scale(c)
            den = den.scale(c)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p, Poly.one(p.field), trusted=True)

    @classmethod
    def zero(cls, field):
        return cls.from_poly(Poly.zero(field))

    @classmethod
    def one(cls, field):
        return cls.from_poly(Poly.one(field))

    @classmethod
    def gen(cls, field):
        return cls.from_poly(Poly.gen(field))

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other):
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.num * other.num, self.den * other.den)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisor("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n: int):
        return RatFunc(self.num ** n, self.den ** n)

    def frob(self, i: int = 1):
        """The q**i power; on F_q(T) this just stretches exponents."""
        if i == 0 or self.is_zero():
            return self
        k = self.field.q ** i
        return RatFunc(self.num.stretch(k), self.den.stretch(k), trusted=True)

    def graded_root_parts(self):
        """p-th roots of the components of x over the subfield of p-th powers.

        F_q(T) is free over its subfield of p-th powers with basis
        1, T, ..., T**(p-1).  Returns (r_0, ..., r_{p-1}) with
        x = sum(r_i**p * T**i); every component of the decomposition is a
        p-th power, so the roots always exist.
        """
        f = self.field
        p = f.p
        num = self.num * self.den ** (p - 1)
        parts = []
        for r in range(p):
            root_coeffs = {}
            for i, c in enumerate(num.coeffs):
                if c and i % p == r:
                    root_coeffs[(i - r) // p] = f.pth_root(c)
            if root_coeffs:
                size = max(root_coeffs) + 1
                cs = [0] * size
                for k, v in root_coeffs.items():
                    cs[k] = v
                parts.append(RatFunc(Poly(f, cs), self.den))
            else:
                parts.append(RatFunc.zero(f))
        return tuple(parts)

    def pth_root(self):
        """The y with y**p == x, or None when x is not a p-th power."""
        parts = self.graded_root_parts()
        if any(not parts[r].is_zero() for r in range(1, len(parts))):
            return None
        return parts[0]

    def __eq__(self, other):
        return (isinstance(other, RatFunc) and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def to_expr(self) -> str:
        if self.is_poly():
            return self.num.to_expr()
        return f"({self.num.to_expr()})/({self.den.to_expr()})"

    def __repr__(self):
        return f"RatFunc({self.to_expr()})"


class FieldTower:
    """F_q(T) with a chain of named quotient-ring extension steps.

    Each step adjoins a generator with a monic defining polynomial of
    degree at least two over the previous level.  Defining polynomials
    are not checked for irreducibility; a reducible one surfaces later
    as a ZeroDivisor raised from some inversion.
    """

    __slots__ = ("fq", "parent", "name", "modulus", "depth", "_frob_gen",
                 "_basis_pow_cache", "_key")

    def __init__(self, fq: FiniteField, _parent=None, _name=None, _modulus=None):
        self.fq = fq
        self.parent = _parent
        self.name = _name
        self.modulus = _modulus
        self.depth = 0 if _parent is None else _parent.depth + 1
        self._frob_gen = None
        self._basis_pow_cache = None
        if _parent is None:
            self._key = (fq.key,)
        else:
            self._key = _parent._key + ((_name, tuple(c.data_key() for c in _modulus)),)

    def extend(self, name: str, modulus_coeffs) -> "FieldTower":
        """A new tower with one more step.

        modulus_coeffs lists the full monic defining polynomial over this
        tower, constant term first, leading coefficient one.
        """
        coeffs = tuple(modulus_coeffs)
        if len(coeffs) < 3:
            raise ValueError("defining polynomial must have degree at least 2")
        for c in coeffs:
            if not isinstance(c, TowerElement) or c.tower != self:
                raise FieldMismatch("modulus coefficients must live in the parent tower")
        if coeffs[-1] != self.one():
            raise ValueError("defining polynomial must be monic")
        if name == "T" or name in self.names() or name == self.fq.gen_name:
            raise ValueError(f"generator name {name!r} already in use")
        return FieldTower(self.fq, _parent=self, _name=name, _modulus=coeffs)

    def names(self):
        out = []
        t = self
        while t.parent is not None:
            out.append(t.name)
            t = t.parent
        out.reverse()
        return tuple(out)

    def step_degree(self) -> int:
        return len(self.modulus) - 1 if self.parent is not None else 1

    def total_degree(self) -> int:
        d = 1
        t = self
        while t.parent is not None:
            d *= t.step_degree()
            t = t.parent
        return d

    def base(self) -> "FieldTower":
        t = self
        while t.parent is not None:
            t = t.parent
        return t

    def ancestors(self):
        out = []
        t = self
        while t is not None:
            out.append(t)
            t = t.parent
        out.reverse()
        return out

    def extends(self, other: "FieldTower") -> bool:
        return self._key[:len(other._key)] == other._key

    # -- element constructors

    def element(self, data) -> "TowerElement":
        return TowerElement(self, data)

    def zero(self):
        if self.parent is None:
            return TowerElement(self, RatFunc.zero(self.fq))
        d = self.step_degree()
        z = self.parent.zero()
        return TowerElement(self, (z,) * d)

    def one(self):
        return self.from_ratfunc(RatFunc.one(self.fq))

    def T(self):
        return self.from_ratfunc(RatFunc.gen(self.fq))

    def const(self, c: int):
        """Embed an encoded F_q element."""
        return self.from_ratfunc(RatFunc.from_poly(Poly.constant(self.fq, c)))

    def from_ratfunc(self, rf: RatFunc):
        if rf.field != self.fq:
            raise FieldMismatch("rational function over a different F_q")
        if self.parent is None:
            return TowerElement(self, rf)
        below = self.parent.from_ratfunc(rf)
        d = self.step_degree()
        pz = self.parent.zero()
        return TowerElement(self, (below,) + (pz,) * (d - 1))

    def gen(self):
        """The generator adjoined by the top step."""
        if self.parent is None:
            return self.T()
        d = self.step_degree()
        pz = self.parent.zero()
        po = self.parent.one()
        data = [pz] * d
        data[1] = po
        return TowerElement(self, tuple(data))

    def embed(self, elem: "TowerElement") -> "TowerElement":
        """Lift an element of an ancestor tower into this one."""
        if elem.tower == self:
            return elem
        if not self.extends(elem.tower):
            raise FieldMismatch("element does not live below this tower")
        chain = self.ancestors()
        cur = elem
        for step in chain[len(elem.tower.ancestors()):]:
            d = step.step_degree()
            pz = step.parent.zero()
            cur = TowerElement(step, (cur,) + (pz,) * (d - 1))
        return cur

    def frob_gen(self):
        """gen**q reduced, cached; drives the Frobenius at this level."""
        if self._frob_gen is None:
            self._frob_gen = self.gen() ** self.fq.q
        return self._frob_gen

    # -- flattening over the base field k = F_q(T)

    def flatten(self, elem: "TowerElement"):
        """Coordinates of elem in the monomial basis over the base field."""
        if self.parent is None:
            return [elem.data]
        out = []
        for c in elem.data:
            out.extend(self.parent.flatten(c))
        return out

    def unflatten(self, vec):
        """Inverse of flatten; vec is a list of RatFunc of full length."""
        if self.parent is None:
            assert len(vec) == 1
            return TowerElement(self, vec[0])
        d = self.step_degree()
        block = len(vec) // d
        parts = tuple(self.parent.unflatten(vec[i * block:(i + 1) * block])
                      for i in range(d))
        return TowerElement(self, parts)

    def basis_pth_powers(self):
        """Flattened p-th powers of the monomial basis elements, cached."""
        if self._basis_pow_cache is None:
            p = self.fq.p
            mons = self._basis_monomials()
            self._basis_pow_cache = [self.flatten(m ** p) for m in mons]
        return self._basis_pow_cache

    def _basis_monomials(self):
        if self.parent is None:
            return [self.one()]
        below = self.parent._basis_monomials()
        g = self.gen()
        out = []
        gp = self.one()
        for j in range(self.step_degree()):
            for b in below:
                out.append(gp * self.embed(b))
            gp = gp * g
        return out

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        steps = ", ".join(self.names())
        return f"FieldTower(q={self.fq.q}" + (f"; {steps})" if steps else ")")


class TowerElement:
    """Element of a FieldTower in nested reduced representation."""

    __slots__ = ("tower", "data")

    def __init__(self, tower, data):
        self.tower = tower
        self.data = data

    def data_key(self):
        if self.tower.parent is None:
            return (self.data.num.coeffs, self.data.den.coeffs)
        return tuple(c.data_key() for c in self.data)

    def _check(self, other):
        if not isinstance(other, TowerElement) or self.tower != other.tower:
            raise FieldMismatch("tower elements from different towers")

    def is_zero(self) -> bool:
        if self.tower.parent is None:
            return self.data.is_zero()
        return all(c.is_zero() for c in self.data)

    def zero(self):
        return self.tower.zero()

    def one(self):
        return self.tower.one()

    def __add__(self, other):
        self._check(other)
        if self.tower.parent is None:
            return TowerElement(self.tower, self.data + other.data)
        return TowerElement(self.tower,
                            tuple(a + b for a, b in zip(self.data, other.data)))

    def __neg__(self):
        if self.tower.parent is None:
            return TowerElement(self.tower, -self.data)
        return TowerElement(self.tower, tuple(-c for c in self.data))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        t = self.tower
        if t.parent is None:
            return TowerElement(t, self.data * other.data)
        d = t.step_degree()
        a, b = self.data, other.data
        pz = t.parent.zero()
        conv = [pz] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai.is_zero():
                for j, bj in enumerate(b):
                    if not bj.is_zero():
                        conv[i + j] = conv[i + j] + ai * bj
        mod = t.modulus
        for top in range(2 * d - 2, d - 1, -1):
            c = conv[top]
            if not c.is_zero():
                off = top - d
                for i in range(d):
                    conv[off + i] = conv[off + i] - c * mod[i]
            conv[top] = pz
        return TowerElement(t, tuple(conv[:d]))

    def scale_fq(self, c: int):
        return self * self.tower.const(c)

    def __pow__(self, n: int):
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        """Extended Euclid against the defining polynomial at each level."""
        t = self.tower
        if t.parent is None:
            return TowerElement(t, self.data.inverse())
        if self.is_zero():
            raise ZeroDivisor("inverse of zero tower element", self)
        # work in parent[x]: r0 = modulus, r1 = self, track s with s*self = r mod modulus
        r0 = list(t.modulus)
        r1 = list(self.data)
        pz, po = t.parent.zero(), t.parent.one()
        s0 = [pz]
        s1 = [po]

        def _deg(v):
            d = len(v) - 1
            while d >= 0 and v[d].is_zero():
                d -= 1
            return d

        def _sub_scaled(u, v, c, shift):
            out = list(u)
            need = shift + len(v)
            while len(out) < need:
                out.append(pz)
            for i, vi in enumerate(v):
                out[shift + i] = out[shift + i] - c * vi
            return out

        while True:
            d1 = _deg(r1)
            if d1 < 0:
                raise ZeroDivisor("defining polynomial is reducible", self)
            if d1 == 0:
                c = r1[0].inverse()
                return self._from_coeffs([c * s for s in s1])
            d0 = _deg(r0)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            lead1 = r1[d1]
            inv_lead = lead1.inverse()
            c = r0[d0] * inv_lead
            r0 = _sub_scaled(r0, r1, c, d0 - d1)
            s0 = _sub_scaled(s0, s1, c, d0 - d1)
            if _deg(r0) < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0

    def _from_coeffs(self, coeffs):
        """Build an element of this level from parent coefficients (mod reduce)."""
        t = self.tower
        d = t.step_degree()
        pz = t.parent.zero()
        work = list(coeffs)
        mod = t.modulus
        for top in range(len(work) - 1, d - 1, -1):
            c = work[top]
            if not c.is_zero():
                off = top - d
                for i in range(d):
                    work[off + i] = work[off + i] - c * mod[i]
            work.pop()
        while len(work) < d:
            work.append(pz)
        return TowerElement(t, tuple(work))

    def __truediv__(self, other):
        return self * other.inverse()

    def frob(self, i: int = 1):
        """The q**i power, computed as a ring homomorphism."""
        if i == 0:
            return self
        t = self.tower
        if t.parent is None:
            return TowerElement(t, self.data.frob(i))
        out = self
        for _ in range(i):
            out = out._frob_once()
        return out

    def _frob_once(self):
        t = self.tower
        w = t.frob_gen()
        acc = t.zero()
        for c in reversed(self.data):
            acc = acc * w + t.embed(c._frob_once() if c.tower.parent is not None
                                    else TowerElement(c.tower, c.data.frob(1)))
        return acc

    def __eq__(self, other):
        if not isinstance(other, TowerElement) or self.tower != other.tower:
            return False
        return self.data == other.data

    def __hash__(self):
        return hash((self.tower._key, self.data_key()))

    def __bool__(self):
        return not self.is_zero()

    def to_expr(self) -> str:
        t = self.tower
        if t.parent is None:
            return self.data.to_expr()
        if self.is_zero():
            return "0"
        terms = []
        for i in reversed(range(len(self.data))):
            c = self.data[i]
            if c.is_zero():
                continue
            cs = c.to_expr()
            if i == 0:
                terms.append(cs)
                continue
            var = t.name if i == 1 else f"{t.name}^{i}"
            if cs == "1":
                terms.append(var)
            elif "+" in cs:
                terms.append(f"({cs})*{var}")
            else:
                terms.append(f"{cs}*{var}")
        return "+".join(terms)

    def __repr__(self):
        return f"TowerElement({self.to_expr()})"


def frobenius(x: TowerElement, i: int = 1) -> TowerElement:
    """x**(q**i), the i-fold twist."""
    if i < 0:
        raise ValueError("negative Frobenius power")
    return x.frob(i)


def pth_root(x: TowerElement):
    """The y in the same tower with y**p == x, or None when absent.

    At the base level the monomial-exponent test applies directly.  At an
    extension level the candidate root is written in the monomial basis,
    its p-th power becomes a linear system in the base-level coordinates
    after splitting along the basis 1, T, ..., T**(p-1) of F_q(T) over its
    subfield of p-th powers, and the system is solved exactly.
    """
    tower = x.tower
    if tower.parent is None:
        r = x.data.pth_root()
        return None if r is None else TowerElement(tower, r)
    p = tower.fq.p
    base = tower.base()
    gvecs = tower.basis_pth_powers()
    xs = tower.flatten(x)
    dim = len(gvecs)
    rows = []
    rhs = []
    for i in range(dim):
        xparts = xs[i].graded_root_parts()
        gparts = [gvecs[j][i].graded_root_parts() for j in range(dim)]
        for r in range(p):
            rows.append([TowerElement(base, gparts[j][r]) for j in range(dim)])
            rhs.append(TowerElement(base, xparts[r]))
    from .linalg import gauss_solve
    sol = gauss_solve(base, rows, rhs)
    if sol is None:
        return None
    y = tower.unflatten([c.data for c in sol])
    assert y ** p == x
    return y


def substitute(poly: Poly, value: TowerElement) -> TowerElement:
    """Evaluate a base polynomial at a tower element."""
    t = value.tower
    acc = t.zero()
    for c in reversed(poly.coeffs):
        acc = acc * value + t.const(c)
    return acc


def ratfunc_substitute(rf: RatFunc, value: TowerElement) -> TowerElement:
    """Evaluate a rational function at a tower element (denominator must not vanish)."""
    num = substitute(rf.num, value)
    den = substitute(rf.den, value)
    return num * den.inverse()
