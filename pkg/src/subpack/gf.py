"""Prime fields GF(q) and extensions E = GF(q)[x]/(h) seen as GF(q)-vector spaces.

Extension elements are passed around as *raw* values for speed:

* q == 2: an int whose bit j is the coefficient of beta^j;
* q odd:  a tuple of l ints, position j holding the coefficient of beta^j.

Both encodings are little-endian in the powers of beta, which is also the order
used by every file format.  :class:`ExtElem` wraps a raw value together with its
field when operator syntax is more convenient.
"""

import math
import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import CompositeModulus, FieldDivisionByZero, NotABasis


def is_prime(q):
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    for d in range(3, math.isqrt(q) + 1, 2):
        if q % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise CompositeModulus("%d is not prime" % self.q)

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise FieldDivisionByZero("inverse of 0 in GF(%d)" % self.q)
        return pow(a, self.q - 2, self.q)

    def div(self, a, b):
        return self.mul(a, self.inv(b))


def build_prime_field(q):
    if q < 2:
        raise CompositeModulus("modulus must be >= 2, got %d" % q)
    return PrimeField(q)


# ---------------------------------------------------------------------------
# polynomial helpers over GF(2) (ints) and GF(q) (little-endian lists)

def _spread_byte(b):
    v = 0
    for k in range(8):
        if (b >> k) & 1:
            v |= 1 << (2 * k)
    return v.to_bytes(2, "little")


_SPREAD = [_spread_byte(b) for b in range(256)]


def gf2_sqr(a):
    """Carry-less square: interleave zero bits."""
    if not a:
        return 0
    nb = (a.bit_length() + 7) // 8
    return int.from_bytes(b"".join([_SPREAD[x] for x in a.to_bytes(nb, "little")]), "little")


def clmul(a, b):
    """Carry-less product of two GF(2) polynomials, 4-bit windowed."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    if b < 16:
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        return r
    table = [0, a]
    for t in range(2, 16):
        table.append(table[t >> 1] << 1 if t % 2 == 0 else table[t - 1] ^ a)
    r = 0
    top = (b.bit_length() + 3) // 4 * 4
    for pos in range(top - 4, -1, -4):
        r = (r << 4) ^ table[(b >> pos) & 15]
    return r


def gf2_mod(a, h):
    dh = h.bit_length()
    while a.bit_length() >= dh:
        a ^= h << (a.bit_length() - dh)
    return a


def gf2_gcd(a, b):
    while b:
        a, b = b, gf2_mod(a, b)
    return a


class _GF2Reducer:
    """Reduction modulo h, with a shift-xor fast path when h is sparse."""

    def __init__(self, h):
        self.h = h
        self.l = h.bit_length() - 1
        self.mask = (1 << self.l) - 1
        low = h & self.mask
        self.low_bits = [j for j in range(self.l) if (low >> j) & 1]
        self.sparse = len(self.low_bits) <= 8 and (not self.low_bits or self.low_bits[-1] < self.l)

    def __call__(self, x):
        l = self.l
        if not self.sparse:
            return gf2_mod(x, self.h)
        mask, low_bits = self.mask, self.low_bits
        while x >> l:
            hi = x >> l
            x &= mask
            for p in low_bits:
                x ^= hi << p
        return x


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim([c % q for c in out])


def _pmod(a, h, q):
    a = list(a)
    dh = len(h) - 1
    inv = pow(h[-1], q - 2, q)
    _ptrim(a)
    while len(a) - 1 >= dh:
        c = (a[-1] * inv) % q
        shift = len(a) - 1 - dh
        for j, y in enumerate(h):
            a[shift + j] = (a[shift + j] - c * y) % q
        _ptrim(a)
    return a


def _psub(a, b, q):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % q for x, y in zip(a, b)])


def _pgcd(a, b, q):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, q)
    return a


def _ppowmod(base, e, h, q):
    result = [1]
    base = _pmod(base, h, q)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, q), h, q)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, q), h, q)
    return result


def _pack2(coeffs):
    return sum((c & 1) << j for j, c in enumerate(coeffs))


def is_irreducible(q, h):
    """Ben-Or test: h (little-endian, monic) has no factor of degree <= deg(h)/2."""
    l = len(h) - 1
    if l < 1 or h[-1] % q != 1:
        return False
    if l == 1:
        return True
    if h[0] % q == 0:
        return False
    if q == 2:
        hp = _pack2(h)
        red = _GF2Reducer(hp)
        y = 2
        for _ in range(l // 2):
            y = red(gf2_sqr(y))
            if gf2_gcd(hp, y ^ 2) != 1:
                return False
        return True
    x = [0, 1]
    y = x
    for _ in range(l // 2):
        y = _ppowmod(y, q, h, q)
        g = _pgcd(h, _psub(y, x, q), q)
        if len(g) != 1:
            return False
    return True


def irreducible_poly(F, l, seed=0):
    """Deterministic seeded search for a monic irreducible of degree ``l`` over F.

    Low-weight candidates (one or three middle terms, all of degree <= l/2) are
    tried first because they make reduction cheap; dense candidates take over if
    the sparse search runs long.  Returns little-endian coefficients, length l+1.
    """
    if l < 1:
        raise ValueError("degree must be >= 1")
    q = F.q
    rng = random.Random(seed)
    if l == 1:
        return [rng.randrange(q), 1]
    attempt = 0
    while True:
        h = [0] * (l + 1)
        h[l] = 1
        h[0] = rng.randrange(1, q)
        if attempt < 64 * l:
            span = range(1, l // 2 + 1)
            nmid = min(rng.choice((1, 3)), len(span))
            for p in rng.sample(span, nmid):
                h[p] = rng.randrange(1, q)
        else:
            for p in range(1, l):
                h[p] = rng.randrange(q)
        attempt += 1
        if is_irreducible(q, h):
            return h


# ---------------------------------------------------------------------------
# extension fields

class ExtField:
    """E = F[x]/(h) with distinguished element beta = x mod h."""

    def __init__(self, base, h, verify=True):
        h = [int(c) % base.q for c in h]
        if len(h) < 2 or h[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if verify and not is_irreducible(base.q, h):
            raise ValueError("modulus is not irreducible over GF(%d)" % base.q)
        self.base = base
        self.q = base.q
        self.h = tuple(h)
        self.l = len(h) - 1

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.q, self.h) == (other.q, other.h)

    def __hash__(self):
        return hash((self.q, self.h))

    def __repr__(self):
        return "ExtField(q=%d, l=%d)" % (self.q, self.l)

    def __call__(self, value):
        return ExtElem(self, value)

    def descriptor(self):
        return {"q": self.q, "l": self.l, "h": list(self.h)}

    @property
    def order(self):
        return self.q ** self.l

    def pow(self, x, e):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, x)
            e >>= 1
            if e:
                x = self.mul(x, x)
        return result

    def inv(self, x):
        if self.is_zero(x):
            raise FieldDivisionByZero("inverse of 0 in GF(%d^%d)" % (self.q, self.l))
        return self.pow(x, self.q ** self.l - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def frobenius(self, x):
        return self.pow(x, self.q)

    def trace(self, x):
        """tr_{E/F}(x) = x + x^q + ... + x^{q^{l-1}} via repeated Frobenius maps."""
        acc = x
        y = x
        for _ in range(self.l - 1):
            y = self.frobenius(y)
            acc = self.add(acc, y)
        c = self.coeffs(acc)
        assert not any(c[1:]), "trace left the base field"
        return c[0]

    @cached_property
    def trace_vector(self):
        """[tr(beta^j)] for j < l from Newton's identities on h's coefficients."""
        q, l, h = self.q, self.l, self.h
        a = [0] + [h[l - i] for i in range(1, l + 1)]  # h = x^l + a_1 x^{l-1} + ... + a_l
        p = [l % q]
        for k in range(1, l):
            acc = k * a[k]
            for i in range(1, k):
                acc += a[i] * p[k - i]
            p.append((-acc) % q)
        return p

    def functional(self, gamma):
        """Vector g with tr(gamma * x) = dot(g, x) for every x (the map L_gamma)."""
        tv = self._trace_form
        out = []
        y = gamma
        for _ in range(self.l):
            out.append(linalg.dot(self.q, tv, y))
            y = self.mulx(y)
        return self.from_coeffs(out)

    def tr(self, x):
        """Trace through the precomputed linear form (agrees with :meth:`trace`)."""
        return linalg.dot(self.q, self._trace_form, x)

    @cached_property
    def _trace_form(self):
        return self.to_vector_coeffs(self.trace_vector)

    def dual_basis(self, basis):
        """Trace-dual basis of ``basis`` (raw values); NotABasis if dependent."""
        if len(basis) != self.l or linalg.rank(self.q, basis) != self.l:
            raise NotABasis("need %d elements independent over GF(%d)" % (self.l, self.q))
        rows = [self.functional(b) for b in basis]  # rows[i] . mu_k = tr(b_i mu_k)
        if self.q == 2:
            return linalg.inverse(2, linalg.transpose_bits(rows, self.l), self.l)
        cols = [tuple(r[j] for r in rows) for j in range(self.l)]
        return linalg.inverse(self.q, cols, self.l)

    def power_table(self, count):
        """[beta^0, ..., beta^{count-1}] by repeated multiplication by beta."""
        out = []
        y = self.one
        for _ in range(count):
            out.append(y)
            y = self.mulx(y)
        return out


class GF2Ext(ExtField):
    """Binary extension; raw values are ints."""

    def __init__(self, base, h, verify=True):
        super().__init__(base, h, verify)
        self.hpoly = _pack2(self.h)
        self._reduce = _GF2Reducer(self.hpoly)
        self._top = 1 << self.l
        self.zero = 0
        self.one = 1
        self.beta = 2 if self.l > 1 else self._reduce(2)

    def add(self, x, y):
        return x ^ y

    sub = add

    def neg(self, x):
        return x

    def scale(self, c, x):
        return x if c & 1 else 0

    def mul(self, x, y):
        return self._reduce(clmul(x, y))

    def square(self, x):
        return self._reduce(gf2_sqr(x))

    def mulx(self, x):
        x <<= 1
        if x & self._top:
            x ^= self.hpoly
        return x

    def pow(self, x, e):
        if e < 0:
            raise ValueError("negative exponent")
        result = 1
        for bit in bin(e)[2:]:
            result = self.square(result)
            if bit == "1":
                result = self.mul(result, x)
        return result

    def frobenius(self, x):
        return self.square(x)

    def is_zero(self, x):
        return x == 0

    def coeffs(self, x):
        return [(x >> j) & 1 for j in range(self.l)]

    def from_coeffs(self, coeffs):
        if len(coeffs) != self.l:
            raise ValueError("expected %d coefficients" % self.l)
        return _pack2(c % 2 for c in coeffs)

    def to_vector_coeffs(self, coeffs):
        return _pack2(c % 2 for c in coeffs)

    def validate(self, x):
        if not isinstance(x, int) or x < 0 or x >> self.l:
            raise ValueError("not an element of GF(2^%d): %r" % (self.l, x))
        return x

    def random(self, rng):
        return rng.getrandbits(self.l)

    def to_int(self, x):
        return x

    def from_int(self, v):
        return self.validate(v)


class GFqExt(ExtField):
    """Extension of an odd prime field; raw values are tuples of length l."""

    def __init__(self, base, h, verify=True):
        super().__init__(base, h, verify)
        l = self.l
        self.zero = (0,) * l
        self.one = (1,) + (0,) * (l - 1)
        if l > 1:
            self.beta = (0, 1) + (0,) * (l - 2)
        else:
            self.beta = ((-self.h[0]) % self.q,)
        self._hlist = list(self.h)
        # rows j: x^{l+j} mod h, so a length-(2l-1) product reduces as low + high @ red
        self._fast = l > 1 and 2 * l * self.q * self.q < 2 ** 62
        if self._fast:
            red = []
            cur = (0,) * (l - 1) + (1,)
            for _ in range(l - 1):
                cur = self.mulx(cur)
                red.append(cur)
            self._red = np.array(red, dtype=np.int64)

    def add(self, x, y):
        q = self.q
        return tuple((a + b) % q for a, b in zip(x, y))

    def sub(self, x, y):
        q = self.q
        return tuple((a - b) % q for a, b in zip(x, y))

    def neg(self, x):
        q = self.q
        return tuple((-a) % q for a in x)

    def scale(self, c, x):
        q = self.q
        return tuple((c * a) % q for a in x)

    def mul(self, x, y):
        if self._fast:
            q, l = self.q, self.l
            prod = np.convolve(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)) % q
            out = (prod[:l] + prod[l:] @ self._red) % q
            return tuple(out.tolist())
        prod = _pmod(_pmul(list(x), list(y), self.q), self._hlist, self.q)
        return tuple(prod) + (0,) * (self.l - len(prod))

    def mulx(self, x):
        q, h = self.q, self.h
        top = x[-1]
        shifted = (0,) + tuple(x[:-1])
        if not top:
            return shifted
        return tuple((a - top * b) % q for a, b in zip(shifted, h))

    def is_zero(self, x):
        return not any(x)

    def coeffs(self, x):
        return list(x)

    def from_coeffs(self, coeffs):
        if len(coeffs) != self.l:
            raise ValueError("expected %d coefficients" % self.l)
        return tuple(int(c) % self.q for c in coeffs)

    def to_vector_coeffs(self, coeffs):
        return tuple(int(c) % self.q for c in coeffs)

    def validate(self, x):
        x = tuple(x)
        if len(x) != self.l or any(not 0 <= c < self.q for c in x):
            raise ValueError("not an element of GF(%d^%d): %r" % (self.q, self.l, x))
        return x

    def random(self, rng):
        return tuple(rng.randrange(self.q) for _ in range(self.l))

    def to_int(self, x):
        """Pack as sum_j c_j q^j (used for hex serialisation)."""
        v = 0
        for c in reversed(x):
            v = v * self.q + c
        return v

    def from_int(self, v):
        out = []
        for _ in range(self.l):
            v, c = divmod(v, self.q)
            out.append(c)
        if v:
            raise ValueError("integer too large for GF(%d^%d)" % (self.q, self.l))
        return tuple(out)


def make_ext_field(F, h, verify=True):
    cls = GF2Ext if F.q == 2 else GFqExt
    return cls(F, h, verify)


def build_ext_field(F, l, seed=0):
    """Extension of degree l over F with a seeded irreducible modulus."""
    h = irreducible_poly(F, l, seed)
    return make_ext_field(F, h, verify=False)


class ExtElem:
    """An element of an :class:`ExtField` with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        if isinstance(value, list) or (field.q == 2 and isinstance(value, tuple)):
            value = field.from_coeffs(list(value))
        self.field = field
        self.value = field.validate(value)

    @property
    def coeffs(self):
        return self.field.coeffs(self.value)

    def _other(self, other):
        if isinstance(other, ExtElem):
            if other.field != self.field:
                raise ValueError("elements from different fields")
            return other.value
        return self.field.validate(other)

    def __add__(self, other):
        return ExtElem(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return ExtElem(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return ExtElem(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return ExtElem(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return ExtElem(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return ExtElem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, ExtElem):
            return self.field == other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.field.h, self.value))

    def __repr__(self):
        return "ExtElem(%s)" % self.coeffs

    def trace(self):
        return self.field.trace(self.value)


def ext_arith(op, x, y):
    """add | sub | mul | div on two elements of the same field."""
    ops = {"add": ExtElem.__add__, "sub": ExtElem.__sub__,
           "mul": ExtElem.__mul__, "div": ExtElem.__truediv__}
    if op not in ops:
        raise ValueError("unknown op %r" % op)
    return ops[op](x, y)


def ext_pow(x, e):
    return x ** e


def trace(x):
    return x.field.trace(x.value)


def dual_basis(B):
    if not B:
        raise NotABasis("empty basis")
    field = B[0].field
    return [ExtElem(field, v) for v in field.dual_basis([b.value for b in B])]


def rank_over_base(V):
    if not V:
        return 0
    field = V[0].field
    return linalg.rank(field.q, [v.value for v in V])
