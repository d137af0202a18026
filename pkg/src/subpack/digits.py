"""s-ary index combinatorics shared by both constructions.

Everything is 0-based: digit position j carries weight s^j, and node i reads the
m-digit window at positions i .. i+m-1.  Tuples of window digits are written
high digit first, ``(w_m, ..., w_1)``, so ``(0, 1)`` puts a 1 at position i.
"""

from dataclasses import dataclass
from itertools import product

from .errors import BadDistance, DegenerateParams, NotConstant, OutOfRange


@dataclass(frozen=True)
class IndexLayout:
    """Radix, window width and node count: all the digit helpers need."""

    s: int
    m: int
    n: int

    def __post_init__(self):
        if self.s < 2:
            raise DegenerateParams("radix s must be >= 2 (got %d)" % self.s)
        if self.m < 1:
            raise DegenerateParams("m must be >= 1 (got %d)" % self.m)
        if self.n < 1:
            raise DegenerateParams("n must be >= 1 (got %d)" % self.n)

    @property
    def group(self):
        """s^m: the number of coordinates repaired together."""
        return self.s ** self.m

    @property
    def ndigits(self):
        return self.m + self.n - 1

    @property
    def l(self):
        return self.s ** self.ndigits


@dataclass(frozen=True)
class CodeParams(IndexLayout):
    k: int

    def __post_init__(self):
        super().__post_init__()
        if not 1 <= self.k < self.n:
            raise DegenerateParams("need 1 <= k < n (got n=%d, k=%d)" % (self.n, self.k))
        if self.s ** self.m > self.n - self.k:
            raise DegenerateParams(
                "need s^m <= n-k (s^m=%d, n-k=%d)" % (self.s ** self.m, self.n - self.k))

    @property
    def r(self):
        return self.n - self.k

    @property
    def exact_power(self):
        return self.group == self.r

    def as_dict(self):
        return {"s": self.s, "m": self.m, "n": self.n, "k": self.k, "r": self.r, "l": self.l}


def _check_index(a, p):
    if not 0 <= a < p.l:
        raise OutOfRange("index %d outside [0, %d]" % (a, p.l - 1))


def _check_node(i, p):
    if not 0 <= i < p.n:
        raise OutOfRange("node %d outside [0, %d]" % (i, p.n - 1))


def expand(a, p):
    """Digits of a, position j holding the coefficient of s^j."""
    _check_index(a, p)
    out = []
    for _ in range(p.ndigits):
        a, d = divmod(a, p.s)
        out.append(d)
    return out


def fold(digits, s):
    v = 0
    for d in reversed(digits):
        v = v * s + d
    return v


def window(a, i, p):
    """The m digits of a at positions i..i+m-1, read as an integer."""
    _check_index(a, p)
    _check_node(i, p)
    return (a // p.s ** i) % p.group


def _tuple_value(w, s):
    # (w_m, ..., w_1), high digit first
    v = 0
    for d in w:
        if not 0 <= d < s:
            raise OutOfRange("digit %d outside [0, %d]" % (d, s - 1))
        v = v * s + d
    return v


def substitute(a, i, w, p):
    """a(i; w_m, ..., w_1): replace the window of node i by the digits w."""
    _check_index(a, p)
    _check_node(i, p)
    if len(w) != p.m:
        raise OutOfRange("expected %d window digits, got %d" % (p.m, len(w)))
    base = p.s ** i
    return a - window(a, i, p) * base + _tuple_value(w, p.s) * base


def group_set(a, i, p):
    """S_{a,i}: all s^m substitutions at node i's window, ascending."""
    _check_index(a, p)
    _check_node(i, p)
    base = p.s ** i
    rep = a - window(a, i, p) * base
    return [rep + x * base for x in range(p.group)]


def si_set(i, p):
    """S_i: indices whose window at node i is all zeros."""
    _check_node(i, p)
    base = p.s ** i
    span = base * p.group
    return [hi * span + lo for hi in range(p.l // span) for lo in range(base)]


def _distance(j, i, p):
    _check_node(i, p)
    _check_node(j, p)
    return abs(j - i)


def t_set(a, j, i, b, p):
    """T_{a,j,i}(b): the part of S_{a,i} on which near helper j reads one window.

    For j > i the b digits fill the top m-w window positions and the low w vary;
    for j < i the b digits fill the low m-w positions and the top w vary.
    """
    w = _distance(j, i, p)
    if not 0 < w < p.m:
        raise BadDistance("t_set needs 0 < |j-i| < m (got %d)" % w)
    if len(b) != p.m - w:
        raise OutOfRange("expected %d b digits, got %d" % (p.m - w, len(b)))
    bval = _tuple_value(b, p.s)
    free = p.s ** w
    if j > i:
        values = [bval * free + d for d in range(free)]
    else:
        values = [d * p.s ** (p.m - w) + bval for d in range(free)]
    base = p.s ** i
    rep = a - window(a, i, p) * base
    return sorted(rep + x * base for x in values)


def b_tuples(w, p):
    """All (b_{m-w}, ..., b_1) in [0, s-1]^{m-w}, in lexicographic order."""
    return list(product(range(p.s), repeat=p.m - w))


def helper_index(a, j, i, p, b=None):
    """l_{a,j} (far helper) or l_{a,j}(b) (near helper).

    The window of helper j is checked to be constant over the relevant set.
    """
    w = _distance(j, i, p)
    if b is None:
        if w < p.m:
            raise BadDistance("far helper needs |j-i| >= m (got %d)" % w)
        members = group_set(a, i, p)
    else:
        members = t_set(a, j, i, b, p)
    values = {window(x, j, p) for x in members}
    if len(values) != 1:
        raise NotConstant("window of node %d varies over %s: %s" % (j, members, sorted(values)))
    return values.pop()


def xy_sets(d, which, s):
    """X_d (drop all-(s-1)) or Y_d (drop all-0), as a sorted list of tuples."""
    if d < 1:
        raise OutOfRange("d must be >= 1")
    drop = {"X": (s - 1,) * d, "Y": (0,) * d}[which]
    return [t for t in product(range(s), repeat=d) if t != drop]

