"""Reed-Solomon codes over E = F(beta) with evaluation points beta^{s^i}.

Repair of node i uses the l dual codewords (nu_j * beta^a * alpha_j^z)_j for
a in S_i and z < s^m.  Helper j answers with traces tr(gamma * f(alpha_j)) for
gamma in a maximal independent subset Q_j(i) of its column; the replacement node
rebuilds tr(c_{h,i} f(alpha_i)) for every h and expands in the trace-dual basis.

Field elements are raw values (see :mod:`subpack.gf`).
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .digits import CodeParams, si_set
from .errors import (BasisFailure, CapExceeded, DegenerateParams, LengthMismatch,
                     TranscriptMismatch)
from .gf import PrimeField, build_ext_field

DEFAULT_CAP = 4096


@dataclass(frozen=True, eq=False)
class RSCode:
    params: CodeParams
    F: PrimeField
    E: object
    seed: int
    points: tuple

    @property
    def beta(self):
        return self.E.beta

    def descriptor(self):
        return {"construction": "rs", "params": self.params.as_dict(),
                "field": self.E.descriptor(), "seed": self.seed}


def build_rs_code(p, F=None, seed=0, cap=DEFAULT_CAP):
    if p.l > cap:
        raise CapExceeded("l = %d exceeds the cap %d" % (p.l, cap))
    F = F or PrimeField(2)
    E = build_ext_field(F, p.l, seed)
    points = tuple(E.pow(E.beta, p.s ** i) for i in range(p.n))
    if len(set(points)) != p.n:
        raise DegenerateParams("evaluation points beta^{s^i} are not distinct")
    return RSCode(p, F, E, seed, points)


def poly_eval(E, coeffs, x):
    acc = E.zero
    for c in reversed(coeffs):
        acc = E.add(E.mul(acc, x), c)
    return acc


def rs_encode(code, message):
    """Node j stores f(alpha_j) for f with the given k coefficients (low first)."""
    if len(message) != code.params.k:
        raise LengthMismatch("message has %d symbols, need k = %d" % (len(message), code.params.k))
    E = code.E
    message = [E.validate(c) for c in message]
    return [poly_eval(E, message, x) for x in code.points]


def random_message(code, rng):
    return [code.E.random(rng) for _ in range(code.params.k)]


def nu_coeffs(code, check_trials=8, seed=0):
    """Dual-code column multipliers nu_i = prod_{j != i} (alpha_i - alpha_j)^{-1}.

    The result is checked against the definition of duality on random pairs
    (p of degree < n-k, g of degree < k).
    """
    E, pts = code.E, code.points
    nu = []
    for i, ai in enumerate(pts):
        prod = E.one
        for j, aj in enumerate(pts):
            if j != i:
                prod = E.mul(prod, E.sub(ai, aj))
        nu.append(E.inv(prod))
    rng = random.Random(seed)
    p = code.params
    for _ in range(check_trials):
        pc = [E.random(rng) for _ in range(p.r)]
        gc = [E.random(rng) for _ in range(p.k)]
        acc = E.zero
        for j, x in enumerate(pts):
            acc = E.add(acc, E.mul(nu[j], E.mul(poly_eval(E, pc, x), poly_eval(E, gc, x))))
        if not E.is_zero(acc):
            raise BasisFailure("nu does not define the dual code")
    return tuple(nu)


@dataclass(eq=False)
class RSRepairScheme:
    failed: int
    polys: list            # (a, z) pairs: f(x) = beta^a x^z
    nu: tuple
    dual: list             # dual[h][j] = nu_j * f_h(alpha_j)
    exponents: list        # a + z s^i, the power of beta each f_h takes at alpha_i
    queries: dict          # j -> Q_j(i)
    query_rows: dict       # j -> indices h whose dual symbol entered Q_j(i)
    expansions: dict       # j -> per h, coefficients of dual[h][j] over Q_j(i)
    functionals: dict      # j -> linear forms x -> tr(gamma x), gamma in Q_j(i)
    mu: list

    @property
    def dims(self):
        return {j: len(Q) for j, Q in self.queries.items()}

    @property
    def bandwidth(self):
        return sum(len(Q) for Q in self.queries.values())


def repair_polys(p, i):
    return [(a, z) for a in si_set(i, p) for z in range(p.group)]


def build_repair_scheme(code, i):
    p, E, q = code.params, code.E, code.F.q
    if not 0 <= i < p.n:
        raise DegenerateParams("failed node %d outside [0, %d]" % (i, p.n - 1))
    polys = repair_polys(p, i)
    exponents = [a + z * p.s ** i for a, z in polys]
    if sorted(exponents) != list(range(p.l)):
        raise BasisFailure("repair exponents at node %d do not cover [0, l-1]" % i)

    nu = nu_coeffs(code)
    top = (p.l - 1) + (p.group - 1) * p.s ** (p.n - 1)
    pw = E.power_table(top + 1)
    steps = [p.s ** j for j in range(p.n)]
    dual = [[E.mul(nu[j], pw[a + z * steps[j]]) for j in range(p.n)] for a, z in polys]

    own = [row[i] for row in dual]
    if linalg.rank(q, own) != p.l:
        raise BasisFailure("dual symbols at node %d are not a basis" % i)
    mu = E.dual_basis(own)

    queries, query_rows, expansions, functionals = {}, {}, {}, {}
    for j in range(p.n):
        if j == i:
            continue
        basis = linalg.IncrementalBasis(q)
        rows, exps = [], []
        for h, row in enumerate(dual):
            accepted, exp = basis.add(row[j])
            if accepted:
                rows.append(h)
            exps.append(exp)
        Q = [dual[h][j] for h in rows]
        queries[j] = Q
        query_rows[j] = rows
        if q == 2:
            expansions[j] = exps
        else:
            expansions[j] = [linalg.expansion_to_tuple(q, e, len(Q)) for e in exps]
        functionals[j] = [E.functional(g) for g in Q]
    return RSRepairScheme(i, polys, nu, dual, exponents, queries, query_rows,
                          expansions, functionals, mu)


@dataclass
class RSTranscript:
    failed: int
    responses: dict = field(default_factory=dict)   # j -> [tr(gamma f(alpha_j))]

    @property
    def total_symbols(self):
        return sum(len(v) for v in self.responses.values())


def helper_respond(code, scheme, j, value):
    """What helper j sends: the traces tr(gamma * value) for gamma in Q_j(i)."""
    q = code.F.q
    return [linalg.dot(q, f, value) for f in scheme.functionals[j]]


def make_transcript(code, scheme, codeword):
    if len(codeword) != code.params.n:
        raise TranscriptMismatch("codeword has %d symbols, need %d" % (len(codeword), code.params.n))
    return RSTranscript(scheme.failed, {
        j: helper_respond(code, scheme, j, codeword[j])
        for j in range(code.params.n) if j != scheme.failed})


def rs_repair_node(code, scheme, data):
    """Rebuild f(alpha_i) from a transcript (or from a codeword, simulating helpers)."""
    if not isinstance(data, RSTranscript):
        data = make_transcript(code, scheme, data)
    i, E, q = scheme.failed, code.E, code.F.q
    if data.failed != i:
        raise TranscriptMismatch("transcript is for node %d, scheme for node %d" % (data.failed, i))
    if set(data.responses) != set(scheme.queries):
        raise TranscriptMismatch("transcript helpers %s != %s"
                                 % (sorted(data.responses), sorted(scheme.queries)))
    for j, Q in scheme.queries.items():
        if len(data.responses[j]) != len(Q):
            raise TranscriptMismatch("helper %d sent %d symbols, expected %d"
                                     % (j, len(data.responses[j]), len(Q)))
    l = code.params.l
    if q == 2:
        lam = [0] * l
        for j, resp in data.responses.items():
            mask = sum((v & 1) << g for g, v in enumerate(resp))
            for h, e in enumerate(scheme.expansions[j]):
                lam[h] ^= (e & mask).bit_count() & 1
        out = 0
        for h in range(l):
            if lam[h]:
                out ^= scheme.mu[h]
        return out
    lam = [0] * l
    for j, resp in data.responses.items():
        for h, e in enumerate(scheme.expansions[j]):
            lam[h] -= sum(c * v for c, v in zip(e, resp))
    out = E.zero
    for h in range(l):
        c = lam[h] % q
        if c:
            out = E.add(out, E.scale(c, scheme.mu[h]))
    return out


# ---------------------------------------------------------------------------
# bandwidth measurement against the per-pair dimension claims

def _digit(u, pos, s):
    return (u // s ** pos) % s


def _zeros(u, lo, hi, s):
    """Digits lo..hi (inclusive) of u are all zero; empty ranges are vacuous."""
    return all(_digit(u, x, s) == 0 for x in range(lo, hi + 1))


def _block(u, lo, hi, s):
    return [_digit(u, x, s) for x in range(lo, hi + 1)]


def _in_X(block, s):
    return any(d != s - 1 for d in block)


def _in_Y(block):
    return any(block)


def pair_case(p, i, t):
    if t == i:
        return "own"
    d = abs(t - i)
    if t < i:
        return "far_below" if d >= p.m else "near_below"
    return "far_above" if d >= p.m else "near_above"


def claim_bounds(p, i, t):
    """Dimension bounds for the span of {f_h(alpha_t)} with s^m replacing n-k.

    Returns {name: Fraction}; ``far_below`` carries both the coarse carry bound
    and the refined one that excludes the all-(s-1) initial block.
    """
    s, m, n, l, g = p.s, p.m, p.n, p.l, p.group
    base = Fraction(l, g)
    case = pair_case(p, i, t)
    if case == "own":
        return {"own": Fraction(l)}
    if case == "far_below":
        d = i - t
        return {"far_below": base + Fraction(l, s ** d),
                "far_below_refined": base + Fraction((g - 1) * l, s ** (d + m))}
    if case == "near_below":
        w = i - t
        return {"near_below": base + Fraction((g - 1) * l, s ** (m + w))}
    if case == "far_above":
        return {"far_above": base + Fraction(l, s ** (m + n - t - 1))}
    w = t - i
    return {"near_above": base + Fraction((s ** w - 1) * l, s ** (n + w - i - 1))
            + Fraction((s ** (m - w) - 1) * l, g)}


def exponent_in_claim_set(p, i, t, u):
    """Whether beta^u lies in the monomial set the claims use for the pair (i, t).

    u = a + z s^t may exceed l-1 (one carry digit at position m+n-1).
    """
    s, m, n, l = p.s, p.m, p.n, p.l
    in_Si = u < l and _zeros(u, i, i + m - 1, s)
    case = pair_case(p, i, t)
    if case == "own":
        return u < l
    if in_Si:
        return True
    if case == "far_below":
        return (u < l and _zeros(u, i + 1, i + m - 1, s) and _digit(u, i, s) == 1
                and _zeros(u, t + m, i - 1, s) and _in_X(_block(u, t, t + m - 1, s), s))
    if case == "near_below":
        w = i - t
        one = (u < l and _zeros(u, i + m - w + 1, i + m - 1, s)
               and _digit(u, i + m - w, s) == 1 and _zeros(u, i, i + m - w - 1, s)
               and _in_X(_block(u, i - w, i - 1, s), s))
        zero = (u < l and _zeros(u, i + m - w, i + m - 1, s)
                and _in_Y(_block(u, i, i + m - w - 1, s)))
        return one or zero
    top = m + n - 1
    if case == "far_above":
        return (u < s ** (top + 1) and _digit(u, top, s) == 1
                and _zeros(u, m + t, top - 1, s) and _zeros(u, i, i + m - 1, s))
    w = t - i
    one = (u < s ** (top + 1) and _digit(u, top, s) == 1
           and _zeros(u, m + w + i, top - 1, s)
           and _in_X(_block(u, i + m, i + m + w - 1, s), s)
           and _zeros(u, i, i + w - 1, s))
    zero = (u < l and _in_Y(_block(u, i + w, i + m - 1, s)) and _zeros(u, i, i + w - 1, s))
    return one or zero


@dataclass
class PairCheck:
    t: int
    case: str
    dim: int
    distinct_exponents: int
    bounds: dict
    inclusion_ok: bool

    @property
    def passed(self):
        return self.inclusion_ok and all(self.dim <= b for b in self.bounds.values())


@dataclass
class RSBandwidth:
    failed: int
    per_t_dims: dict
    total: int
    pairs: dict

    @property
    def passed(self):
        return all(c.passed for c in self.pairs.values())


def rs_measure_bandwidth(code, i, scheme=None):
    """Per-helper span dimensions for node i, their sum b_i, and the claim checks."""
    p, q = code.params, code.F.q
    scheme = scheme or build_repair_scheme(code, i)
    dims, pairs = {}, {}
    for t in range(p.n):
        column = [row[t] for row in scheme.dual]
        dim = p.l if t == i else linalg.rank(q, column)
        if t != i and dim != len(scheme.queries[t]):
            raise BasisFailure("query set size disagrees with rank at helper %d" % t)
        dims[t] = dim
        exps = {a + z * p.s ** t for a, z in scheme.polys}
        pairs[t] = PairCheck(
            t=t, case=pair_case(p, i, t), dim=dim, distinct_exponents=len(exps),
            bounds=claim_bounds(p, i, t),
            inclusion_ok=all(exponent_in_claim_set(p, i, t, u) for u in exps))
    total = sum(d for t, d in dims.items() if t != i)
    return RSBandwidth(i, dims, total, pairs)


# ---------------------------------------------------------------------------
# closed-form reference values

def gw_bound(p, q):
    """(n-1) log_|F| ((n-1)|E| / ((r-1)(|E|-1) + (n-1))), |E| = q^l."""
    n, r = p.n, p.r
    E = q ** p.l
    num = (n - 1) * E
    den = (r - 1) * (E - 1) + (n - 1)
    return (n - 1) * (math.log(num) - math.log(den)) / math.log(q)


def weak_numerator(p):
    return p.n - 1 + 2 * (p.m - 1) * p.group - 2 * p.m + 6


def strong_numerator(p):
    """n-1 + 3s^{m-1} + 2(s^{m-2} + ... + s) - (m-4); only evaluated for m >= 3."""
    if p.m < 3:
        return None
    s, m = p.s, p.m
    return p.n - 1 + 3 * s ** (m - 1) + 2 * sum(s ** v for v in range(1, m - 1)) - (m - 4)


def rs_bounds(p, q=2):
    l, r, g = p.l, p.r, p.group
    strong = strong_numerator(p)
    return {
        "cutset": Fraction((p.n - 1) * l, r),
        "gw": gw_bound(p, q),
        "strong_bound": None if strong is None else Fraction(strong * l, r),
        "group_strong_bound": None if strong is None else Fraction(strong * l, g),
        "weak_bound": Fraction(weak_numerator(p) * l, r),
        "group_weak_bound": Fraction(weak_numerator(p) * l, g),
        "ratio_guarantee": Fraction(r, g),
    }


def reference_rows(p):
    """Closed-form rows of the bandwidth / sub-packetization tradeoff table.

    Only formulas are evaluated here; none of these schemes is implemented.
    """
    n, r, l = p.n, p.r, p.l
    rows = [
        {"scheme": "gw", "bandwidth": n - 1, "subpacketization": math.log(n) / math.log(n / r),
         "meets_cutset": False},
        {"scheme": "yb", "bandwidth_below": Fraction((n + 1) * r ** n, r),
         "subpacketization": r ** n, "meets_cutset": "asymptotically"},
        {"scheme": "tyb", "bandwidth": Fraction((n - 1) * n ** n, r),
         "subpacketization": n ** n, "meets_cutset": True},
        {"scheme": "this", "bandwidth_below": Fraction((n - 1 + 3 * r) * l, r),
         "subpacketization": l, "meets_cutset": "asymptotically"},
    ]
    return rows


def node_claim_sum(p, i):
    """Sum over helpers of the tightest applicable claim bound for node i."""
    return sum(min(claim_bounds(p, i, t).values()) for t in range(p.n) if t != i)
