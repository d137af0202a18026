"""The optimal-update MDS array code over a prime field.

Node i multiplies coordinate a by lambda_{i, window(a, i)}, and a codeword
satisfies, for every coordinate a and every t < r,

    sum_i lambda_{i, window(a, i)}^t * c_{i, a} = 0.

Codewords are numpy int64 arrays of shape (n, l) holding residues mod q.  All
arithmetic is exact; products stay below 2^62 because q < 2^31 is enforced.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .digits import CodeParams, b_tuples
from .errors import (DegenerateParams, FieldTooSmall, NotConstant, ResponseMismatch,
                     ShapeMismatch, SingularSystem)
from .gf import PrimeField

MAX_Q = 2 ** 31


def _inv_mod(x, q):
    x = np.asarray(x, dtype=np.int64) % q
    if np.any(x == 0):
        raise SingularSystem("division by zero in GF(%d)" % q)
    return np.array([pow(int(v), q - 2, q) for v in x.ravel()], dtype=np.int64).reshape(x.shape)


@dataclass(eq=False)
class ArrayCode:
    params: CodeParams
    F: PrimeField
    lam: tuple          # n rows of s^m distinct scalars
    seed: int = 0
    shuffle: bool = False

    def __post_init__(self):
        p, q = self.params, self.F.q
        flat = [x for row in self.lam for x in row]
        if len(self.lam) != p.n or any(len(row) != p.group for row in self.lam):
            raise ShapeMismatch("lambda table must be %d x %d" % (p.n, p.group))
        if len(set(flat)) != len(flat) or any(not 0 <= x < q for x in flat):
            raise DegenerateParams("lambda entries must be distinct elements of GF(%d)" % q)
        self.lam_arr = np.array(self.lam, dtype=np.int64)
        idx = np.arange(p.l, dtype=np.int64)
        # win[i, a] = window(a, i); coef[i, a] = lambda_{i, window(a, i)}
        self.win = np.stack([(idx // p.s ** i) % p.group for i in range(p.n)])
        self.coef = np.take_along_axis(self.lam_arr, self.win, axis=1)

    @property
    def q(self):
        return self.F.q

    def coef_powers(self, t):
        return _powmod(self.coef, t, self.q)

    def descriptor(self):
        return {"construction": "array", "params": self.params.as_dict(), "q": self.q,
                "lambda": [list(r) for r in self.lam], "seed": self.seed,
                "shuffle": self.shuffle}


def _powmod(x, t, q):
    out = np.ones_like(x)
    base = x % q
    while t:
        if t & 1:
            out = (out * base) % q
        base = (base * base) % q
        t >>= 1
    return out


def build_array_code(p, q, seed=0, shuffle=False):
    if q < p.group * p.n:
        raise FieldTooSmall("need q >= s^m n = %d (got %d)" % (p.group * p.n, q))
    F = PrimeField(q)
    if q >= MAX_Q:
        raise FieldTooSmall("q must be below 2^31 for exact int64 arithmetic")
    count = p.group * p.n
    if shuffle:
        values = random.Random(seed).sample(range(q), count)
    else:
        values = list(range(count))
    lam = tuple(tuple(values[i * p.group:(i + 1) * p.group]) for i in range(p.n))
    return ArrayCode(p, F, lam, seed, shuffle)


def _as_word(code, word):
    p = code.params
    arr = np.asarray(word, dtype=np.int64)
    if arr.shape != (p.n, p.l):
        raise ShapeMismatch("codeword must have shape (%d, %d), got %s" % (p.n, p.l, arr.shape))
    return arr % code.q


def parity_check(code, word):
    word = _as_word(code, word)
    q = code.q
    pw = np.ones_like(code.coef)
    for _ in range(code.params.r):
        if np.any((pw * word).sum(axis=0) % q):
            return False
        pw = (pw * code.coef) % q
    return True


def _solve_missing(code, word, known, missing):
    """Fill the nodes in ``missing`` (|missing| = r) from the others, per coordinate.

    Coordinatewise the parity checks say sum_i c_i x_i^t = 0 for t < r, i.e. the
    vector (c_i) is orthogonal to a Vandermonde matrix.  The solution for a
    missing node p is c_p = -sum_{j known} L_p(x_j) c_j, where L_p is the
    Lagrange basis polynomial on the missing points.
    """
    q = code.q
    X = code.coef
    out = word.copy()
    for p in missing:
        others = [o for o in missing if o != p]
        denom = np.ones(code.params.l, dtype=np.int64)
        for o in others:
            denom = (denom * (X[p] - X[o])) % q
        dinv = _inv_mod(denom, q)
        acc = np.zeros(code.params.l, dtype=np.int64)
        for j in known:
            num = np.ones(code.params.l, dtype=np.int64)
            for o in others:
                num = (num * (X[j] - X[o])) % q
            acc = (acc + ((num * dinv) % q) * word[j]) % q
        out[p] = (-acc) % q
    return out


def array_encode(code, systematic):
    p = code.params
    sys_arr = np.asarray(systematic, dtype=np.int64)
    if sys_arr.shape != (p.k, p.l):
        raise ShapeMismatch("systematic part must have shape (%d, %d), got %s"
                            % (p.k, p.l, sys_arr.shape))
    word = np.zeros((p.n, p.l), dtype=np.int64)
    word[:p.k] = sys_arr % code.q
    return _solve_missing(code, word, list(range(p.k)), list(range(p.k, p.n)))


def random_systematic(code, rng):
    """Uniform systematic data from a numpy Generator."""
    p = code.params
    return rng.integers(0, code.q, size=(p.k, p.l), dtype=np.int64)


def reconstruct_from_k(code, surviving):
    """Rebuild the whole codeword from exactly k nodes given as {index: vector}."""
    p = code.params
    idx = sorted(surviving)
    if len(idx) != p.k or any(not 0 <= i < p.n for i in idx):
        raise ShapeMismatch("need exactly k = %d distinct node indices in [0, %d]" % (p.k, p.n - 1))
    word = np.zeros((p.n, p.l), dtype=np.int64)
    for i in idx:
        v = np.asarray(surviving[i], dtype=np.int64)
        if v.shape != (p.l,):
            raise ShapeMismatch("node %d vector has shape %s" % (i, v.shape))
        word[i] = v % code.q
    missing = [i for i in range(p.n) if i not in surviving]
    return _solve_missing(code, word, idx, missing)


def encoding_matrices(code):
    """D[p, j, a] = M^{(a)}(p, j) with M^{(a)} = -(V1^{(a)})^{-1} V2^{(a)}.

    Computed by Gauss-Jordan inversion of the r x r parity block at every
    coordinate, independently of the Lagrange formula used by array_encode.
    """
    p, q = code.params, code.q
    r, k = p.r, p.k
    D = np.zeros((r, k, p.l), dtype=np.int64)
    pw = np.stack([_powmod(code.coef, t, q) for t in range(r)])   # (r, n, l)
    for a in range(p.l):
        V = pw[:, :, a]
        V1 = [[int(V[t, k + c]) for c in range(r)] for t in range(r)]
        V1inv = np.array(linalg.inverse(q, V1, r), dtype=np.int64)
        D[:, :, a] = (-(V1inv @ V[:, :k])) % q
    return D


def encode_with_matrices(code, D, systematic):
    sys_arr = np.asarray(systematic, dtype=np.int64) % code.q
    parity = np.einsum("pja,ja->pa", D, sys_arr) % code.q
    return np.concatenate([sys_arr, parity])


# ---------------------------------------------------------------------------
# repair

@dataclass(frozen=True)
class Slot:
    """One scalar a helper sends per group: the sum of c_{j, rep + x s^i} over xs."""
    label: object          # None (far), b-tuple (near), or ("coord", x) (weak plan)
    xs: tuple
    lidx: np.ndarray       # per group, the helper's constant window over the slot


@dataclass(frozen=True)
class HelperPlan:
    j: int
    kind: str              # "far" | "near"
    slots: tuple


@dataclass(eq=False)
class RepairPlan:
    failed: int
    mode: str
    reps: np.ndarray
    helpers: tuple

    @property
    def per_group(self):
        return sum(len(h.slots) for h in self.helpers)

    @property
    def bandwidth(self):
        return self.per_group * len(self.reps)

    def group_index(self, a):
        hit = np.nonzero(self.reps == a)[0]
        if not len(hit):
            raise ResponseMismatch("%d is not a group representative for node %d" % (a, self.failed))
        return int(hit[0])

    def descriptors(self, a):
        """The helper queries for group a as (helper, label, helper index) triples."""
        g = self.group_index(a)
        return [(h.j, s.label, int(s.lidx[g])) for h in self.helpers for s in h.slots]


def _near_values(p, j, i, b):
    # window values x (at node i) belonging to T_{a,j,i}(b)
    w = abs(j - i)
    free = p.s ** w
    bval = 0
    for d in b:
        bval = bval * p.s + d
    if j > i:
        return tuple(bval * free + d for d in range(free))
    return tuple(sorted(d * p.s ** (p.m - w) + bval for d in range(free)))


def build_repair_plan(code, i, weak=False):
    p = code.params
    if not 0 <= i < p.n:
        raise DegenerateParams("failed node %d outside [0, %d]" % (i, p.n - 1))
    base = p.s ** i
    span = base * p.group
    reps = np.array([hi * span + lo for hi in range(p.l // span) for lo in range(base)],
                    dtype=np.int64)
    helpers = []
    for j in range(p.n):
        if j == i:
            continue
        w = abs(j - i)
        if w >= p.m:
            parts = [(None, tuple(range(p.group)))]
            kind = "far"
        elif weak:
            parts = [(("coord", x), (x,)) for x in range(p.group)]
            kind = "near"
        else:
            parts = [(b, _near_values(p, j, i, b)) for b in b_tuples(w, p)]
            kind = "near"
        slots = []
        for label, xs in parts:
            members = reps[:, None] + np.array(xs, dtype=np.int64)[None, :] * base
            wins = code.win[j][members]
            if np.any(wins != wins[:, :1]):
                raise NotConstant("window of helper %d varies over a slot for node %d" % (j, i))
            slots.append(Slot(label, xs, wins[:, 0].copy()))
        helpers.append(HelperPlan(j, kind, tuple(slots)))
    return RepairPlan(i, "weak" if weak else "strong", reps, tuple(helpers))


def _helper(plan, j):
    for h in plan.helpers:
        if h.j == j:
            return h
    raise ResponseMismatch("node %d is not a helper for node %d" % (j, plan.failed))


def helper_respond_all(code, word, plan, j):
    """Helper j's answers for every group: shape (groups, slots)."""
    word = np.asarray(word, dtype=np.int64)
    h = _helper(plan, j)
    base = code.params.s ** plan.failed
    cols = []
    for s in h.slots:
        members = plan.reps[:, None] + np.array(s.xs, dtype=np.int64)[None, :] * base
        cols.append(word[j][members].sum(axis=1) % code.q)
    return np.stack(cols, axis=1)


def helper_respond(code, word, plan, j, a):
    """Helper j's answers for the group with representative a."""
    return [int(v) for v in helper_respond_all(code, word, plan, j)[plan.group_index(a)]]


def collect_responses(code, word, plan):
    word = _as_word(code, word)
    return {h.j: helper_respond_all(code, word, plan, h.j) for h in plan.helpers}


def _vandermonde_inverse(code, i):
    p, q = code.params, code.q
    g = p.group
    rows = [[pow(int(code.lam_arr[i, x]), t, q) for x in range(g)] for t in range(g)]
    return np.array(linalg.inverse(q, rows, g), dtype=np.int64)


def array_repair_node(code, plan, responses):
    """Rebuild node i from the helpers' per-group sums."""
    p, q = code.params, code.q
    i, G, g = plan.failed, len(plan.reps), p.group
    if set(responses) != {h.j for h in plan.helpers}:
        raise ResponseMismatch("responses from %s, expected helpers %s"
                               % (sorted(responses), [h.j for h in plan.helpers]))
    B = np.zeros((g, G), dtype=np.int64)
    for h in plan.helpers:
        R = np.asarray(responses[h.j], dtype=np.int64)
        if R.shape != (G, len(h.slots)):
            raise ResponseMismatch("helper %d sent shape %s, expected %s"
                                   % (h.j, R.shape, (G, len(h.slots))))
        for si, s in enumerate(h.slots):
            lam = code.lam_arr[h.j][s.lidx]
            pw = np.ones(G, dtype=np.int64)
            for t in range(g):
                B[t] = (B[t] - pw * R[:, si]) % q
                pw = (pw * lam) % q
    C = (_vandermonde_inverse(code, i) @ B) % q          # row x: coordinate rep + x s^i
    out = np.zeros(p.l, dtype=np.int64)
    base = p.s ** i
    for x in range(g):
        out[plan.reps + x * base] = C[x]
    return out


def strong_numerator(p):
    return p.n - 1 + 2 * sum(p.s ** v - 1 for v in range(1, p.m))


def weak_numerator(p):
    return p.n - 1 + 2 * (p.m - 1) * p.group - 2 * p.m + 2


def array_measure_bandwidth(code, i, plan=None):
    p = code.params
    plan = plan or build_repair_plan(code, i)
    total = plan.bandwidth
    bound_strong = Fraction(strong_numerator(p) * p.l, p.group)
    bound_weak = Fraction(weak_numerator(p) * p.l, p.group)
    return {"failed": i, "total": total, "per_group": plan.per_group,
            "bound_strong": bound_strong, "bound_weak": bound_weak,
            "cutset": Fraction((p.n - 1) * p.l, p.r),
            "interior": p.m - 1 <= i <= p.n - p.m,
            "tight": total == bound_strong,
            "passed": total <= bound_strong <= bound_weak}


# ---------------------------------------------------------------------------
# property checks used by the CLI and the acceptance suite

def mds_check(code, words):
    """Every k-subset of every word reconstructs it; returns (passed, total) subsets."""
    p = code.params
    subsets = list(combinations(range(p.n), p.k))
    passed = 0
    for S in subsets:
        if all(np.array_equal(reconstruct_from_k(code, {i: w[i] for i in S}), w) for w in words):
            passed += 1
    return passed, len(subsets)


def update_check(code, positions, rng):
    """Change single systematic symbols and count the parity symbols that move.

    Returns the list of changed-symbol counts and whether every change stayed at
    the updated coordinate.
    """
    p, q = code.params, code.q
    sys_arr = random_systematic(code, rng)
    base = array_encode(code, sys_arr)
    counts, local = [], True
    for node, a in positions:
        mod = sys_arr.copy()
        mod[node, a] = (mod[node, a] + 1 + rng.integers(0, q - 1)) % q
        diff = array_encode(code, mod)[p.k:] != base[p.k:]
        counts.append(int(diff.sum()))
        if np.any(diff[:, np.arange(p.l) != a]):
            local = False
    return counts, local
