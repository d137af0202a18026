"""Exact linear algebra over prime fields GF(q).

Two vector encodings are used throughout the package:

* q == 2: a vector is a Python int, bit j holding coordinate j (bit-packed rows);
* q odd:  a vector is a tuple/list of ints in [0, q-1].

Everything here is deterministic: pivots are taken at the first (GF(2): highest
set bit; otherwise lowest row index) nonzero entry.
"""

from .errors import SingularSystem


def dot(q, u, v):
    if q == 2:
        return (u & v).bit_count() & 1
    return sum(a * b for a, b in zip(u, v)) % q


def is_zero(q, v):
    if q == 2:
        return v == 0
    return not any(v)


def rank(q, vectors):
    """Rank over GF(q) of the given vectors."""
    basis = IncrementalBasis(q)
    for v in vectors:
        basis.add(v)
    return len(basis.members)


class IncrementalBasis:
    """Echelon basis grown one vector at a time.

    Every vector offered to :meth:`add` is either accepted as a new member or
    expressed as a GF(q) combination of the members accepted so far.  The members
    therefore form the greedy maximal independent subset in offer order.
    """

    def __init__(self, q):
        self.q = q
        self.members = []
        # pivot position -> (row, combination of members giving that row)
        self._rows = {}

    def __len__(self):
        return len(self.members)

    def add(self, v):
        """Offer ``v``; return ``(accepted, expansion)``.

        ``expansion`` writes ``v`` over ``self.members`` (after insertion).  Over
        GF(2) it is a bitmask of member indices, otherwise a dict index -> coeff.
        """
        if self.q == 2:
            return self._add2(v)
        return self._addq(v)

    def _add2(self, v):
        rows = self._rows
        combo = 0
        while v:
            p = v.bit_length() - 1
            hit = rows.get(p)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if not v:
            return False, combo
        t = len(self.members)
        self.members.append(None)
        rows[v.bit_length() - 1] = (v, combo ^ (1 << t))
        return True, 1 << t

    def _addq(self, v):
        q = self.q
        rows = self._rows
        v = list(v)
        combo = {}
        for p in sorted(rows, reverse=True):
            c = v[p]
            if c:
                row, rcombo = rows[p]
                for idx in range(p + 1):
                    if row[idx]:
                        v[idx] = (v[idx] - c * row[idx]) % q
                for idx, rc in rcombo.items():
                    combo[idx] = (combo.get(idx, 0) + c * rc) % q
        combo = {k: x for k, x in combo.items() if x}
        lead = max((p for p, x in enumerate(v) if x), default=None)
        if lead is None:
            return False, combo
        t = len(self.members)
        self.members.append(None)
        inv = pow(v[lead], q - 2, q)
        row = [(x * inv) % q for x in v]
        rcombo = {k: (-x * inv) % q for k, x in combo.items()}
        rcombo[t] = inv
        rows[lead] = (row, rcombo)
        return True, {t: 1}


def expansion_to_tuple(q, expansion, size):
    """Normalise an :class:`IncrementalBasis` expansion to a dense coefficient tuple."""
    if q == 2:
        return tuple((expansion >> t) & 1 for t in range(size))
    return tuple(expansion.get(t, 0) for t in range(size))


def transpose_bits(rows, ncols):
    out = [0] * ncols
    for i, r in enumerate(rows):
        while r:
            low = r & -r
            j = low.bit_length() - 1
            out[j] |= 1 << i
            r ^= low
    return out


def inverse(q, rows, dim):
    """Inverse of a dim x dim matrix over GF(q) given as row vectors.

    Raises SingularSystem if the matrix is not invertible.
    """
    if q == 2:
        return _inverse2(rows, dim)
    return _inverseq(q, rows, dim)


def _inverse2(rows, dim):
    if len(rows) != dim:
        raise SingularSystem("expected %d rows, got %d" % (dim, len(rows)))
    aug = [(r & ((1 << dim) - 1)) | (1 << (dim + i)) for i, r in enumerate(rows)]
    for col in range(dim):
        bit = 1 << col
        piv = next((i for i in range(col, dim) if aug[i] & bit), None)
        if piv is None:
            raise SingularSystem("matrix is singular over GF(2)")
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        for i in range(dim):
            if i != col and aug[i] & bit:
                aug[i] ^= prow
    return [r >> dim for r in aug]


def _inverseq(q, rows, dim):
    if len(rows) != dim:
        raise SingularSystem("expected %d rows, got %d" % (dim, len(rows)))
    aug = [list(r) + [1 if j == i else 0 for j in range(dim)] for i, r in enumerate(rows)]
    for col in range(dim):
        piv = next((i for i in range(col, dim) if aug[i][col] % q), None)
        if piv is None:
            raise SingularSystem("matrix is singular over GF(%d)" % q)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], q - 2, q)
        prow = [(x * inv) % q for x in aug[col]]
        aug[col] = prow
        for i in range(dim):
            c = aug[i][col]
            if i != col and c:
                aug[i] = [(x - c * y) % q for x, y in zip(aug[i], prow)]
    return [tuple(r[dim:]) for r in aug]


def solve(q, matrix, rhs):
    """Solve matrix @ x = rhs over GF(q) for a square, invertible matrix."""
    n = len(matrix)
    if q == 2:
        packed = [sum((x & 1) << j for j, x in enumerate(r)) for r in matrix]
        inv = [tuple((row >> j) & 1 for j in range(n)) for row in inverse(2, packed, n)]
    else:
        inv = inverse(q, [list(r) for r in matrix], n)
    return [sum(a * b for a, b in zip(row, rhs)) % q for row in inv]
