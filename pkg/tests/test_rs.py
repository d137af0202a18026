import random
from fractions import Fraction
from types import SimpleNamespace

import pytest

from subpack import rs
from subpack.digits import CodeParams, si_set
from subpack.errors import CapExceeded, LengthMismatch, TranscriptMismatch
from subpack.gf import PrimeField, make_ext_field


@pytest.fixture(scope="module")
def small():
    code = rs.build_rs_code(CodeParams(2, 1, 4, 2), seed=0)
    schemes = [rs.build_repair_scheme(code, i) for i in range(4)]
    return code, schemes


def interpolate(E, xs, ys, x):
    """Lagrange interpolation oracle evaluated at x."""
    acc = E.zero
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        num, den = E.one, E.one
        for t, xt in enumerate(xs):
            if t != j:
                num = E.mul(num, E.sub(x, xt))
                den = E.mul(den, E.sub(xj, xt))
        acc = E.add(acc, E.mul(yj, E.div(num, den)))
    return acc


def test_build_examples(small):
    code, _ = small
    E = code.E
    assert E.l == 16
    assert code.points == tuple(E.pow(E.beta, e) for e in (1, 2, 4, 8))
    assert code.points[0] == E.beta
    assert rs.build_rs_code(CodeParams(2, 2, 5, 1)).E.l == 64
    with pytest.raises(CapExceeded):
        rs.build_rs_code(CodeParams(2, 2, 12, 8))


def test_encode_basics(small):
    code, _ = small
    E = code.E
    c = E.from_int(0xBEEF)
    assert rs.rs_encode(code, [c, E.zero]) == [c] * 4
    assert rs.rs_encode(code, [E.zero, E.one]) == list(code.points)
    with pytest.raises(LengthMismatch):
        rs.rs_encode(code, [E.one])


def test_any_k_nodes_determine_the_codeword():
    code = rs.build_rs_code(CodeParams(2, 1, 5, 3))
    E, pts = code.E, code.points
    rng = random.Random(3)
    word = rs.rs_encode(code, rs.random_message(code, rng))
    for S in ((0, 1, 2), (1, 3, 4), (0, 2, 4)):
        xs, ys = [pts[j] for j in S], [word[j] for j in S]
        assert [interpolate(E, xs, ys, x) for x in pts] == word


def test_nu_for_two_points():
    E = make_ext_field(PrimeField(2), (1, 1, 1))
    a1, a2 = E.beta, E.add(E.beta, E.one)
    fake = SimpleNamespace(E=E, points=(a1, a2), params=SimpleNamespace(r=1, k=1))
    nu = rs.nu_coeffs(fake)
    assert nu[0] == E.inv(E.sub(a1, a2))
    assert nu[1] == E.inv(E.sub(a2, a1))
    assert nu[0] == nu[1]


def test_nu_duality_many_pairs():
    code = rs.build_rs_code(CodeParams(2, 1, 5, 3))
    rs.nu_coeffs(code, check_trials=100, seed=11)


@pytest.mark.parametrize("p", [CodeParams(2, 1, 4, 2), CodeParams(2, 2, 5, 1), CodeParams(3, 1, 5, 2)])
def test_exponent_coverage_and_own_rank(p):
    code = rs.build_rs_code(p)
    for i in range(p.n):
        scheme = rs.build_repair_scheme(code, i)
        assert sorted(scheme.exponents) == list(range(p.l))
        assert len(scheme.polys) == p.l
        assert rs.rs_measure_bandwidth(code, i, scheme).per_t_dims[i] == p.l


def test_repair_exact(small):
    code, schemes = small
    E = code.E
    rng = random.Random(5)
    for _ in range(25):
        word = rs.rs_encode(code, rs.random_message(code, rng))
        for i, sc in enumerate(schemes):
            assert rs.rs_repair_node(code, sc, word) == word[i]
    const = rs.rs_encode(code, [E.from_int(77), E.zero])
    zero = rs.rs_encode(code, [E.zero, E.zero])
    for i, sc in enumerate(schemes):
        assert rs.rs_repair_node(code, sc, const) == E.from_int(77)
        assert rs.rs_repair_node(code, sc, zero) == E.zero


def test_repair_over_odd_base_field():
    code = rs.build_rs_code(CodeParams(2, 1, 4, 2), PrimeField(3))
    rng = random.Random(2)
    word = rs.rs_encode(code, rs.random_message(code, rng))
    for i in range(4):
        sc = rs.build_repair_scheme(code, i)
        tr = rs.make_transcript(code, sc, word)
        assert rs.rs_repair_node(code, sc, tr) == word[i]


def test_transcript_validation(small):
    code, schemes = small
    word = rs.rs_encode(code, rs.random_message(code, random.Random(1)))
    tr = rs.make_transcript(code, schemes[0], word)
    assert tr.total_symbols == schemes[0].bandwidth
    with pytest.raises(TranscriptMismatch):
        rs.rs_repair_node(code, schemes[1], tr)
    bad = rs.RSTranscript(0, dict(tr.responses))
    bad.responses[1] = bad.responses[1][:-1]
    with pytest.raises(TranscriptMismatch):
        rs.rs_repair_node(code, schemes[0], bad)
    missing = rs.RSTranscript(0, {j: v for j, v in tr.responses.items() if j != 2})
    with pytest.raises(TranscriptMismatch):
        rs.rs_repair_node(code, schemes[0], missing)


def test_helper_answers_are_traces(small):
    code, schemes = small
    E = code.E
    word = rs.rs_encode(code, rs.random_message(code, random.Random(9)))
    sc = schemes[1]
    for j, Q in sc.queries.items():
        assert rs.helper_respond(code, sc, j, word[j]) == [E.trace(E.mul(g, word[j])) for g in Q]


def test_dual_codewords_annihilate_codewords(small):
    code, schemes = small
    E = code.E
    rng = random.Random(4)
    words = [rs.rs_encode(code, rs.random_message(code, rng)) for _ in range(100)]
    sc = schemes[2]
    for row in sc.dual[::3]:
        for w in words:
            acc = E.zero
            for c, y in zip(row, w):
                acc = E.add(acc, E.mul(c, y))
            assert acc == E.zero


def test_frozen_bandwidths(small):
    code, schemes = small
    totals = [rs.rs_measure_bandwidth(code, i, sc).total for i, sc in enumerate(schemes)]
    assert totals == [31, 34, 33, 31]
    assert [sc.bandwidth for sc in schemes] == totals


def test_claim_checks(small):
    code, schemes = small
    p = code.params
    for i, sc in enumerate(schemes):
        bw = rs.rs_measure_bandwidth(code, i, sc)
        assert bw.passed
        for t, chk in bw.pairs.items():
            if t < i:
                assert chk.dim <= p.l // 2 + p.l // 2 ** (i - t)


def test_claim_bound_values():
    p = CodeParams(2, 2, 10, 6)
    assert rs.claim_bounds(p, 6, 1) == {"far_below": 512 + 64, "far_below_refined": 512 + 48}
    assert rs.claim_bounds(p, 5, 4) == {"near_below": 512 + 3 * 2048 // 8}
    assert rs.claim_bounds(p, 2, 3) == {"near_above": 512 + 2048 // 2 ** 8 + 2048 // 4}
    assert rs.claim_bounds(p, 2, 7) == {"far_above": 512 + 2048 // 2 ** 4}


def test_claim_sets_cover_exponents():
    p = CodeParams(2, 2, 6, 2)
    for i in range(p.n):
        polys = rs.repair_polys(p, i)
        for t in range(p.n):
            exps = {a + z * 2 ** t for a, z in polys}
            assert all(rs.exponent_in_claim_set(p, i, t, u) for u in exps)
            if t != i:
                assert len(exps) <= min(rs.claim_bounds(p, i, t).values())


def test_bounds_record():
    b = rs.rs_bounds(CodeParams(2, 2, 10, 6))
    assert b["cutset"] == 4608
    assert b["weak_bound"] == 9728
    assert b["strong_bound"] is None and b["group_strong_bound"] is None
    assert rs.rs_bounds(CodeParams(2, 2, 7, 2))["ratio_guarantee"] == Fraction(5, 4)
    assert rs.rs_bounds(CodeParams(2, 1, 4, 2))["weak_bound"] == 56
    assert b["gw"] == pytest.approx(14.2646625, abs=1e-6)
    strong = rs.rs_bounds(CodeParams(2, 3, 9, 1))
    # n-1 + 3*4 + 2*2 - (3-4) = 25 over r = 8
    assert strong["strong_bound"] == Fraction(25 * 2 ** 11, 8)


def test_radix_equal_to_redundancy_gives_full_groups():
    p = CodeParams(3, 1, 5, 2)
    code = rs.build_rs_code(p)
    sc = rs.build_repair_scheme(code, 1)
    assert len(sc.polys) == p.l
    assert len(si_set(1, p)) == 3 ** 4
