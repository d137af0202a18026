import numpy as np
import pytest

from subpack import arraycode as ac
from subpack import linalg
from subpack.digits import CodeParams, window
from subpack.errors import (CompositeModulus, FieldTooSmall, ResponseMismatch, ShapeMismatch)

P = CodeParams(2, 2, 10, 6)


@pytest.fixture(scope="module")
def example_code():
    return ac.build_array_code(P, 41)


@pytest.fixture(scope="module")
def example_word(example_code):
    return ac.array_encode(example_code, ac.random_systematic(example_code, np.random.default_rng(0)))


def test_build(example_code):
    flat = [x for row in example_code.lam for x in row]
    assert sorted(flat) == list(range(40))
    assert example_code.lam[3] == (12, 13, 14, 15)
    with pytest.raises(FieldTooSmall):
        ac.build_array_code(P, 39)
    with pytest.raises(CompositeModulus):
        ac.build_array_code(P, 42)
    assert ac.build_array_code(CodeParams(2, 1, 5, 3), 11).params.l == 32


def test_shuffled_table_is_seeded():
    a = ac.build_array_code(P, 101, seed=3, shuffle=True)
    b = ac.build_array_code(P, 101, seed=3, shuffle=True)
    assert a.lam == b.lam
    assert len({x for row in a.lam for x in row}) == 40
    word = ac.array_encode(a, ac.random_systematic(a, np.random.default_rng(1)))
    assert ac.parity_check(a, word)
    plan = ac.build_repair_plan(a, 4)
    assert np.array_equal(ac.array_repair_node(a, plan, ac.collect_responses(a, word, plan)), word[4])


def test_encode_and_parity(example_code, example_word):
    code = example_code
    zero = ac.array_encode(code, np.zeros((6, 2048), dtype=np.int64))
    assert not zero.any() and ac.parity_check(code, zero)
    assert ac.parity_check(code, example_word)
    bad = example_word.copy()
    bad[7, 100] = (bad[7, 100] + 1) % 41
    assert not ac.parity_check(code, bad)
    with pytest.raises(ShapeMismatch):
        ac.array_encode(code, np.zeros((5, 2048)))


def test_worked_parity_checks(example_code, example_word):
    code, c = example_code, example_word
    lam = code.lam
    for a in (0, 2, 4, 6):
        for t in range(4):
            total = sum(lam[j][window(a, j, P)] ** t * int(c[j, a]) for j in range(10))
            assert total % 41 == 0
    # the second check written out with its literal lambda indices
    idx = [2, 1, 0, 0, 0, 0, 0, 0, 0, 0]
    for t in range(4):
        assert sum(pow(lam[j][idx[j]], t, 41) * int(c[j, 2]) for j in range(10)) % 41 == 0


def test_encoding_matrices_agree_and_are_diagonal():
    code = ac.build_array_code(CodeParams(2, 1, 5, 3), 11)
    D = ac.encoding_matrices(code)
    rng = np.random.default_rng(8)
    for _ in range(100):
        sys_arr = ac.random_systematic(code, rng)
        assert np.array_equal(ac.encode_with_matrices(code, D, sys_arr), ac.array_encode(code, sys_arr))


def test_encoding_matrix_is_vandermonde_solution():
    code = ac.build_array_code(CodeParams(2, 1, 4, 2), 11)
    D = ac.encoding_matrices(code)
    a = 5
    x = [int(code.coef[i, a]) for i in range(4)]
    for j in range(2):
        rhs = [(-pow(x[j], t, 11)) % 11 for t in range(2)]
        V1 = [[pow(x[2 + c], t, 11) for c in range(2)] for t in range(2)]
        assert linalg.solve(11, V1, rhs) == [int(D[0, j, a]), int(D[1, j, a])]


def test_single_systematic_node():
    # r = 1 cannot satisfy s^m <= r, so k = 1 is the smallest degenerate shape
    code = ac.build_array_code(CodeParams(2, 1, 3, 1), 7)
    D = ac.encoding_matrices(code)
    assert D.shape == (2, 1, 8)
    sys_arr = ac.random_systematic(code, np.random.default_rng(2))
    word = ac.array_encode(code, sys_arr)
    assert np.array_equal((D[:, 0, :] * sys_arr[0]) % 7, word[1:])


def test_reconstruct_from_any_k():
    code = ac.build_array_code(CodeParams(2, 1, 5, 3), 11)
    rng = np.random.default_rng(4)
    words = [ac.array_encode(code, ac.random_systematic(code, rng)) for _ in range(5)]
    words.append(np.zeros((5, 32), dtype=np.int64))
    assert ac.mds_check(code, words) == (10, 10)
    with pytest.raises(ShapeMismatch):
        ac.reconstruct_from_k(code, {0: words[0][0], 1: words[0][1]})


def test_example_plan_for_group_zero(example_code):
    plan = ac.build_repair_plan(example_code, 1)
    desc = plan.descriptors(0)
    assert len(desc) == 11
    assert [(j, lab, li) for j, lab, li in desc if j in (0, 2)] == [
        (0, (0,), 0), (0, (1,), 2), (2, (0,), 0), (2, (1,), 1)]
    assert all(li == 0 and lab is None for j, lab, li in desc if j >= 3)
    assert plan.bandwidth == 5632


def test_example_helper_sums(example_code, example_word):
    code, c = example_code, example_word
    plan = ac.build_repair_plan(code, 1)
    for j in range(3, 10):
        assert ac.helper_respond(code, c, plan, j, 0) == [int(sum(c[j, [0, 2, 4, 6]]) % 41)]
    assert ac.helper_respond(code, c, plan, 0, 0) == [int((c[0, 0] + c[0, 4]) % 41),
                                                     int((c[0, 2] + c[0, 6]) % 41)]
    assert ac.helper_respond(code, c, plan, 2, 0) == [int((c[2, 0] + c[2, 2]) % 41),
                                                     int((c[2, 4] + c[2, 6]) % 41)]
    # sum of the failed node's group equals minus all other group sums
    others = sum(int(sum(c[j, [0, 2, 4, 6]])) for j in range(10) if j != 1)
    assert (int(sum(c[1, [0, 2, 4, 6]])) + others) % 41 == 0
    zero = np.zeros_like(c)
    assert ac.helper_respond(code, zero, plan, 5, 8) == [0]


def test_repair_all_nodes(example_code):
    code = example_code
    rng = np.random.default_rng(3)
    plans = [ac.build_repair_plan(code, i) for i in range(10)]
    for _ in range(5):
        w = ac.array_encode(code, ac.random_systematic(code, rng))
        for i, plan in enumerate(plans):
            assert np.array_equal(ac.array_repair_node(code, plan, ac.collect_responses(code, w, plan)), w[i])
    zero = np.zeros((10, 2048), dtype=np.int64)
    assert not ac.array_repair_node(code, plans[3], ac.collect_responses(code, zero, plans[3])).any()


def test_response_validation(example_code, example_word):
    plan = ac.build_repair_plan(example_code, 1)
    resp = ac.collect_responses(example_code, example_word, plan)
    short = dict(resp)
    del short[5]
    with pytest.raises(ResponseMismatch):
        ac.array_repair_node(example_code, plan, short)
    bad = dict(resp)
    bad[0] = bad[0][:, :1]
    with pytest.raises(ResponseMismatch):
        ac.array_repair_node(example_code, plan, bad)


def test_bandwidth_records(example_code):
    totals = [ac.array_measure_bandwidth(example_code, i)["total"] for i in range(10)]
    assert totals == [5120] + [5632] * 8 + [5120]
    rec = ac.array_measure_bandwidth(example_code, 4)
    assert rec["bound_strong"] == 5632 and rec["cutset"] == 4608 and rec["tight"]
    assert rec["bound_weak"] == 7680


def test_single_window_plans_are_far_only():
    p = CodeParams(2, 1, 6, 4)
    code = ac.build_array_code(p, 13)
    for i in range(6):
        plan = ac.build_repair_plan(code, i)
        assert all(h.kind == "far" for h in plan.helpers)
        assert plan.bandwidth == (p.n - 1) * p.l // p.r


def test_strong_and_weak_plans_agree():
    p = CodeParams(2, 3, 10, 2)
    code = ac.build_array_code(p, 83)
    w = ac.array_encode(code, ac.random_systematic(code, np.random.default_rng(6)))
    for i in (0, 1, 4, 9):
        strong = ac.build_repair_plan(code, i)
        weak = ac.build_repair_plan(code, i, weak=True)
        a = ac.array_repair_node(code, strong, ac.collect_responses(code, w, strong))
        b = ac.array_repair_node(code, weak, ac.collect_responses(code, w, weak))
        assert np.array_equal(a, b) and np.array_equal(a, w[i])
        assert strong.per_group <= ac.strong_numerator(p)
        assert weak.per_group <= p.n - 1 - 2 * (p.m - 1) + 2 * (p.m - 1) * p.r


def test_update_touches_one_coordinate_per_parity():
    code = ac.build_array_code(CodeParams(2, 2, 6, 2), 29)
    rng = np.random.default_rng(0)
    positions = [(int(rng.integers(0, 2)), int(rng.integers(0, 128))) for _ in range(50)]
    counts, local = ac.update_check(code, positions, rng)
    assert counts == [4] * 50 and local
