import pytest
from hypothesis import given, settings, strategies as st

from subpack.digits import (CodeParams, IndexLayout, b_tuples, expand, fold, group_set,
                            helper_index, si_set, substitute, t_set, window, xy_sets)
from subpack.errors import BadDistance, DegenerateParams, NotConstant, OutOfRange

# the running example: s=2, m=2, r=4, n=10, l=2^11; node i of the worked example is 0-based i-1
P = CodeParams(2, 2, 10, 6)


def test_params():
    assert P.l == 2048 and P.r == 4 and P.group == 4 and P.exact_power
    assert CodeParams(2, 2, 7, 2).exact_power is False
    with pytest.raises(DegenerateParams):
        CodeParams(2, 2, 6, 3)          # s^m > n-k
    with pytest.raises(DegenerateParams):
        CodeParams(2, 1, 4, 4)
    with pytest.raises(DegenerateParams):
        CodeParams(1, 1, 4, 2)


def test_window_examples():
    assert window(6, 0, P) == 2
    assert window(6, 1, P) == 3
    assert window(6, 2, P) == 1
    assert all(window(6, i, P) == 0 for i in range(3, 10))
    with pytest.raises(OutOfRange):
        window(P.l, 0, P)
    with pytest.raises(OutOfRange):
        window(0, 10, P)


def test_substitute_examples():
    assert [substitute(0, 1, w, P) for w in ((0, 0), (0, 1), (1, 0), (1, 1))] == [0, 2, 4, 6]
    assert substitute(6, 1, (1, 1), P) == 6
    with pytest.raises(OutOfRange):
        substitute(0, 1, (2, 0), P)


def test_group_and_t_sets():
    assert group_set(0, 1, P) == [0, 2, 4, 6]
    assert t_set(0, 0, 1, (0,), P) == [0, 4]
    assert t_set(0, 0, 1, (1,), P) == [2, 6]
    assert t_set(0, 2, 1, (0,), P) == [0, 2]
    assert t_set(0, 2, 1, (1,), P) == [4, 6]
    with pytest.raises(BadDistance):
        t_set(0, 3, 1, (0,), P)


def test_helper_indices():
    assert all(helper_index(0, j, 1, P) == 0 for j in range(3, 10))
    assert helper_index(0, 0, 1, P, b=(0,)) == 0
    assert helper_index(0, 0, 1, P, b=(1,)) == 2
    assert helper_index(0, 2, 1, P, b=(0,)) == 0
    assert helper_index(0, 2, 1, P, b=(1,)) == 1
    with pytest.raises(BadDistance):
        helper_index(0, 2, 1, P)


def test_coordinatewise_lambda_indices():
    # lambda_{j, window(a, j)} in the four worked parity checks, nodes 1..4
    table = {0: [0, 0, 0, 0], 2: [2, 1, 0, 0], 4: [0, 2, 1, 0], 6: [2, 3, 1, 0]}
    for a, row in table.items():
        assert [window(a, j, P) for j in range(4)] == row
    assert [window(a, j, P) for a in (0, 2) for j in range(4, 10)] == [0] * 12
    assert [window(a, j, P) for a in (4, 6) for j in range(4, 10)] == [0] * 12


def test_si_set():
    assert si_set(0, IndexLayout(2, 1, 2)) == [0, 2]
    assert si_set(2, IndexLayout(2, 2, 3)) == [0, 1, 2, 3]
    for i in range(P.n):
        S = si_set(i, P)
        assert len(S) == 2 ** 9
        assert S == [a for a in range(P.l) if window(a, i, P) == 0]


def test_xy_sets():
    assert xy_sets(1, "X", 2) == [(0,)]
    assert xy_sets(2, "Y", 2) == [(0, 1), (1, 0), (1, 1)]
    for d in (1, 2, 3):
        assert len(xy_sets(d, "X", 3)) == 3 ** d - 1


def test_b_tuples_partition_group():
    p = CodeParams(2, 3, 10, 2)
    a = 123
    for i in (3, 5):
        for j in range(i - 2, i + 3):
            if j == i:
                continue
            w = abs(j - i)
            parts = [t_set(a, j, i, b, p) for b in b_tuples(w, p)]
            assert len(parts) == 2 ** (3 - w)
            assert sorted(x for part in parts for x in part) == group_set(a, i, p)
            for b in b_tuples(w, p):
                helper_index(a, j, i, p, b=b)       # constancy is asserted inside


def test_window_not_constant_is_surfaced(monkeypatch):
    from subpack import digits
    # pretend the near helper's sub-block were the whole group: its window varies there
    monkeypatch.setattr(digits, "t_set", lambda a, j, i, b, p: group_set(a, i, p))
    with pytest.raises(NotConstant):
        digits.helper_index(0, 2, 1, P, b=(0,))


layouts = st.sampled_from([CodeParams(2, 1, 5, 3), CodeParams(3, 1, 5, 2), CodeParams(2, 2, 7, 2)])


@settings(max_examples=200, deadline=None)
@given(layouts, st.data())
def test_digit_properties(p, data):
    a = data.draw(st.integers(0, p.l - 1))
    i = data.draw(st.integers(0, p.n - 1))
    w = tuple(data.draw(st.lists(st.integers(0, p.s - 1), min_size=p.m, max_size=p.m)))
    assert fold(expand(a, p), p.s) == a
    wv = fold(list(reversed(w)), p.s)
    assert window(substitute(a, i, w, p), i, p) == wv
    g = group_set(a, i, p)
    assert a in g and len(g) == p.group
    assert group_set(g[-1], i, p) == g
    for j in range(p.n):
        if abs(j - i) >= p.m:
            assert len({window(x, j, p) for x in g}) == 1


@pytest.mark.parametrize("p", [CodeParams(2, 1, 5, 3), CodeParams(2, 2, 6, 2)])
def test_groups_partition_index_range(p):
    for i in range(p.n):
        seen = []
        for rep in si_set(i, p):
            seen.extend(group_set(rep, i, p))
        assert sorted(seen) == list(range(p.l))
