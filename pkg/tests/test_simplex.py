import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from mcpitts import simplex
from mcpitts.simplex import phase_one


def check(B, b, res):
    B = [[int(v) for v in row] for row in B]
    if res.feasible:
        u = res.primal
        assert all(v >= 0 for v in u)
        for row, bi in zip(B, b):
            assert sum(a * x for a, x in zip(row, u)) == bi
    else:
        pi = res.farkas
        for j in range(len(B[0])):
            assert sum(B[i][j] * pi[i] for i in range(len(B))) <= 0
        assert sum(bi * p for bi, p in zip(b, pi)) > 0


def test_simple_feasible():
    res = phase_one([[1, 1], [1, -1]], [2, 0])
    assert res.feasible
    assert res.primal == (1, 1)


def test_simple_infeasible():
    # u1 + u2 = -1 with u >= 0 is impossible
    res = phase_one([[1, 1]], [-1])
    assert not res.feasible
    check([[1, 1]], [-1], res)


def test_redundant_rows():
    B = [[1, 2, 0], [2, 4, 0], [0, 0, 0]]
    res = phase_one(B, [2, 4, 0])
    assert res.feasible
    check(B, [2, 4, 0], res)


def test_big_entries_switch_to_python_ints():
    big = 3**40
    B = [[big, 1], [1, big]]
    b = [big + 1, big + 1]
    res = phase_one(B, b)
    assert res.feasible
    check(B, b, res)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda r: st.tuples(
            st.lists(st.lists(st.integers(-3, 3), min_size=6, max_size=6), min_size=r, max_size=r),
            st.lists(st.integers(-3, 3), min_size=r, max_size=r),
        )
    )
)
def test_certificates_and_agreement_with_scipy(data):
    B, b = data
    res = phase_one(B, b)
    check(B, b, res)
    ref = linprog(np.zeros(6), A_eq=np.array(B, float), b_eq=np.array(b, float),
                  bounds=[(0, None)] * 6, method="highs")
    assert res.feasible == (ref.status == 0)


def test_lexicographic_rule_finishes_on_degenerate_cube_system():
    # all 16 points of the 4-cube with the parity labelling: very degenerate
    from itertools import product

    pts = list(product((0, 1), repeat=4))
    s = [1 if sum(p) % 2 else -1 for p in pts]
    B = [[si * p[j] for p, si in zip(pts, s)] for j in range(4)]
    B.append([-si for si in s])
    B.append([1] * 16)
    res = phase_one(B, [0] * 5 + [1])
    assert res.feasible
    assert res.pivots < 200


def test_int64_threshold_constant():
    assert simplex._SMALL ** 2 * 2 < 2**63
