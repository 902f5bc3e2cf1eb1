import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lacoding import gf2
from lacoding.exceptions import SingularMatrixError


def span_size(rows: list[int]) -> int:
    """Independent oracle: size of the row span by closure under XOR."""
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span)


matrices = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda rc: st.lists(st.lists(st.integers(0, 1), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
)


@given(matrices)
def test_rank_matches_span(a):
    m = gf2.Gf2Matrix.from_array(a)
    assert 2 ** gf2.rank(m) == span_size(list(m.rows))


@given(matrices)
def test_select_independent_columns_is_a_basis(a):
    m = gf2.Gf2Matrix.from_array(a)
    cols = gf2.select_independent_columns(m)
    assert cols == sorted(cols)
    assert len(cols) == gf2.rank(m)
    if cols:
        assert gf2.rank(m.columns(cols)) == len(cols)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_solve_agrees_with_brute_force(n):
    for entries in itertools.product((0, 1), repeat=n * n):
        a = gf2.Gf2Matrix.from_array(np.array(entries).reshape(n, n))
        images = {}
        for x in itertools.product((0, 1), repeat=n):
            images.setdefault(a.matvec(x), []).append(x)
        for b in itertools.product((0, 1), repeat=n):
            pre = images.get(b, [])
            if len(images) == 2**n:
                assert [gf2.solve(a, b)] == pre
            else:
                with pytest.raises(SingularMatrixError):
                    gf2.solve(a, b)


def test_inverse_roundtrip():
    a = gf2.Gf2Matrix.from_array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    inv = gf2.inverse(a)
    prod = (a.to_array().astype(int) @ inv.to_array().astype(int)) % 2
    assert prod.tolist() == np.eye(3, dtype=int).tolist()


def test_two_tx_inverse():
    h = gf2.Gf2Matrix.from_array([[1, 0], [1, 1]])
    assert gf2.inverse(h).to_array().tolist() == [[1, 0], [1, 1]]


def test_shape_errors():
    with pytest.raises(ValueError):
        gf2.solve(gf2.Gf2Matrix.from_array([[1, 0]]), [1])
    with pytest.raises(ValueError):
        gf2.Gf2Matrix.from_array([[2]])
    with pytest.raises(ValueError):
        gf2.Gf2Matrix.identity(2).matvec([1])
