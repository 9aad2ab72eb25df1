import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from akh.snf import smith_normal_form

import oracles as O


@pytest.mark.parametrize("A, factors", [
    ([[2, 0], [0, 3]], [1, 6]),
    (np.zeros((3, 4), dtype=int), []),
    ([[1, 1], [1, -1]], [1, 2]),
    ([[0]], []),
    ([[4, 6], [6, 9]], [1]),
])
def test_known_forms(A, factors):
    assert smith_normal_form(A) == factors


def test_transforms_reconstruct():
    A = np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    S, U, V = smith_normal_form(A, transforms=True)
    assert (U.dot(A.astype(object)).dot(V) == S).all()
    assert [S[i, i] for i in range(3)] == [2, 6, 12]
    assert abs(int(round(np.linalg.det(U.astype(float))))) == 1
    assert abs(int(round(np.linalg.det(V.astype(float))))) == 1


matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_matches_sympy(rows):
    assert smith_normal_form(rows) == O.snf_diagonal(rows)


@settings(max_examples=100, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_invariant_under_unimodular_scrambling(rows, rnd):
    A = np.array(rows, dtype=object)
    m, n = A.shape

    def unimodular(size):
        M = np.identity(size, dtype=object)
        for _ in range(3 * size):
            a, b = rnd.randrange(size), rnd.randrange(size)
            if a != b:
                M[a] += rnd.randint(-2, 2) * M[b]
        return M

    B = unimodular(m).dot(A).dot(unimodular(n))
    assert smith_normal_form(B) == smith_normal_form(A)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_divisibility_chain(rows):
    diag = smith_normal_form(rows)
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    S, U, V = smith_normal_form(rows, transforms=True)
    assert (U.dot(np.array(rows, dtype=object)).dot(V) == S).all()
