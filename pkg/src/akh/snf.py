"""Smith normal form over the integers, in exact Python arithmetic."""

from __future__ import annotations

import numpy as np


def _as_rows(A):
    if hasattr(A, "toarray"):
        A = A.toarray()
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [[int(x) for x in row] for row in A.tolist()], A.shape


def smith_normal_form(A, transforms=False):
    """Invariant factors of an integer matrix.

    Without ``transforms`` returns the nonzero diagonal entries ``d_1 | d_2 |
    ...`` (all positive).  With ``transforms`` returns ``(S, U, V)`` as
    object arrays of Python ints with ``U @ A @ V == S``, ``U`` and ``V``
    unimodular.
    """
    M, (m, n) = _as_rows(A)
    U = [[int(r == c) for c in range(m)] for r in range(m)] if transforms else None
    V = [[int(r == c) for c in range(n)] for r in range(n)] if transforms else None

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        if V is not None:
            for row in V:
                row[a], row[b] = row[b], row[a]

    def add_row(dst, src, f):  # row dst += f * row src
        rs, rd = M[src], M[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += f * rs[j]
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += f * us[j]

    def add_col(dst, src, f):  # col dst += f * col src
        for row in M:
            if row[src]:
                row[dst] += f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    def negate_row(a):
        M[a] = [-x for x in M[a]]
        if U is not None:
            U[a] = [-x for x in U[a]]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for r in range(t, m):
            row = M[r]
            for c in range(t, n):
                x = row[c]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), r, c)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, r, c = best
        swap_rows(t, r)
        swap_cols(t, c)
        while True:
            p = M[t][t]
            done = True
            for r in range(t + 1, m):
                if M[r][t]:
                    add_row(r, t, -(M[r][t] // p))
                    if M[r][t]:
                        done = False
            for c in range(t + 1, n):
                if M[t][c]:
                    add_col(c, t, -(M[t][c] // p))
                    if M[t][c]:
                        done = False
            if not done:
                # a smaller remainder appeared; move it to the pivot and retry
                best = None
                for r in range(t, m):
                    if M[r][t] and (best is None or abs(M[r][t]) < best[0]):
                        best = (abs(M[r][t]), r, "r")
                for c in range(t, n):
                    if M[t][c] and (best is None or abs(M[t][c]) < best[0]):
                        best = (abs(M[t][c]), c, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility: pull in any trailing entry the pivot does not divide
            bad = next(((r, c) for r in range(t + 1, m) for c in range(t + 1, n)
                        if M[r][c] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if M[t][t] < 0:
            negate_row(t)
        t += 1

    diag = [M[i][i] for i in range(min(m, n)) if M[i][i]]
    if not transforms:
        return diag
    obj = lambda rows, shape: np.array(rows, dtype=object).reshape(shape)
    return obj(M, (m, n)), obj(U, (m, m)), obj(V, (n, n))
