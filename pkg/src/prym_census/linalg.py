"""Exact integer linear algebra.

Everything here works on Python ``int`` so there is no overflow and no
floating point.  Matrices are small and dense (rank at most a few hundred),
so plain nested tuples are good enough.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence


def _check_int(x):
    # bool is an int subclass but never a valid matrix entry
    if type(x) is bool or not isinstance(x, int):
        raise TypeError(f"matrix entries must be integers, got {x!r}")
    return int(x)


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense immutable matrix over Z."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows or any(
            len(r) != self.cols for r in self.entries
        ):
            raise ValueError(
                f"entries do not form a {self.rows}x{self.cols} array"
            )

    # -- construction ---------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None):
        rows = [tuple(_check_int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int):
        columns = [list(c) for c in columns]
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows(
            [[int(i == j) for j in range(n)] for i in range(n)], cols=n
        )

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls.from_rows([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, values: Sequence[int]):
        n = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)],
            cols=n,
        )

    @classmethod
    def block_diagonal(cls, blocks: Iterable["IntegerMatrix"]):
        blocks = list(blocks)
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.entries):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out, cols=m)

    # -- access ---------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self):
        return [list(r) for r in self.entries]

    def flat(self):
        """Row-major entry sequence."""
        return [x for r in self.entries for x in r]

    def column(self, j):
        return tuple(r[j] for r in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def select_columns(self, idx):
        idx = list(idx)
        return IntegerMatrix.from_rows(
            [[r[j] for j in idx] for r in self.entries], cols=len(idx)
        )

    def select_rows(self, idx):
        idx = list(idx)
        return IntegerMatrix.from_rows(
            [self.entries[i] for i in idx], cols=self.cols
        )

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntegerMatrix.from_rows(
            [a + b for a, b in zip(self.entries, other.entries)],
            cols=self.cols + other.cols,
        )

    # -- arithmetic -----------------------------------------------------

    @property
    def T(self):
        return IntegerMatrix.from_rows(
            [list(c) for c in zip(*self.entries)] if self.rows else
            [[] for _ in range(self.cols)],
            cols=self.rows,
        )

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise ValueError(
                    f"shape mismatch {self.rows}x{self.cols} @ "
                    f"{other.rows}x{other.cols}"
                )
            # the matrices here are mostly sparse; skip zeros on both sides
            nz = [[(j, b) for j, b in enumerate(row) if b]
                  for row in other.entries]
            out = []
            for r in self.entries:
                acc = [0] * other.cols
                for a, brow in zip(r, nz):
                    if a:
                        for j, b in brow:
                            acc[j] += a * b
                out.append(tuple(acc))
            return IntegerMatrix(self.rows, other.cols, tuple(out))
        v = list(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v) if a) for r in self.entries)

    def _zip(self, other, op):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntegerMatrix.from_rows(
            [[op(a, b) for a, b in zip(r, s)]
             for r, s in zip(self.entries, other.entries)],
            cols=self.cols,
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return IntegerMatrix.from_rows(
            [[c * x for x in r] for r in self.entries], cols=self.cols
        )

    def mod2(self):
        return IntegerMatrix.from_rows(
            [[x & 1 for x in r] for r in self.entries], cols=self.cols
        )

    def is_zero(self):
        return all(x == 0 for r in self.entries for x in r)

    def is_identity(self):
        return self.rows == self.cols and all(
            x == (i == j) for i, r in enumerate(self.entries)
            for j, x in enumerate(r)
        )

    def __repr__(self):
        return f"IntegerMatrix({self.tolist()})"

    # -- JSON -----------------------------------------------------------

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols, "entries": self.tolist()}


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with U, V unimodular and D diagonal."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self):
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(M: IntegerMatrix) -> SmithForm:
    """Smith normal form with transforms.

    Pivots are chosen as the entry of smallest absolute value, ties broken
    in row-major order, so the output is reproducible.
    """
    m, n = M.rows, M.cols
    A = M.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            ra, sa = A[dst], A[src]
            for c in range(n):
                if sa[c]:
                    ra[c] += q * sa[c]
            ru, su = U[dst], U[src]
            for c in range(m):
                if su[c]:
                    ru[c] += q * su[c]

    def add_col(dst, src, q):
        if q:
            for row in A:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])

        while True:
            # clear column t and row t, re-pivoting on any smaller remainder
            changed = True
            while changed:
                changed = False
                p = A[t][t]
                for i in range(t + 1, m):
                    if A[i][t]:
                        add_row(i, t, -(A[i][t] // p))
                for j in range(t + 1, n):
                    if A[t][j]:
                        add_col(j, t, -(A[t][j] // p))
                cand = None
                for i in range(t + 1, m):
                    if A[i][t] and (cand is None or abs(A[i][t]) < cand[0]):
                        cand = (abs(A[i][t]), "r", i)
                for j in range(t + 1, n):
                    if A[t][j] and (cand is None or abs(A[t][j]) < cand[0]):
                        cand = (abs(A[t][j]), "c", j)
                if cand is not None:
                    if cand[1] == "r":
                        swap_rows(t, cand[2])
                    else:
                        swap_cols(t, cand[2])
                    changed = True
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    return SmithForm(
        IntegerMatrix(m, m, tuple(map(tuple, U))),
        IntegerMatrix(m, n, tuple(map(tuple, A))),
        IntegerMatrix(n, n, tuple(map(tuple, V))),
    )


def kernel_basis(M: IntegerMatrix) -> IntegerMatrix:
    """Columns form a basis of {x in Z^cols : M x = 0}; always saturated."""
    snf = smith_normal_form(M)
    return snf.V.select_columns(range(snf.rank, M.cols))


def cokernel_invariants(M: IntegerMatrix):
    """Return ``(torsion, free_rank)`` for Z^rows / M Z^cols.

    ``torsion`` lists the invariant factors greater than one, in divisibility
    order.
    """
    snf = smith_normal_form(M)
    torsion = [d for d in snf.diagonal if d > 1]
    return torsion, M.rows - snf.rank


def rank(M: IntegerMatrix) -> int:
    return smith_normal_form(M).rank


def determinant(M: IntegerMatrix) -> int:
    """Bareiss fraction-free elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    A = M.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def unimodular_inverse(M: IntegerMatrix) -> IntegerMatrix:
    snf = smith_normal_form(M)
    if M.rows != M.cols or not snf.D.is_identity():
        raise ValueError("matrix is not unimodular")
    return snf.V @ snf.U


def left_inverse(K: IntegerMatrix) -> IntegerMatrix:
    """Integer L with L @ K == I, for K with saturated column span."""
    snf = smith_normal_form(K)
    r = K.cols
    if snf.rank != r or any(d != 1 for d in snf.diagonal[:r]):
        raise ValueError("columns do not span a saturated sublattice")
    # K = U^-1 [I; 0] V^-1  =>  L = V [I 0] U
    return snf.V @ snf.U.select_rows(range(r))


def solve_in_span(K: IntegerMatrix, B: IntegerMatrix) -> IntegerMatrix:
    """Integer C with K @ C == B; K must have saturated column span."""
    C = left_inverse(K) @ B
    if K @ C != B:
        raise ValueError("columns of B are not in the span of K")
    return C


def f2_rank(M: IntegerMatrix) -> int:
    """Rank of M reduced mod 2 (Gaussian elimination on bit masks)."""
    rows = [sum((x & 1) << j for j, x in enumerate(r)) for r in M.entries]
    r = 0
    for bit in range(M.cols):
        mask = 1 << bit
        piv = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        r += 1
    return r


def random_unimodular(n: int, rng: random.Random, steps: int | None = None,
                      bound: int = 2) -> IntegerMatrix:
    """Random product of elementary matrices and sign flips."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return IntegerMatrix.zeros(0, 0)
    steps = 3 * n if steps is None else steps
    for _ in range(steps):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            q = rng.choice([c for c in range(-bound, bound + 1) if c])
            A[i] = [a + q * b for a, b in zip(A[i], A[j])]
        if rng.random() < 0.2:
            i = rng.randrange(n)
            A[i] = [-a for a in A[i]]
    perm = list(range(n))
    rng.shuffle(perm)
    return IntegerMatrix.from_rows([A[p] for p in perm], cols=n)


def lift_f2_invertible(A: IntegerMatrix) -> IntegerMatrix:
    """Unimodular integer matrix congruent mod 2 to the invertible 0/1 matrix A.

    Reduces A to the identity by F2 elementary operations and replays their
    inverses over Z.
    """
    n = A.rows
    W = [[x & 1 for x in r] for r in A.entries]
    ops = []
    for c in range(n):
        piv = next((i for i in range(c, n) if W[i][c]), None)
        if piv is None:
            raise ValueError("matrix is singular mod 2")
        if piv != c:
            W[c], W[piv] = W[piv], W[c]
            ops.append(("swap", c, piv))
        for i in range(n):
            if i != c and W[i][c]:
                W[i] = [a ^ b for a, b in zip(W[i], W[c])]
                ops.append(("add", i, c))
    # E_k ... E_1 A = I (mod 2), so A = E_1^-1 ... E_k^-1
    B = [[int(i == j) for j in range(n)] for i in range(n)]
    for op, i, j in reversed(ops):
        if op == "swap":
            B[i], B[j] = B[j], B[i]
        else:
            # inverse of row_i += row_j is row_i -= row_j
            B[i] = [a - b for a, b in zip(B[i], B[j])]
    return IntegerMatrix.from_rows(B, cols=n)
