"""Lattices with involution and the real components of the associated torus.

A free lattice with an integral involution ``T`` is a Z[C2]-lattice.  Every
such lattice splits into copies of three indecomposables: trivial (rank 1,
T = 1), sign (rank 1, T = -1) and permutation (rank 2, T swaps a basis).
The connected components of the real locus through the origin of V/Lambda
are classified by the F2 vector space (Lambda_-/2) / pi_-(Lambda), whose
dimension is the number of sign summands.

Half-integral vectors are stored as integer numerators over the fixed
denominator 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import InternalInconsistency, NotAnInvolution, RankGuardExceeded
from .linalg import (
    IntegerMatrix,
    determinant,
    f2_rank,
    kernel_basis,
    left_inverse,
    lift_f2_invertible,
    smith_normal_form,
    solve_in_span,
    unimodular_inverse,
)

ORACLE_MAX_RANK = 16


@dataclass(frozen=True)
class InvolutionLattice:
    """Z^n with the involution given by the integer matrix ``T``."""

    T: IntegerMatrix

    def __post_init__(self):
        if self.T.rows != self.T.cols:
            raise ValueError("involution matrix must be square")

    @property
    def rank(self):
        return self.T.rows

    @classmethod
    def from_rows(cls, rows):
        rows = list(rows)
        return cls(IntegerMatrix.from_rows(rows, cols=len(rows)))


def involution_violation(T: IntegerMatrix):
    """First ``(i, j, value)`` with (T*T)_ij != delta_ij, or None."""
    T2 = T @ T
    for i in range(T.rows):
        for j in range(T.cols):
            if T2[i, j] != (i == j):
                return i, j, T2[i, j]
    return None


def validate(L: InvolutionLattice):
    bad = involution_violation(L.T)
    if bad is not None:
        raise NotAnInvolution(*bad)


@dataclass(frozen=True)
class SplitData:
    lambda_plus: IntegerMatrix
    lambda_minus: IntegerMatrix
    # column j is e_j - T e_j, i.e. 2 * pi_-(e_j)
    pi_minus_numerators: IntegerMatrix


def split(L: InvolutionLattice) -> SplitData:
    validate(L)
    n = L.rank
    I = IntegerMatrix.identity(n)
    plus = kernel_basis(L.T - I)
    minus = kernel_basis(L.T + I)
    if plus.cols + minus.cols != n:
        raise InternalInconsistency(
            f"rank(L+) + rank(L-) = {plus.cols} + {minus.cols} != {n}"
        )
    return SplitData(plus, minus, I - L.T)


@dataclass(frozen=True)
class ComponentGroup:
    """(Lambda_-/2) / pi_-(Lambda) with explicit generators.

    ``generators`` are numerators: the class is ``g / 2`` with ``g`` in
    Lambda_-.  ``shifts`` are the numerators of pi_-(e_j), used to move
    between representatives of the same class.
    """

    f2_rank: int
    generators: tuple
    shifts: tuple
    invariant_factors: tuple
    # row i dotted with a numerator in Lambda_- gives bit i of its class (mod 2)
    class_map: tuple = ()

    @property
    def order(self):
        return 2 ** self.f2_rank

    def representatives(self):
        """All 2^r class representatives as numerators; the first is zero."""
        n = len(self.shifts[0]) if self.shifts else 0
        for bits in itertools.product((0, 1), repeat=self.f2_rank):
            v = [0] * n
            for b, g in zip(bits, self.generators):
                if b:
                    v = [a + c for a, c in zip(v, g)]
            yield tuple(v)

    def classify(self, numerator):
        """Coordinates in F2^r of the class of ``numerator / 2``."""
        return tuple(sum(a * b for a, b in zip(row, numerator)) & 1
                     for row in self.class_map)

    def representative(self, bits):
        n = len(self.shifts[0]) if self.shifts else 0
        v = [0] * n
        for b, g in zip(bits, self.generators):
            if b & 1:
                v = [a + c for a, c in zip(v, g)]
        return tuple(v)


def component_group(L: InvolutionLattice,
                    sd: Optional[SplitData] = None) -> ComponentGroup:
    if sd is None:
        sd = split(L)
    K = sd.lambda_minus
    n, m = K.rows, K.cols
    # I - T = K C; the group is Z^m / C Z^n
    C = solve_in_span(K, sd.pi_minus_numerators)
    snf = smith_normal_form(C)
    diag = snf.diagonal
    if snf.rank != m or any(d not in (1, 2) for d in diag):
        raise InternalInconsistency(
            f"invariant factors of (L-/2)/pi-(L) are {diag}; expected 1s and 2s"
        )
    Uinv = unimodular_inverse(snf.U)
    coords = snf.U @ left_inverse(K)
    gens, class_map = [], []
    for i, d in enumerate(diag):
        if d == 2:
            gens.append(K @ Uinv.column(i))
            class_map.append(coords.entries[i])
    shifts = tuple(sd.pi_minus_numerators.columns())
    return ComponentGroup(
        f2_rank=len(gens),
        generators=tuple(gens),
        shifts=shifts,
        invariant_factors=tuple(diag),
        class_map=tuple(class_map),
    )


@dataclass(frozen=True)
class C2Decomposition:
    n_trivial: int
    n_sign: int
    n_perm: int
    # columns: trivial vectors, sign vectors, then (w, T w) pairs
    witness: Optional[IntegerMatrix] = None

    @property
    def multiplicities(self):
        return self.n_trivial, self.n_sign, self.n_perm


def block_form(n_trivial, n_sign, n_perm):
    """Standard block-diagonal involution with the given multiplicities."""
    swap = IntegerMatrix.from_rows([[0, 1], [1, 0]])
    blocks = (
        [IntegerMatrix.from_rows([[1]])] * n_trivial
        + [IntegerMatrix.from_rows([[-1]])] * n_sign
        + [swap] * n_perm
    )
    return IntegerMatrix.block_diagonal(blocks)


def decompose(L: InvolutionLattice, witness=False) -> C2Decomposition:
    """Multiplicities of trivial, sign and permutation summands.

    Computed twice: from ranks (n_perm is the F2 rank of I + T) and from the
    order of the component group.  The routes must agree.
    """
    sd = split(L)
    n = L.rank
    n_perm = f2_rank(L.T + IntegerMatrix.identity(n))
    n_sign = sd.lambda_minus.cols - n_perm
    n_trivial = sd.lambda_plus.cols - n_perm
    if n_sign < 0 or n_trivial < 0:
        raise InternalInconsistency(
            f"negative multiplicity ({n_trivial}, {n_sign}, {n_perm})"
        )
    cg = component_group(L, sd)
    if cg.f2_rank != n_sign:
        raise InternalInconsistency(
            f"rank route gives n_sign = {n_sign}, component group gives "
            f"{cg.f2_rank}"
        )
    W = _decomposition_basis(L, sd, n_perm) if witness else None
    if W is not None:
        blocks = block_form(n_trivial, n_sign, n_perm)
        if abs(determinant(W)) != 1 or L.T @ W != W @ blocks:
            raise InternalInconsistency("witness does not conjugate T to blocks")
    return C2Decomposition(n_trivial, n_sign, n_perm, W)


def _decomposition_basis(L, sd, n_perm):
    T = L.T
    n = L.rank
    I = IntegerMatrix.identity(n)
    K, Kp = sd.lambda_minus, sd.lambda_plus
    m, p = K.cols, Kp.cols

    # complement X of Lambda_- with (I + T) X = F diag(1..1, 2..2)
    Uinv = unimodular_inverse(smith_normal_form(K).U)
    comp = Uinv.select_columns(range(m, n))
    G = solve_in_span(Kp, (I + T) @ comp)
    snfG = smith_normal_form(G)
    if any(d not in (1, 2) for d in snfG.diagonal):
        raise InternalInconsistency(f"unexpected factors {snfG.diagonal}")
    c = sum(1 for d in snfG.diagonal if d == 1)
    if c != n_perm:
        raise InternalInconsistency(
            f"{c} unit factors of (I+T) on L/L- but n_perm = {n_perm}"
        )
    X = comp @ snfG.V
    F = Kp @ unimodular_inverse(snfG.U)

    # w_i spans a permutation block together with T w_i; adjust it by
    # elements of Lambda_- so that the T w_i - w_i extend to a basis of Lambda_-
    LK = left_inverse(K)
    ws = [X.column(i) for i in range(c)]
    vs = [tuple(a - b for a, b in zip(T @ w, w)) for w in ws]
    coords = [LK @ v for v in vs]
    cols = [tuple(x & 1 for x in v) for v in coords]
    for j in range(m):
        if len(cols) == m:
            break
        e = tuple(int(i == j) for i in range(m))
        if f2_rank(IntegerMatrix.from_columns(cols + [e], m)) > len(cols):
            cols.append(e)
    Q = lift_f2_invertible(IntegerMatrix.from_columns(cols, m)) if m else \
        IntegerMatrix.zeros(0, 0)

    trivial = [F.column(i) for i in range(c, p)]
    sign = [K @ Q.column(j) for j in range(c, m)]
    perm = []
    for i, (w, v) in enumerate(zip(ws, vs)):
        v_new = K @ Q.column(i)
        u = [(a - b) // 2 for a, b in zip(v, v_new)]
        w_new = tuple(a + b for a, b in zip(w, u))
        perm += [w_new, T @ w_new]
    return IntegerMatrix.from_columns(trivial + sign + perm, n)


def component_group_oracle(L: InvolutionLattice,
                           max_rank: int = ORACLE_MAX_RANK) -> int:
    """Order of (Lambda_-/2)/pi_-(Lambda) without any Smith form.

    Multiplying by 2 the group is Lambda_- / (I - T)Lambda.  Since Lambda_-
    is saturated, reduction mod 2 identifies it with S / R where
    S = Lambda_- mod 2 and R = (I - T)Lambda mod 2, both subspaces of F2^n.
    Every x in Lambda_- is (I - T)y / 2 for some y with (I + T)y = 0 mod 2,
    so S is generated by R and those vectors.  |S| and |R| are found by
    breadth-first closure under addition of generators.
    """
    n = L.rank
    if n > max_rank:
        raise RankGuardExceeded("rank", n, max_rank)
    validate(L)
    T = L.T.tolist()

    def to_mask(v):
        return sum((x & 1) << i for i, x in enumerate(v))

    # columns of (I - T) and of (I + T), which agree mod 2
    r_gens = [to_mask([int(i == j) - T[i][j] for i in range(n)])
              for j in range(n)]

    # kernel of (I + T) mod 2 by elimination on row masks
    rows = [to_mask([T[i][j] + int(i == j) for j in range(n)])
            for i in range(n)]
    pivots = []
    for col in range(n):
        bit = 1 << col
        k = next((i for i in range(len(pivots), n) if rows[i] & bit), None)
        if k is None:
            continue
        r = len(pivots)
        rows[r], rows[k] = rows[k], rows[r]
        for i in range(n):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
    free = [c for c in range(n) if c not in pivots]
    s_gens = list(r_gens)
    for f in free:
        y = [0] * n
        y[f] = 1
        for r, pc in enumerate(pivots):
            if rows[r] >> f & 1:
                y[pc] = 1
        x = []
        for i in range(n):
            num = y[i] - sum(T[i][j] * y[j] for j in range(n))
            if num % 2:
                raise InternalInconsistency("(I - T)y not divisible by 2")
            x.append(num // 2)
        s_gens.append(to_mask(x))

    def closure_size(gens):
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = a ^ g
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return len(seen)

    s, r = closure_size(s_gens), closure_size(r_gens)
    if s % r:
        raise InternalInconsistency("R is not a subgroup of S")
    return s // r
