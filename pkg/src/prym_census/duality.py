"""Dual involution lattices and the mod-2 pairing of their component groups.

For dual lattices Lambda, Lambda^v with pairing <x, y> = y^T P x (P
unimodular) and involutions adjoint under it (P T = T^v^T P), the rule
(x/2, y/2) -> <x, y> mod 2 is well defined on the component groups and
perfect.  Shifting x by x' - T x' changes the value by 2 <x', y>.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    AdjointnessViolation,
    InternalInconsistency,
    RankGuardExceeded,
)
from .involution import ComponentGroup, InvolutionLattice, component_group, validate
from .linalg import IntegerMatrix, determinant, f2_rank, unimodular_inverse

BRUTE_FORCE_MAX_RANK = 20


@dataclass(frozen=True)
class DualPair:
    L: InvolutionLattice
    Ldual: InvolutionLattice
    P: IntegerMatrix

    def __post_init__(self):
        n = self.L.rank
        if self.Ldual.rank != n or (self.P.rows, self.P.cols) != (n, n):
            raise ValueError("lattice, dual and pairing must share one rank")
        if abs(determinant(self.P)) != 1:
            raise ValueError("pairing matrix is not unimodular")

    def pair(self, x, y):
        """<x, y> = y^T P x."""
        Px = self.P @ x
        return sum(a * b for a, b in zip(y, Px))

    def is_adjoint(self):
        return self.P @ self.L.T == self.Ldual.T.T @ self.P


def standard_dual(L: InvolutionLattice) -> DualPair:
    validate(L)
    return DualPair(L, InvolutionLattice(L.T.T),
                    IntegerMatrix.identity(L.rank))


def contragredient_dual(L: InvolutionLattice, P: IntegerMatrix) -> DualPair:
    """Dual with pairing P; the dual involution is (P T P^-1)^T."""
    validate(L)
    Tdual = (P @ L.T @ unimodular_inverse(P)).T
    return DualPair(L, InvolutionLattice(Tdual), P)


@dataclass(frozen=True)
class F2Pairing:
    gram: tuple  # gram[i][j] = <x_i, y_j> mod 2
    perfect: bool
    rank_L: int
    rank_dual: int
    group_L: Optional[ComponentGroup] = field(default=None, compare=False)
    group_dual: Optional[ComponentGroup] = field(default=None, compare=False)


def _gram(D, xs, ys):
    return tuple(tuple(D.pair(x, y) & 1 for y in ys) for x in xs)


def _shifted(vec, shifts, rng):
    v = list(vec)
    for s in shifts:
        c = rng.randint(-2, 2)
        if c:
            v = [a + c * b for a, b in zip(v, s)]
    return tuple(v)


def induced_pairing(D: DualPair, trials: int = 3, seed: int = 0) -> F2Pairing:
    """Gram matrix of the mod-2 pairing on the chosen class generators.

    The gram matrix is recomputed ``trials`` times after moving every
    generator by a random element of pi_-(Lambda) (resp. of the dual); any
    change means the pairing is ill-defined.
    """
    validate(D.L)
    validate(D.Ldual)
    if not D.is_adjoint():
        raise AdjointnessViolation(
            "P T != T_dual^T P: the involutions are not adjoint under P"
        )
    cg, cgd = component_group(D.L), component_group(D.Ldual)
    gram = _gram(D, cg.generators, cgd.generators)
    rng = random.Random(seed)
    for _ in range(trials):
        xs = [_shifted(x, cg.shifts, rng) for x in cg.generators]
        ys = [_shifted(y, cgd.shifts, rng) for y in cgd.generators]
        if _gram(D, xs, ys) != gram:
            raise InternalInconsistency(
                "mod-2 pairing depends on the choice of representatives"
            )
    r, rd = cg.f2_rank, cgd.f2_rank
    perfect = r == rd and (
        r == 0 or f2_rank(IntegerMatrix.from_rows(gram, cols=rd)) == r
    )
    return F2Pairing(gram, perfect, r, rd, cg, cgd)


@dataclass(frozen=True)
class PerfectnessCertificate:
    perfect: bool
    # (side, class numerator, partner numerator) with odd pairing
    partners: tuple
    # first class found without a partner, if any
    failure: Optional[tuple] = None


def _brute_force(D, reps_L, reps_dual):
    """Search, for every nonzero class on each side, an odd-pairing partner."""

    def mask(v):
        return sum((x & 1) << i for i, x in enumerate(v))

    # <x, y> mod 2 = parity of (P x mod 2) & (y mod 2)
    px = [mask(D.P @ x) for x in reps_L]
    ym = [mask(y) for y in reps_dual]
    partners = []
    for a in range(1, len(reps_L)):
        b = next((b for b in range(len(ym)) if bin(px[a] & ym[b]).count("1") & 1),
                 None)
        if b is None:
            return False, tuple(partners), ("L", reps_L[a])
        partners.append(("L", reps_L[a], reps_dual[b]))
    for b in range(1, len(reps_dual)):
        a = next((a for a in range(len(px)) if bin(px[a] & ym[b]).count("1") & 1),
                 None)
        if a is None:
            return False, tuple(partners), ("dual", reps_dual[b])
        partners.append(("dual", reps_dual[b], reps_L[a]))
    return True, tuple(partners), None


def verify_perfect(D: DualPair, max_rank: int = BRUTE_FORCE_MAX_RANK,
                   seed: int = 0):
    """Perfectness by F2 rank of the gram matrix and by exhaustive search.

    Returns ``(perfect, pairing, certificate)``.
    """
    pairing = induced_pairing(D, seed=seed)
    r = max(pairing.rank_L, pairing.rank_dual)
    if r > max_rank:
        raise RankGuardExceeded("f2_rank", r, max_rank)
    reps_L = list(pairing.group_L.representatives())
    reps_dual = list(pairing.group_dual.representatives())
    brute, partners, failure = _brute_force(D, reps_L, reps_dual)
    # unequal orders cannot be perfect even if every class has a partner
    brute = brute and len(reps_L) == len(reps_dual)
    if brute != pairing.perfect:
        raise InternalInconsistency(
            f"gram rank says perfect={pairing.perfect}, exhaustive search "
            f"says {brute}"
        )
    return brute, pairing, PerfectnessCertificate(brute, partners, failure)
