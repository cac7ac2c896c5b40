"""Seeded invariant suites for every module.

The report holds only values derived from the seed (no timings, no
addresses), so two runs with the same seed are byte-identical.
"""

from __future__ import annotations

import functools
import random

from .census import (
    census_pgl2,
    census_sl2,
    enumerate_pgl2,
    fiber_compatible,
    parity_ok,
)
from .duality import contragredient_dual, verify_perfect
from .errors import NotAnInvolution, PrymCensusError
from .involution import (
    InvolutionLattice,
    block_form,
    component_group,
    component_group_oracle,
    decompose,
    split,
)
from .linalg import (
    IntegerMatrix,
    cokernel_invariants,
    determinant,
    kernel_basis,
    random_unimodular,
    smith_normal_form,
    unimodular_inverse,
)
from .spectral import build, closed_form_counts, fiber_counts, valid_curves

DEFAULT_SEED = 20240601


def random_involution(rng, a, b, c):
    n = a + b + 2 * c
    U = random_unimodular(n, rng)
    return U @ block_form(a, b, c) @ unimodular_inverse(U)


def random_multiplicities(rng, min_rank=1, max_rank=12):
    while True:
        a = rng.randint(0, max_rank)
        b = rng.randint(0, max_rank)
        c = rng.randint(0, max_rank // 2)
        if min_rank <= a + b + 2 * c <= max_rank:
            return a, b, c


class _Suite:
    def __init__(self, name):
        self.name = name
        self.cases = 0
        self.failure = None

    def fail(self, invariant, **counterexample):
        if self.failure is None:
            self.failure = {"invariant": invariant, **counterexample}

    def report(self):
        return {
            "suite": self.name,
            "cases": self.cases,
            "passed": self.failure is None,
            "first_failure": self.failure,
        }


def _random_matrix(rng, rows, cols, bound=5):
    return IntegerMatrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)],
        cols=cols,
    )


def suite_linalg(rng, cases=100):
    s = _Suite("exact-linalg")
    for _ in range(cases):
        M = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        s.cases += 1
        snf = smith_normal_form(M)
        if snf.U @ M @ snf.V != snf.D:
            s.fail("U M V = D", matrix=M.tolist())
        if abs(determinant(snf.U)) != 1 or abs(determinant(snf.V)) != 1:
            s.fail("U, V unimodular", matrix=M.tolist())
        d = [x for x in snf.diagonal if x]
        if any(b % a for a, b in zip(d, d[1:])) or any(x < 0 for x in d):
            s.fail("divisibility chain", matrix=M.tolist())
        K = kernel_basis(M)
        if not (M @ K).is_zero() or (K.cols and set(
                smith_normal_form(K).diagonal) != {1}):
            s.fail("kernel saturated and annihilated", matrix=M.tolist())
        P = random_unimodular(M.rows, rng)
        Q = random_unimodular(M.cols, rng)
        if cokernel_invariants(P @ M @ Q) != cokernel_invariants(M):
            s.fail("cokernel invariants basis-independent", matrix=M.tolist())
    return s.report()


def _involution_failure(a, b, c, seed):
    """Check one conjugated direct sum; return the violated invariant or None."""
    rng = random.Random(seed)
    T = random_involution(rng, a, b, c)
    L = InvolutionLattice(T)
    try:
        sd = split(L)
        if sd.lambda_plus.cols + sd.lambda_minus.cols != L.rank:
            return "rank(L+) + rank(L-) = n"
        if decompose(L, witness=True).multiplicities != (a, b, c):
            return "decompose recovers multiplicities"
        cg = component_group(L, sd)
        if any(d not in (1, 2) for d in cg.invariant_factors):
            return "invariant factors in {1, 2}"
        if L.rank <= 10 and component_group_oracle(L) != 2 ** b:
            return "oracle count = 2^n_sign"
    except PrymCensusError as exc:
        return f"{exc.name}: {exc}"
    return None


def _shrink(a, b, c, seed, check):
    """Greedily lower multiplicities while the failure persists."""
    changed = True
    while changed:
        changed = False
        for cand in ((a - 1, b, c), (a, b - 1, c), (a, b, c - 1)):
            if min(cand) >= 0 and sum(cand) > 0 and check(*cand, seed):
                a, b, c = cand
                changed = True
                break
    return a, b, c


def suite_involution(rng, cases=200):
    s = _Suite("involution-lattice")
    for _ in range(cases):
        a, b, c = random_multiplicities(rng)
        seed = rng.randrange(2 ** 32)
        s.cases += 1
        bad = _involution_failure(a, b, c, seed)
        if bad:
            a, b, c = _shrink(a, b, c, seed, _involution_failure)
            s.fail(bad, multiplicities=[a, b, c], seed=seed)
            break
    for T, want in (([[1]], (1, 0, 0)), ([[-1]], (0, 1, 0)),
                    ([[0, 1], [1, 0]], (0, 0, 1))):
        s.cases += 1
        if decompose(InvolutionLattice.from_rows(T)).multiplicities != want:
            s.fail("basic blocks", matrix=T)
    return s.report()


def suite_duality(rng, cases=100):
    s = _Suite("duality")
    for _ in range(cases):
        a, b, c = random_multiplicities(rng)
        n = a + b + 2 * c
        T = random_involution(rng, a, b, c)
        P = random_unimodular(n, rng)
        s.cases += 1
        try:
            D = contragredient_dual(InvolutionLattice(T), P)
            ok, pairing, _ = verify_perfect(D, seed=rng.randrange(2 ** 32))
        except PrymCensusError as exc:
            s.fail(f"{exc.name}: {exc}", T=T.tolist(), P=P.tolist())
            break
        if not ok:
            s.fail("pairing is perfect", T=T.tolist(), P=P.tolist())
        if pairing.rank_L != pairing.rank_dual:
            s.fail("equal component counts", T=T.tolist(), P=P.tolist())
    return s.report()


@functools.lru_cache(maxsize=None)
def _spectral(curve):
    S = build(curve)
    return S, fiber_counts(curve, S)


def suite_spectral(g_max=9):
    """Structural invariants of the constructed spectral lattices."""
    s = _Suite("spectral-homology")
    by_gk = {}
    for curve in valid_curves(3, g_max):
        s.cases += 1
        where = {"g": curve.g, "k": curve.k, "ell": curve.ell}
        try:
            S, fc = _spectral(curve)
        except PrymCensusError as exc:
            s.fail(f"{exc.name}: {exc}", **where)
            continue
        if not all(S.checks().values()):
            s.fail("I^2 = Tau^2 = id, [I, Tau] = 0, rank 8g-6", **where)
        if fc.jacobian_components != closed_form_counts(curve)[0]:
            s.fail("jacobian = 2^(2 ell - 1)", **where)
        if fc.sl2_components != fc.pgl2_components:
            s.fail("prym = pgl2", **where)
        by_gk.setdefault((curve.g, curve.k), set()).add(fc.sl2_components)
    for (g, k), counts in sorted(by_gk.items()):
        if len(counts) != 1:
            s.fail("prym count independent of ell", g=g, k=k)
    return s.report()


def suite_spectral_closed_forms(g_max=9):
    """Prym and PGL(2) quotient counts against 2^k."""
    s = _Suite("spectral-closed-forms")
    for curve in valid_curves(3, g_max):
        s.cases += 1
        fc = _spectral(curve)[1]
        _, sl2, pgl2 = closed_form_counts(curve)
        if (fc.sl2_components, fc.pgl2_components) != (sl2, pgl2):
            s.fail("prym = pgl2 = 2^k", g=curve.g, k=curve.k, ell=curve.ell,
                   computed=[fc.sl2_components, fc.pgl2_components],
                   closed_form=[sl2, pgl2])
    return s.report()


def suite_census(k_max=20, exhaustive_k=12):
    s = _Suite("moduli-census")
    for k in range(1, k_max + 1):
        s.cases += 1
        try:
            census_sl2(k)
            census_pgl2(k)
        except PrymCensusError as exc:
            s.fail(f"{exc.name}: {exc}", k=k)
    for k in range(1, exhaustive_k + 1):
        s.cases += 1
        if not all(parity_ok(t) for t in enumerate_pgl2(k)):
            s.fail("every PGL(2) tuple has even parity", k=k)
        for ell in range(1, k):
            s.cases += 1
            fc = fiber_compatible(k, ell)
            if fc.pre_parity != 2 ** k or fc.parity_filtered > fc.pre_parity:
                s.fail("fiber pre-parity count = 2^k", k=k, ell=ell)
    return s.report()


def suite_injected_fault():
    """Feeds a non-involution through decompose; must be caught and reported."""
    s = _Suite("injected-fault")
    s.cases += 1
    T = [[2]]
    try:
        decompose(InvolutionLattice.from_rows(T))
    except NotAnInvolution as exc:
        s.fail(f"{exc.name}: {exc}", matrix=T)
    return s.report()


def selftest(seed=DEFAULT_SEED, g_max=9, k_max=20, inject_fault=False):
    rng = random.Random(seed)
    suites = [
        suite_linalg(random.Random(rng.randrange(2 ** 32))),
        suite_involution(random.Random(rng.randrange(2 ** 32))),
        suite_duality(random.Random(rng.randrange(2 ** 32))),
        suite_spectral(g_max),
        suite_spectral_closed_forms(g_max),
        suite_census(k_max),
    ]
    if inject_fault:
        suites.append(suite_injected_fault())
    return {
        "seed": seed,
        "passed": all(x["passed"] for x in suites),
        "suites": suites,
    }
