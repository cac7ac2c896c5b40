"""Topological types of real SL(2,C) and PGL(2,C) bundles over a type I curve.

Degree zero throughout.  For SL(2) the data is a global class c = +I or -I;
for c = +I a sign per real circle, counted up to simultaneous reversal, and
for c = -I a single class.  For PGL(2) each circle carries a reduction to
PSU(2), oriented PGL(2,R) or non-oriented PGL(2,R), and the number of
non-oriented circles must be even.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InternalInconsistency, InvalidCurveData

PSU2 = "PSU2"
ORIENTED = "PGL2R_oriented"
NONORIENTED = "PGL2R_nonoriented"
PGL2_CHOICES = (PSU2, ORIENTED, NONORIENTED)

SL2_NOTE = (
    "c = +I sign assignments are counted modulo simultaneous reversal of all "
    "signs; that this normalization is always available is assumed, not proved"
)


def discrepancy_note(k):
    return (
        f"a competing closed form 3^k + 1 = {3 ** k + 1} is twice the "
        f"parity-constrained count (3^k + 1)/2 = {(3 ** k + 1) // 2}; the "
        f"latter is derived here by enumeration and recursion and is reported "
        f"as pgl2"
    )


def _check_k(k):
    if type(k) is not int or k < 1:
        raise InvalidCurveData(f"need k >= 1 real circles, got {k!r}")


# -- SL(2) ---------------------------------------------------------------

def enumerate_sl2(k):
    """Yield the SL(2) classes: ('+I', signs) up to global flip, then ('-I', 'sigma')."""
    _check_k(k)
    flip = {"+": "-", "-": "+"}
    for signs in itertools.product("+-", repeat=k):
        flipped = tuple(flip[s] for s in signs)
        if signs <= flipped:
            yield ("+I", "".join(signs))
    yield ("-I", "sigma")


@dataclass(frozen=True)
class SL2Census:
    k: int
    count: int
    closed_form: int
    note: str = SL2_NOTE


def census_sl2(k) -> SL2Census:
    count = sum(1 for _ in enumerate_sl2(k))
    closed = 2 ** (k - 1) + 1
    if count != closed:
        raise InternalInconsistency(
            f"SL(2) enumeration gives {count}, closed form {closed}"
        )
    return SL2Census(k, count, closed)


# -- PGL(2) --------------------------------------------------------------

def parity_ok(choices):
    return sum(c == NONORIENTED for c in choices) % 2 == 0


def enumerate_pgl2(k):
    """Every admissible tuple of per-circle choices (3^k candidates)."""
    _check_k(k)
    for t in itertools.product(PGL2_CHOICES, repeat=k):
        if parity_ok(t):
            yield t


def count_pgl2_by_enumeration(k):
    """Exhaustive count, split in two halves joined by parity.

    Each half is enumerated explicitly and bucketed by the parity of its
    non-oriented circles; an admissible tuple is a pair of halves of equal
    parity.  This keeps k = 20 at 2 * 3^10 tuples.
    """
    _check_k(k)
    a = k // 2

    def buckets(m):
        even = odd = 0
        for t in itertools.product(PGL2_CHOICES, repeat=m):
            if parity_ok(t):
                even += 1
            else:
                odd += 1
        return even, odd

    e1, o1 = buckets(a)
    e2, o2 = buckets(k - a)
    return e1 * e2 + o1 * o2


def pgl2_recursion(k):
    """Trace [n_1, ..., n_k] of n_k = 3^(k-1) + n_(k-1), n_1 = 2."""
    _check_k(k)
    trace = [2]
    for j in range(2, k + 1):
        trace.append(3 ** (j - 1) + trace[-1])
    return trace


def pgl2_closed_form(k):
    return (3 ** k + 1) // 2


@dataclass(frozen=True)
class PGL2Census:
    k: int
    count: int
    enumeration: int
    recursion: int
    closed_form: int
    recursion_trace: tuple
    note: str


def census_pgl2(k) -> PGL2Census:
    enum = count_pgl2_by_enumeration(k)
    trace = pgl2_recursion(k)
    closed = pgl2_closed_form(k)
    if not enum == trace[-1] == closed:
        raise InternalInconsistency(
            f"PGL(2) routes disagree for k={k}: enumeration {enum}, "
            f"recursion {trace[-1]}, closed form {closed}"
        )
    return PGL2Census(k, closed, enum, trace[-1], closed, tuple(trace),
                      discrepancy_note(k))


# -- per-fiber bound -----------------------------------------------------

@dataclass(frozen=True)
class FiberCompatible:
    k: int
    ell: int
    allowed: tuple  # allowed choice set per circle
    pre_parity: int
    parity_filtered: int
    classes: tuple  # parity-filtered tuples


def fiber_compatible(k, ell) -> FiberCompatible:
    """Choices that can meet one Hitchin fiber.

    Circles 1..ell have tau-fixed lifts and admit PSU(2) or oriented
    PGL(2,R); circles ell+1..k have lifts swapped by tau and admit only
    PGL(2,R), oriented or not.
    """
    _check_k(k)
    if type(ell) is not int or not 1 <= ell <= k - 1:
        raise InvalidCurveData(f"need 1 <= ell <= k - 1, got ell={ell!r}, k={k}")
    allowed = ((PSU2, ORIENTED),) * ell + ((ORIENTED, NONORIENTED),) * (k - ell)
    pre = 0
    classes = []
    for t in itertools.product(*allowed):
        pre += 1
        if parity_ok(t):
            classes.append(t)
    return FiberCompatible(k, ell, allowed, pre, len(classes), tuple(classes))


def paradox_report(g, k, ell, fiber=None):
    """Global component counts against the counts on one Hitchin fiber.

    ``fiber`` may be a precomputed FiberCounts; otherwise the spectral
    lattice is built.
    """
    from .spectral import RealCurveData, fiber_counts

    curve = RealCurveData(g, k, ell)
    if fiber is None:
        fiber = fiber_counts(curve)
    sl2, pgl2 = census_sl2(k), census_pgl2(k)
    bound = fiber_compatible(k, ell)
    return {
        "g": g, "k": k, "ell": ell,
        "global_pgl2": pgl2.count,
        "fiber_pgl2": fiber.pgl2_components,
        "fiber_pgl2_closed_form": 2 ** k,
        "fiber_bound": {"pre_parity": bound.pre_parity,
                        "parity_filtered": bound.parity_filtered},
        "pgl2_global_exceeds_fiber": pgl2.count > fiber.pgl2_components,
        "global_sl2": sl2.count,
        "fiber_sl2": fiber.sl2_components,
        "sl2_global_exceeds_fiber": sl2.count > fiber.sl2_components,
    }
