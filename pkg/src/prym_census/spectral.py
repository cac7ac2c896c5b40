"""Homology of the spectral curve of a real quadratic differential.

X is a type I real curve of genus g with k real circles, so X minus its
real locus is two copies of an oriented genus-h surface X_0 with k boundary
circles and g = 2h + k - 1.  S -> X is the double cover eta^2 = b with
sheet involution i; the real structure lifts to tau on S and commutes with
i.  Over the first ell circles the lifts are tau-fixed, over the remaining
k - ell circles tau agrees with i.

The basis of H_1(S, Z) has 8g - 6 elements:

* alpha(j, s), j = 1..2h, s in {id, i, tau, itau}: orbits of size 4
* beta(j, s), j = 1..2g-4, s in {id, tau}: i acts by -1
* gamma_fixed(j, s), j < ell, s in {id, i}: tau-fixed boundary lifts
* gamma_swap(j, s), j > ell, s in {id, i}: tau gamma = i gamma
* gamma_ell: tau-fixed; its i-image is eliminated with the relation that
  the boundary of the half-curve S_0 vanishes,
  sum_j (gamma_j + i gamma_j) = 0
* delta_fixed(j, s), j < ell: tau delta = -delta
* delta_swap(j, s), ell < j < k: tau delta = -i delta
* delta_ell, i_delta_ell, mu: tau delta_ell = mu - delta_ell, i mu = -mu

Matrices act on column vectors; column j is the image of basis element j.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistency, InvalidCurveData
from .involution import InvolutionLattice, decompose
from .linalg import (
    IntegerMatrix,
    kernel_basis,
    smith_normal_form,
    solve_in_span,
    unimodular_inverse,
)


@dataclass(frozen=True)
class RealCurveData:
    g: int
    k: int
    ell: int

    def __post_init__(self):
        g, k, ell = self.g, self.k, self.ell
        for name, v in (("g", g), ("k", k), ("ell", ell)):
            if type(v) is not int:
                raise InvalidCurveData(f"{name} must be an integer")
        if g < 2:
            raise InvalidCurveData(f"genus g = {g} must be at least 2")
        if k < 1:
            raise InvalidCurveData(f"need at least one real circle, k = {k}")
        if k > g + 1:
            raise InvalidCurveData(
                f"Harnack's inequality k <= g + 1 fails: k = {k}, g = {g}"
            )
        if not 1 <= ell <= k - 1:
            raise InvalidCurveData(
                f"need 1 <= ell <= k - 1, got ell = {ell}, k = {k}"
            )
        if (g - k + 1) % 2:
            raise InvalidCurveData(
                f"g = 2h + k - 1 has no integer solution h for g = {g}, k = {k}"
            )

    @property
    def h(self):
        return (self.g - self.k + 1) // 2


def valid_curves(g_min=2, g_max=9):
    for g in range(g_min, g_max + 1):
        for k in range(2, g + 2):
            if (g - k + 1) % 2:
                continue
            for ell in range(1, k):
                yield RealCurveData(g, k, ell)


def basis_labels(curve: RealCurveData):
    g, k, ell, h = curve.g, curve.k, curve.ell, curve.h
    labels = []
    for j in range(1, 2 * h + 1):
        labels += [("alpha", j, s) for s in ("id", "i", "tau", "itau")]
    for j in range(1, 2 * g - 3):
        labels += [("beta", j, s) for s in ("id", "tau")]
    for j in range(1, ell):
        labels += [("gamma_fixed", j, s) for s in ("id", "i")]
    for j in range(ell + 1, k + 1):
        labels += [("gamma_swap", j, s) for s in ("id", "i")]
    labels.append(("gamma_ell", ell, "id"))
    for j in range(1, ell):
        labels += [("delta_fixed", j, s) for s in ("id", "i")]
    for j in range(ell + 1, k):
        labels += [("delta_swap", j, s) for s in ("id", "i")]
    labels += [("delta_ell", ell, "id"), ("delta_ell", ell, "i"),
               ("mu", ell, "id")]
    return labels


def label_str(label):
    kind, j, s = label
    return f"{kind}({j},{s})"


@dataclass(frozen=True)
class SpectralHomology:
    curve: RealCurveData
    basis_labels: tuple
    I: IntegerMatrix
    Tau: IntegerMatrix

    @property
    def rank(self):
        return len(self.basis_labels)

    def checks(self):
        n = self.rank
        E = IntegerMatrix.identity(n)
        return {
            "involutions": (self.I @ self.I == E) and (self.Tau @ self.Tau == E),
            "commute": self.I @ self.Tau == self.Tau @ self.I,
            "rank": n == 8 * self.curve.g - 6,
        }


def build(curve: RealCurveData) -> SpectralHomology:
    labels = basis_labels(curve)
    index = {lab: n for n, lab in enumerate(labels)}
    n = len(labels)
    i_img, t_img = {}, {}

    def e(label, c=1):
        return {index[label]: c}

    def add(*terms):
        out = {}
        for t in terms:
            for key, c in t.items():
                out[key] = out.get(key, 0) + c
        return {key: c for key, c in out.items() if c}

    def neg(t):
        return {key: -c for key, c in t.items()}

    for lab in labels:
        kind, j, s = lab
        if kind == "alpha":
            i_s = {"id": "i", "i": "id", "tau": "itau", "itau": "tau"}[s]
            t_s = {"id": "tau", "tau": "id", "i": "itau", "itau": "i"}[s]
            i_img[lab] = e((kind, j, i_s))
            t_img[lab] = e((kind, j, t_s))
        elif kind == "beta":
            i_img[lab] = e(lab, -1)
            t_img[lab] = e((kind, j, "tau" if s == "id" else "id"))
        elif kind == "gamma_fixed":
            i_img[lab] = e((kind, j, "i" if s == "id" else "id"))
            t_img[lab] = e(lab)
        elif kind == "gamma_swap":
            other = e((kind, j, "i" if s == "id" else "id"))
            i_img[lab] = other
            t_img[lab] = other
        elif kind == "gamma_ell":
            # i gamma_ell = -gamma_ell - sum_{j != ell} (gamma_j + i gamma_j)
            terms = [e(lab, -1)]
            for other in labels:
                if other[0] in ("gamma_fixed", "gamma_swap"):
                    terms.append(e(other, -1))
            i_img[lab] = add(*terms)
            t_img[lab] = e(lab)
        elif kind == "delta_fixed":
            i_img[lab] = e((kind, j, "i" if s == "id" else "id"))
            t_img[lab] = e(lab, -1)
        elif kind == "delta_swap":
            other = e((kind, j, "i" if s == "id" else "id"))
            i_img[lab] = other
            t_img[lab] = neg(other)
        elif kind == "delta_ell":
            d, di = e((kind, j, "id")), e((kind, j, "i"))
            mu = e(("mu", j, "id"))
            if s == "id":
                i_img[lab] = di
                t_img[lab] = add(mu, neg(d))
            else:
                # forced by tau i = i tau
                i_img[lab] = d
                t_img[lab] = add(neg(mu), neg(di))
        elif kind == "mu":
            i_img[lab] = e(lab, -1)
            t_img[lab] = e(lab)
        else:  # pragma: no cover
            raise AssertionError(kind)

    def to_matrix(images):
        cols = []
        for lab in labels:
            col = [0] * n
            for key, c in images[lab].items():
                col[key] = c
            cols.append(col)
        return IntegerMatrix.from_columns(cols, n)

    S = SpectralHomology(curve, tuple(labels), to_matrix(i_img),
                         to_matrix(t_img))
    failed = [name for name, ok in S.checks().items() if not ok]
    if failed:
        raise InternalInconsistency(f"spectral lattice fails {failed}")
    return S


def jacobian_lattice(S: SpectralHomology) -> InvolutionLattice:
    return InvolutionLattice(S.Tau)


def prym_lattice(S: SpectralHomology) -> InvolutionLattice:
    """The i-anti-invariant sublattice with tau restricted to it."""
    K = kernel_basis(S.I + IntegerMatrix.identity(S.rank))
    R = solve_in_span(K, S.Tau @ K)
    return InvolutionLattice(R)


def pgl2_lattice(S: SpectralHomology) -> InvolutionLattice:
    """H_1 modulo its i-invariant sublattice, with the induced tau."""
    n = S.rank
    F = kernel_basis(S.I - IntegerMatrix.identity(n))
    f = F.cols
    snf = smith_normal_form(F)
    # U F = [I_f; 0] V^-1, so the last n - f rows of U project onto the quotient
    q = snf.U.select_rows(range(f, n))
    if not (q @ S.Tau @ F).is_zero():
        raise InternalInconsistency("tau does not preserve the i-invariant part")
    section = unimodular_inverse(snf.U).select_columns(range(f, n))
    return InvolutionLattice(q @ S.Tau @ section)


@dataclass(frozen=True)
class FiberCounts:
    jacobian_components: int
    sl2_components: int
    pgl2_components: int
    n_sign_jacobian: int
    n_sign_sl2: int
    n_sign_pgl2: int


def fiber_counts(curve: RealCurveData, S: SpectralHomology | None = None):
    """Component counts computed from the constructed lattices."""
    if S is None:
        S = build(curve)
    jac = decompose(jacobian_lattice(S)).n_sign
    prym = decompose(prym_lattice(S)).n_sign
    pgl = decompose(pgl2_lattice(S)).n_sign
    return FiberCounts(2 ** jac, 2 ** prym, 2 ** pgl, jac, prym, pgl)


def closed_form_counts(curve: RealCurveData):
    """Jacobian 2^(2 ell - 1); Prym and PGL(2) quotient 2^k each."""
    return 2 ** (2 * curve.ell - 1), 2 ** curve.k, 2 ** curve.k
