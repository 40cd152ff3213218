"""Invariant almost Hermitian metrics, the Hodge star, and anti-self-dual forms.

A left-invariant metric compatible with an almost complex structure is kept
in the normal form

    omega = i r^2 phi^{1 1bar} + i s^2 phi^{2 2bar} + u phi^{1 2bar} - conj(u) phi^{2 1bar}

with r, s > 0 and r^2 s^2 > |u|^2.  Only the squares r^2, s^2 and u enter any
formula used here, so :class:`MetricParams` stores those exactly; the square
roots r, s and tau = sqrt(r^2 s^2 - |u|^2) appear only in the orthonormalizing
coframe

    psi^1 = r phi^1 + i (conj(u)/r) phi^2,    psi^2 = (tau/r) phi^2,

and are carried exactly by the RootExt scalar ring when needed.

Anti-self-dual (1,1)-forms are the span of psi^{1 1bar} - psi^{2 2bar},
psi^{1 2bar} and psi^{2 1bar}.  Expanding in the phi-coframe and absorbing
one factor of tau into the last two coefficients (B' = B tau, C' = C tau)
makes the whole family Gaussian-rational:

    gamma(A, B', C') = A r^2 phi^{1 1bar}
        + (A (2|u|^2 - r^2 s^2) + i (B' conj(u) - C' u)) / r^2  phi^{2 2bar}
        + (-i A u + B') phi^{1 2bar}
        + ( i A conj(u) + C') phi^{2 1bar}.

The Hodge star is implemented from the coefficient formula for the star of a
(p,q)-form in a (1,0)-coframe with Gram matrix g (volume form omega^2/2); a
second, independent implementation transports through the unitary coframe and
exists purely as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .errors import MetricError, MixedBidegreeError
from .exterior import (FrameTag, InvariantForm, sort_word,
                       substitute_letters)
from .linalg import invert_matrix
from .scalars import QI, RootExt, as_fraction, to_complex


@dataclass(frozen=True)
class MetricParams:
    """Exact metric data (r^2, s^2, u) of the normal form above.

    When built from rational (r, s) the originals are remembered for echoing;
    they never enter any computation and are ignored by equality.
    """

    r2: Fraction
    s2: Fraction
    u: QI
    r_given: Fraction | None = field(default=None, compare=False, repr=False)
    s_given: Fraction | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.r2 <= 0 or self.s2 <= 0:
            raise MetricError(f"need r^2 > 0 and s^2 > 0, got {self.r2}, {self.s2}")
        if self.tau2 <= 0:
            raise MetricError(
                f"need r^2 s^2 > |u|^2, got r^2 s^2 = {self.r2 * self.s2}, "
                f"|u|^2 = {self.u.abs2()}")

    @staticmethod
    def from_rs(r, s, u) -> "MetricParams":
        r = as_fraction(r)
        s = as_fraction(s)
        if r <= 0 or s <= 0:
            raise MetricError(f"need r > 0 and s > 0, got {r}, {s}")
        return MetricParams(r * r, s * s, QI.of(u) if not isinstance(u, QI) else u,
                            r_given=r, s_given=s)

    @staticmethod
    def from_squares(r2, s2, u) -> "MetricParams":
        return MetricParams(as_fraction(r2), as_fraction(s2),
                            QI.of(u) if not isinstance(u, QI) else u)

    @property
    def tau2(self) -> Fraction:
        return self.r2 * self.s2 - self.u.abs2()

    # Gram matrix of omega = i sum g_{j kbar} phi^j wedge conj(phi^k)
    @property
    def g(self) -> list[list[QI]]:
        u = self.u
        return [[QI(self.r2), QI(0, -1) * u],
                [QI(0, 1) * u.conjugate(), QI(self.s2)]]

    @property
    def g_inv(self) -> list[list[QI]]:
        t = self.tau2
        u = self.u
        return [[QI(self.s2 / t), QI(0, 1) * u / QI(t)],
                [QI(0, -1) * u.conjugate() / QI(t), QI(self.r2 / t)]]

    @property
    def det_g(self) -> Fraction:
        return self.tau2

    # floating views
    @property
    def r(self) -> float:
        return math.sqrt(float(self.r2))

    @property
    def s(self) -> float:
        return math.sqrt(float(self.s2))

    @property
    def tau(self) -> float:
        return math.sqrt(float(self.tau2))

    def scaled(self, lam: Fraction) -> "MetricParams":
        """The metric with r -> lam r, s -> lam s, u -> lam^2 u (lam > 0)."""
        lam = as_fraction(lam)
        if lam <= 0:
            raise MetricError("scale factor must be positive")
        l2 = lam * lam
        return MetricParams(l2 * self.r2, l2 * self.s2, QI(l2) * self.u)

    def describe(self) -> str:
        return f"r^2={self.r2}, s^2={self.s2}, u={self.u}"


@dataclass(frozen=True)
class ASDCoefficients:
    """Coefficients of gamma = A psi^{1 1bar} + B psi^{1 2bar} + C psi^{2 1bar} - A psi^{2 2bar}."""

    A: complex
    B: complex
    C: complex


def fundamental_form(m: MetricParams, float_backend: bool = False) -> InvariantForm:
    """omega in the phi-coframe: a real (1,1)-form."""
    if float_backend:
        u = m.u.to_complex()
        coeffs = {(1, 3): 1j * float(m.r2), (2, 4): 1j * float(m.s2),
                  (1, 4): u, (2, 3): -u.conjugate()}
    else:
        coeffs = {(1, 3): QI(0, m.r2), (2, 4): QI(0, m.s2),
                  (1, 4): m.u, (2, 3): -m.u.conjugate()}
    return InvariantForm.build(FrameTag.COMPLEX, 2, coeffs)


def asd_form_scaled(m: MetricParams, A, Bp, Cp, float_backend: bool = False
                    ) -> InvariantForm:
    """gamma(A, B', C') with the tau-absorbed coefficients; Gaussian-rational."""
    if float_backend:
        A, Bp, Cp = complex(A), complex(Bp), complex(Cp)
        u = m.u.to_complex()
        r2, s2 = float(m.r2), float(m.s2)
        i = 1j
        uu = abs(u) ** 2
    else:
        A, Bp, Cp = QI.of(A), QI.of(Bp), QI.of(Cp)
        u = m.u
        r2, s2 = m.r2, m.s2
        i = QI(0, 1)
        uu = u.abs2()
    ub = u.conjugate()
    coeffs = {
        (1, 3): A * r2,
        (2, 4): (A * (2 * uu - r2 * s2) + i * (Bp * ub - Cp * u)) * (1 / r2 if float_backend else QI(Fraction(1) / r2)),
        (1, 4): -(i * A * u) + Bp,
        (2, 3): i * A * ub + Cp,
    }
    return InvariantForm.build(FrameTag.COMPLEX, 2, coeffs)


def asd_form(m: MetricParams, coef: ASDCoefficients) -> InvariantForm:
    """gamma(A, B, C) with the unscaled coefficients (floating backend)."""
    tau = m.tau
    return asd_form_scaled(m, complex(coef.A), complex(coef.B) * tau,
                           complex(coef.C) * tau, float_backend=True)


def asd_basis_scaled(m: MetricParams) -> tuple[InvariantForm, InvariantForm, InvariantForm]:
    """The three scaled generators gamma(1,0,0), gamma(0,1,0), gamma(0,0,1)."""
    return (asd_form_scaled(m, 1, 0, 0),
            asd_form_scaled(m, 0, 1, 0),
            asd_form_scaled(m, 0, 0, 1))


# -- unitary coframe ----------------------------------------------------------


def unitary_coframe(m: MetricParams) -> list[list[RootExt]]:
    """2x2 matrix expressing psi^1, psi^2 in phi^1, phi^2, exact over RootExt."""
    rad = (m.r2, m.tau2)
    r = RootExt.root_r(rad)
    tau = RootExt.root_s(rad)
    inv_r = r * RootExt.rational(QI(Fraction(1) / m.r2), rad)  # 1/r = r/r^2
    i_ub = QI(0, 1) * m.u.conjugate()
    return [[r, inv_r * i_ub],
            [RootExt.rational(0, rad), tau * inv_r]]


def unitary_coframe_float(m: MetricParams) -> list[list[complex]]:
    r, tau = m.r, m.tau
    ub = m.u.conjugate().to_complex()
    return [[complex(r), 1j * ub / r], [0j, tau / r]]


def _unitary_stacked(m: MetricParams, float_backend: bool):
    """4x4 matrix of (psi^1, psi^2, conj psi^1, conj psi^2) in phi-letters."""
    top = unitary_coframe_float(m) if float_backend else unitary_coframe(m)
    if float_backend:
        zero = 0j
        conj_rows = [[x.conjugate() for x in row] for row in top]
    else:
        rad = (m.r2, m.tau2)
        zero = RootExt.rational(0, rad)
        conj_rows = [[x.conjugate() for x in row] for row in top]
    return [
        [top[0][0], top[0][1], zero, zero],
        [top[1][0], top[1][1], zero, zero],
        [zero, zero, conj_rows[0][0], conj_rows[0][1]],
        [zero, zero, conj_rows[1][0], conj_rows[1][1]],
    ]


@lru_cache(maxsize=256)
def _unitary_substitutions(m: MetricParams, float_backend: bool):
    """(phi letters in psi letters, psi letters in phi letters), cached per metric."""
    stacked = _unitary_stacked(m, float_backend)
    return invert_matrix(stacked), stacked


# -- Hodge star ---------------------------------------------------------------


def _perm_sign(seq: list[int]) -> int:
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq))
                     if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def _star_with_gram(f: InvariantForm, g_inv, det_g, one) -> InvariantForm:
    """Star of a pure (p,q)-form in a complex-type frame with Gram matrix g."""
    bd = f.bidegree()
    if bd is None and not f.is_zero:
        raise MixedBidegreeError("the Hodge star needs a pure-bidegree form")
    if f.is_zero:
        p = q = 0
        if f.degree:
            # degree fixes p+q; the output degree is all that matters
            p = min(f.degree, 2)
            q = f.degree - p
    else:
        p, q = bd
    n = 2
    # i^n (-1)^{n(n-1)/2 + pq} det(g) reduces to (-1)^{pq} det(g) for n = 2
    prefactor = det_g if (p * q) % 2 == 0 else -det_g
    out: dict = {}
    full = (1, 2)
    for a_idx in combinations(full, p):
        comp_a = tuple(x for x in full if x not in a_idx)
        for b_idx in combinations(full, q):
            comp_b = tuple(x for x in full if x not in b_idx)
            # raised coefficient psi^{abar_p b_q}
            raised = None
            for gammas in product(full, repeat=p):
                for lams in product(full, repeat=q):
                    word, sign = sort_word(list(gammas) + [x + 2 for x in lams])
                    if word is None:
                        continue
                    c = f.coeffs.get(word)
                    if not c:
                        continue
                    factor = one
                    for ak, gk in zip(a_idx, gammas):
                        factor = factor * g_inv[ak - 1][gk - 1]
                    for lk, bk in zip(lams, b_idx):
                        factor = factor * g_inv[lk - 1][bk - 1]
                    term = factor * c
                    if sign < 0:
                        term = -term
                    raised = term if raised is None else raised + term
            if raised is None or not raised:
                continue
            # epsilon: permutation (1, 2, 1bar, 2bar) -> (A_p, B_q bar, rest, rest bar)
            order = ([x - 1 for x in a_idx] + [x + 1 for x in b_idx]
                     + [x - 1 for x in comp_a] + [x + 1 for x in comp_b])
            eps = _perm_sign(order)
            word_out, ssign = sort_word(list(comp_b) + [x + 2 for x in comp_a])
            val = prefactor * raised
            if eps * ssign < 0:
                val = -val
            out[word_out] = out[word_out] + val if word_out in out else val
    return InvariantForm.build(f.frame, 2 * n - f.degree, out)


def hodge_star(f: InvariantForm, m: MetricParams) -> InvariantForm:
    """Hodge star of a pure (p,q)-form in the phi-coframe.

    Maps (p,q) to (2-q, 2-p); the volume form is omega^2/2.
    """
    if f.frame is not FrameTag.COMPLEX:
        raise MixedBidegreeError("hodge_star expects a phi-coframe form")
    if f.is_float:
        g_inv = [[to_complex(x) for x in row] for row in m.g_inv]
        return _star_with_gram(f, g_inv, complex(float(m.det_g)), 1.0 + 0j)
    return _star_with_gram(f, m.g_inv, QI(m.det_g), QI(1))


def hodge_star_via_unitary(f: InvariantForm, m: MetricParams) -> InvariantForm:
    """Cross-check star: transport to the unitary coframe, star there, return.

    In the unitary coframe the Gram matrix is the identity.  The exact path
    carries the root factors r and tau in the RootExt ring and the result is
    certified rational before conversion back.
    """
    if f.frame is not FrameTag.COMPLEX:
        raise MixedBidegreeError("hodge_star_via_unitary expects a phi-coframe form")
    float_backend = f.is_float
    phi_in_psi, psi_in_phi = _unitary_substitutions(m, float_backend)
    if float_backend:
        ident = [[1.0 + 0j if a == b else 0j for b in range(2)] for a in range(2)]
        lift = f
        det, one = 1.0 + 0j, 1.0 + 0j
    else:
        rad = (m.r2, m.tau2)
        ident = [[QI(1), QI(0)], [QI(0), QI(1)]]
        lift = InvariantForm.build(
            f.frame, f.degree,
            {w: RootExt.make((c, 0, 0, 0), rad) for w, c in f.coeffs.items()})
        det, one = QI(1), QI(1)
    to_psi = substitute_letters(lift, FrameTag.UNITARY, phi_in_psi)
    starred = _star_with_gram(to_psi, ident, det, one)
    back = substitute_letters(starred, FrameTag.COMPLEX, psi_in_phi)
    if float_backend:
        return back
    coeffs = {}
    for w, c in back.coeffs.items():
        coeffs[w] = c.rational_value() if isinstance(c, RootExt) else c
    return InvariantForm.build(FrameTag.COMPLEX, back.degree, coeffs)


def volume_form(m: MetricParams) -> InvariantForm:
    """omega^2 / 2 = tau^2 phi^{1 2 1bar 2bar}."""
    return InvariantForm.build(FrameTag.COMPLEX, 4, {(1, 2, 3, 4): QI(m.tau2)})


def inner_product_density(f: InvariantForm, m: MetricParams):
    """<f,f> as the coefficient c in f wedge star(conj f) = c vol."""
    pairing = f.wedge(hodge_star(f.conjugated(), m))
    c = pairing.coeffs.get((1, 2, 3, 4))
    if c is None:
        return QI(0) if not f.is_float else 0j
    tau2 = QI(m.tau2) if not f.is_float else complex(float(m.tau2))
    return c / tau2


def gauduchon_residual(calc, m: MetricParams, float_backend: bool = False
                       ) -> InvariantForm:
    """del delbar omega; identically zero for every invariant metric here."""
    omega = fundamental_form(m, float_backend)
    return calc.del_(calc.delbar(omega))
