"""Kernel projection, Toeplitz and coherent-state quantization, ladder operators.

Operators on the holomorphic subspace are l x l matrices tagged with their
basis (monomial th^a or orthonormal phi_a); operators on the full algebra are
l^2 x l^2 matrices over the global row-major monomial ordering.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraCtx, PGElement, aw_index, multiply
from .forms import WeightSeq, form

MONOMIAL = "monomial"
ORTHONORMAL = "orthonormal"


@dataclass(frozen=True, eq=False)
class OperatorBH:
    """Endomorphism of the holomorphic subspace; column a is the image of the
    a-th basis element in the tagged basis."""

    l: int
    matrix: np.ndarray
    basis: str

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (self.l, self.l):
            raise ValueError(f"matrix must be {self.l}x{self.l}")
        if self.basis not in (MONOMIAL, ORTHONORMAL):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)


def convert_basis(A: OperatorBH, w: WeightSeq, target: str) -> OperatorBH:
    """Rescale between the monomial and orthonormal pictures.

    With S = diag(w_a^{1/2}) the orthonormal matrix is S M S^{-1}: the a-th
    orthonormal element is w_a^{-1/2} th^a, so coordinates pick up S one way
    and S^{-1} the other.
    """
    if A.l != w.l:
        raise ValueError("order mismatch")
    if target == A.basis:
        return A
    s = np.sqrt(w.arr())
    if target == ORTHONORMAL:
        mat = (s[:, None] * A.matrix) / s[None, :]
    elif target == MONOMIAL:
        mat = (A.matrix / s[:, None]) * s[None, :]
    else:
        raise ValueError(f"unknown basis tag {target!r}")
    return OperatorBH(A.l, mat, target)


# --- kernel projections ----------------------------------------------------

def project_pk(F: PGElement, w: WeightSeq, mode: str = "closed") -> PGElement:
    """Project onto the holomorphic subspace.

    mode="closed" applies th^a thb^b -> (w_a / w_{a-b}) th^{a-b} (zero when
    a-b escapes the index range); mode="kernel" expands against the
    reproducing kernel, summing (1/w_k) <th^k, F>_w th^k.
    """
    if F.l != w.l:
        raise ValueError("order mismatch")
    l = w.l
    out = np.zeros((l, l), dtype=complex)
    if mode == "closed":
        for a in range(l):
            for b in range(l):
                c = F.coeffs[a, b]
                if c == 0 or not 0 <= a - b < l:
                    continue
                out[a - b, 0] += c * w.ratio(a, a - b)
    elif mode == "kernel":
        for k in range(l):
            out[k, 0] = form(PGElement.basis(l, k, 0), F, w) / w.w[k]
    else:
        raise ValueError(f"unknown projection mode {mode!r}")
    return PGElement(l, out)


def project_pk_bar(F: PGElement, w: WeightSeq) -> PGElement:
    """Projection onto the anti-holomorphic subspace: th^a thb^b ->
    (w_b / w_{b-a}) thb^{b-a} under the matching range guard."""
    if F.l != w.l:
        raise ValueError("order mismatch")
    l = w.l
    out = np.zeros((l, l), dtype=complex)
    for a in range(l):
        for b in range(l):
            c = F.coeffs[a, b]
            if c == 0 or not 0 <= b - a < l:
                continue
            out[0, b - a] += c * w.ratio(b, b - a)
    return PGElement(l, out)


@functools.lru_cache(maxsize=None)
def pk_operator(w: WeightSeq) -> np.ndarray:
    """The projection as an l^2 x l^2 matrix; idempotent, self-adjoint for the
    weighted form, rank l."""
    l = w.l
    P = np.zeros((l * l, l * l), dtype=complex)
    for a in range(l):
        for b in range(l):
            img = project_pk(PGElement.basis(l, a, b), w)
            P[:, aw_index(l, a, b)] = img.vector()
    P.flags.writeable = False
    return P


# --- multiplication and Toeplitz operators ---------------------------------

def mult_operator(g: PGElement, side: str, ctx: AlgebraCtx) -> np.ndarray:
    """Matrix of F -> F*g (side="right") or F -> g*F (side="left")."""
    if g.l != ctx.l:
        raise ValueError("order mismatch")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    l = ctx.l
    M = np.zeros((l * l, l * l), dtype=complex)
    # qinv_pows[k] = q^{-k}, built by repeated multiplication
    top = (l - 1) * (l - 1)
    qinv_pows = np.ones(top + 1, dtype=complex)
    if top:
        qinv_pows[1:] = np.cumprod(np.full(top, 1.0 / ctx.q))
    for x in range(l):
        for y in range(l):
            gxy = g.coeffs[x, y]
            if gxy == 0:
                continue
            c = np.arange(l - x)
            d = np.arange(l - y)
            rows = ((c[:, None] + x) * l + (d[None, :] + y)).ravel()
            cols = (c[:, None] * l + d[None, :]).ravel()
            if side == "right":
                # (th^c thb^d)(th^x thb^y) = q^{-dx} th^{c+x} thb^{d+y}
                phase = np.broadcast_to(qinv_pows[d * x][None, :], (l - x, l - y))
            else:
                # (th^x thb^y)(th^c thb^d) = q^{-yc} th^{x+c} thb^{y+d}
                phase = np.broadcast_to(qinv_pows[c * y][:, None], (l - x, l - y))
            M[rows, cols] += gxy * phase.ravel()
    return M


def toeplitz(g: PGElement, w: WeightSeq, ctx: AlgebraCtx, mode: str = "closed") -> OperatorBH:
    """Toeplitz operator of the symbol g on the holomorphic subspace.

    mode="closed" places, for each symbol monomial th^i thb^j, the entry
    w_{i+a}/w_{i+a-j} at row i+a-j of column a whenever both i+a and i+a-j
    are in range.  mode="projection" composes right multiplication with the
    kernel projection and restricts to the holomorphic block.
    """
    if not (g.l == w.l == ctx.l):
        raise ValueError("order mismatch")
    l = ctx.l
    if mode == "closed":
        M = np.zeros((l, l), dtype=complex)
        for i in range(l):
            for j in range(l):
                gij = g.coeffs[i, j]
                if gij == 0:
                    continue
                for a in range(l):
                    if i + a < l and 0 <= i + a - j < l:
                        M[i + a - j, a] += gij * w.ratio(i + a, i + a - j)
        return OperatorBH(l, M, MONOMIAL)
    if mode == "projection":
        comp = pk_operator(w) @ mult_operator(g, "right", ctx)
        hol = np.array([aw_index(l, a, 0) for a in range(l)])
        return OperatorBH(l, comp[np.ix_(hol, hol)], MONOMIAL)
    raise ValueError(f"unknown toeplitz mode {mode!r}")


def toeplitz_orthonormal(g: PGElement, w: WeightSeq, ctx: AlgebraCtx) -> OperatorBH:
    return convert_basis(toeplitz(g, w, ctx), w, ORTHONORMAL)


def toeplitz_adjoint(A: OperatorBH, w: WeightSeq) -> OperatorBH:
    """Adjoint for the weighted inner product on the holomorphic subspace."""
    if A.l != w.l:
        raise ValueError("order mismatch")
    if A.basis != MONOMIAL:
        raise ValueError("adjoint expects a monomial-basis operator")
    d = w.arr()
    mat = (np.conj(A.matrix.T) * d[None, :]) / d[:, None]
    return OperatorBH(A.l, mat, MONOMIAL)


# --- coherent-state and flat quantizations ---------------------------------

def coherent_quantization(g: PGElement, w: WeightSeq, ctx: AlgebraCtx,
                          mode: str = "closed") -> np.ndarray:
    """Quantization through the resolution of identity, on the auxiliary
    basis e_a.

    mode="closed": each symbol monomial th^i thb^j sends e_a to
    w_{j+a} / (w_{j-i+a} w_a)^{1/2} e_{j-i+a} when both j+a and j-i+a are in
    range.  mode="berezin" evaluates the defining double integral term by
    term through the algebra product.
    """
    if not (g.l == w.l == ctx.l):
        raise ValueError("order mismatch")
    l = ctx.l
    A = np.zeros((l, l), dtype=complex)
    if mode == "closed":
        for i in range(l):
            for j in range(l):
                gij = g.coeffs[i, j]
                if gij == 0:
                    continue
                for a in range(l):
                    if j + a < l and 0 <= j - i + a < l:
                        A[j - i + a, a] += gij * w.w[j + a] / math.sqrt(
                            w.w[j - i + a] * w.w[a])
        return A
    if mode == "berezin":
        sw = np.sqrt(w.arr())
        for m in range(l):
            weight = w.w[l - 1 - m]
            # th^m g thb^m inside the integral
            core = multiply(
                multiply(PGElement.basis(l, m, 0), g, ctx),
                PGElement.basis(l, 0, m), ctx)
            for r in range(l):
                for s in range(l):
                    term = multiply(
                        multiply(PGElement.basis(l, r, 0), core, ctx),
                        PGElement.basis(l, 0, s), ctx)
                    A[r, s] += weight * term.coeffs[l - 1, l - 1] / (sw[r] * sw[s])
        return A
    raise ValueError(f"unknown coherent mode {mode!r}")


def toeplitz_flat(g: PGElement, w: WeightSeq, ctx: AlgebraCtx) -> np.ndarray:
    """Left multiplication followed by the anti-holomorphic projection,
    expressed on the conjugated orthonormal basis w_a^{-1/2} thb^a."""
    if not (g.l == w.l == ctx.l):
        raise ValueError("order mismatch")
    l = ctx.l
    sw = np.sqrt(w.arr())
    M = np.zeros((l, l), dtype=complex)
    for a in range(l):
        F = PGElement.basis(l, 0, a, 1.0 / sw[a])
        img = project_pk_bar(multiply(g, F, ctx), w)
        # thb^b coefficient scaled back to the conjugated orthonormal basis
        M[:, a] = img.coeffs[0, :] * sw
    return M


# --- ladder structure ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LadderSet:
    creation: OperatorBH
    annihilation: OperatorBH
    number: OperatorBH
    deformed_ints: tuple
    deformed_factorials: tuple


def ladder_set(w: WeightSeq, ctx: AlgebraCtx) -> LadderSet:
    """Creation (degree-raising), annihilation (weighted backward shift), and
    the diagonal number operator with eigenvalues w_a / w_{a-1}."""
    l = ctx.l
    creation = toeplitz(PGElement.basis(l, 1, 0), w, ctx)
    annihilation = toeplitz(PGElement.basis(l, 0, 1), w, ctx)
    number = OperatorBH(l, creation.matrix @ annihilation.matrix, MONOMIAL)
    ints = [0.0]
    for a in range(1, l):
        ints.append(w.w[a] / w.w[a - 1])
    facts = []
    acc = 1.0
    for a in range(l):
        acc *= ints[a] if a > 0 else 1.0
        facts.append(acc)
    return LadderSet(creation, annihilation, number, tuple(ints), tuple(facts))


def operator_norm_bh(A: OperatorBH, w: WeightSeq) -> float:
    """Operator norm for the weighted inner product: the top singular value of
    the orthonormal-basis matrix."""
    on = convert_basis(A, w, ORTHONORMAL)
    return float(np.linalg.svd(on.matrix, compute_uv=False)[0])


def matrix_rank(M: np.ndarray, rel_threshold: float = 1e-9) -> int:
    """Rank by singular-value thresholding at rel_threshold * sigma_max."""
    s = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_threshold * s[0]))


def wick_rank_probe(w: WeightSeq, ctx: AlgebraCtx) -> int:
    """Rank of the span of the reverse-ordered products creation^i
    annihilation^j; reported as informational only."""
    l = ctx.l
    lad = ladder_set(w, ctx)
    cols = []
    for i in range(l):
        for j in range(l):
            op = (np.linalg.matrix_power(lad.creation.matrix, i)
                  @ np.linalg.matrix_power(lad.annihilation.matrix, j))
            cols.append(op.reshape(-1))
    return matrix_rank(np.array(cols).T)
