"""Exterior algebra of the complexified transverse coframe.

The transverse geometry has complex dimension ``n`` (real codimension
``q = 2n``).  The unitary coframe is ``w^1..w^n`` (holomorphic) together
with the conjugates ``wbar^1..wbar^n``; the underlying real orthonormal
coframe is ``theta^1..theta^{2n}`` with the complex-structure pairing
``J theta^a = theta^{n+a}``:

    w^a = (theta^a + i*theta^{n+a}) / sqrt(2)

A type-(r, s) element is stored on the monomial basis ``w^I ^ wbar^J``
with strictly increasing multi-indices ``I``, ``J`` (0-based).  This
basis is pointwise orthonormal for the Hermitian inner product, so
pointwise adjoints are plain conjugate transposes of the index matrices
built here.

Index operators that shift bidegree are represented as "parts": a dict
mapping target bidegree -> dense matrix applied to the source (I, J)
basis.  Everything here is pure index combinatorics; spectral
coefficients never appear.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

SQ2 = np.sqrt(2.0)


def multi_indices(n, r):
    """Strictly increasing r-tuples from range(n), lexicographic order."""
    return [tuple(c) for c in itertools.combinations(range(n), r)]


def _merge_sign(word):
    """Sort a letter word, returning (parity sign, sorted tuple) or None on repeats."""
    word = list(word)
    sign = 1
    for i in range(1, len(word)):  # insertion sort; words are tiny
        j = i
        while j > 0 and word[j - 1] > word[j]:
            word[j - 1], word[j] = word[j], word[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and word[j - 1] == word[j]:
            return None
    return sign, tuple(word)


def add_parts(*parts_list):
    out = {}
    for parts in parts_list:
        for tgt, M in parts.items():
            if tgt in out:
                out[tgt] = out[tgt] + M
            else:
                out[tgt] = M.copy()
    return out


def scale_parts(c, parts):
    return {tgt: c * M for tgt, M in parts.items()}


def compose_parts(outer_factory, inner_parts):
    """Parts of (outer after inner); outer_factory(bidegree) -> parts."""
    out = {}
    for mid, Mi in inner_parts.items():
        for tgt, Mo in outer_factory(mid).items():
            blk = Mo @ Mi
            if tgt in out:
                out[tgt] = out[tgt] + blk
            else:
                out[tgt] = blk
    return out


class FrameAlgebra:
    """Wedge/interior/star index calculus for complex dimension n."""

    def __init__(self, n):
        self.n = n
        self.bidegrees = [(r, s) for r in range(n + 1) for s in range(n + 1)]
        self.basis = {}
        self.pos = {}
        for r, s in self.bidegrees:
            items = [(I, J) for I in multi_indices(n, r) for J in multi_indices(n, s)]
            self.basis[(r, s)] = items
            self.pos[(r, s)] = {ij: k for k, ij in enumerate(items)}
        # volume normalization: nu = vol_coeff * w^(1..n) ^ wbar^(1..n)
        self.top = (tuple(range(n)), tuple(range(n)))
        self.vol_coeff = (-1j) ** n * (-1.0) ** (n * (n - 1) // 2)

    def dim(self, rs):
        return len(self.basis[rs])

    def valid(self, rs):
        return 0 <= rs[0] <= self.n and 0 <= rs[1] <= self.n

    # -- letters: (0, a) is w^a / V_a, (1, a) is wbar^a / Vbar_a ----------

    @staticmethod
    def _word(I, J):
        return tuple((0, a) for a in I) + tuple((1, b) for b in J)

    def wedge_mono(self, IJ1, IJ2):
        """Wedge of two basis monomials -> (sign, (I, J)) or None."""
        merged = _merge_sign(self._word(*IJ1) + self._word(*IJ2))
        if merged is None:
            return None
        sign, word = merged
        I = tuple(a for sp, a in word if sp == 0)
        J = tuple(a for sp, a in word if sp == 1)
        return sign, (I, J)

    # ------------------------------------------------------------------
    # elementary complex-frame operators
    # ------------------------------------------------------------------

    @lru_cache(maxsize=None)
    def eps(self, letter, rs):
        """Parts of wedging on the left by w^a (letter=(0,a)) or wbar^a ((1,a))."""
        r, s = rs
        tgt = (r + 1, s) if letter[0] == 0 else (r, s + 1)
        if not self.valid(tgt):
            return {}
        single = ((letter[1],), ()) if letter[0] == 0 else ((), (letter[1],))
        M = np.zeros((self.dim(tgt), self.dim(rs)), dtype=complex)
        for k, ij in enumerate(self.basis[rs]):
            out = self.wedge_mono(single, ij)
            if out is not None:
                sign, tgt_ij = out
                M[self.pos[tgt][tgt_ij], k] = sign
        return {tgt: M}

    @lru_cache(maxsize=None)
    def interior(self, letter, rs):
        """Parts of the interior product with V_a (letter=(0,a)) or Vbar_a ((1,a)).

        V_a pairs with w^a, so V_a-interior lowers the holomorphic degree
        and is the pointwise Hermitian adjoint of wedging by w^a (the
        complex-bilinear transpose convention for eps(X^flat) reduces to
        this on the unitary frame).
        """
        r, s = rs
        tgt = (r - 1, s) if letter[0] == 0 else (r, s - 1)
        if not self.valid(tgt):
            return {}
        eps_parts = self.eps(letter, tgt)
        if rs not in eps_parts:
            return {}
        return {tgt: eps_parts[rs].conj().T}

    @lru_cache(maxsize=None)
    def conj_map(self, rs):
        """Conjugation on monomials: (signs, permutation, target bidegree).

        conj(w^I ^ wbar^J) = sign * w^J ^ wbar^I; the caller conjugates
        coefficients separately.
        """
        r, s = rs
        tgt = (s, r)
        signs = np.zeros(self.dim(rs))
        perm = np.zeros(self.dim(rs), dtype=int)
        for k, (I, J) in enumerate(self.basis[rs]):
            signs[k] = (-1.0) ** (len(I) * len(J))
            perm[k] = self.pos[tgt][(J, I)]
        return signs, perm, tgt

    # ------------------------------------------------------------------
    # real-frame operators (split over complex types)
    # ------------------------------------------------------------------

    def eps_real(self, alpha, rs):
        """Parts of wedging by theta^alpha (alpha in 0..2n-1)."""
        a = alpha % self.n
        if alpha < self.n:
            c_h, c_a = 1 / SQ2, 1 / SQ2
        else:  # theta^{n+a} = J theta^a = -i(w^a - wbar^a)/sqrt(2)
            c_h, c_a = -1j / SQ2, 1j / SQ2
        return add_parts(scale_parts(c_h, self.eps((0, a), rs)),
                         scale_parts(c_a, self.eps((1, a), rs)))

    def int_real(self, alpha, rs):
        """Parts of the interior product with E_alpha."""
        a = alpha % self.n
        if alpha < self.n:  # E_a = (V_a + Vbar_a)/sqrt(2)
            c_h, c_a = 1 / SQ2, 1 / SQ2
        else:  # E_{n+a} = i(V_a - Vbar_a)/sqrt(2)
            c_h, c_a = 1j / SQ2, -1j / SQ2
        return add_parts(scale_parts(c_h, self.interior((0, a), rs)),
                         scale_parts(c_a, self.interior((1, a), rs)))

    def j_theta_eps(self, alpha, rs):
        """Parts of wedging by J theta^alpha."""
        if alpha < self.n:
            return self.eps_real(self.n + alpha, rs)
        return scale_parts(-1.0, self.eps_real(alpha - self.n, rs))

    # ------------------------------------------------------------------
    # star, Lefschetz, J
    # ------------------------------------------------------------------

    @lru_cache(maxsize=None)
    def star(self, rs):
        """The transversal star on (r, s): parts {(n-s, n-r): matrix}.

        Defined by phi ^ star(chi) = g_C(phi, chi) * nu, with g_C the
        complex-bilinear extension of the frame metric.
        """
        r, s = rs
        tgt = (self.n - s, self.n - r)
        dom, cod = self.basis[rs], self.basis[tgt]
        pair_rs = (s, r)  # bidegree wedging tgt up to top
        P = np.zeros((len(self.basis[pair_rs]), len(cod)), dtype=complex)
        G = np.zeros((len(self.basis[pair_rs]), len(dom)), dtype=complex)
        for i, phi in enumerate(self.basis[pair_rs]):
            for j, f in enumerate(cod):
                out = self.wedge_mono(phi, f)
                if out is not None and out[1] == self.top:
                    P[i, j] = out[0]
            for k, chi in enumerate(dom):
                G[i, k] = self._gc(phi, chi)
        S = np.linalg.solve(P, G * self.vol_coeff)
        return {tgt: S}

    def _gc(self, IJ1, IJ2):
        """Complex-bilinear metric pairing of two monomials (Gram determinant)."""
        w1 = self._word(*IJ1)
        w2 = self._word(*IJ2)
        if len(w1) != len(w2):
            return 0.0
        if not w1:
            return 1.0
        # pointwise: g_C(w^a, wbar^b) = delta_ab; same-species pairings vanish
        M = np.array([[1.0 if (l1[1] == l2[1] and l1[0] != l2[0]) else 0.0
                       for l2 in w2] for l1 in w1])
        return float(round(np.linalg.det(M)))

    @lru_cache(maxsize=None)
    def lefschetz(self, rs):
        """Parts of wedging with the Kahler form omega = -i sum_a w^a ^ wbar^a."""
        r, s = rs
        tgt = (r + 1, s + 1)
        if not self.valid(tgt):
            return {}
        M = np.zeros((self.dim(tgt), self.dim(rs)), dtype=complex)
        for a in range(self.n):
            inner = self.eps((1, a), rs)
            if (r, s + 1) not in inner:
                continue
            outer = self.eps((0, a), (r, s + 1))
            if tgt in outer:
                M += outer[tgt] @ inner[(r, s + 1)]
        return {tgt: -1j * M}

    @lru_cache(maxsize=None)
    def lefschetz_dual(self, rs):
        """Pointwise adjoint of :meth:`lefschetz` (degree -2)."""
        r, s = rs
        tgt = (r - 1, s - 1)
        if not self.valid(tgt):
            return {}
        up = self.lefschetz(tgt)
        if rs not in up:
            return {}
        return {tgt: up[rs].conj().T}

    @lru_cache(maxsize=None)
    def j_op(self, rs):
        """J on (r, s) forms: sum_alpha eps(J theta^alpha) o (E_alpha interior).

        The frame formula produces off-type pieces that cancel in the sum;
        the result is checked to be purely (r, s) -> (r, s) and equals
        i(s - r) * Id there.
        """
        total = {}
        for alpha in range(2 * self.n):
            piece = compose_parts(
                lambda b, alpha=alpha: self.j_theta_eps(alpha, b),
                self.int_real(alpha, rs),
            )
            total = add_parts(total, piece)
        for tgt, M in total.items():
            if tgt != rs and np.abs(M).max() > 1e-13:
                raise AssertionError("J frame formula leaked off-type")
        return total.get(rs, np.zeros((self.dim(rs),) * 2, dtype=complex))
