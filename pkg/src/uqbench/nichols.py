"""Nichols algebras of diagonal type via the radical of the extended bilinear form.

The braided tensor algebra T(V) carries the shuffle-type coproduct determined
by Delta(v) = 1 (x) v + v (x) 1 extended as an algebra map into the braided
tensor square, and the antipode given by the convolution series
S = sum_n gamma^{*n} with gamma = unit.counit - Id (finite in each degree).

The bilinear form starts from <v_i, v_j> = delta_ij / (q_i - q_i^{-1}) and
extends by <x y, z> = <x (x) y, Delta z> with <x (x) y, a (x) b> =
<x, a> <y, b> and no braiding twist.  Its radical per multidegree is the
kernel of the Gram matrix on words; the Nichols algebra is the quotient, with
dimension the Gram rank.  Basis words are the greedy lexicographic pivots of
the Gram elimination, so reduction is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .braiding import BraidedSpace, TensorElement, Word
from .errors import CapError, ConfigError
from .linalg import nullspace, rref
from .rootdata import RootDatum
from .scalars import ScalarQ, q_binomial

ZERO = ScalarQ.zero()
ONE = ScalarQ.one()

Degree = tuple[int, ...]

TensorPair = dict[tuple[Word, Word], ScalarQ]


def diagonal_space(datum: RootDatum) -> BraidedSpace:
    """The braided vector space of the datum: b(i, j) = q^{(alpha_i, alpha_j)}."""
    coeff = tuple(
        tuple(ScalarQ.q_power(datum.pairing[i][j]) for j in range(datum.rank))
        for i in range(datum.rank)
    )
    return BraidedSpace(dim=datum.rank, coeff=coeff)


def word_multidegree(space: BraidedSpace, w: Word) -> Degree:
    return space.word_degree(w)


def words_of_degree(deg: Degree) -> list[Word]:
    """All arrangements of the multiset with deg[i] copies of letter i, lex sorted."""
    letters: list[int] = []
    for i, k in enumerate(deg):
        letters.extend([i] * k)
    return sorted(set(itertools.permutations(letters)))


def braided_coproduct(space: BraidedSpace, x: TensorElement) -> TensorPair:
    """Delta on T(V): for a word w, sum over position subsets S of
    beta_S * (w|_S (x) w|_{S^c}), where beta_S is the crossing scalar picked up
    by each chosen letter passing the earlier unchosen ones."""
    out: TensorPair = {}
    for w, coef in x.terms.items():
        n = len(w)
        for mask in range(1 << n):
            left, right = [], []
            beta = ONE
            for pos in range(n):
                if (mask >> pos) & 1:
                    for a in range(pos):
                        if not (mask >> a) & 1:
                            beta = beta * space.b(w[a], w[pos])
                    left.append(w[pos])
                else:
                    right.append(w[pos])
            key = (tuple(left), tuple(right))
            s = out.get(key, ZERO) + coef * beta
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _gamma_power(space: BraidedSpace, m: int, w: Word, memo: dict) -> TensorElement:
    """gamma^{*m} on the basis word w, gamma = unit.counit - Id."""
    key = (m, w)
    if key in memo:
        return memo[key]
    if m == 0:
        res = TensorElement({(): ONE}) if len(w) == 0 else TensorElement()
    elif len(w) == 0:
        res = TensorElement()  # gamma(1) = 0 and convolution keeps that
    else:
        res = TensorElement()
        for (a, b), c in braided_coproduct(space, TensorElement.basis(w)).items():
            if len(a) == 0:
                continue  # gamma kills the unit
            rest = _gamma_power(space, m - 1, b, memo)
            for bw, bc in rest.terms.items():
                res.add_term(a + bw, -(c * bc))
    memo[key] = res
    return res


def tensor_antipode(space: BraidedSpace, x: TensorElement, _memo_store: dict = {}) -> TensorElement:
    """S = sum_{m>=0} gamma^{*m}; the sum stops at the word length."""
    memo = _memo_store.setdefault(id(space), {})
    out = TensorElement()
    for w, coef in x.terms.items():
        acc = TensorElement()
        for m in range(len(w) + 1):
            acc = acc + _gamma_power(space, m, w, memo)
        out = out + acc.scale(coef)
    return out


# ---------------------------------------------------------------------------
# The extended bilinear form and its radical
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairingSpec:
    """Diagonal generator pairings <v_i, v_i>; zero off the diagonal."""

    diag: tuple[ScalarQ, ...]

    @staticmethod
    def from_datum(datum: RootDatum) -> "PairingSpec":
        vals = []
        for d in datum.d:
            denom = ScalarQ.q_power(d) - ScalarQ.q_power(-d)
            vals.append(denom.inverse())
        return PairingSpec(diag=tuple(vals))


class NicholsContext:
    """Caches Gram matrices, pivot bases, and reductions for one datum.

    The degree cap bounds the total degree of any word entering the pairing
    or reduction; crossing it raises CapError rather than truncating.
    """

    def __init__(self, datum: RootDatum, cap: int = 8):
        self.datum = datum
        self.space = diagonal_space(datum)
        self.pairing = PairingSpec.from_datum(datum)
        self.cap = cap
        self._pair_memo: dict[tuple[Word, Word], ScalarQ] = {}
        self._basis_cache: dict[Degree, "NicholsBasis"] = {}

    # -- pairing ------------------------------------------------------------

    def pairing_eval(self, x: TensorElement | Word, y: TensorElement | Word) -> ScalarQ:
        if isinstance(x, tuple):
            x = TensorElement.basis(x)
        if isinstance(y, tuple):
            y = TensorElement.basis(y)
        out = ZERO
        for wx, cx in x.terms.items():
            if len(wx) > self.cap:
                raise CapError(f"word degree {len(wx)} above cap {self.cap}")
            for wy, cy in y.terms.items():
                if len(wy) > self.cap:
                    raise CapError(f"word degree {len(wy)} above cap {self.cap}")
                v = self._pair_words(wx, wy)
                if not v.is_zero():
                    out = out + cx * cy * v
        return out

    def _pair_words(self, x: Word, y: Word) -> ScalarQ:
        if len(x) != len(y):
            return ZERO
        if not x:
            return ONE
        if self.space.word_degree(x) != self.space.word_degree(y):
            return ZERO
        key = (x, y)
        hit = self._pair_memo.get(key)
        if hit is not None:
            return hit
        # <v_i x', y> = sum over positions of y carrying letter i, with the
        # crossing weight of that letter moving to the front of y.
        i, rest = x[0], x[1:]
        acc = ZERO
        for pos, letter in enumerate(y):
            if letter != i:
                continue
            beta = ONE
            for a in range(pos):
                beta = beta * self.space.b(y[a], i)
            sub = self._pair_words(rest, y[:pos] + y[pos + 1:])
            if not sub.is_zero():
                acc = acc + beta * self.pairing.diag[i] * sub
        self._pair_memo[key] = acc
        return acc

    # -- Gram data per multidegree -------------------------------------------

    def graded_gram(self, deg: Degree) -> tuple[list[Word], list[list[ScalarQ]]]:
        if sum(deg) > self.cap:
            raise CapError(f"multidegree {deg} has total degree above cap {self.cap}")
        words = words_of_degree(deg)
        gram = [[self._pair_words(u, w) for w in words] for u in words]
        return words, gram

    def nichols_basis(self, deg: Degree) -> "NicholsBasis":
        hit = self._basis_cache.get(deg)
        if hit is not None:
            return hit
        words, gram = self.graded_gram(deg)
        red, pivots = rref(gram, ZERO, ONE)
        basis_words = [words[c] for c in pivots]
        reduction: dict[Word, dict[Word, ScalarQ]] = {}
        for c, w in enumerate(words):
            if c in pivots:
                reduction[w] = {w: ONE}
            else:
                expr: dict[Word, ScalarQ] = {}
                for r, pc in enumerate(pivots):
                    if not red[r][c].is_zero():
                        expr[words[pc]] = red[r][c]
                reduction[w] = expr
        nb = NicholsBasis(degree=deg, words=tuple(words), basis_words=tuple(basis_words),
                          reduction=reduction)
        self._basis_cache[deg] = nb
        return nb

    def nichols_dim(self, deg: Degree) -> int:
        return len(self.nichols_basis(deg).basis_words)

    def radical_basis(self, deg: Degree) -> list[TensorElement]:
        words, gram = self.graded_gram(deg)
        vecs = nullspace(gram, ZERO, ONE)
        out = []
        for v in vecs:
            el = TensorElement()
            for w, c in zip(words, v):
                if not c.is_zero():
                    el.add_term(w, c)
            out.append(el)
        return out

    def reduce_mod_radical(self, x: TensorElement) -> TensorElement:
        """Canonical representative of x in the span of pivot basis words.

        Handles inhomogeneous input degree by degree."""
        out = TensorElement()
        for w, coef in x.terms.items():
            if len(w) > self.cap:
                raise CapError(f"word degree {len(w)} above cap {self.cap}")
            deg = self.space.word_degree(w)
            nb = self.nichols_basis(deg)
            for bw, c in nb.reduction[w].items():
                out.add_term(bw, coef * c)
        return out

    def is_in_radical(self, x: TensorElement) -> bool:
        return self.reduce_mod_radical(x).is_zero()


@dataclass(frozen=True)
class NicholsBasis:
    """Pivot words of one multidegree plus the reduction of every word."""

    degree: Degree
    words: tuple[Word, ...]
    basis_words: tuple[Word, ...]
    reduction: Mapping[Word, Mapping[Word, ScalarQ]]


def serre_element(datum: RootDatum, i: int, j: int) -> TensorElement:
    """The quantum Serre element
    sum_k (-1)^k [1-a_ij choose k]_{q_i} v_i^{1-a_ij-k} v_j v_i^k  (i != j)."""
    if i == j:
        raise ConfigError("serre element needs distinct indices")
    a = datum.cartan[i][j]
    n = 1 - a
    di = datum.d[i]
    out = TensorElement()
    for k in range(n + 1):
        coef = q_binomial(n, k, di)
        if k % 2 == 1:
            coef = -coef
        word = (i,) * (n - k) + (j,) + (i,) * k
        out.add_term(word, coef)
    return out
