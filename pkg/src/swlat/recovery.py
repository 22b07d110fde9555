"""Recover K0, exceptional classes, multiplicities and plurigenera from basic classes."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .basic_classes import BasicClassSet
from .lattice import LatticeSpace, neg, pair_up, scale, sub


class RecoveryError(ValueError):
    """Input basic-class data does not have a supported shape."""


class AmbiguousRecovery(RecoveryError):
    pass


@dataclass(frozen=True)
class IsExceptional:
    j: int  # 1-based index into the exceptional list
    sign: int = 1


@dataclass(frozen=True)
class Contradiction:
    witness: tuple[int, ...]


Verdict = Union[IsExceptional, Contradiction]


@dataclass(frozen=True)
class RecoveredCanonical:
    K0: tuple[int, ...]
    square: int
    torsion: bool = False

    @property
    def pair(self) -> frozenset:
        return frozenset({self.K0, neg(self.K0)})


def difference_set(bset: BasicClassSet) -> frozenset:
    if len(bset) < 2:
        raise RecoveryError("need at least two basic classes")
    xis = {c.Xi for c in bset.classes}
    return frozenset(sub(a, b) for a in xis for b in xis if a != b)


def _primitive_int(v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    g = 0
    for c in v:
        g = gcd(g, c)
    p = tuple(c // g for c in v)
    rep = pair_up(p)
    return rep, (g if rep == p else -g)


def recover_K0(space: LatticeSpace, diffs: Iterable, ksq_positive: Optional[bool] = None) -> RecoveredCanonical:
    diffs = list(diffs)
    if not diffs:
        raise RecoveryError("empty difference set")
    squares = {d: space.square(d) for d in diffs}
    top = max(squares.values())
    if ksq_positive is None:
        ksq_positive = top > 0
    if ksq_positive:
        best = {pair_up(d) for d, s in squares.items() if s == top}
        if top <= 0 or len(best) != 1:
            raise AmbiguousRecovery("maximal square is not attained by a single +- pair")
        return RecoveredCanonical(best.pop(), top)
    isotropic = [d for d, s in squares.items() if s == 0]
    if not isotropic:
        return RecoveredCanonical((0,) * space.rank, 0, torsion=True)
    directions = {}
    for d in isotropic:
        rep, k = _primitive_int(d)
        directions.setdefault(rep, set()).add(abs(k))
    if len(directions) != 1:
        raise AmbiguousRecovery("square-zero differences span more than one direction")
    (kappa, mults), = directions.items()
    return RecoveredCanonical(scale(max(mults), kappa), 0)


def _reflection_preserves(space: LatticeSpace, n, vectors: frozenset) -> bool:
    return all(space.reflect(v, n) in vectors for v in vectors)


def recover_exceptionals(space: LatticeSpace, diffs: Iterable, K0: Sequence[int]) -> list[tuple[int, ...]]:
    """Canonical representatives of the +-pairs {+-E_j}.

    With K0^2 > 0 these are the (-1)-differences orthogonal to K0.  With
    K0^2 = 0 the differences (K1 - K2)/2 +- E_i qualify too, so candidates
    are additionally required to preserve the difference set under
    reflection, as a smooth summand class must.
    """
    diffs = frozenset(diffs)
    cands = {pair_up(d) for d in diffs if space.square(d) == -1 and space.pairing(d, K0) == 0}
    if space.square(K0) == 0:
        cands = {c for c in cands if _reflection_preserves(space, c, diffs)}
    return sorted(cands)


def check_summand_class(bset: BasicClassSet, K0, Es: Sequence, n) -> Verdict:
    space = bset.space
    if space.square(n) != -1:
        raise ValueError("n must have square -1")
    diffs = difference_set(bset)
    if tuple(n) not in diffs:
        raise RecoveryError("n is not a difference of basic classes")
    n = tuple(n)
    for j, e in enumerate(Es, start=1):
        if n == tuple(e):
            return IsExceptional(j, 1)
        if n == neg(e):
            return IsExceptional(j, -1)
    # reflection in n must send K0 to +-K0 if n came from a smooth summand
    w = tuple(a + 2 * space.pairing(K0, n) * b for a, b in zip(K0, n))
    if w in diffs or w in (tuple(K0), neg(K0)):
        raise RecoveryError(f"reflection of K0 in {n} stays among the differences")
    return Contradiction(w)


def check_summand_class_k0sq_zero(bset: BasicClassSet, K0, Es: Sequence, n) -> Verdict:
    space = bset.space
    n = tuple(n)
    if space.square(n) != -1:
        raise ValueError("n must have square -1")
    if space.square(K0) != 0:
        raise ValueError("K0 must have square zero")
    coeffs = [-space.pairing(n, e) for e in Es]
    support = [j for j, c in enumerate(coeffs) if c]
    if len(support) != 1 or abs(coeffs[support[0]]) != 1:
        raise RecoveryError("n is not of the form T +- E_j")
    j = support[0]
    T = sub(n, scale(coeffs[j], Es[j]))
    if any(T) and not _proportional(T, K0):
        raise RecoveryError("T is not in the fiber direction")
    if not any(T):
        return IsExceptional(j + 1, coeffs[j])
    minimal = _minimal_classes(bset, Es)
    ordered = sorted(minimal, key=lambda K: (K != tuple(K0), K))
    for K in ordered:
        shifted = sub(K, scale(2, T))
        if shifted not in minimal:
            return Contradiction(shifted)
    # a nonzero T cannot shift a finite set into itself
    raise RecoveryError("finite basic set is invariant under a nonzero shift")


def _proportional(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(len(a)))


def _minimal_classes(bset: BasicClassSet, Es: Sequence) -> set:
    space = bset.space
    out = set()
    for c in bset.classes:
        K = c.L
        for e in Es:
            K = tuple(x + space.pairing(c.L, e) * y for x, y in zip(K, e))
        out.add(K)
    return out


def exceptional_sets_compatible(space: LatticeSpace, first: Iterable, second: Iterable) -> bool:
    first = [tuple(v) for v in first]
    for v in second:
        v = tuple(v)
        if v in first or neg(v) in first:
            continue
        if any(space.pairing(v, w) for w in first):
            return False
    return True


def _fiber_degrees(bset: BasicClassSet) -> list[int]:
    nonzero = [c.L for c in bset.classes if any(c.L)]
    if not nonzero:
        return [0] * len(bset)
    kappa, _ = _primitive_int(nonzero[0])
    out = []
    for c in bset.classes:
        if not any(c.L):
            out.append(0)
            continue
        rep, k = _primitive_int(c.L)
        if rep != kappa:
            raise RecoveryError("basic classes are not collinear")
        out.append(k)
    return out


def recover_multiplicities(bset: BasicClassSet, pg: int) -> tuple[int, int]:
    if pg < 1:
        raise RecoveryError("multiplicity recovery needs pg >= 1")
    degs = sorted(set(_fiber_degrees(bset)), reverse=True)
    r_max = degs[0]
    if sorted(-d for d in degs) != sorted(degs):
        raise RecoveryError("degree set is not symmetric")
    below = [d for d in degs if d < r_max]
    r_next = below[0] if below else None
    if r_next is not None and r_next >= 0 and (r_max - r_next) % 2 == 0:
        m1 = (r_max - r_next) // 2
        num = r_max - pg * m1 + 1  # ((pg+1)m1 - 1)(m2 - 1)
        den = (pg + 1) * m1 - 1
        if den <= 0 or num % den:
            raise RecoveryError("degree set inconsistent with any multiplicities")
        m2 = num // den + 1
    else:
        # remaining cases have m1 = 1, where r_max = pg m2 - 1
        m1 = 1
        if (r_max + 1) % pg:
            raise RecoveryError("degree set inconsistent with any multiplicities")
        m2 = (r_max + 1) // pg
    if m2 < m1 or gcd(m1, m2) != 1 or (pg + 1) * m1 * m2 - m1 - m2 != r_max:
        raise RecoveryError("degree set inconsistent with any multiplicities")
    return m1, m2


def recover_plurigenera(space: LatticeSpace, diffs: Iterable, n_max: int = 12, chi: int = 1) -> dict[int, int]:
    rec = recover_K0(space, diffs)
    if rec.square <= 0:
        raise RecoveryError("K0^2 = 0: plurigenera come from the multiple fibers")
    return {n: n * (n - 1) // 2 * rec.square + chi for n in range(2, n_max + 1)}


check_prop31 = exceptional_sets_compatible
