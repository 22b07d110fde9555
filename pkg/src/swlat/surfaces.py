"""Surface descriptors and the lattice data they determine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Literal, Optional

from .lattice import LatticeError, LatticeSpace, add, scale

Kind = Literal["general_type", "elliptic"]
Torsion = Literal["none", "z2", "larger"]


class UnsupportedModel(ValueError):
    """The surface lies outside the supported classes."""


@dataclass(frozen=True)
class LatticeOverride:
    gram: tuple[tuple[int, ...], ...]
    K0: tuple[int, ...]
    exceptionals: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class SurfaceModel:
    kind: Kind
    ksq: int = 0
    pg: int = 0
    q: int = 0
    m1: int = 1
    m2: int = 1
    torsion2: Torsion = "none"
    blowups: int = 0
    override: Optional[LatticeOverride] = None

    def __post_init__(self) -> None:
        if self.blowups < 0 or self.pg < 0 or self.q < 0:
            raise UnsupportedModel("pg, q and blowups must be nonnegative")
        if self.torsion2 not in ("none", "z2", "larger"):
            raise UnsupportedModel(f"unknown torsion tag {self.torsion2!r}")
        if self.kind == "general_type":
            if not 1 <= self.ksq <= 9:
                raise UnsupportedModel("general type needs 1 <= K^2 <= 9")
            if self.pg or self.q:
                raise UnsupportedModel("general type models require pg = q = 0")
        elif self.kind == "elliptic":
            if self.q != 0:
                raise UnsupportedModel("only simply connected elliptic surfaces (q = 0)")
            if self.m1 < 1 or self.m2 < 1 or gcd(self.m1, self.m2) != 1:
                raise UnsupportedModel("multiplicities must be positive and coprime")
            if self.pg == 0 and self.canonical_degree <= 0:
                raise UnsupportedModel("rational elliptic surface (not of nonnegative Kodaira dimension)")
            if self.override is not None:
                raise UnsupportedModel("lattice override is only supported for general type")
        else:
            raise UnsupportedModel(f"unknown surface kind {self.kind!r}")

    @property
    def canonical_degree(self) -> int:
        """Elliptic only: K_X as a multiple of the primitive fiber class t."""
        return (self.pg + 1) * self.m1 * self.m2 - self.m1 - self.m2

    @property
    def b2_plus(self) -> int:
        return 2 * self.pg + 1

    def minimal(self) -> "SurfaceModel":
        return SurfaceModel(self.kind, self.ksq, self.pg, self.q, self.m1, self.m2, self.torsion2, 0)


@dataclass(frozen=True)
class FiberData:
    t: tuple[int, ...]
    s: tuple[int, ...]
    f: tuple[int, ...]
    F1: tuple[int, ...]
    F2: tuple[int, ...]


@dataclass(frozen=True)
class SurfaceLattice:
    model: SurfaceModel
    space: LatticeSpace
    K0: tuple[int, ...]
    exceptionals: tuple[tuple[int, ...], ...]
    fiber: Optional[FiberData] = field(default=None)

    @property
    def canonical(self) -> tuple[int, ...]:
        """K of the blowup: K0 + sum of the exceptional classes."""
        return add(self.K0, *self.exceptionals) if self.exceptionals else self.K0

    @property
    def ell(self) -> int:
        return len(self.exceptionals)


def _block_diag(a: tuple, b_diag: list[int]) -> tuple:
    n, m = len(a), len(b_diag)
    rows = [tuple(a[i]) + (0,) * m for i in range(n)]
    for j in range(m):
        rows.append((0,) * (n + j) + (b_diag[j],) + (0,) * (m - j - 1))
    return tuple(rows)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def build(model: SurfaceModel) -> SurfaceLattice:
    ell = model.blowups
    if model.kind == "general_type":
        if model.override is not None:
            return _build_override(model)
        r0 = 10 - model.ksq
        gram = _block_diag(((1,),), [-1] * (r0 - 1) + [-1] * ell)
        n = r0 + ell
        K0 = (3,) + (1,) * (r0 - 1) + (0,) * ell
        exc = tuple(_unit(n, r0 + i) for i in range(ell))
        return SurfaceLattice(model, LatticeSpace(gram), K0, exc)

    k = model.canonical_degree
    # Odd degree means K is not divisible by 2, so w2 != 0 and the form is odd.
    if k % 2:
        hyper, t2, s2 = ((1, 0), (0, -1)), (1, 1), (1, 0)
    else:
        hyper, t2, s2 = ((0, 1), (1, 0)), (1, 0), (0, 1)
    gram = _block_diag(hyper, [-1] * ell)
    n = 2 + ell
    t = t2 + (0,) * ell
    s = s2 + (0,) * ell
    m1, m2 = model.m1, model.m2
    fiber = FiberData(t=t, s=s, f=scale(m1 * m2, t), F1=scale(m2, t), F2=scale(m1, t))
    exc = tuple(_unit(n, 2 + i) for i in range(ell))
    return SurfaceLattice(model, LatticeSpace(gram), scale(k, t), exc, fiber)


def _build_override(model: SurfaceModel) -> SurfaceLattice:
    ov = model.override
    space = LatticeSpace(ov.gram)
    if len(ov.exceptionals) != model.blowups:
        raise UnsupportedModel("override must list one exceptional class per blowup")
    sl = SurfaceLattice(model, space, tuple(ov.K0), tuple(map(tuple, ov.exceptionals)))
    try:
        _check_general_type(sl)
    except LatticeError as exc:
        raise UnsupportedModel(str(exc)) from exc
    return sl


def _check_general_type(sl: SurfaceLattice) -> None:
    sp = sl.space
    if sp.square(sl.K0) != sl.model.ksq:
        raise LatticeError("override K0 has the wrong square")
    for i, e in enumerate(sl.exceptionals):
        if sp.pairing(e, sl.K0) != 0:
            raise LatticeError("exceptional class not orthogonal to K0")
        for j, e2 in enumerate(sl.exceptionals):
            if sp.pairing(e, e2) != (-1 if i == j else 0):
                raise LatticeError("exceptional classes are not orthonormal (-1)-classes")
    if not sp.is_characteristic(sl.canonical):
        raise LatticeError("K0 + sum E_i is not characteristic")


def chi_O(model: SurfaceModel) -> int:
    return 1 - model.q + model.pg


def plurigenus(model: SurfaceModel, n: int) -> int:
    if model.kind != "general_type":
        raise UnsupportedModel("plurigenera are only tabulated for general type")
    if n < 2:
        raise ValueError("plurigenus formula needs n >= 2")
    return n * (n - 1) // 2 * model.ksq + chi_O(model)


def degree(d, sl: SurfaceLattice) -> Fraction:
    """Fiber degree r with d = r f."""
    if sl.fiber is None:
        raise UnsupportedModel("degree is defined on elliptic lattices only")
    c = sl.space.pairing(d, sl.fiber.s)
    if tuple(d) != scale(c, sl.fiber.t):
        raise LatticeError("class is not a multiple of the fiber")
    return Fraction(c, sl.model.m1 * sl.model.m2)
