"""Pydantic request and response models shared by the service and the CLI."""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, model_validator

from . import basic_classes as bc
from .lattice import LatticeSpace
from .surfaces import LatticeOverride, SurfaceModel


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {x!r}") from exc
    raise ValueError(f"rationals are integers or 'p/q' strings, got {type(x).__name__}")


def emit_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


Rational = Annotated[Fraction, BeforeValidator(parse_rational), PlainSerializer(emit_rational, return_type=str)]
IntVec = list[int]
RatVec = list[Rational]


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LatticeModel(Strict):
    rank: int
    gram: list[list[int]]

    @model_validator(mode="after")
    def _shape(self):
        if len(self.gram) != self.rank or any(len(r) != self.rank for r in self.gram):
            raise ValueError("gram must be rank x rank")
        return self

    def to_space(self) -> LatticeSpace:
        return LatticeSpace(tuple(map(tuple, self.gram)))

    @classmethod
    def of(cls, space: LatticeSpace) -> "LatticeModel":
        return cls(rank=space.rank, gram=[list(r) for r in space.gram])


class OverrideModel(Strict):
    gram: list[list[int]]
    K0: IntVec
    exceptionals: list[IntVec] = []


class SurfaceInput(Strict):
    kind: Literal["general_type", "elliptic"]
    ksq: int = 0
    pg: int = 0
    q: int = 0
    m1: int = 1
    m2: int = 1
    torsion2: Literal["none", "z2", "larger"] = "none"
    blowups: int = 0
    override: Optional[OverrideModel] = None

    def to_model(self) -> SurfaceModel:
        ov = None
        if self.override is not None:
            ov = LatticeOverride(tuple(map(tuple, self.override.gram)), tuple(self.override.K0),
                                 tuple(map(tuple, self.override.exceptionals)))
        return SurfaceModel(self.kind, self.ksq, self.pg, self.q, self.m1, self.m2,
                            self.torsion2, self.blowups, ov)


class BasicClassModel(Strict):
    L: IntVec
    Xi: IntVec
    sw: int
    mult: int = 1
    index: int = 0


class BasicClassSetModel(Strict):
    lattice: LatticeModel
    canonical: IntVec
    pg: int = 0
    q: int = 0
    classes: list[BasicClassModel]

    def to_set(self) -> bc.BasicClassSet:
        space = self.lattice.to_space()
        n = space.rank
        if len(self.canonical) != n or any(len(c.L) != n or len(c.Xi) != n for c in self.classes):
            raise ValueError("vector length does not match the lattice rank")
        classes = tuple(bc.SpincBasicClass(tuple(c.L), tuple(c.Xi), c.sw, c.mult, c.index)
                        for c in self.classes)
        return bc.BasicClassSet(space, tuple(self.canonical), classes, self.pg, self.q)

    @classmethod
    def of(cls, bset: bc.BasicClassSet) -> "BasicClassSetModel":
        return cls(
            lattice=LatticeModel.of(bset.space),
            canonical=list(bset.canonical),
            pg=bset.pg,
            q=bset.q,
            classes=[BasicClassModel(L=list(c.L), Xi=list(c.Xi), sw=c.sw, mult=c.mult, index=c.index)
                     for c in bset.classes],
        )


class RecoverRequest(Strict):
    basic_set: BasicClassSetModel
    n_max: int = 12
    chi: int = 1


class RecoverReport(Strict):
    K0: IntVec
    K0_square: int
    torsion: bool = False
    exceptionals: list[IntVec]
    multiplicities: Optional[list[int]] = None
    plurigenera: Optional[dict[int, int]] = None


class WallsRequest(Strict):
    surface: SurfaceInput
    from_point: RatVec
    to_point: RatVec


class CrossingModel(Strict):
    wall: IntVec
    parameter: Rational


class WallsReport(Strict):
    square: int
    walls: list[CrossingModel]


class SWRequest(Strict):
    surface: SurfaceInput
    at: RatVec
    via: list[RatVec] = []


class SWValue(Strict):
    L: IntVec
    Xi: IntVec
    sw: int


class SWReport(Strict):
    point: RatVec
    component: int
    values: list[SWValue]


class SurfaceRequest(Strict):
    surface: SurfaceInput


class C0Report(Strict):
    i: bool
    ii: bool
    iii: bool
    iv: bool


class SearchRequest(Strict):
    surface: SurfaceInput
    radius: int = 1
    denominator: int = 1
    offset: Optional[RatVec] = None


class SearchReport(Strict):
    chambers_probed: int
    matches: list[SWReport]
    only_distinguished: bool


class CheckDiffeoRequest(Strict):
    first: BasicClassSetModel
    second: Optional[BasicClassSetModel] = None
    isometry: Optional[list[list[int]]] = None

    @model_validator(mode="after")
    def _one_target(self):
        if self.second is None and self.isometry is None:
            raise ValueError("give a second basic set, an isometry, or both")
        return self


class CheckDiffeoReport(Strict):
    verdict: Literal["PASS", "FAIL"]
    reasons: list[str]
    K0: IntVec
    K0_image: Optional[IntVec] = None
    exceptionals: list[IntVec]
    permutation: Optional[list[list[int]]] = None  # [j, sign] per exceptional
    witness: Optional[IntVec] = None


class CheckSummandRequest(Strict):
    basic_set: BasicClassSetModel
    n: IntVec


class CheckSummandReport(Strict):
    verdict: Literal["IsExceptional", "Contradiction"]
    j: Optional[int] = None
    sign: Optional[int] = None
    witness: Optional[IntVec] = None
    K0: IntVec
    exceptionals: list[IntVec]


class SelftestLine(Strict):
    criterion: int
    name: str
    passed: bool
    seconds: float
    detail: str = ""


class SelftestReport(Strict):
    passed: bool
    results: list[SelftestLine]


class ErrorReport(Strict):
    error: Literal["schema", "unsupported", "ambiguous", "domain"]
    detail: Union[str, list[Any]]
