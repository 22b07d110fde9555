"""Request handlers: validated schema objects in, report objects out."""

from __future__ import annotations

from . import chambers as ch
from . import recovery as rc
from . import schemas as S
from .basic_classes import BasicClassSet, enumerate_basic_classes
from .lattice import mat_vec, neg, pair_up
from .surfaces import UnsupportedModel, build


class DomainError(ValueError):
    """Well-formed input that the mathematics rejects."""


def enumerate_(surface: S.SurfaceInput) -> S.BasicClassSetModel:
    return S.BasicClassSetModel.of(enumerate_basic_classes(build(surface.to_model())))


def _recover_core(bset: BasicClassSet):
    if len(bset) == 1:
        # a lone class is K0 itself (possibly zero); nothing was blown up
        L = bset.classes[0].L
        return frozenset(), rc.RecoveredCanonical(pair_up(L), bset.space.square(L), not any(L)), []
    diffs = rc.difference_set(bset)
    k0 = rc.recover_K0(bset.space, diffs)
    return diffs, k0, rc.recover_exceptionals(bset.space, diffs, k0.K0)


def recover(req: S.RecoverRequest) -> S.RecoverReport:
    bset = req.basic_set.to_set()
    diffs, k0, es = _recover_core(bset)
    mults = plur = None
    if k0.square > 0:
        plur = rc.recover_plurigenera(bset.space, diffs, req.n_max, req.chi)
    elif bset.pg >= 1:
        mults = list(rc.recover_multiplicities(_minimal_part(bset, es), bset.pg))
    return S.RecoverReport(K0=list(k0.K0), K0_square=k0.square, torsion=k0.torsion,
                           exceptionals=[list(e) for e in es], multiplicities=mults, plurigenera=plur)


def _minimal_part(bset: BasicClassSet, es) -> BasicClassSet:
    """Classes with every E-coefficient stripped, merged back to the minimal set."""
    from .basic_classes import SpincBasicClass

    seen = {}
    space = bset.space
    for c in bset.classes:
        L = c.L
        for e in es:
            L = tuple(x + space.pairing(c.L, e) * y for x, y in zip(L, e))
        seen.setdefault(L, SpincBasicClass(L, L, c.sw, c.mult, 0))
    return BasicClassSet(space, bset.canonical, tuple(seen.values()), bset.pg, bset.q)


def _system(surface: S.SurfaceInput):
    sl = build(surface.to_model())
    return sl, ch.ChamberSystem.for_surface(sl)


def _check_len(vs, n):
    for v in vs:
        if len(v) != n:
            raise DomainError(f"point of length {len(v)} in rank {n} lattice")


def walls(req: S.WallsRequest) -> S.WallsReport:
    sl, system = _system(req.surface)
    _check_len([req.from_point, req.to_point], sl.space.rank)
    out = ch.walls_crossed(system, req.from_point, req.to_point)
    return S.WallsReport(square=system.wall_square,
                         walls=[S.CrossingModel(wall=list(c.wall), parameter=c.parameter) for c in out])


def sw_report(f: ch.ChamberSWFunction) -> S.SWReport:
    return S.SWReport(point=list(f.chamber.point), component=f.chamber.component_sign,
                      values=[S.SWValue(L=list(L), Xi=list(xi), sw=v) for (L, xi), v in f.values.items()])


def sw(req: S.SWRequest) -> S.SWReport:
    sl, _ = _system(req.surface)
    _check_len([req.at, *req.via], sl.space.rank)
    return sw_report(ch.sw_for_chamber(sl, req.at, req.via))


def verify_c0(req: S.SurfaceRequest) -> S.C0Report:
    sl, _ = _system(req.surface)
    return S.C0Report(**ch.check_c0_properties(ch.distinguished_chamber(sl), sl))


def search(req: S.SearchRequest) -> S.SearchReport:
    sl, _ = _system(req.surface)
    if req.offset is not None:
        _check_len([req.offset], sl.space.rank)
    probed = ch.probe_chambers(sl, req.radius, req.denominator, req.offset)
    found = ch.search_distinguished(sl, req.radius, req.denominator, req.offset)
    c0 = ch.distinguished_chamber(sl).by_L()
    only = all(f.by_L() == c0 or f.negated().by_L() == c0 for f in found)
    return S.SearchReport(chambers_probed=len(probed), matches=[sw_report(f) for f in found],
                          only_distinguished=only)


def check_diffeo(req: S.CheckDiffeoRequest) -> S.CheckDiffeoReport:
    first = req.first.to_set()
    second = req.second.to_set() if req.second is not None else first
    space = first.space
    if second.space.gram != space.gram:
        raise DomainError("basic sets must live in a common lattice")
    d1, k1, es1 = _recover_core(first)
    d2, k2, es2 = _recover_core(second)
    reasons = []
    if len(es1) != len(es2):
        reasons.append(f"numbers of exceptional classes differ ({len(es1)} vs {len(es2)})")
    if k1.square != k2.square:
        reasons.append(f"K0 squares differ ({k1.square} vs {k2.square})")
    base = dict(K0=list(k1.K0), exceptionals=[list(e) for e in es1])
    if req.isometry is None:
        return S.CheckDiffeoReport(verdict="FAIL" if reasons else "PASS", reasons=reasons, **base)
    m = tuple(map(tuple, req.isometry))
    if not space.is_isometry(m):
        raise DomainError("the given matrix is not an isometry of the lattice")
    image = mat_vec(m, k1.K0)
    witness = None
    if image not in (k2.K0, neg(k2.K0)):
        reasons.append("K0 is not sent to +-K0")
        witness = list(image)
    perm = []
    targets = {e: j for j, e in enumerate(es2, start=1)}
    for e in es1:
        me = mat_vec(m, e)
        j = targets.get(pair_up(me))
        if j is None:
            reasons.append(f"{list(e)} is not sent to an exceptional class")
            witness = witness or list(me)
        else:
            perm.append([j, 1 if me == es2[j - 1] else -1])
    moved = {mat_vec(m, d) for d in d1}
    if moved != set(d2):
        bad = sorted(moved - set(d2))
        reasons.append("the difference set is not preserved")
        witness = witness or (list(bad[0]) if bad else None)
    return S.CheckDiffeoReport(verdict="FAIL" if reasons else "PASS", reasons=reasons, K0_image=list(image),
                               permutation=perm if len(perm) == len(es1) else None, witness=witness, **base)


def check_summand(req: S.CheckSummandRequest) -> S.CheckSummandReport:
    bset = req.basic_set.to_set()
    n = tuple(req.n)
    if len(n) != bset.space.rank:
        raise DomainError("n has the wrong length")
    _, k0, es = _recover_core(bset)
    if k0.torsion:
        raise UnsupportedModel("no canonical direction could be recovered")
    if k0.square > 0:
        v = rc.check_summand_class(bset, k0.K0, es, n)
    else:
        v = rc.check_summand_class_k0sq_zero(bset, k0.K0, es, n)
    base = dict(K0=list(k0.K0), exceptionals=[list(e) for e in es])
    if isinstance(v, rc.IsExceptional):
        return S.CheckSummandReport(verdict="IsExceptional", j=v.j, sign=v.sign, **base)
    return S.CheckSummandReport(verdict="Contradiction", witness=list(v.witness), **base)
