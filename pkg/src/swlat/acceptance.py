"""Release gate: one function per acceptance criterion.

Each check returns (passed, detail).  ``run_all`` times them and builds the
report served by ``GET /selftest`` and printed by ``swlat selftest``.
"""

from __future__ import annotations

import random
import time
from functools import lru_cache
from math import gcd, lcm

from . import chambers as ch
from . import recovery as rc
from . import schemas as S
from .basic_classes import enumerate_basic_classes, minimal_basic_classes
from .lattice import LatticeSpace, diagonalize, mat_mul, mat_vec, neg, pair_up
from .surfaces import SurfaceModel, build

SEED = 20240601


def gt(ksq, ell, **kw):
    return build(SurfaceModel("general_type", ksq=ksq, blowups=ell, **kw))


def ell_surface(pg, m1, m2, ell=0):
    return build(SurfaceModel("elliptic", pg=pg, m1=m1, m2=m2, blowups=ell))


# ---------------------------------------------------------------- isometries

def positive_anchor(space: LatticeSpace) -> tuple[int, ...]:
    """A basis vector of positive square if there is one, else the positive
    column of a diagonalizing transform, cleared of denominators."""
    n = space.rank
    for i in range(n):
        if space.gram[i][i] > 0:
            return tuple(int(i == j) for j in range(n))
    d, t = diagonalize(space.gram)
    col = next(k for k, dk in enumerate(d) if dk > 0)
    v = [t[i][col] for i in range(n)]
    den = lcm(*(x.denominator for x in v))
    return tuple(int(x * den) for x in v)


@lru_cache(maxsize=None)
def reflection_pool(space: LatticeSpace, bound: int = 1) -> list:
    """Reflection matrices in roots of square -1 and -2 near a positive anchor."""
    a = positive_anchor(space)
    roots = set()
    for s in (-1, -2):
        roots.update(pair_up(v) for v in space.enumerate_with_square(s, a, bound))
    return [space.reflection_matrix(r) for r in sorted(roots)]


def random_isometry(space: LatticeSpace, rng: random.Random, pool, length: int = 4):
    n = space.rank
    m = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    for _ in range(rng.randint(1, length) if pool else 0):
        m = mat_mul(rng.choice(pool), m)
    if rng.random() < 0.5:
        m = tuple(tuple(-x for x in row) for row in m)
    return m


# ---------------------------------------------------------------- criteria

def c1_cardinality():
    worst = 0.0
    for ksq in range(1, 10):
        for ell in range(7):
            t = time.perf_counter()
            bset = enumerate_basic_classes(gt(ksq, ell))
            worst = max(worst, time.perf_counter() - t)
            Ls = [c.L for c in bset]
            if len(bset) != 2 ** (ell + 1) or len(set(Ls)) != len(Ls):
                return False, f"ksq={ksq} ell={ell}: {len(bset)} classes"
            if any(c.sw not in (1, -1) or c.index != 0 for c in bset):
                return False, f"ksq={ksq} ell={ell}: bad sw or index"
    return worst < 1.0, f"63 cases, slowest {worst:.3f}s (limit 1s)"


def semigroup_member(x: int, m1: int, m2: int) -> bool:
    return x >= 0 and any((x - a * m1) % m2 == 0 for a in range(x // m1 + 1))


def dolgachev_oracle(m1: int, m2: int) -> int:
    """Distinct nonzero degrees r = k - 2D with D and k - D effective."""
    k = m1 * m2 - m1 - m2
    return sum(1 for r in range(-k, k + 1)
               if r and (k - r) % 2 == 0 and semigroup_member((k - abs(r)) // 2, m1, m2))


def c2_dolgachev():
    seen = []
    for m1, m2 in [(2, 3), (2, 5), (3, 4), (3, 5)]:
        d = dolgachev_oracle(m1, m2)
        for ell in range(5):
            n = len(enumerate_basic_classes(ell_surface(0, m1, m2, ell)))
            if n != d * 2 ** ell:
                return False, f"({m1},{m2}) ell={ell}: {n} != {d}*2^{ell}"
        seen.append(f"({m1},{m2}):d={d}")
    return True, " ".join(seen)


def c3_recovery_round_trip(trials: int = 100):
    rng = random.Random(SEED)
    models = [gt(k, l) for k in range(1, 5) for l in range(4)]
    models += [ell_surface(0, m1, m2, l) for m1, m2 in [(2, 3), (2, 5)] for l in range(4)]
    setup = time.perf_counter()
    work = [(sl, enumerate_basic_classes(sl), reflection_pool(sl.space)) for sl in models]
    t = time.perf_counter()
    setup = t - setup
    for sl, bset, pool in work:
        for _ in range(trials):
            m = random_isometry(sl.space, rng, pool)
            moved = bset.transform(m)
            diffs = rc.difference_set(moved)
            k0 = rc.recover_K0(sl.space, diffs)
            want = mat_vec(m, sl.K0)
            if k0.pair != frozenset({want, neg(want)}):
                return False, f"{sl.model}: K0 mismatch"
            es = rc.recover_exceptionals(sl.space, diffs, k0.K0)
            if set(es) != {pair_up(mat_vec(m, e)) for e in sl.exceptionals}:
                return False, f"{sl.model}: exceptional mismatch"
    el = time.perf_counter() - t
    return el < 10.0, (f"{len(models)} models x {trials} isometries in {el:.2f}s (limit 10s; "
                       f"reflection pools built beforehand in {setup:.1f}s)")


def multiplicity_cases():
    cases = [(pg, m1, m2) for pg in (1, 2, 3) for m2 in range(2, 8) for m1 in range(1, m2) if gcd(m1, m2) == 1]
    cases += [(1, 1, 1), (1, 1, 2), (2, 1, 1)]
    return sorted(set(cases))


def c4_multiplicities():
    cases = multiplicity_cases()
    for pg, m1, m2 in cases:
        got = rc.recover_multiplicities(minimal_basic_classes(ell_surface(pg, m1, m2)), pg)
        if got != (m1, m2):
            return False, f"pg={pg} ({m1},{m2}) -> {got}"
    return True, f"{len(cases)} (pg, m1, m2) cases"


def c5_plurigenera():
    rng = random.Random(SEED + 5)
    for ksq in range(1, 10):
        for ell in (0, 1):
            sl = gt(ksq, ell)
            bset = enumerate_basic_classes(sl)
            want = {n: n * (n - 1) // 2 * ksq + 1 for n in range(2, 13)}
            got = rc.recover_plurigenera(sl.space, rc.difference_set(bset), 12)
            m = random_isometry(sl.space, rng, reflection_pool(sl.space))
            moved = rc.recover_plurigenera(sl.space, rc.difference_set(bset.transform(m)), 12)
            if got != want or moved != want or got[2] != ksq + 1:
                return False, f"ksq={ksq} ell={ell}: {got}"
    return True, "ksq 1..9, n <= 12, with and without a random isometry"


def c6_k0_on_no_wall():
    worst = 0.0
    for ksq in range(1, 10):
        for ell in range(5):
            sl = gt(ksq, ell)
            t = time.perf_counter()
            hit = ch.lies_on_wall(ch.ChamberSystem.for_surface(sl), sl.K0)
            worst = max(worst, time.perf_counter() - t)
            if hit is not None:
                return False, f"ksq={ksq} ell={ell}: K0 on wall of {hit}"
    return worst < 60.0, f"45 cases, slowest {worst:.3f}s (limit 60s)"


def c7_crossing_sign(crossing=ch.standard_crossing):
    rep = ch.fixture_sign_check(crossing=crossing)
    ok = rep["crossed_K"] and rep["sw_minus_K"] == 1 and rep["sw_K"] == -1
    return ok, f"SW(-K)={rep['sw_minus_K']} SW(K)={rep['sw_K']} walls crossed={rep['walls']}"


def c8_path_independence(targets: int = 10, paths: int = 50):
    rng = random.Random(SEED + 8)
    sl = gt(1, 2)
    system = ch.ChamberSystem.for_surface(sl)
    t = time.perf_counter()
    nontrivial = crossed = 0
    for _ in range(targets):
        x = ch.random_forward_point(system, rng, sl.exceptionals)
        for _ in range(20):
            if ch.walls_crossed(system, sl.K0, x):
                break
            x = ch.random_forward_point(system, rng, sl.exceptionals)
        direct = ch.sw_for_chamber(sl, x).by_L()
        nontrivial += bool(ch.walls_crossed(system, sl.K0, x))
        for _ in range(paths):
            via = ch.random_forward_point(system, rng, sl.exceptionals)
            crossed += len(ch.walls_crossed(system, via, x))
            if ch.sw_for_chamber(sl, x, [via]).by_L() != direct:
                return False, f"path through {via} disagrees"
    el = time.perf_counter() - t
    return el < 120.0, (f"{targets} targets ({nontrivial} off C0) x {paths} paths, {crossed} walls on "
                          f"final legs, {el:.1f}s (limit 120s)")


def c9_equivariance(trials: int = 50):
    rng = random.Random(SEED + 9)
    models = [gt(1, 2), gt(1, 3), gt(2, 3)]
    for i in range(trials):
        sl = rng.choice(models)
        e = rng.choice(sl.exceptionals)
        e = e if rng.random() < 0.5 else neg(e)
        if not ch.reflection_equivariance_check(sl, e, trials=1, seed=rng.randrange(1 << 30)):
            return False, f"trial {i}: {sl.model} reflection in {e}"
    # control: the same check must reject a crossing rule that breaks the +-L symmetry
    sl = gt(1, 3)
    caught = not ch.reflection_equivariance_check(sl, sl.exceptionals[-1], trials=30, seed=SEED,
                                                  crossing=ch.one_sided_crossing)
    return caught, f"{trials} (point, +-E_j) trials; corrupted crossing rule {'caught' if caught else 'MISSED'}"


def c10_uniqueness():
    # (ell, radius, denominator); ell=1 has K^2 - ell = 0 and so no walls at all
    grid = [(1, 5, 4), (2, 2, 3), (3, 1, 2)]
    t = time.perf_counter()
    notes = []
    for ell, radius, denominator in grid:
        sl = gt(1, ell)
        probed = ch.probe_chambers(sl, radius, denominator)
        found = ch.search_distinguished(sl, radius, denominator)
        c0 = ch.distinguished_chamber(sl).by_L()
        if not found or any(f.by_L() != c0 and f.negated().by_L() != c0 for f in found):
            return False, f"ell={ell}: a chamber other than +-C0 passes"
        notes.append(f"ell={ell} r={radius} d={denominator}: {len(probed)} chambers")
    el = time.perf_counter() - t
    return el < 600.0, f"{'; '.join(notes)}; only +-C0 pass; {el:.1f}s"


def c11_summand_contradictions():
    count = 0
    for ksq in range(1, 4):
        for ell in range(4):
            sl = gt(ksq, ell)
            bset = enumerate_basic_classes(sl)
            diffs = rc.difference_set(bset)
            es = {pair_up(e) for e in sl.exceptionals}
            for n in sorted(diffs):
                if sl.space.square(n) != -1 or pair_up(n) in es:
                    continue
                v = rc.check_summand_class(bset, sl.K0, sl.exceptionals, n)
                if not isinstance(v, rc.Contradiction):
                    return False, f"ksq={ksq} ell={ell} n={n}: {v}"
                count += 1
    return count > 0, f"{count} non-exceptional (-1)-differences refuted"


def random_hyperbolic_lattice(rng: random.Random, rank: int) -> LatticeSpace:
    base = [1] + [-1] * (rank - 1)
    if rank >= 2 and rng.random() < 0.3:
        g = [[0] * rank for _ in range(rank)]
        g[0][1] = g[1][0] = 1
        for i in range(2, rank):
            g[i][i] = -1
    else:
        g = [[base[i] if i == j else 0 for j in range(rank)] for i in range(rank)]
    u = [[int(i == j) for j in range(rank)] for i in range(rank)]
    for _ in range(rng.randint(0, 3)):
        i, j = rng.sample(range(rank), 2) if rank > 1 else (0, 0)
        if i != j:
            c = rng.choice((-1, 1))
            for r in range(rank):
                u[r][j] += c * u[r][i]
    ut = [list(r) for r in zip(*u)]
    return LatticeSpace(mat_mul(mat_mul(ut, g), u))


def brute_force(space: LatticeSpace, s: int, anchor, bound: int, characteristic_only=False) -> list:
    """Box scan with the box taken from the inverse of the definite form (sympy, numpy)."""
    import numpy as np
    import sympy

    n = space.rank
    G = sympy.Matrix(space.gram)
    a = sympy.Matrix(anchor)
    aa = (a.T * G * a)[0]
    ga = G * a
    P = 2 * ga * ga.T / aa - G
    R = sympy.Rational(2 * bound * bound, aa) - s
    if R < 0:
        return []
    Pinv = P.inv()
    box = [int(sympy.floor(sympy.sqrt(R * Pinv[i, i]))) + 1 for i in range(n)]
    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in box]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    Gn = np.array(space.gram, dtype=np.int64)
    sq = np.einsum("ij,jk,ik->i", pts, Gn, pts)
    pa = pts @ (Gn @ np.array(anchor, dtype=np.int64))
    keep = (sq == s) & (np.abs(pa) <= bound)
    if characteristic_only:
        gp = pts @ Gn
        keep &= np.all((gp - np.diag(Gn)) % 2 == 0, axis=1)
    return sorted(tuple(int(c) for c in row) for row in pts[keep])


def c12_oracle(instances: int = 200):
    rng = random.Random(SEED + 12)
    total = 0
    for i in range(instances):
        rank = rng.randint(1, 4)
        space = random_hyperbolic_lattice(rng, rank)
        anchor = positive_anchor(space)
        s = rng.randint(-9, 9)
        bound = rng.randint(0, 6)
        char = rng.random() < 0.25
        got = space.enumerate_with_square(s, anchor, bound, characteristic_only=char)
        want = brute_force(space, s, anchor, bound, char)
        if got != want:
            return False, f"instance {i}: gram={space.gram} s={s} bound={bound}"
        total += len(got)
    return True, f"{instances} instances, {total} vectors agree"


CRITERIA = [
    (1, "cardinality 2^(l+1)", c1_cardinality),
    (2, "Dolgachev counts d*2^l", c2_dolgachev),
    (3, "recovery round trip under isometries", c3_recovery_round_trip),
    (4, "multiplicity recovery", c4_multiplicities),
    (5, "plurigenera", c5_plurigenera),
    (6, "K0 lies on no wall", c6_k0_on_no_wall),
    (7, "wall-crossing sign fixture", c7_crossing_sign),
    (8, "path independence", c8_path_independence),
    (9, "reflection equivariance", c9_equivariance),
    (10, "distinguished chamber uniqueness", c10_uniqueness),
    (11, "summand classes are exceptional", c11_summand_contradictions),
    (12, "enumeration oracle", c12_oracle),
]


def run_one(number: int) -> S.SelftestLine:
    _, name, fn = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return S.SelftestLine(criterion=number, name=name, passed=bool(ok),
                          seconds=round(time.perf_counter() - t, 3), detail=detail)


def run_all(wanted=None) -> S.SelftestReport:
    lines = [run_one(n) for n, _, _ in CRITERIA if wanted is None or n in wanted]
    return S.SelftestReport(passed=all(x.passed for x in lines), results=lines)


def format_line(x: S.SelftestLine) -> str:
    return f"[{'PASS' if x.passed else 'FAIL'}] {x.criterion:2d} {x.name} ({x.seconds:.2f}s): {x.detail}"
