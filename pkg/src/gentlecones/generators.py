"""Random gentle algebras and homotopy bands for property tests and batch runs."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import AlgebraError, Arrow, GentleAlgebra, validate_gentle
from .complexes import ProjComplex, compose_blocks, elt_add
from .scalars import ONE, CycloScalar
from .walks import HomotopyBand, HomotopyString, Letter, WordError, junction_ok, primitive_root


def random_gentle_algebra(rng: random.Random, max_vertices: int = 6, arrow_budget: int | None = None,
                          tries: int = 200) -> GentleAlgebra:
    for _ in range(tries):
        nv = rng.randint(2, max_vertices)
        verts = [str(i + 1) for i in range(nv)]
        budget = arrow_budget or rng.randint(nv, 2 * nv)
        arrows: list[Arrow] = []
        outdeg = {v: 0 for v in verts}
        indeg = {v: 0 for v in verts}
        for k in range(4 * budget):
            if len(arrows) == budget:
                break
            s, t = rng.choice(verts), rng.choice(verts)
            if outdeg[s] < 2 and indeg[t] < 2:
                arrows.append(Arrow(f"x{len(arrows)}", s, t))
                outdeg[s] += 1
                indeg[t] += 1
        if not arrows:
            continue
        rels = []
        for v in verts:
            ins = [a.name for a in arrows if a.target == v]
            outs = [a.name for a in arrows if a.source == v]
            if not ins or not outs:
                continue
            if len(ins) == 2 and len(outs) == 2:
                if rng.random() < 0.5:
                    rels += [(outs[0], ins[0]), (outs[1], ins[1])]
                else:
                    rels += [(outs[0], ins[1]), (outs[1], ins[0])]
            elif len(ins) == 2:
                rels.append((outs[0], rng.choice(ins)))
            elif len(outs) == 2:
                rels.append((rng.choice(outs), ins[0]))
            elif rng.random() < 0.5:
                rels.append((outs[0], ins[0]))
        try:
            return validate_gentle(verts, arrows, rels)
        except AlgebraError:
            continue
    raise RuntimeError("no gentle algebra found")


def all_letters(A: GentleAlgebra) -> list[Letter]:
    out = []
    for p in A.all_paths:
        if not p.is_trivial:
            out.append(Letter(p, False))
            out.append(Letter(p, True))
    return out


def enumerate_bands(A: GentleAlgebra, max_length: int = 8, primitive_only: bool = True,
                    limit: int | None = None) -> list[HomotopyBand]:
    """Bands up to rotation and inversion, shortest first."""
    letters = all_letters(A)
    succ = {x: [y for y in letters if junction_ok(A, x, y)] for x in letters}
    found = {}

    def key(ls):
        cands = []
        for seq in (ls, tuple(y.inverted() for y in reversed(ls))):
            for k in range(len(seq)):
                cands.append(tuple(str(y) for y in seq[k:] + seq[:k]))
        return min(cands)

    def dfs(path, height):
        if limit is not None and len(found) >= limit:
            return
        n = len(path)
        if n >= 2 and n % 2 == 0 and height == 0 and junction_ok(A, path[-1], path[0]):
            ls = tuple(path)
            if not primitive_only or primitive_root(ls)[1] == 1:
                k = key(ls)
                if k not in found:
                    try:
                        found[k] = HomotopyBand(A, ls)
                    except WordError:
                        pass
        if n == max_length:
            return
        for y in succ[path[-1]]:
            dfs(path + [y], height + y.step)

    for x in letters:
        if not x.inverse:
            dfs([x], 1)
    return sorted(found.values(), key=lambda b: (len(b), b.word()))


def random_scalar(rng: random.Random, choices=(1, -1, 2, -2, 3, 4, 9, -9)) -> CycloScalar:
    return CycloScalar.of(rng.choice(choices))


def random_band_algebra(rng: random.Random, max_vertices: int = 6, min_bands: int = 2,
                        max_length: int = 8, tries: int = 500) -> tuple[GentleAlgebra, list[HomotopyBand]]:
    """A random gentle algebra together with its primitive bands of bounded length."""
    for _ in range(tries):
        A = random_gentle_algebra(rng, max_vertices)
        bands = enumerate_bands(A, max_length, limit=200)
        if len(bands) >= min_bands:
            return A, bands
    raise RuntimeError("no algebra with enough bands found")


def random_string(A: GentleAlgebra, rng: random.Random, max_length: int = 8, seed_letters=(),
                  degree_anchor: int = 0) -> HomotopyString:
    """A random homotopy string, optionally starting with ``seed_letters``.

    Seeding with (powers of) a band word makes long overlaps with that band likely.
    """
    letters = all_letters(A)
    path = list(seed_letters)
    target = rng.randint(len(path), max(len(path), max_length))
    while len(path) < target:
        nxt = [y for y in letters if junction_ok(A, path[-1], y)] if path else letters
        if not nxt:
            break
        path.append(rng.choice(nxt))
    if path and rng.random() < 0.5:
        # grow on the left as well
        prev = [y for y in letters if junction_ok(A, y, path[0])]
        if prev:
            path.insert(0, rng.choice(prev))
    if not path:
        return HomotopyString(A, (), degree_anchor, rng.choice(A.vertices))
    return HomotopyString(A, tuple(path), degree_anchor)


# ---------------------------------------------------------------- planted unit blocks


@dataclass
class PlantedBlock:
    degree: int
    row: int  # unit slot in degree + 1
    col: int  # unit slot in degree
    unit: object


def _random_elt(F, A: GentleAlgebra, start: str, end: str, rng: random.Random) -> dict:
    """Random element of the span of paths ``start -> end`` (possibly zero)."""
    out = {}
    for p in A.paths_between(start, end):
        if rng.random() < 0.7:
            c = F.random(rng)
            if not F.is_zero(c):
                out[p] = c
    return out


def plant_unit_block(C: ProjComplex, rng: random.Random) -> tuple[ProjComplex, PlantedBlock]:
    """``C + (P_v --u--> P_v)`` conjugated by random elementary automorphisms.

    The unit slots are appended last in their degrees, so eliminating them
    must give back ``C`` exactly.
    """
    F, A = C.field, C.algebra
    n = rng.choice(C.degrees + [min(C.degrees, default=0) - 1]) if C.degrees else 0
    v = rng.choice(A.vertices)
    u = F.random(rng)
    while F.is_zero(u):
        u = F.random(rng)
    j, i = C.size(n), C.size(n + 1)
    # N1: slot i -> slot r in degree n+1, N0: slot c -> slot j in degree n
    N1, N0 = {}, {}
    if C.size(n + 1):
        r = rng.randrange(C.size(n + 1))
        beta = _random_elt(F, A, C.slots[n + 1][r], v, rng)
        if beta:
            N1[(r, i)] = beta
    if C.size(n):
        c = rng.randrange(C.size(n))
        gamma = _random_elt(F, A, v, C.slots[n][c], rng)
        if gamma:
            N0[(j, c)] = gamma
    out = ProjComplex(A, F)
    for m in sorted(set(C.degrees) | {n, n + 1}):
        for w, lab in zip(C.slots.get(m, []), C.labels.get(m, [None] * C.size(m))):
            out.add_slot(m, w, lab)
    out.add_slot(n, v, "unit")
    out.add_slot(n + 1, v, "unit")
    d = {m: {k: dict(x) for k, x in blk.items()} for m, blk in C.diff.items()}
    d.setdefault(n, {})[(i, j)] = {A.trivial(v): u}
    minus = F.neg(F.one)

    def plus(blk, extra, scale=None):
        for k, x in extra.items():
            y = elt_add(F, blk.get(k, {}), x, scale)
            if y:
                blk[k] = y
            else:
                blk.pop(k, None)

    # d_n <- (1 + N1) d_n (1 - N0); d_{n+1} <- d_{n+1} (1 - N1); d_{n-1} <- (1 + N0) d_{n-1}
    dn = d[n]
    left = compose_blocks(F, A, dn, N1)
    plus(dn, left)
    right = compose_blocks(F, A, N0, dn)
    plus(dn, right, minus)
    if n + 1 in d:
        plus(d[n + 1], compose_blocks(F, A, N1, d[n + 1]), minus)
    if n - 1 in d:
        plus(d[n - 1], compose_blocks(F, A, d[n - 1], N0))
    for m, blk in d.items():
        for (a, b), x in blk.items():
            for p, coeff in x.items():
                out.add_entry(m, a, b, p, coeff)
    out.check()
    return out, PlantedBlock(n, i, j, u)
