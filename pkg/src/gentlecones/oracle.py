"""Independent verification by explicit matrices.

Mapping cones are built from realized chain maps, minimized by repeated
elimination of unit entries, and compared with a claimed complex by sampling
random chain maps and testing them for invertibility.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complexes import (
    Graded,
    ProjComplex,
    after,
    compose_blocks,
    elt_add,
    elt_inverse,
    elt_scale,
    graded_dims,
    unit_part,
)
from .scalars import PrimeField


class NotAChainMap(ValueError):
    pass


@dataclass
class GradedMap:
    """A map ``X^n -> Y^{n+t}``; ``comps[n][(i, j)]`` goes from ``X^n_j`` to ``Y^{n+t}_i``."""

    source: ProjComplex
    target: ProjComplex
    comps: Graded = field(default_factory=dict)
    t: int = 0

    @property
    def field(self):
        return self.source.field

    def add(self, n: int, i: int, j: int, path, coeff) -> None:
        F = self.field
        blk = self.comps.setdefault(n, {})
        blk[(i, j)] = elt_add(F, blk.get((i, j), {}), {path: coeff})
        if not blk[(i, j)]:
            del blk[(i, j)]

    def is_zero(self) -> bool:
        return not any(blk for blk in self.comps.values())

    def support(self) -> list:
        return sorted(
            (n, i, j, str(p)) for n, blk in self.comps.items() for (i, j), x in blk.items() for p in x
        )


def _sub_blocks(F, x: dict, y: dict) -> dict:
    out = {k: dict(v) for k, v in x.items()}
    for k, v in y.items():
        z = elt_add(F, out.get(k, {}), v, F.neg(F.one))
        if z:
            out[k] = z
        else:
            out.pop(k, None)
    return out


def is_chain_map(g: GradedMap) -> bool:
    X, Y, F, A = g.source, g.target, g.field, g.source.algebra
    degs = set(X.degrees) | {n - 1 for n in X.degrees}
    for n in degs:
        lhs = compose_blocks(F, A, g.comps.get(n, {}), Y.d(n + g.t))
        rhs = compose_blocks(F, A, X.d(n), g.comps.get(n + 1, {}))
        if _sub_blocks(F, lhs, rhs):
            return False
    return True


# ---------------------------------------------------------------- hom spaces as linear systems


def hom_basis(X: ProjComplex, Y: ProjComplex, t: int) -> list[tuple]:
    A = X.algebra
    out = []
    for n in X.degrees:
        ys = Y.slots.get(n + t, [])
        for j, xv in enumerate(X.slots[n]):
            for i, yv in enumerate(ys):
                for p in A.hom_basis(xv, yv):
                    out.append((n, i, j, p))
    return out


def _d_of_basis(X, Y, t, e) -> Graded:
    """``d_Y e - (-1)^t e d_X`` for the single-entry map ``e``."""
    F, A = X.field, X.algebra
    n, i, j, p = e
    out: Graded = {}
    unit = {p: F.one}
    for (r, c), y in Y.d(n + t).items():
        if c == i:
            z = after(F, A, y, unit)
            if z:
                blk = out.setdefault(n, {})
                blk[(r, j)] = elt_add(F, blk.get((r, j), {}), z)
    sign = F.neg(F.one) if t % 2 == 0 else F.one
    for (r, c), x in X.d(n - 1).items():
        if r == j:
            z = after(F, A, unit, x)
            if z:
                blk = out.setdefault(n - 1, {})
                blk[(i, c)] = elt_add(F, blk.get((i, c), {}), z, sign)
    return out


def differential_matrix(X: ProjComplex, Y: ProjComplex, t: int):
    """Matrix of ``f -> d f - (-1)^t f d`` from degree-``t`` maps to degree ``t+1`` maps."""
    F = X.field
    src = hom_basis(X, Y, t)
    dst = hom_basis(X, Y, t + 1)
    index = {e: k for k, e in enumerate(dst)}
    M = linalg.matrix(F, len(dst), len(src))
    for col, e in enumerate(src):
        for n, blk in _d_of_basis(X, Y, t, e).items():
            for (i, j), x in blk.items():
                for p, c in x.items():
                    row = index[(n, i, j, p)]
                    if isinstance(M, np.ndarray):
                        M[row, col] = (int(M[row, col]) + int(c)) % F.p
                    else:
                        M[row][col] = F.add(M[row][col], c)
    return M, src, dst


def map_to_vector(g: GradedMap, basis: list[tuple]):
    F = g.field
    index = {e: k for k, e in enumerate(basis)}
    v = [F.zero] * len(basis)
    for n, blk in g.comps.items():
        for (i, j), x in blk.items():
            for p, c in x.items():
                v[index[(n, i, j, p)]] = c
    return v


def vector_to_map(X, Y, basis, v, t: int = 0) -> GradedMap:
    F = X.field
    g = GradedMap(X, Y, {}, t)
    for e, c in zip(basis, v):
        c = int(c) if isinstance(F, PrimeField) else c
        if not F.is_zero(c):
            g.add(e[0], e[1], e[2], e[3], c)
    return g


def chain_map_space(X: ProjComplex, Y: ProjComplex):
    M, src, _ = differential_matrix(X, Y, 0)
    return linalg.nullspace(X.field, M, cols=len(src)), src


def is_null_homotopic(g: GradedMap) -> bool:
    """Whether ``g = d_Y h + h d_X`` has a solution ``h``."""
    X, Y, F = g.source, g.target, g.field
    M, src, dst = differential_matrix(X, Y, -1)
    b = map_to_vector(g, dst) if dst else []
    if not dst:
        return True
    if not src:
        return all(F.is_zero(x) for x in b)
    if isinstance(F, PrimeField):
        b = np.array(b, dtype=np.int64)
    return linalg.solve(F, M, b) is not None


# ---------------------------------------------------------------- cones and reduction


def mapping_cone(g: GradedMap) -> ProjComplex:
    """Degree ``n`` holds ``X^{n+1} + Y^n`` with differential [[-d_X, 0], [g, d_Y]]."""
    if g.t != 0 or not is_chain_map(g):
        raise NotAChainMap("mapping cone needs a degree-zero chain map")
    X, Y, F = g.source, g.target, g.field
    C = ProjComplex(X.algebra, F)
    degs = sorted({n - 1 for n in X.degrees} | set(Y.degrees))
    off = {}
    for n in degs:
        for v, lab in zip(X.slots.get(n + 1, []), X.labels.get(n + 1, [])):
            C.add_slot(n, v, ("X", lab))
        off[n] = X.size(n + 1)
        for v, lab in zip(Y.slots.get(n, []), Y.labels.get(n, [])):
            C.add_slot(n, v, ("Y", lab))
    minus = F.neg(F.one)
    for n in degs:
        for (i, j), x in X.d(n + 1).items():
            for p, c in x.items():
                C.add_entry(n, i, j, p, F.mul(c, minus))
        for (i, j), x in g.comps.get(n + 1, {}).items():
            for p, c in x.items():
                C.add_entry(n, off.get(n + 1, 0) + i, j, p, c)
        for (i, j), x in Y.d(n).items():
            for p, c in x.items():
                C.add_entry(n, off.get(n + 1, 0) + i, off[n] + j, p, c)
    C.check()
    return C


@dataclass
class ReductionStats:
    eliminated_pairs: int = 0
    steps: list = field(default_factory=list)


def _find_unit(C: ProjComplex):
    F = C.field
    for n in sorted(C.diff):
        best = None
        for (i, j), x in C.diff[n].items():
            if not F.is_zero(unit_part(F, x)) and (best is None or (j, i) < best):
                best = (j, i)
        if best is not None:
            return n, best[1], best[0]
    return None


def eliminate(C: ProjComplex, n: int, i: int, j: int) -> ProjComplex:
    """Remove the unit entry ``d^n[i, j]`` and its two slots (Gaussian elimination).

    Every other entry ``b1 = d^n[r, c]`` becomes ``b1 - b2 u^{-1} b3`` with
    ``b2 = d^n[r, j]``, ``u = d^n[i, j]`` and ``b3 = d^n[i, c]``.
    """
    F, A = C.field, C.algebra
    d = C.diff.get(n, {})
    uinv = elt_inverse(F, A, d[(i, j)])
    col_j = {r: x for (r, c), x in d.items() if c == j and r != i}
    row_i = {c: x for (r, c), x in d.items() if r == i and c != j}
    new = {k: dict(x) for k, x in d.items() if k[0] != i and k[1] != j}
    minus = F.neg(F.one)
    for r, b2 in col_j.items():
        left = after(F, A, b2, uinv)
        for c, b3 in row_i.items():
            z = after(F, A, left, b3)
            if z:
                v = elt_add(F, new.get((r, c), {}), z, minus)
                if v:
                    new[(r, c)] = v
                else:
                    new.pop((r, c), None)
    out = ProjComplex(A, F)
    keep = {}
    for m in C.degrees:
        drop = j if m == n else (i if m == n + 1 else None)
        keep[m] = {}
        for k, (v, lab) in enumerate(zip(C.slots[m], C.labels.get(m, [None] * C.size(m)))):
            if k != drop:
                keep[m][k] = out.add_slot(m, v, lab)
    for m, blk in C.diff.items():
        src = new if m == n else blk
        for (r, c), x in src.items():
            if r in keep.get(m + 1, {}) and c in keep.get(m, {}):
                for p, coeff in x.items():
                    out.add_entry(m, keep[m + 1][r], keep[m][c], p, coeff)
    out.slots = {m: s for m, s in out.slots.items() if s}
    return out


def reduce_min(C: ProjComplex, stats: ReductionStats | None = None) -> ProjComplex:
    """Minimal complex homotopy equivalent to ``C``; lowest degree, leftmost unit first."""
    stats = stats if stats is not None else ReductionStats()
    while True:
        hit = _find_unit(C)
        if hit is None:
            return C
        stats.eliminated_pairs += 1
        stats.steps.append(hit)
        C = eliminate(C, *hit)


def euler_characteristic(C: ProjComplex) -> Counter:
    out: Counter = Counter()
    for n in C.degrees:
        for v in C.slots[n]:
            out[v] += (-1) ** (n % 2)
    return Counter({k: v for k, v in out.items() if v})


# ---------------------------------------------------------------- isomorphism probe


def same_graded_dims(X: ProjComplex, Y: ProjComplex) -> bool:
    return graded_dims(X) == graded_dims(Y)


def top_matrices_invertible(g: GradedMap) -> bool:
    """A map of complexes of projectives is invertible iff its unit parts are, vertex by vertex."""
    X, Y, F = g.source, g.target, g.field
    for n in X.degrees:
        for v in set(X.slots[n]):
            cols = [j for j, w in enumerate(X.slots[n]) if w == v]
            rows = [i for i, w in enumerate(Y.slots.get(n, [])) if w == v]
            if len(rows) != len(cols):
                return False
            M = linalg.matrix(F, len(rows), len(cols))
            blk = g.comps.get(n, {})
            for a, i in enumerate(rows):
                for b, j in enumerate(cols):
                    c = unit_part(F, blk.get((i, j), {}))
                    if isinstance(M, np.ndarray):
                        M[a, b] = c
                    else:
                        M[a][b] = c
            if not linalg.is_invertible(F, M):
                return False
    return True


@dataclass
class ProbeResult:
    iso: bool
    trials_used: int
    witness: GradedMap | None = None


def iso_probe(X: ProjComplex, Y: ProjComplex, trials: int = 16, seed: int = 0) -> ProbeResult:
    """Search for an isomorphism among random chain maps ``X -> Y``.

    A positive answer is certified: the witness is rechecked as a chain map
    with invertible unit parts.
    """
    if not same_graded_dims(X, Y):
        return ProbeResult(False, 0)
    if X.rank == 0:
        return ProbeResult(True, 0, GradedMap(X, Y))
    F = X.field
    basis, src = chain_map_space(X, Y)
    if not basis:
        return ProbeResult(False, 0)
    rng = random.Random(seed)
    for trial in range(1, trials + 1):
        coeffs = [F.random(rng) for _ in basis]
        if isinstance(F, PrimeField):
            v = np.zeros(len(src), dtype=np.int64)
            for c, b in zip(coeffs, basis):
                v = (v + c * b) % F.p
        else:
            v = [F.zero] * len(src)
            for c, b in zip(coeffs, basis):
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        g = vector_to_map(X, Y, src, v)
        if top_matrices_invertible(g):
            if not is_chain_map(g):
                raise AssertionError("sampled map is not a chain map")
            return ProbeResult(True, trial, g)
    return ProbeResult(False, trials)


@dataclass
class VerifyReport:
    graded_dims_match: bool
    iso: bool
    trials_used: int
    field: str
    eliminated_pairs: int

    def to_json(self) -> dict:
        return {
            "graded_dims_match": self.graded_dims_match,
            "iso": self.iso,
            "trials_used": self.trials_used,
            "field": self.field,
            "eliminated_pairs": self.eliminated_pairs,
        }


def verify_complexes(cone: ProjComplex, claimed: ProjComplex, trials: int = 16, seed: int = 0) -> VerifyReport:
    stats = ReductionStats()
    M = reduce_min(cone, stats)
    N = reduce_min(claimed)
    match = same_graded_dims(M, N)
    if not match:
        return VerifyReport(False, False, 0, repr(cone.field), stats.eliminated_pairs)
    res = iso_probe(M, N, trials, seed)
    return VerifyReport(True, res.iso, res.trials_used, repr(cone.field), stats.eliminated_pairs)


def verify_map_cone(g: GradedMap, claimed: ProjComplex, trials: int = 16, seed: int = 0) -> VerifyReport:
    return verify_complexes(mapping_cone(g), claimed, trials, seed)


def verify_cone(desc, claimed, ctx=None, trials: int = 16, seed: int = 0) -> VerifyReport:
    """Compare a claimed decomposition with the explicit cone of ``desc``.

    The map is realized afresh over ``ctx`` (by default a prime field holding
    every scalar involved), so the check shares nothing with the word surgery.
    """
    from .morphisms import realize

    if ctx is None:
        ctx = claimed.field_context(desc.source, desc.target)
    F = ctx.field
    r = realize(desc, F)
    if claimed.oracle_only:
        built = reduce_min(mapping_cone(r.map))
    else:
        built = claimed.build(F, desc.source.algebra)
    return verify_map_cone(r.map, built, trials, seed)
