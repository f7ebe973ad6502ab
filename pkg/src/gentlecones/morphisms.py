"""Graph, quasi-graph, single and double maps between string and band complexes.

Maps are first described on the unfolded covers (lines of nodes) and then
folded onto the complexes by summing components over all lifts; folding a
chain map of covers yields a chain map.  Every candidate is checked
algebraically before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import Path
from .complexes import ProjComplex, build_complex
from .oracle import GradedMap, NotAChainMap, differential_matrix, is_chain_map, is_null_homotopic, vector_to_map
from .scalars import ONE, CycloScalar, PrimeField
from .walks import Cover, OverlapDecomposition, Word, find_overlaps


@dataclass(frozen=True)
class Component:
    """A component on the covers: source cover node -> target cover node along ``path``."""

    x: int
    y: int
    path: Path
    coeff: CycloScalar = ONE


@dataclass(frozen=True)
class GraphMapDescriptor:
    overlap: OverlapDecomposition
    f_left: Path | None = None
    f_right: Path | None = None
    kind = "graph"

    @property
    def source(self) -> Word:
        return self.overlap.source

    @property
    def target(self) -> Word:
        return self.overlap.target

    def to_json(self) -> dict:
        out = self.overlap.describe()
        out.update(kind="graph", f_left=_pstr(self.f_left), f_right=_pstr(self.f_right))
        return out


@dataclass(frozen=True)
class QuasiGraphMapDescriptor:
    overlap: OverlapDecomposition
    kind = "quasi"

    @property
    def source(self) -> Word:
        return self.overlap.source

    @property
    def target(self) -> Word:
        return self.overlap.target

    def to_json(self) -> dict:
        out = self.overlap.describe()
        out["kind"] = "quasi"
        return out


@dataclass(frozen=True)
class SingleMapDescriptor:
    """Single component ``f`` from source node ``x`` to target node ``y``."""

    source: Word
    target: Word
    x: int
    y: int
    f: Path
    kind = "single"

    def to_json(self) -> dict:
        return {"kind": "single", "source_node": self.x, "target_node": self.y, "f": str(self.f)}


@dataclass(frozen=True)
class DoubleMapDescriptor:
    """Components ``f_left`` at (x, y) and ``f_right`` at the next nodes (x+1, y+1).

    The target is read backwards when ``reversed``; nodes are cover nodes.
    """

    source: Word
    target: Word
    x: int
    y: int
    f_left: Path
    f_right: Path
    reversed: bool = False
    kind = "double"

    def to_json(self) -> dict:
        return {
            "kind": "double",
            "source_node": Cover(self.source).node(self.x),
            "target_node": Cover(self.target, self.reversed).node(self.y),
            "target_reversed": self.reversed,
            "f_left": str(self.f_left),
            "f_right": str(self.f_right),
        }


Descriptor = GraphMapDescriptor | QuasiGraphMapDescriptor | SingleMapDescriptor | DoubleMapDescriptor


def _pstr(p: Path | None):
    return None if p is None else str(p)


def _strip(big: Path, prefix: Path | None = None, suffix: Path | None = None) -> tuple[str, ...] | None:
    """Arrows left after removing a prefix or suffix, or ``None``."""
    a = big.arrows
    if prefix is not None:
        k = len(prefix.arrows)
        return a[k:] if a[:k] == prefix.arrows else None
    k = len(suffix.arrows)
    return a[: len(a) - k] if a[len(a) - k:] == suffix.arrows else None


# ---------------------------------------------------------------- cover-level descriptions


def graph_components(ov: OverlapDecomposition) -> list[Component] | None:
    """Components of the graph map on the covers, or ``None`` if an end cannot close."""
    X, Y = ov.source_cover, ov.target_cover
    A = ov.source.algebra
    comps: list[Component] = []
    c = ONE
    r = ov.length
    for i in range(r + 1):
        comps.append(Component(ov.x0 + i, ov.y0 + i, A.trivial(X.vertex(ov.x0 + i)), c))
        if i == r:
            break
        cx, cy = X.coeff(ov.x0 + i), Y.coeff(ov.y0 + i)
        c = c * cy / cx if not X.letter(ov.x0 + i).inverse else c * cx / cy
    if ov.infinite:
        if c != ONE:
            return None
        return comps[:-1]
    ends = (
        (ov.x0 - 1, ov.y0 - 1, ov.x0 - 1, ov.y0 - 1, comps[0].coeff, False),
        (ov.x0 + r, ov.y0 + r, ov.x0 + r + 1, ov.y0 + r + 1, comps[-1].coeff, True),
    )
    for xs, ys, xn, yn, c0, into_is_inverse in ends:
        s = X.letter(xs) if X.has_node(xn) else None
        t = Y.letter(ys) if Y.has_node(yn) else None
        if s is not None and s.inverse == into_is_inverse:
            # s points into the end node: s = f t
            if t is None or t.inverse != into_is_inverse:
                return None
            rest = _strip(s.path, suffix=t.path)
            if not rest:
                return None
            comps.append(Component(xn, yn, A.path(rest), c0 * X.coeff(xs) / Y.coeff(ys)))
        elif t is not None and t.inverse != into_is_inverse:
            # t points away from the end node: t = s f
            if s is None:
                return None
            rest = _strip(t.path, prefix=s.path)
            if not rest:
                return None
            comps.append(Component(xn, yn, A.path(rest), c0 * Y.coeff(ys) / X.coeff(xs)))
    return comps


def quasi_components(ov: OverlapDecomposition) -> list[Component] | None:
    """Left-end part of ``d h + h d`` for the homotopy ``h`` running along the overlap."""
    X, Y = ov.source_cover, ov.target_cover
    if ov.infinite:
        w = ov.source
        k = w.scalar_slot
        x = k
        # the matching target node: same letter one step further on
        y = next(yy for yy in range(Y.period) if all(
            X.letter(x + i) == Y.letter(yy + i) for i in range(X.period)))
        return [Component(x, y + 1, X.letter(x).path, ONE)]
    comps = []
    h0 = ONE
    x0, y0 = ov.x0, ov.y0
    if Y.has_node(y0 - 1):
        t = Y.letter(y0 - 1)
        if t.inverse:
            comps.append(Component(x0, y0 - 1, t.path, h0 * Y.coeff(y0 - 1)))
    if X.has_node(x0 - 1):
        s = X.letter(x0 - 1)
        if not s.inverse:
            comps.append(Component(x0 - 1, y0, s.path, X.coeff(x0 - 1) * h0))
    return comps or None


# ---------------------------------------------------------------- folding


@dataclass
class Realization:
    descriptor: object
    source: ProjComplex
    target: ProjComplex
    map: GradedMap
    components: list = field(default_factory=list)


def _slot_index(C: ProjComplex) -> dict[int, tuple[int, int]]:
    out = {}
    for n, labs in C.labels.items():
        for i, lab in enumerate(labs):
            if lab is not None and lab[0] == "node" and lab[2] == 0:
                out[lab[1]] = (n, i)
    return out


def fold(comps: list[Component], X: Cover, Y: Cover, CX: ProjComplex, CY: ProjComplex) -> GradedMap:
    F = CX.field
    sx, sy = _slot_index(CX), _slot_index(CY)
    g = GradedMap(CX, CY)
    for c in comps:
        nx, i = sx[X.node(c.x)]
        ny, k = sy[Y.node(c.y)]
        if nx != ny:
            raise NotAChainMap("component changes degree")
        g.add(nx, k, i, c.path, F.embed(c.coeff))
    return g


def _complexes(source: Word, target: Word, F):
    return build_complex(source, F), build_complex(target, F)


def realize(m: Descriptor, F, complexes=None) -> Realization:
    """Explicit chain map for a descriptor; raises NotAChainMap if the candidate fails."""
    CX, CY = complexes or _complexes(m.source, m.target, F)
    if isinstance(m, GraphMapDescriptor):
        comps = graph_components(m.overlap)
        X, Y = m.overlap.source_cover, m.overlap.target_cover
    elif isinstance(m, QuasiGraphMapDescriptor):
        comps = quasi_components(m.overlap)
        X, Y = m.overlap.source_cover, m.overlap.target_cover
    elif isinstance(m, SingleMapDescriptor):
        X, Y = Cover(m.source), Cover(m.target)
        comps = [Component(m.x, m.y, m.f, ONE)]
    else:
        X, Y = Cover(m.source), Cover(m.target, m.reversed)
        comps = _double_components(m, X, Y)
    if comps is None:
        raise NotAChainMap("overlap ends do not close up")
    g = fold(comps, X, Y, CX, CY)
    if g.is_zero() or not is_chain_map(g):
        raise NotAChainMap(f"{m.kind} candidate is not a nonzero chain map")
    return Realization(m, CX, CY, g, comps)


def _double_components(m: DoubleMapDescriptor, X: Cover, Y: Cover) -> list[Component] | None:
    """Coefficient of ``f_right`` fixed by the commuting square between the components."""
    A = m.source.algebra
    s, t = X.letter(m.x), Y.letter(m.y)
    if s is None or t is None or s.inverse != t.inverse:
        return None
    cs, ct = X.coeff(m.x), Y.coeff(m.y)
    if not s.inverse:
        lhs, rhs = A.mul(s.path, m.f_right), A.mul(m.f_left, t.path)
        if lhs is None or lhs != rhs:
            return None
        cr = ct / cs
    else:
        lhs, rhs = A.mul(s.path, m.f_left), A.mul(m.f_right, t.path)
        if lhs is None or lhs != rhs:
            return None
        cr = cs / ct
    return [Component(m.x, m.y, m.f_left, ONE), Component(m.x + 1, m.y + 1, m.f_right, cr)]


# ---------------------------------------------------------------- enumeration


def _signature(g: GradedMap):
    return tuple(g.support())


def enumerate_morphisms(source: Word, target: Word, F, kinds=("graph", "quasi", "single", "double")) -> list[Realization]:
    """All candidate descriptors of the requested kinds that realize to chain maps.

    Quasi-graph representatives, single and double maps must also be
    non-null-homotopic.  A candidate whose homotopy class is a nonzero multiple
    of one already reported is another representative of the same basis
    element and is skipped; graph maps come first, then quasi-graph maps
    (infinite overlaps first), then single and double maps.
    """
    CX, CY = _complexes(source, target, F)
    out: list[Realization] = []
    seen = set()

    def keep(desc, need_nonnull: bool):
        try:
            r = realize(desc, F, (CX, CY))
        except NotAChainMap:
            return
        sig = _signature(r.map)
        if sig in seen:
            return
        if need_nonnull and is_null_homotopic(r.map):
            return
        if any(span_rank([r.map, k.map], CX, CY) <= 1 for k in out):
            return
        seen.add(sig)
        out.append(r)

    if "graph" in kinds:
        for ov in find_overlaps(source, target, "graph"):
            keep(GraphMapDescriptor(ov), False)
    if "quasi" in kinds:
        for ov in sorted(find_overlaps(source, target, "quasi"), key=lambda o: not o.infinite):
            keep(QuasiGraphMapDescriptor(ov), True)
    A = source.algebra
    if "single" in kinds:
        X, Y = Cover(source), Cover(target)
        for x in X.node_range():
            for y in Y.node_range():
                if X.degree(x) != Y.degree(y):
                    continue
                for p in A.hom_basis(X.vertex(x), Y.vertex(y)):
                    if not p.is_trivial:
                        keep(SingleMapDescriptor(source, target, x, y, p), True)
    if "double" in kinds:
        for rev in (False, True):
            X, Y = Cover(source), Cover(target, rev)
            for x in X.node_range():
                if not X.has_node(x + 1):
                    continue
                for y in Y.node_range():
                    if not Y.has_node(y + 1) or X.degree(x) != Y.degree(y):
                        continue
                    if X.letter(x).inverse != Y.letter(y).inverse:
                        continue
                    for pl in A.hom_basis(X.vertex(x), Y.vertex(y)):
                        if pl.is_trivial:
                            continue
                        for pr in A.hom_basis(X.vertex(x + 1), Y.vertex(y + 1)):
                            if not pr.is_trivial:
                                keep(DoubleMapDescriptor(source, target, x, y, pl, pr, rev), True)
    return out


def hom_dimension_mod_homotopy(CX: ProjComplex, CY: ProjComplex) -> int:
    """dim Hom_K(X, Y): chain maps modulo null-homotopic ones."""
    F = CX.field
    Z, src, _ = differential_matrix(CX, CY, 0)
    B, hsrc, hdst = differential_matrix(CX, CY, -1)
    z = len(src) - (linalg.rank(F, Z) if len(src) and linalg.shape(Z)[0] else 0)
    b = linalg.rank(F, B) if len(hsrc) and len(hdst) else 0
    return z - b


def span_rank(maps: list[GradedMap], CX: ProjComplex, CY: ProjComplex) -> int:
    """Rank of the classes of ``maps`` in Hom_K(X, Y)."""
    from .oracle import hom_basis, map_to_vector

    F = CX.field
    basis = hom_basis(CX, CY, 0)
    B, hsrc, _ = differential_matrix(CX, CY, -1)
    cols = [map_to_vector(g, basis) for g in maps]
    if len(hsrc):
        if isinstance(B, np.ndarray):
            cols += [list(B[:, k]) for k in range(B.shape[1])]
        else:
            cols += [[row[k] for row in B] for k in range(len(hsrc))]
    b = linalg.rank(F, B) if len(hsrc) and len(basis) else 0
    if not cols or not basis:
        return 0
    if isinstance(F, PrimeField):
        M = np.array(cols, dtype=np.int64).T
    else:
        M = [list(r) for r in zip(*cols)]
    return linalg.rank(F, M) - b
