"""Mapping-cone decompositions read off from words.

Every cone is assembled as a walk through the unfolded diagrams of the
source (lowered by one degree, since the cone contains its shift) and the
target.  Reducing the walk cancels the overlap; the endpoint letters then
collapse to ``f_L`` / ``f_R`` or merge.  A band result is split into
primitive summands with root-of-unity twisted scalars.

Scalar conventions: ``mx`` and ``my`` are the monodromies of the source and
target covers (product of coefficients of direct letters over inverse ones,
read along the cover).  Each cone word is read in the orientation of its
walk, so the scalars below are stated in those terms.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace

from .algebra import Path
from .complexes import ProjComplex, build_complex, direct_sum, zero_complex
from .conewords import Walk, cyclic_word, linear_word
from .morphisms import (
    DoubleMapDescriptor,
    GraphMapDescriptor,
    QuasiGraphMapDescriptor,
    SingleMapDescriptor,
    graph_components,
)
from .scalars import (
    ONE,
    CycloScalar,
    FieldCtx,
    IrrationalRoot,
    SymbolicRoot,
    kth_root,
    primitive_unity_root,
    required_order,
)
from .walks import Cover, HomotopyBand, HomotopyString, Letter, Word, band_primitive_root, canonical_band


class CaseNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class StringSummand:
    """``Sigma^shift P_w`` with ``w`` anchored in degree 0."""

    word: HomotopyString
    shift: int = 0

    @classmethod
    def of(cls, w: HomotopyString) -> "StringSummand":
        return cls(replace(w, degree_anchor=0), -w.degree_anchor)

    def realized(self) -> HomotopyString:
        return replace(self.word, degree_anchor=-self.shift)

    def to_json(self) -> dict:
        return {"type": "string", "word": self.word.word(), "shift": self.shift,
                "scalar": None, "dim": None}


@dataclass(frozen=True)
class BandSummand:
    """``Sigma^shift B_{w, scalar, dim}`` with ``w`` primitive and anchored in degree 0."""

    word: HomotopyBand
    scalar: object
    dim: int = 1
    shift: int = 0

    @classmethod
    def of(cls, b: HomotopyBand) -> "BandSummand":
        return cls(replace(b, scalar=ONE, degree_anchor=0, dim=1), b.scalar, b.dim, -b.degree_anchor)

    def realized(self) -> HomotopyBand:
        return replace(self.word, scalar=self.scalar, dim=self.dim, degree_anchor=-self.shift)

    def to_json(self) -> dict:
        return {"type": "band", "word": self.word.word(), "shift": self.shift,
                "scalar": str(self.scalar), "dim": self.dim}


Summand = StringSummand | BandSummand


@dataclass
class ConeDecomposition:
    summands: list = field(default_factory=list)
    provenance: str = ""
    oracle_only: bool = False
    complex: ProjComplex | None = None

    def words(self) -> list[Word]:
        return [s.realized() for s in self.summands]

    def build(self, F, algebra=None) -> ProjComplex:
        """Direct sum of the summand complexes; ``algebra`` is needed for the zero cone."""
        if self.oracle_only:
            if self.complex is None:
                raise CaseNotApplicable("oracle-only result carries no complex")
            return self.complex
        parts = [build_complex(w, F) for w in self.words()]
        return direct_sum(*parts) if parts else zero_complex(algebra, F)

    def scalars(self) -> list:
        return [s.scalar for s in self.summands if isinstance(s, BandSummand)]

    def field_context(self, *words, mode: str = "prime") -> FieldCtx:
        """A field holding every scalar of ``words`` and of the summands."""
        scalars = self.scalars() + [w.scalar for w in words if w.is_band]
        order = required_order(scalars)
        if mode == "prime":
            symbolic = [s for s in scalars if isinstance(s, SymbolicRoot)]
            return FieldCtx.default_prime(order, symbolic=symbolic)
        return FieldCtx.cyclotomic(order)

    def key(self) -> Counter:
        """Multiset of summands up to rotation/inversion of band words."""
        out = Counter()
        for s in self.summands:
            if isinstance(s, BandSummand):
                c = canonical_band(s.realized())
                out[("band", c.word(), str(c.scalar), c.dim, s.shift)] += 1
            else:
                w = s.word.word()
                out[("string", min(w, s.word.inverse().word()), s.shift)] += 1
        return out

    def to_json(self) -> list[dict]:
        return [dict(s.to_json(), provenance=self.provenance) for s in self.summands]

    def display(self, *hints: Word) -> str:
        """Like ``str`` but band words are read as they occur inside ``hints``."""
        out = []
        for s in self.summands:
            if isinstance(s, BandSummand):
                out.append(BandSummand.of(display_band(s.realized(), hints)))
            else:
                out.append(s)
        return str(replace(self, summands=out))

    def __str__(self) -> str:
        if self.oracle_only:
            return f"oracle-only ({self.provenance})"
        if not self.summands:
            return f"0 ({self.provenance})"
        parts = []
        for s in self.summands:
            sh = f"[{s.shift}]" if s.shift else ""
            if isinstance(s, BandSummand):
                d = f", dim {s.dim}" if s.dim != 1 else ""
                parts.append(f"B({s.word.word()}; {s.scalar}{d}){sh}")
            else:
                parts.append(f"P({s.word.word() or 'e' + str(s.word.vertex)}){sh}")
        return " + ".join(parts)


def _occurs(letters, hint: Word) -> int | None:
    """First offset at which ``letters`` reads along ``hint`` (cyclically for bands)."""
    h, m = [str(x) for x in hint.letters], len(letters)
    want = [str(x) for x in letters]
    if not h:
        return None
    for i in range(len(h) if hint.is_band else len(h) - m + 1):
        if all(h[(i + j) % len(h)] == want[j] for j in range(m)):
            return i
    return None


def display_band(b: HomotopyBand, hints=()) -> HomotopyBand:
    """Rotation/orientation of ``b`` for printing.

    Prefer the reading that occurs earliest inside one of ``hints``, then a
    start at a direct letter preceded by a direct letter.
    """
    best = None
    for cand in (b, b.inverse()):
        m = len(cand)
        for k in range(m):
            r = cand.rotate(k)
            hits = [i for i in (_occurs(r.letters, h) for h in hints) if i is not None]
            after_direct = not r.letters[0].inverse and not r.letters[-1].inverse
            score = (min(hits) if hits else 10**9, not after_direct,
                     tuple(-ord(c) for c in r.word()))
            if best is None or score < best[0]:
                best = (score, r)
    return best[1]


# ---------------------------------------------------------------- scalars and powers


def cover_monodromy(C: Cover):
    m = ONE
    for k in range(C.period):
        c = C.coeff(k)
        m = m / c if C.letter(k).inverse else m * c
    return m


def split_band_power(w: HomotopyBand, s, dim: int = 1, provenance: str = "power of a band") -> ConeDecomposition:
    """``B_{theta^k, s}`` as the sum of ``B_{theta, omega^i mu}`` with ``mu^k = s``."""
    if s.is_zero:
        raise CaseNotApplicable("band scalar must be nonzero")
    theta, k = band_primitive_root(w)
    try:
        mu = kth_root(s, k)
        scalars = [primitive_unity_root(k) ** i * mu for i in range(k)]
    except IrrationalRoot:
        scalars = [SymbolicRoot(s, k, i) for i in range(k)]
    out = [BandSummand.of(replace(theta, scalar=c, dim=dim)) for c in scalars]
    return ConeDecomposition(out, provenance)


def _node_multiset(words) -> Counter:
    out = Counter()
    for w in words:
        for v, d in zip(w.nodes if w.is_band else w.nodes, w.degree_profile()):
            out[(v, d)] += 1
    return out


def _expected_nodes(src: Word, dst: Word, drop: Counter | None = None) -> Counter:
    out = Counter()
    for v, d in zip(src.nodes, src.degree_profile()):
        out[(v, d - 1)] += 1
    for v, d in zip(dst.nodes, dst.degree_profile()):
        out[(v, d)] += 1
    if drop:
        out.subtract(drop)
        out = +out
    return out


# ---------------------------------------------------------------- graph maps


@dataclass(frozen=True)
class _End:
    s: Letter | None
    t: Letter | None
    has_f: bool
    broken: bool


def _graph_ends(ov) -> tuple[_End, _End]:
    """Classify both ends of the overlap.

    Without an endpoint map the two outer letters meet at the eliminated node:
    their composite survives as a merged letter, and when it is zero (or one
    of the letters is missing) the walk breaks open there.
    """
    X, Y = ov.source_cover, ov.target_cover
    A = ov.source.algebra
    r = ov.length
    out = []
    for xs, ys, xn, yn, into_inv in ((ov.x0 - 1, ov.y0 - 1, ov.x0 - 1, ov.y0 - 1, False),
                                      (ov.x0 + r, ov.y0 + r, ov.x0 + r + 1, ov.y0 + r + 1, True)):
        s = X.letter(xs) if X.has_node(xn) else None
        t = Y.letter(ys) if Y.has_node(yn) else None
        has_f = (s is not None and s.inverse == into_inv) or (t is not None and t.inverse != into_inv)
        broken = not has_f and (s is None or t is None or A.compose(t.path, s.path) is None)
        out.append(_End(s, t, has_f, broken))
    return out[0], out[1]


def _is_long(ov) -> bool:
    X, Y = ov.source_cover, ov.target_cover
    return (X.periodic and ov.length >= X.period) or (Y.periodic and ov.length >= Y.period)


@dataclass
class _Arm:
    """A stretch ``a..b`` of a cover outside the overlap; ports sit at eliminated nodes."""

    tag: str
    a: int
    b: int
    port_a: str | None = None
    port_b: str | None = None


def _graph_arms(ov) -> list[_Arm]:
    X, Y = ov.source_cover, ov.target_cover
    x0, y0, r = ov.x0, ov.y0, ov.length
    arms = []
    for tag, cov, z0 in (("X", X, x0), ("Y", Y, y0)):
        if cov.periodic:
            arms.append(_Arm(tag, z0 + r, z0 + cov.period, tag + "R", tag + "L"))
        else:
            arms.append(_Arm(tag, z0 + r, cov.period, tag + "R", None))
            arms.append(_Arm(tag, 0, z0, None, tag + "L"))
    return arms


def _graph_links(ov, ends) -> dict[str, str]:
    """Which ports are joined once the overlap has been eliminated.

    An end with an endpoint map joins its two ports.  Otherwise the outer
    letters at the eliminated nodes are joined when their composite is
    nonzero; with a trivial overlap both ends share one eliminated pair, so a
    source letter at one end may pair with a target letter at the other.
    """
    A = ov.source.algebra
    links: dict[str, str] = {}
    left, right = ends
    dangling = []
    for side, e in (("L", left), ("R", right)):
        if e.has_f:
            links["X" + side], links["Y" + side] = "Y" + side, "X" + side
        else:
            dangling.append((side, e))
    pairs = [(p, q) for p in dangling for q in dangling if ov.length == 0 or p[0] == q[0]]
    # a letter pairs with at most one partner by gentleness; same-end pairs first
    pairs.sort(key=lambda pq: pq[0][0] != pq[1][0])
    for (sx, ex), (sy, ey) in pairs:
        if ex.s is None or ey.t is None or "X" + sx in links or "Y" + sy in links:
            continue
        if A.compose(ey.t.path, ex.s.path) is not None:
            links["X" + sx], links["Y" + sy] = "Y" + sy, "X" + sx
    return links


def _arm_walks(ov, A, arms: list[_Arm], links: dict[str, str]):
    """Trace arms through the links: one closed walk, or a list of linear walks.

    Also reports whether the target was traversed forwards in the closed case.
    """
    X, Y = ov.source_cover, ov.target_cover
    covers = {"X": (X, 1), "Y": (Y, 0)}
    live = []
    for arm in arms:
        a, b = arm.a, arm.b
        if arm.port_a and arm.port_a not in links:
            a += 1
        if arm.port_b and arm.port_b not in links:
            b -= 1
        if a <= b:
            live.append(_Arm(arm.tag, a, b, arm.port_a if arm.port_a in links else None,
                             arm.port_b if arm.port_b in links else None))
    by_port = {}
    for k, arm in enumerate(live):
        if arm.port_a:
            by_port[arm.port_a] = (k, "a")
        if arm.port_b:
            by_port[arm.port_b] = (k, "b")

    def trace(k: int, side: str, w: Walk, used: set):
        y_dir = None
        while True:
            used.add(k)
            arm = live[k]
            cov, low = covers[arm.tag]
            start, stop = (arm.a, arm.b) if side == "a" else (arm.b, arm.a)
            w.add_cover(cov, start, stop, low)
            if arm.tag == "Y" and start != stop:
                y_dir = stop > start
            port = arm.port_b if side == "a" else arm.port_a
            if port is None:
                return False, y_dir
            k, side = by_port[links[port]]
            if k in used:
                return True, y_dir

    walks, used = [], set()
    for k, arm in enumerate(live):
        if k in used:
            continue
        for side, port in (("a", arm.port_a), ("b", arm.port_b)):
            if port is None:
                w = Walk(A)
                trace(k, side, w, used)
                walks.append(w)
                break
    if len(used) < len(live):
        # everything left is glued into cycles; a graph map yields at most one
        k = next(i for i in range(len(live)) if i not in used)
        w = Walk(A)
        _, forward = trace(k, "a", w, used)
        return w, forward, walks
    return None, None, walks


def _strings(walks) -> list:
    return [StringSummand.of(linear_word(w)) for w in walks]


def _graph_long_walk(ov, A):
    X, Y = ov.source_cover, ov.target_cover
    w = Walk(A)
    x0, y0 = ov.x0, ov.y0
    if X.periodic and Y.periodic:
        w.add_cover(X, x0, x0 + X.period, 1).add_cover(Y, y0 + Y.period, y0)
        return w, True
    if X.periodic:
        w.add_cover(Y, 0, y0).add_cover(X, x0 + X.period, x0, 1).add_cover(Y, y0, Y.period)
        return w, False
    w.add_cover(X, 0, x0, 1).add_cover(Y, y0 + Y.period, y0).add_cover(X, x0, X.period, 1)
    return w, False


def _graph_cone(f: GraphMapDescriptor, provenance: str) -> ConeDecomposition:
    ov = f.overlap
    A = ov.source.algebra
    X, Y = ov.source_cover, ov.target_cover
    if graph_components(ov) is None:
        raise CaseNotApplicable("overlap ends do not close up into a graph map")
    if ov.infinite:
        return ConeDecomposition([], "graph map with infinite overlap: isomorphism, zero cone")
    ends = _graph_ends(ov)
    long = _is_long(ov)
    if long:
        if X.periodic and Y.periodic and any(e.broken for e in ends):
            raise CaseNotApplicable("overlap longer than a band with an open end")
        w, cyclic = _graph_long_walk(ov, A)
        provenance += ", overlap longer than a band"
        if not cyclic:
            return ConeDecomposition([StringSummand.of(linear_word(w))], provenance)
        forward = False
        strings = []
    else:
        links = _graph_links(ov, ends)
        w, forward, walks = _arm_walks(ov, A, _graph_arms(ov), links)
        strings = _strings(walks)
        if len(links) < 4:
            provenance += ", open end"
        if forward:
            provenance += ", crossed ends"
        if w is None:
            return ConeDecomposition(strings, provenance)
    W = cyclic_word(w)
    if W is None:
        return ConeDecomposition(strings, provenance + ", complete cancellation")
    mx, my = cover_monodromy(X), cover_monodromy(Y)
    if forward:
        s, sign = mx * my, "crossed: +"
    elif long or ov.length % 2:
        s, sign = -(mx / my), "odd or long overlap: -"
    else:
        s, sign = mx / my, "even overlap: +"
    out = split_band_power(W, s, provenance=f"{provenance} ({sign})")
    out.summands = strings + out.summands
    return out


def cone_graph_band_to_string(f: GraphMapDescriptor) -> ConeDecomposition:
    if not (f.source.is_band and not f.target.is_band):
        raise CaseNotApplicable("expects a band source and a string target")
    return _graph_cone(f, "graph map band to string")


def cone_graph_string_to_band(f: GraphMapDescriptor) -> ConeDecomposition:
    if not (not f.source.is_band and f.target.is_band):
        raise CaseNotApplicable("expects a string source and a band target")
    return _graph_cone(f, "graph map string to band")


def cone_graph_band_to_band(f: GraphMapDescriptor, lam=None, mu=None) -> ConeDecomposition:
    """Scalars are read from the words; ``lam``/``mu`` override them when given."""
    if not (f.source.is_band and f.target.is_band):
        raise CaseNotApplicable("expects two bands")
    _check_dims(f.source, f.target)
    f = _with_scalars(f, lam, mu)
    return _graph_cone(f, "graph map band to band")


def _with_scalars(f, lam, mu):
    if lam is None and mu is None:
        return f
    src = f.source.with_scalar(lam) if lam is not None else f.source
    dst = f.target.with_scalar(mu) if mu is not None else f.target
    if isinstance(f, (GraphMapDescriptor, QuasiGraphMapDescriptor)):
        return replace(f, overlap=replace(f.overlap, source=src, target=dst))
    return replace(f, source=src, target=dst)


def _check_dims(*words):
    for w in words:
        if w.is_band and w.dim != 1:
            raise CaseNotApplicable("cone formulas cover dimension-1 band complexes")


# ---------------------------------------------------------------- quasi-graph maps


def cone_quasi(phi: QuasiGraphMapDescriptor, representative=None) -> ConeDecomposition:
    """The decomposition does not depend on the representative; it is accepted for symmetry."""
    ov = phi.overlap
    A = ov.source.algebra
    X, Y = ov.source_cover, ov.target_cover
    _check_dims(ov.source, ov.target)
    if ov.infinite:
        # the AR triangle starting and ending at B_{sigma, lambda}
        b = ov.source
        return ConeDecomposition(
            [BandSummand.of(replace(b, dim=2, degree_anchor=b.degree_anchor - 1))],
            "quasi-graph map with infinite overlap: AR middle term")
    x0, y0 = ov.x0, ov.y0
    w = Walk(A)
    if X.periodic and Y.periodic:
        # the target may be glued in either direction; only one keeps every node
        expected = _expected_nodes(ov.source, ov.target)
        mx, my = cover_monodromy(X), cover_monodromy(Y)
        for forward in (True, False):
            w = Walk(A)
            if forward:
                w.add_cover(Y, y0, y0 + Y.period)
            else:
                w.add_cover(Y, y0 + Y.period, y0)
            w.add_cover(X, x0, x0 + X.period, 1)
            try:
                W = cyclic_word(w)
            except ValueError:
                continue
            if W is None or _node_multiset([W]) != expected:
                continue
            s = -(mx * my) if forward else -(mx / my)
            tag = "" if forward else ", target glued backwards"
            return split_band_power(W, s, provenance="quasi-graph map band to band" + tag)
        raise CaseNotApplicable("no gluing of the quasi-graph cone word keeps every node")
    if not X.periodic and not Y.periodic:
        return oracle_only(phi, "quasi-graph map between strings")
    expected = _expected_nodes(ov.source, ov.target)
    for forward in (True, False):
        # the band is spliced into the string at the overlap, in either direction
        w = Walk(A)
        if X.periodic:
            a, b = (x0, x0 + X.period) if forward else (x0 + X.period, x0)
            w.add_cover(Y, 0, y0).add_cover(X, a, b, 1).add_cover(Y, y0, Y.period)
            prov = "quasi-graph map band to string"
        else:
            a, b = (y0, y0 + Y.period) if forward else (y0 + Y.period, y0)
            w.add_cover(X, 0, x0, 1).add_cover(Y, a, b).add_cover(X, x0, X.period, 1)
            prov = "quasi-graph map string to band"
        try:
            c = linear_word(w)
        except ValueError:
            continue
        if _node_multiset([c]) == expected:
            tag = "" if forward else ", band spliced backwards"
            return ConeDecomposition([StringSummand.of(c)], prov + tag)
    raise CaseNotApplicable("no splicing of the quasi-graph cone word keeps every node")


# ---------------------------------------------------------------- single and double maps


def _single_walk(m: SingleMapDescriptor, rev: bool):
    A = m.source.algebra
    X, Y = Cover(m.source), Cover(m.target, rev)
    y = (-m.y) % Y.period if rev else m.y
    w = Walk(A)
    w.add_cover(X, m.x, m.x + X.period, 1)
    w.add_letter(Letter(m.f, False), X.degree(m.x) - 1)
    w.add_cover(Y, y + Y.period, y)
    w.add_letter(Letter(m.f, True), Y.degree(y))
    return w, X, Y


def cone_single_band_band(m: SingleMapDescriptor, lam=None, mu=None) -> ConeDecomposition:
    if not (m.source.is_band and m.target.is_band):
        raise CaseNotApplicable("expects two bands")
    _check_dims(m.source, m.target)
    m = _with_scalars(m, lam, mu)
    expected = _expected_nodes(m.source, m.target)
    for rev in (False, True):
        w, X, Y = _single_walk(m, rev)
        try:
            W = cyclic_word(w)
        except ValueError:
            continue
        if W is not None and _node_multiset([W]) == expected:
            s = -(cover_monodromy(X) / cover_monodromy(Y))
            return split_band_power(W, s, provenance="single map band to band")
    raise CaseNotApplicable("no orientation of the target closes the single-map word")


def cone_double_band_band(m: DoubleMapDescriptor, lam=None, mu=None) -> ConeDecomposition:
    if not (m.source.is_band and m.target.is_band):
        raise CaseNotApplicable("expects two bands")
    _check_dims(m.source, m.target)
    m = _with_scalars(m, lam, mu)
    A = m.source.algebra
    X, Y = Cover(m.source), Cover(m.target, m.reversed)
    w = Walk(A)
    w.add_cover(X, m.x + 1, m.x + X.period, 1)
    w.add_letter(Letter(m.f_left, False), X.degree(m.x) - 1)
    w.add_cover(Y, m.y + Y.period, m.y + 1)
    w.add_letter(Letter(m.f_right, True), Y.degree(m.y + 1))
    W = cyclic_word(w)
    if W is None or _node_multiset([W]) != _expected_nodes(m.source, m.target):
        raise CaseNotApplicable("double-map word does not close up")
    s = -(cover_monodromy(X) / cover_monodromy(Y))
    return split_band_power(W, s, provenance="double map band to band")


# ---------------------------------------------------------------- dispatch


def oracle_only(desc, provenance: str, F=None) -> ConeDecomposition:
    """Minimal explicit cone without named summands."""
    from .morphisms import realize
    from .oracle import mapping_cone, reduce_min
    from .complexes import field_for

    F = F or field_for(desc.source, desc.target)
    r = realize(desc, F)
    return ConeDecomposition([], provenance + " (oracle only)", True, reduce_min(mapping_cone(r.map)))


def compute_cone(desc, F=None) -> ConeDecomposition:
    src, dst = desc.source, desc.target
    if not src.is_band and not dst.is_band:
        return oracle_only(desc, f"{desc.kind} map between strings", F)
    if isinstance(desc, GraphMapDescriptor):
        if src.is_band and dst.is_band:
            return cone_graph_band_to_band(desc)
        if src.is_band:
            return cone_graph_band_to_string(desc)
        return cone_graph_string_to_band(desc)
    if isinstance(desc, QuasiGraphMapDescriptor):
        return cone_quasi(desc)
    if not (src.is_band and dst.is_band):
        return oracle_only(desc, f"{desc.kind} map involving a string", F)
    if isinstance(desc, SingleMapDescriptor):
        return cone_single_band_band(desc)
    if isinstance(desc, DoubleMapDescriptor):
        return cone_double_band_band(desc)
    raise CaseNotApplicable(f"unknown descriptor {desc!r}")
