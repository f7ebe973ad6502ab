"""Homotopy letters, strings and bands.

Words are read left to right along the unfolded diagram.  A direct letter
``p`` points rightward (its left node sits at the target of ``p``) and raises
the degree by one; an inverse letter ``~p`` points leftward and lowers it.

Internally a word is also a sequence of arrow steps ``(arrow, sign)``: a
direct letter ``a1*...*ar`` walks ``(a1,-1) ... (ar,-1)`` and an inverse
letter walks ``(ar,+1) ... (a1,+1)``.  A homotopy string is exactly a reduced
step walk, cut into letters at direction changes and at relations.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import GentleAlgebra, Path
from .scalars import ONE, CycloScalar, parse_scalar


class WordError(ValueError):
    pass


class UnknownArrow(WordError):
    pass


class IllegalJunction(WordError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotABand(WordError):
    pass


Step = tuple[str, int]


@dataclass(frozen=True)
class Letter:
    path: Path
    inverse: bool = False

    @property
    def left(self) -> str:
        return self.path.start if self.inverse else self.path.end

    @property
    def right(self) -> str:
        return self.path.end if self.inverse else self.path.start

    @property
    def step(self) -> int:
        return -1 if self.inverse else 1

    @property
    def steps(self) -> tuple[Step, ...]:
        if self.inverse:
            return tuple((a, 1) for a in reversed(self.path.arrows))
        return tuple((a, -1) for a in self.path.arrows)

    def inverted(self) -> "Letter":
        return Letter(self.path, not self.inverse)

    def __str__(self) -> str:
        return ("~" if self.inverse else "") + str(self.path)


# ---------------------------------------------------------------- step calculus


def steps_of(letters: Iterable[Letter]) -> list[Step]:
    out: list[Step] = []
    for x in letters:
        out.extend(x.steps)
    return out


def invert_steps(steps: Sequence[Step]) -> list[Step]:
    return [(a, -s) for a, s in reversed(steps)]


def step_vertices(A: GentleAlgebra, st: Step) -> tuple[str, str]:
    """(left, right) vertices of one arrow step."""
    arr = A.arrow[st[0]]
    return (arr.target, arr.source) if st[1] < 0 else (arr.source, arr.target)


def free_reduce(steps: Sequence[Step]) -> list[Step]:
    out: list[Step] = []
    for st in steps:
        if out and out[-1][0] == st[0] and out[-1][1] == -st[1]:
            out.pop()
        else:
            out.append(st)
    return out


def cyclic_reduce(steps: Sequence[Step]) -> list[Step]:
    out = free_reduce(steps)
    i, j = 0, len(out)
    while j - i >= 2 and out[i][0] == out[j - 1][0] and out[i][1] == -out[j - 1][1]:
        i += 1
        j -= 1
    return out[i:j]


def _cut(A: GentleAlgebra, x: Step, y: Step) -> bool:
    """Whether consecutive steps ``x y`` lie in different letters."""
    if x[1] != y[1]:
        return True
    if x[1] < 0:
        return (x[0], y[0]) in A.relations
    return (y[0], x[0]) in A.relations


def _check_walk(A: GentleAlgebra, steps: Sequence[Step], cyclic: bool) -> int | None:
    """Index of the first bad junction (vertex mismatch or backtrack), else None."""
    n = len(steps)
    pairs = range(n if cyclic else n - 1)
    for i in pairs:
        x, y = steps[i], steps[(i + 1) % n]
        if step_vertices(A, x)[1] != step_vertices(A, y)[0]:
            return i
        if x[0] == y[0] and x[1] == -y[1]:
            return i
    return None


def _letters_from_run(A: GentleAlgebra, run: Sequence[Step]) -> Letter:
    arrows = tuple(a for a, _ in run)
    if run[0][1] < 0:
        return Letter(A.path(arrows), False)
    return Letter(A.path(tuple(reversed(arrows))), True)


def letters_from_steps(A: GentleAlgebra, steps: Sequence[Step]) -> list[Letter]:
    """Cut a reduced linear walk into homotopy letters."""
    out: list[Letter] = []
    run: list[Step] = []
    for st in steps:
        if run and _cut(A, run[-1], st):
            out.append(_letters_from_run(A, run))
            run = []
        run.append(st)
    if run:
        out.append(_letters_from_run(A, run))
    return out


def cyclic_letters_from_steps(A: GentleAlgebra, steps: Sequence[Step]) -> tuple[list[Letter], int]:
    """Cut a cyclically reduced walk into letters.

    Returns the letters and the step offset at which the first letter starts.
    """
    n = len(steps)
    start = next((i for i in range(n) if _cut(A, steps[i - 1], steps[i])), None)
    if start is None:
        raise NotABand("walk has no letter boundary")
    return letters_from_steps(A, list(steps[start:]) + list(steps[:start])), start


def junction_ok(A: GentleAlgebra, L: Letter, R: Letter) -> bool:
    if L.right != R.left:
        return False
    x, y = L.steps[-1], R.steps[0]
    return not (x[0] == y[0] and x[1] == -y[1]) and _cut(A, x, y)


# ---------------------------------------------------------------- words


def _degrees(anchor: int, letters: Sequence[Letter]) -> list[int]:
    out = [anchor]
    for x in letters:
        out.append(out[-1] + x.step)
    return out


@dataclass(frozen=True)
class HomotopyString:
    algebra: GentleAlgebra = field(repr=False, compare=False)
    letters: tuple[Letter, ...]
    degree_anchor: int = 0
    vertex: str | None = None  # only used by the trivial string

    def __post_init__(self):
        A = self.algebra
        for i, (L, R) in enumerate(zip(self.letters, self.letters[1:])):
            if not junction_ok(A, L, R):
                raise IllegalJunction(f"letters {L} and {R} do not form a homotopy string", i)
        for x in self.letters:
            if A.is_zero(x.path):
                raise IllegalJunction(f"letter {x} is zero in the algebra")
        if self.letters:
            object.__setattr__(self, "vertex", None)
        elif self.vertex is None:
            raise WordError("the trivial string needs a vertex")

    is_band = False

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    @property
    def nodes(self) -> list[str]:
        if not self.letters:
            return [self.vertex]
        return [self.letters[0].left] + [x.right for x in self.letters]

    def degree_profile(self) -> list[int]:
        return _degrees(self.degree_anchor, self.letters)

    def inverse(self) -> "HomotopyString":
        return HomotopyString(
            self.algebra,
            tuple(x.inverted() for x in reversed(self.letters)),
            self.degree_profile()[-1],
            self.vertex,
        )

    def shifted(self, s: int) -> "HomotopyString":
        """The word of the shifted complex: degrees lowered by ``s``."""
        return replace(self, degree_anchor=self.degree_anchor - s)

    def word(self) -> str:
        return " ".join(map(str, self.letters))

    def __str__(self) -> str:
        if not self.letters:
            return f"e{self.vertex}"
        return self.word()

    def spec(self) -> str:
        body = self.word() if self.letters else f"e{self.vertex}"
        return f"string: {body} ; deg={self.degree_anchor}"


@dataclass(frozen=True)
class HomotopyBand:
    algebra: GentleAlgebra = field(repr=False, compare=False)
    letters: tuple[Letter, ...]
    scalar: CycloScalar = ONE
    scalar_slot: int | None = None
    degree_anchor: int = 0
    dim: int = 1

    is_band = True

    def __post_init__(self):
        A, ls = self.algebra, self.letters
        m = len(ls)
        if m < 2 or m % 2:
            raise NotABand(f"band length {m} must be even and at least 2")
        for i in range(m):
            if not junction_ok(A, ls[i], ls[(i + 1) % m]):
                raise IllegalJunction(f"letters {ls[i]} and {ls[(i + 1) % m]} do not join", i)
            if A.is_zero(ls[i].path):
                raise IllegalJunction(f"letter {ls[i]} is zero in the algebra", i)
        if sum(x.step for x in ls) != 0:
            raise NotABand("degree does not return to its start around the cycle")
        if self.scalar.is_zero:
            raise NotABand("band scalar must be nonzero")
        slot = self.scalar_slot
        if slot is None:
            slot = next(i for i, x in enumerate(ls) if not x.inverse)
            object.__setattr__(self, "scalar_slot", slot)
        if ls[slot].inverse:
            raise NotABand("the scalar must sit on a direct letter")
        if self.dim < 1:
            raise NotABand("band dimension must be positive")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def nodes(self) -> list[str]:
        return [x.left for x in self.letters]

    def degree_profile(self) -> list[int]:
        return _degrees(self.degree_anchor, self.letters)

    def rotate(self, k: int) -> "HomotopyBand":
        """The same band read from node ``k``."""
        m = len(self.letters)
        k %= m
        return HomotopyBand(
            self.algebra,
            self.letters[k:] + self.letters[:k],
            self.scalar,
            (self.scalar_slot - k) % m,
            self.degree_profile()[k],
            self.dim,
        )

    def inverse(self) -> "HomotopyBand":
        """The band read backwards; the scalar inverts."""
        letters = tuple(x.inverted() for x in reversed(self.letters))
        return HomotopyBand(self.algebra, letters, self.scalar.inverse(), None, self.degree_anchor, self.dim)

    def with_scalar(self, s: CycloScalar) -> "HomotopyBand":
        return replace(self, scalar=s)

    def shifted(self, s: int) -> "HomotopyBand":
        return replace(self, degree_anchor=self.degree_anchor - s)

    def power(self, k: int) -> "HomotopyBand":
        return HomotopyBand(self.algebra, self.letters * k, self.scalar, self.scalar_slot, self.degree_anchor, self.dim)

    def word(self) -> str:
        return " ".join(map(str, self.letters))

    def __str__(self) -> str:
        return f"({self.word()}, {self.scalar})"

    def spec(self) -> str:
        out = f"band: {self.word()} @ {self.scalar} ; deg={self.degree_anchor}"
        return out + (f" ; dim={self.dim}" if self.dim != 1 else "")


Word = HomotopyString | HomotopyBand


# ---------------------------------------------------------------- parsing


_TOKEN = re.compile(r"^(~?)([A-Za-z_][\w]*(?:\*[A-Za-z_][\w]*)*)$")


def _parse_tokens(text: str, A: GentleAlgebra) -> list[Letter]:
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"cannot read letter {tok!r}")
        names = m.group(2).split("*")
        for a in names:
            if a not in A.arrow:
                raise UnknownArrow(f"unknown arrow {a!r}")
        try:
            p = A.path(names)
        except ValueError as exc:
            raise IllegalJunction(f"letter {tok!r} is not a path: {exc}", len(letters)) from None
        if A.is_zero(p):
            raise IllegalJunction(f"letter {tok!r} is zero in the algebra", len(letters))
        letters.append(Letter(p, bool(m.group(1))))
    return letters


def _token_steps(A: GentleAlgebra, letters: list[Letter], cyclic: bool) -> list[Step]:
    for i in range(len(letters) if cyclic else len(letters) - 1):
        L, R = letters[i], letters[(i + 1) % len(letters)]
        if L.right != R.left:
            raise IllegalJunction(f"letters {L} and {R} do not meet at a vertex (junction {i})", i)
        if L.steps[-1][0] == R.steps[0][0] and L.steps[-1][1] == -R.steps[0][1]:
            raise IllegalJunction(f"letters {L} and {R} cancel (junction {i})", i)
    return steps_of(letters)


def parse_word(text: str, A: GentleAlgebra, band: bool | None = None, scalar=None,
               degree_anchor: int = 0, vertex: str | None = None, dim: int = 1) -> Word:
    """Parse ``d ~c ~a b`` (string) or ``d ~c ~a b @ -1`` (band).

    Adjacent same-direction tokens whose composite is nonzero are merged into
    one letter, so ``~b ~d`` reads as the single inverse letter ``~d*b``.
    """
    if "@" in text:
        text, stext = text.split("@", 1)
        scalar = parse_scalar(stext)
        band = True if band is None else band
        if not band:
            raise WordError("a scalar was given for a string")
    band = bool(band)
    letters = _parse_tokens(text, A)
    if band:
        if not letters:
            raise NotABand("empty word is not a band")
        if letters[0].left != letters[-1].right:
            raise NotABand("word does not close up")
        steps = _token_steps(A, letters, True)
        if not _cut(A, steps[-1], steps[0]):
            raise NotABand("band word must start at a letter boundary")
        merged = letters_from_steps(A, steps)
        s = scalar if scalar is not None else ONE
        if not isinstance(s, CycloScalar):
            s = parse_scalar(str(s))
        return HomotopyBand(A, tuple(merged), s, None, degree_anchor, dim)
    if not letters:
        if vertex is None:
            raise WordError("the trivial string needs a vertex (write e<v>)")
        return HomotopyString(A, (), degree_anchor, vertex)
    steps = _token_steps(A, letters, False)
    return HomotopyString(A, tuple(letters_from_steps(A, steps)), degree_anchor)


def parse_word_spec(spec: str, A: GentleAlgebra) -> Word:
    """``string: <word> [; deg=N]`` or ``band: <word> @ <scalar> [; deg=N] [; dim=N]``.

    A trivial string is written ``string: e<vertex>``.
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        kind, rest = ("band" if "@" in spec else "string"), spec
    kind = kind.strip().lower()
    if kind not in ("string", "band"):
        raise WordError(f"unknown word kind {kind!r}")
    parts = rest.split(";")
    body, opts = parts[0], {}
    for p in parts[1:]:
        if p.strip():
            k, _, v = p.partition("=")
            opts[k.strip()] = int(v)
    deg, dim = opts.pop("deg", 0), opts.pop("dim", 1)
    if opts:
        raise WordError(f"unknown options {sorted(opts)}")
    if kind == "string":
        toks = body.split()
        if len(toks) == 1 and re.fullmatch(r"e\S+", toks[0]) and toks[0][1:] in A.vertices and toks[0] not in A.arrow:
            return HomotopyString(A, (), deg, toks[0][1:])
        return parse_word(body, A, band=False, degree_anchor=deg)
    if "@" not in body:
        body += " @ 1"
    return parse_word(body, A, band=True, degree_anchor=deg, dim=dim)


def degree_profile(w: Word) -> list[int]:
    return w.degree_profile()


# ---------------------------------------------------------------- bands up to rotation


def primitive_root(letters: Sequence[Letter]) -> tuple[tuple[Letter, ...], int]:
    letters = tuple(letters)
    m = len(letters)
    for p in range(1, m + 1):
        if m % p == 0 and letters[p:] + letters[:p] == letters:
            return letters[:p], m // p
    return letters, 1


def band_primitive_root(b: HomotopyBand) -> tuple[HomotopyBand, int]:
    """(theta, k) with theta primitive; theta carries scalar 1 and b's anchor."""
    theta, k = primitive_root(b.letters)
    if k == 1:
        return b.with_scalar(ONE), 1
    return HomotopyBand(b.algebra, theta, ONE, None, b.degree_anchor), k


def _key(letters: Sequence[Letter]) -> tuple[str, ...]:
    return tuple(str(x) for x in letters)


def canonical_band(b: HomotopyBand) -> HomotopyBand:
    """Least rotation of ``b`` or its inverse; scalar moved to the first direct letter."""
    best = None
    for cand in (b, b.inverse()):
        for k in range(len(cand)):
            r = cand.rotate(k)
            key = _key(r.letters)
            if best is None or key < best[0]:
                best = (key, r)
    r = best[1]
    return replace(r, scalar_slot=next(i for i, x in enumerate(r.letters) if not x.inverse))


def same_band_word(x: HomotopyBand, y: HomotopyBand) -> bool:
    return _key(canonical_band(x.with_scalar(ONE)).letters) == _key(canonical_band(y.with_scalar(ONE)).letters)


# ---------------------------------------------------------------- covers and overlaps


@dataclass(frozen=True)
class Cover:
    """Unfolded diagram of a word as a line of nodes.

    Strings cover nodes ``0..n``; bands repeat in both directions.  With
    ``reverse`` set the word is read backwards, so node ``k`` is node ``-k``
    (``n - k`` for strings) of the word.
    """

    word: Word
    reverse: bool = False

    @property
    def periodic(self) -> bool:
        return self.word.is_band

    @property
    def period(self) -> int:
        return len(self.word.letters)

    def has_node(self, k: int) -> bool:
        return self.periodic or 0 <= k <= len(self.word.letters)

    def node(self, k: int) -> int:
        """Index of the node of the word (the complex slot group) for cover node ``k``."""
        w = self.word
        n = len(w.letters)
        if w.is_band:
            return (-k if self.reverse else k) % n
        return n - k if self.reverse else k

    def letter_index(self, k: int) -> int | None:
        """Word letter between cover nodes ``k`` and ``k+1``."""
        n = len(self.word.letters)
        if self.periodic:
            return (-k - 1 if self.reverse else k) % n
        i = n - 1 - k if self.reverse else k
        return i if 0 <= i < n else None

    def letter(self, k: int) -> Letter | None:
        i = self.letter_index(k)
        if i is None:
            return None
        x = self.word.letters[i]
        return x.inverted() if self.reverse else x

    def coeff(self, k: int) -> CycloScalar:
        w = self.word
        i = self.letter_index(k)
        if w.is_band and i == w.scalar_slot:
            return w.scalar
        return ONE

    def degree(self, k: int) -> int:
        return self.word.degree_profile()[self.node(k)]

    def vertex(self, k: int) -> str:
        return self.word.nodes[self.node(k)]

    def node_range(self) -> range:
        if self.periodic:
            return range(self.period)
        return range(len(self.word.letters) + 1)


@dataclass(frozen=True)
class OverlapDecomposition:
    """A maximal common stretch of two unfolded words.

    Cover node ``x0 + i`` of the source matches cover node ``y0 + i`` of the
    target (read backwards when ``reversed``) for ``0 <= i <= length``.  For
    an infinite overlap ``length`` is one full period.
    """

    source: Word
    target: Word
    kind: str  # "graph" or "quasi"
    x0: int
    y0: int
    length: int
    reversed: bool = False
    infinite: bool = False

    @property
    def source_cover(self) -> Cover:
        return Cover(self.source)

    @property
    def target_cover(self) -> Cover:
        return Cover(self.target, self.reversed)

    @property
    def rho(self) -> tuple[Letter, ...]:
        X = self.source_cover
        return tuple(X.letter(self.x0 + i) for i in range(self.length))

    def rho_string(self) -> HomotopyString:
        X = self.source_cover
        return HomotopyString(self.source.algebra, self.rho, X.degree(self.x0), X.vertex(self.x0))

    def residues(self) -> dict[str, tuple[Letter, ...] | int]:
        """Residue words around rho.

        For a string side the residues are the letters left and right of rho
        (beta, alpha for the source; delta, gamma for the target).  For a band
        side they are the period starting at the right end of rho, reduced
        modulo the period (``ell`` counts whole periods inside rho).
        """
        out: dict[str, tuple[Letter, ...] | int] = {}
        for cover, start, (lname, rname, pname) in (
            (self.source_cover, self.x0, ("beta", "alpha", "ell")),
            (self.target_cover, self.y0, ("delta", "gamma", "m")),
        ):
            end = start + self.length
            if cover.periodic:
                p = cover.period
                out[pname] = self.length // p
                rest = (-self.length) % p
                out[rname] = tuple(cover.letter(end + i) for i in range(rest))
                out[lname] = ()
            else:
                out[lname] = tuple(cover.letter(i) for i in range(0, start))
                n = len(cover.word.letters)
                out[rname] = tuple(cover.letter(i) for i in range(end, n))
        return out

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "rho": " ".join(map(str, self.rho)),
            "length": self.length,
            "source_node": self.source_cover.node(self.x0),
            "target_node": self.target_cover.node(self.y0),
            "target_reversed": self.reversed,
            "infinite": self.infinite,
        }


def _overlap_bound(X: Cover, Y: Cover) -> int:
    sizes = [c.period for c in (X, Y) if c.periodic]
    if not sizes:
        return max(X.period, Y.period) + 1
    if len(sizes) == 1:
        return max(X.period, Y.period) + sizes[0] + 1
    return math.lcm(*sizes) + max(sizes)


def find_overlaps(source: Word, target: Word, kind: str = "graph") -> list[OverlapDecomposition]:
    """All maximal overlaps between the unfolded source and target words.

    Graph overlaps match degrees; quasi overlaps have source degree one above
    the target degree.  Both orientations of the target are searched; an
    overlap matching the whole period of two bands is reported once per
    alignment as infinite.
    """
    if kind not in ("graph", "quasi"):
        raise ValueError(kind)
    shift = 0 if kind == "graph" else 1
    found: list[OverlapDecomposition] = []
    seen = set()
    orientations = (False, True)
    for rev in orientations:
        X, Y = Cover(source), Cover(target, rev)
        bound = _overlap_bound(X, Y)
        for x0 in X.node_range():
            for y0 in Y.node_range():
                if X.vertex(x0) != Y.vertex(y0) or X.degree(x0) != Y.degree(y0) + shift:
                    continue
                # left maximal
                if X.has_node(x0 - 1) and Y.has_node(y0 - 1) and X.letter(x0 - 1) == Y.letter(y0 - 1):
                    continue
                r = 0
                while (X.has_node(x0 + r + 1) and Y.has_node(y0 + r + 1)
                       and X.letter(x0 + r) == Y.letter(y0 + r) and r <= bound):
                    r += 1
                if r > bound:
                    continue  # handled below as an infinite overlap
                ov = OverlapDecomposition(source, target, kind, x0, y0, r, rev, False)
                key = _overlap_key(ov)
                if key not in seen:
                    seen.add(key)
                    found.append(ov)
        if X.periodic and Y.periodic and X.period == Y.period:
            for y0 in Y.node_range():
                if all(X.letter(i) == Y.letter(y0 + i) for i in range(X.period)) \
                        and X.degree(0) == Y.degree(y0) + shift:
                    ov = OverlapDecomposition(source, target, kind, 0, y0, X.period, rev, True)
                    key = _overlap_key(ov)
                    if key not in seen:
                        seen.add(key)
                        found.append(ov)
    return found


def _overlap_key(ov: OverlapDecomposition):
    """Identify overlaps found in both orientations (only trivial ones can repeat)."""
    X, Y = ov.source_cover, ov.target_cover
    if ov.length == 0:
        return ("trivial", X.node(ov.x0), Y.node(ov.y0), ov.reversed)
    return (ov.infinite, ov.reversed, X.node(ov.x0), Y.node(ov.y0), ov.length)


def is_infinite_overlap(sigma: Word, tau: Word, rho: OverlapDecomposition | None = None) -> bool:
    if not (sigma.is_band and tau.is_band) or len(sigma) != len(tau):
        return False
    if rho is not None:
        return rho.infinite
    return same_band_word(sigma, tau)
