"""Word surgery for mapping cones.

A cone word is assembled from pieces of the source and target words (read on
their covers), reduced, and cut back into homotopy letters.  Degrees are
tracked through the surgery: nodes coming from the source are lowered by one
(the cone contains the shifted source), target nodes keep their degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import GentleAlgebra, Path
from .walks import (
    Cover,
    HomotopyBand,
    HomotopyString,
    Letter,
    NotABand,
    _cut,
    letters_from_steps,
)


@dataclass
class Walk:
    """Arrow steps with the degree of every original node position (``None`` inside letters)."""

    algebra: GentleAlgebra
    steps: list = field(default_factory=list)
    node_deg: list = field(default_factory=lambda: [None])
    start_vertex: str | None = None
    _conflict: dict = field(default_factory=dict)

    def _push_letter(self, x: Letter, deg_left: int, deg_right: int) -> None:
        if self.start_vertex is None:
            self.start_vertex = x.left
        if self.node_deg[-1] is None and not self._conflict.get(len(self.node_deg) - 1):
            self.node_deg[-1] = deg_left
        elif self.node_deg[-1] is not None and self.node_deg[-1] != deg_left:
            # the two pieces disagree here; such a node never survives the reduction
            self._conflict[len(self.node_deg) - 1] = True
            self.node_deg[-1] = None
        for k, st in enumerate(x.steps):
            self.steps.append(st)
            self.node_deg.append(None)
        self.node_deg[-1] = deg_right

    def add_cover(self, cover: Cover, a: int, b: int, lower: int = 0) -> "Walk":
        """Cover letters from node ``a`` to node ``b`` (backwards when ``b < a``)."""
        if b >= a:
            for k in range(a, b):
                x = cover.letter(k)
                self._push_letter(x, cover.degree(k) - lower, cover.degree(k + 1) - lower)
        else:
            for k in range(a - 1, b - 1, -1):
                x = cover.letter(k).inverted()
                self._push_letter(x, cover.degree(k + 1) - lower, cover.degree(k) - lower)
        if self.start_vertex is None:
            self.start_vertex = cover.vertex(a)
            self.node_deg[0] = cover.degree(a) - lower
        return self

    def add_letter(self, x: Letter, deg: int) -> "Walk":
        """A connecting letter whose left node sits in degree ``deg``."""
        self._push_letter(x, deg, deg + x.step)
        return self


def _reduce_indices(steps, cyclic: bool) -> list[int]:
    stack: list[int] = []
    for k, st in enumerate(steps):
        if stack:
            p = steps[stack[-1]]
            if p[0] == st[0] and p[1] == -st[1]:
                stack.pop()
                continue
        stack.append(k)
    if cyclic:
        i, j = 0, len(stack)
        while j - i >= 2:
            p, q = steps[stack[i]], steps[stack[j - 1]]
            if p[0] == q[0] and p[1] == -q[1]:
                i += 1
                j -= 1
            else:
                break
        stack = stack[i:j]
    return stack


def _boundaries(A: GentleAlgebra, steps, cyclic: bool) -> list[int]:
    """Positions ``k`` (before result step ``k``) where a new letter starts."""
    n = len(steps)
    out = []
    for k in range(n):
        if k == 0 and not cyclic:
            out.append(0)
        elif _cut(A, steps[k - 1], steps[k]):
            out.append(k)
    return out


def _glue_degree(w: Walk, prev: int | None, cur: int | None) -> int | None:
    """Degree at a result node between original steps ``prev`` and ``cur``.

    At an untouched node this is the recorded degree.  Where a stretch was
    cancelled between them, the surviving node is the first recorded node
    after the cancellation, or else the last one before it.
    """
    if cur is None:
        return w.node_deg[prev + 1]
    if prev is None:
        return w.node_deg[cur]
    if cur == prev + 1:
        return w.node_deg[cur]
    d = w.node_deg[cur]
    return d if d is not None else w.node_deg[prev + 1]


def _anchor(w: Walk, letters, bounds, prevs, curs) -> int:
    """Degree of the first node, read off an untouched node when there is one."""
    order = sorted(range(len(bounds)), key=lambda t: (prevs[t] is None or curs[t] is None
                                                        or curs[t] != prevs[t] + 1))
    for t in order:
        d = _glue_degree(w, prevs[t], curs[t])
        if d is not None:
            return d - sum(x.step for x in letters[:t])
    raise NotABand("cannot recover degrees of the cone word")


def linear_word(w: Walk) -> HomotopyString:
    A = w.algebra
    idx = _reduce_indices(w.steps, False)
    steps = [w.steps[i] for i in idx]
    if not steps:
        deg = w.node_deg[0] if not w.steps else _trivial_degree(w)
        return HomotopyString(A, (), deg, w.start_vertex)
    letters = letters_from_steps(A, steps)
    bounds = _boundaries(A, steps, False) + [len(steps)]
    prevs = [idx[k - 1] if k > 0 else None for k in bounds]
    curs = [idx[k] if k < len(steps) else None for k in bounds]
    # the two ends of a string are never glued: use the recorded end degrees
    if idx[0] == 0 and w.node_deg[0] is not None:
        return HomotopyString(A, tuple(letters), w.node_deg[0])
    return HomotopyString(A, tuple(letters), _anchor(w, letters, bounds, prevs, curs))


def _trivial_degree(w: Walk) -> int:
    known = [d for d in w.node_deg if d is not None]
    return known[0]


def cyclic_word(w: Walk) -> HomotopyBand | None:
    """Band word of a closed walk (scalar 1), or ``None`` if it cancels completely."""
    A = w.algebra
    idx = _reduce_indices(w.steps, True)
    if not idx:
        return None
    steps = [w.steps[i] for i in idx]
    n = len(steps)
    bounds = _boundaries(A, steps, True)
    if not bounds:
        raise NotABand("closed walk has no letter boundary")
    start = bounds[0]
    rot = steps[start:] + steps[:start]
    ridx = idx[start:] + idx[:start]
    letters = letters_from_steps(A, rot)
    rb = sorted((b - start) % n for b in bounds)
    total = len(w.steps)
    deg = list(w.node_deg)
    if deg[0] is None:
        deg[0] = deg[total]
    if deg[total] is None:
        deg[total] = deg[0]
    ww = Walk(A, w.steps, deg, w.start_vertex)
    prevs, curs = [], []
    for k in rb:
        cur = ridx[k]
        prev = ridx[k - 1] if k > 0 else ridx[-1]
        if prev > cur or (k == 0 and prev == total - 1 and cur == 0):
            # wrapping around the closed walk: view cur as lying one lap later
            prev = prev - total if prev >= cur else prev
        prevs.append(prev)
        curs.append(cur)
    return HomotopyBand(A, tuple(letters), degree_anchor=_anchor_cyclic(ww, letters, prevs, curs, total))


def _anchor_cyclic(w: Walk, letters, prevs, curs, total) -> int:
    def glue(prev, cur):
        if cur == prev + 1:
            return w.node_deg[cur]
        d = w.node_deg[cur]
        return d if d is not None else w.node_deg[(prev + 1) % total if prev + 1 != total else total]

    order = sorted(range(len(prevs)), key=lambda t: curs[t] != prevs[t] + 1)
    for t in order:
        d = glue(prevs[t], curs[t])
        if d is not None:
            return d - sum(x.step for x in letters[:t])
    raise NotABand("cannot recover degrees of the cone word")
