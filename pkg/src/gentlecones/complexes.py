"""Complexes of indecomposable projectives with path-valued differentials.

An entry from slot ``j`` of degree ``n`` to slot ``i`` of degree ``n+1`` is a
combination of paths running from the vertex of slot ``i`` to the vertex of
slot ``j``; composing ``A`` then ``B`` multiplies entries as ``A_jk * B_ij``
(first map on the left, see :func:`after`).
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .algebra import GentleAlgebra, Path
from .scalars import FieldCtx, required_order
from .walks import Cover, HomotopyBand, HomotopyString, Word

Elt = dict  # Path -> field element
Block = dict  # (i, j) -> Elt
Graded = dict  # degree -> Block


class NotAComplex(ValueError):
    pass


# ---------------------------------------------------------------- algebra elements


def elt_add(F, x: Elt, y: Elt, scale=None) -> Elt:
    out = dict(x)
    for p, c in y.items():
        if scale is not None:
            c = F.mul(c, scale)
        v = F.add(out.get(p, F.zero), c)
        if F.is_zero(v):
            out.pop(p, None)
        else:
            out[p] = v
    return out


def elt_scale(F, x: Elt, c) -> Elt:
    if F.is_zero(c):
        return {}
    return {p: F.mul(v, c) for p, v in x.items()}


def after(F, A: GentleAlgebra, b: Elt, a: Elt) -> Elt:
    """Entry of ``b o a`` where ``a`` is applied first."""
    out: Elt = {}
    for pa, ca in a.items():
        for pb, cb in b.items():
            if pb.end != pa.start:
                continue
            p = A.compose(pa, pb)
            if p is None:
                continue
            v = F.add(out.get(p, F.zero), F.mul(ca, cb))
            if F.is_zero(v):
                out.pop(p, None)
            else:
                out[p] = v
    return out


def unit_part(F, x: Elt):
    """Coefficient of the trivial path, or zero."""
    for p, c in x.items():
        if p.is_trivial:
            return c
    return F.zero


def elt_inverse(F, A: GentleAlgebra, x: Elt) -> Elt:
    """Inverse of ``c*e + r`` with ``r`` radical, by the nilpotent series."""
    c = unit_part(F, x)
    if F.is_zero(c):
        raise ZeroDivisionError("not a unit")
    ci = F.inv(c)
    v = next(p.start for p in x if p.is_trivial)
    e = {A.trivial(v): F.one}
    r = {p: F.neg(F.mul(k, ci)) for p, k in x.items() if not p.is_trivial}
    out, term = dict(e), dict(e)
    while True:
        term = after(F, A, term, r)
        if not term:
            break
        out = elt_add(F, out, term)
    return elt_scale(F, out, ci)


# ---------------------------------------------------------------- complexes


@dataclass
class ProjComplex:
    algebra: GentleAlgebra
    field: Any
    slots: dict[int, list[str]] = field(default_factory=dict)
    diff: Graded = field(default_factory=dict)
    labels: dict[int, list] = field(default_factory=dict)

    def add_slot(self, n: int, vertex: str, label=None) -> int:
        self.slots.setdefault(n, []).append(vertex)
        self.labels.setdefault(n, []).append(label)
        return len(self.slots[n]) - 1

    def add_entry(self, n: int, i: int, j: int, path: Path, coeff) -> None:
        F = self.field
        if F.is_zero(coeff):
            return
        assert path.start == self.slots[n + 1][i] and path.end == self.slots[n][j], "entry endpoints"
        blk = self.diff.setdefault(n, {})
        blk[(i, j)] = elt_add(F, blk.get((i, j), {}), {path: coeff})
        if not blk[(i, j)]:
            del blk[(i, j)]

    def d(self, n: int) -> Block:
        return self.diff.get(n, {})

    @property
    def degrees(self) -> list[int]:
        return sorted(n for n, s in self.slots.items() if s)

    @property
    def rank(self) -> int:
        return sum(len(s) for s in self.slots.values())

    def size(self, n: int) -> int:
        return len(self.slots.get(n, []))

    def check(self) -> None:
        """Raise unless d o d = 0."""
        for n in self.degrees:
            sq = compose_blocks(self.field, self.algebra, self.d(n), self.d(n + 1))
            if sq:
                raise NotAComplex(f"d^{n + 1} d^{n} != 0 at {sorted(sq)[:3]}")

    def is_minimal(self) -> bool:
        F = self.field
        return not any(not F.is_zero(unit_part(F, x)) for blk in self.diff.values() for x in blk.values())

    def copy(self) -> "ProjComplex":
        return ProjComplex(
            self.algebra, self.field,
            {n: list(s) for n, s in self.slots.items()},
            {n: {k: dict(v) for k, v in b.items()} for n, b in self.diff.items()},
            {n: list(s) for n, s in self.labels.items()},
        )

    def to_json(self) -> dict:
        F = self.field
        return {
            "degrees": self.degrees,
            "slots": {str(n): self.slots[n] for n in self.degrees},
            "entries": [
                {"degree": n, "row": i, "col": j,
                 "terms": [[str(p), F.fmt(c)] for p, c in sorted(x.items(), key=lambda t: str(t[0]))]}
                for n in sorted(self.diff) for (i, j), x in sorted(self.diff[n].items())
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def compose_blocks(F, A: GentleAlgebra, first: Block, second: Block) -> Block:
    """Block of ``second o first``."""
    out: Block = {}
    by_row: dict[int, list] = {}
    for (j, k), x in first.items():
        by_row.setdefault(j, []).append((k, x))
    for (i, j), y in second.items():
        for k, x in by_row.get(j, ()):
            z = after(F, A, y, x)
            if z:
                out[(i, k)] = elt_add(F, out.get((i, k), {}), z)
                if not out[(i, k)]:
                    del out[(i, k)]
    return out


def graded_dims(C: ProjComplex) -> dict[int, Counter]:
    return {n: Counter(C.slots[n]) for n in C.degrees}


def shift(C: ProjComplex, s: int) -> ProjComplex:
    """``Sigma^s C``: degree ``n`` holds ``C^{n+s}``; odd shifts negate d."""
    F = C.field
    out = ProjComplex(C.algebra, F)
    out.slots = {n - s: list(v) for n, v in C.slots.items()}
    out.labels = {n - s: list(v) for n, v in C.labels.items()}
    sign = F.one if s % 2 == 0 else F.neg(F.one)
    out.diff = {n - s: {k: elt_scale(F, x, sign) for k, x in b.items()} for n, b in C.diff.items()}
    return out


def direct_sum(*cs: ProjComplex) -> ProjComplex:
    if not cs:
        raise ValueError("empty direct sum needs an algebra; use zero_complex")
    out = ProjComplex(cs[0].algebra, cs[0].field)
    for t, C in enumerate(cs):
        offset = {}
        for n in C.degrees:
            offset[n] = out.size(n)
            for v, lab in zip(C.slots[n], C.labels.get(n, [None] * C.size(n))):
                out.add_slot(n, v, (t, lab))
        for n, blk in C.diff.items():
            for (i, j), x in blk.items():
                for p, c in x.items():
                    out.add_entry(n, i + offset[n + 1], j + offset[n], p, c)
    return out


def zero_complex(A: GentleAlgebra, F) -> ProjComplex:
    return ProjComplex(A, F)


# ---------------------------------------------------------------- building from words


def field_for(*words, mode: str = "prime"):
    order = required_order([w.scalar for w in words if w.is_band])
    ctx = FieldCtx.default_prime(order) if mode == "prime" else FieldCtx.cyclotomic(order)
    return ctx.field


def build_string_complex(w: HomotopyString, F=None) -> ProjComplex:
    F = F or field_for(w)
    C = ProjComplex(w.algebra, F)
    degs, verts = w.degree_profile(), w.nodes
    idx = [C.add_slot(degs[k], verts[k], ("node", k, 0)) for k in range(len(verts))]
    for k, x in enumerate(w.letters):
        if x.inverse:
            C.add_entry(degs[k + 1], idx[k], idx[k + 1], x.path, F.one)
        else:
            C.add_entry(degs[k], idx[k + 1], idx[k], x.path, F.one)
    C.check()
    return C


def build_band_complex(b: HomotopyBand, n: int | None = None, F=None) -> ProjComplex:
    """``B_{b, lambda, n}``: the scalar letter carries the lower Jordan block J_n(lambda)."""
    n = b.dim if n is None else n
    F = F or field_for(b)
    C = ProjComplex(b.algebra, F)
    m = len(b.letters)
    degs, verts = b.degree_profile(), b.nodes
    idx = [[C.add_slot(degs[k], verts[k], ("node", k, t)) for t in range(n)] for k in range(m)]
    lam = F.embed(b.scalar)
    for k, x in enumerate(b.letters):
        u, v = k, (k + 1) % m
        for t in range(n):
            if x.inverse:
                C.add_entry(degs[k + 1], idx[u][t], idx[v][t], x.path, F.one)
            elif k == b.scalar_slot:
                C.add_entry(degs[k], idx[v][t], idx[u][t], x.path, lam)
                if t + 1 < n:
                    C.add_entry(degs[k], idx[v][t + 1], idx[u][t], x.path, F.one)
            else:
                C.add_entry(degs[k], idx[v][t], idx[u][t], x.path, F.one)
    C.check()
    return C


def build_complex(w: Word, F=None) -> ProjComplex:
    return build_band_complex(w, F=F) if w.is_band else build_string_complex(w, F=F)


def node_slot(C: ProjComplex, node: int, copy: int = 0) -> tuple[int, int]:
    """(degree, index) of the slot built for a word node."""
    for n, labs in C.labels.items():
        for i, lab in enumerate(labs):
            if lab == ("node", node, copy):
                return n, i
    raise KeyError(node)


# ---------------------------------------------------------------- unfolded diagrams


def emit_unfolded(w: Word, tikz: bool = False) -> str:
    """Render one period (band) or the whole word (string) left to right."""
    nodes, degs = w.nodes, w.degree_profile()
    if w.is_band:
        nodes = nodes + [nodes[0]]
    if not tikz:
        parts = [f"P{nodes[0]}[{degs[0]}]"]
        for k, x in enumerate(w.letters):
            deco = f"{w.scalar}*" if w.is_band and k == w.scalar_slot and str(w.scalar) != "1" else ""
            arrow = f" --{deco}{x.path}--> " if not x.inverse else f" <--{x.path}-- "
            parts.append(arrow + f"P{nodes[k + 1]}[{degs[k + 1]}]")
        text = "".join(parts)
        if w.is_band:
            text += "  (cyclic)"
        return text
    lo, hi = min(degs), max(degs)
    rows = []
    for d in range(hi, lo - 1, -1):
        cells = [f"P_{{{nodes[k]}}}" if degs[k] == d else "" for k in range(len(nodes))]
        rows.append(" & ".join(cells) + r" \\")
    lines = [r"\begin{tikzpicture}",
             r"\matrix (m) [matrix of math nodes, row sep=2em, column sep=1.5em] {"]
    lines += ["  " + r for r in rows]
    lines.append("};")
    for k, x in enumerate(w.letters):
        a = f"m-{hi - degs[k] + 1}-{k + 1}"
        b = f"m-{hi - degs[k + 1] + 1}-{k + 2}"
        label = str(x.path)
        if w.is_band and k == w.scalar_slot and str(w.scalar) != "1":
            label = f"{w.scalar}\\,{label}"
        src, dst = (b, a) if x.inverse else (a, b)
        lines.append(f"\\draw[->] ({src}) -- node[auto] {{${label}$}} ({dst});")
    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines)


def emit_complex(C: ProjComplex) -> str:
    F = C.field
    out = []
    for n in C.degrees:
        out.append(f"degree {n}: " + " + ".join(f"P{v}" for v in C.slots[n]))
        for (i, j), x in sorted(C.d(n).items()):
            terms = " + ".join(f"{F.fmt(c)}*{p}" for p, c in sorted(x.items(), key=lambda t: str(t[0])))
            out.append(f"  d[{n}] {j} -> {i}: {terms}")
    return "\n".join(out)
