"""Gentle algebras kQ/I with length-two relations.

Paths are written in composition order: ``("d", "b", "c")`` is the path
``dbc``, where ``c`` is traversed first.  Modules are right modules and
``P_v = e_v Lambda``; a path from ``u`` to ``w`` induces ``P_w -> P_u``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable


class AlgebraError(ValueError):
    """Base class for presentation problems."""

    def __init__(self, message: str, violations: list["Violation"] | None = None):
        super().__init__(message)
        self.violations = violations or []


class NonComposableRelation(AlgebraError):
    pass


class FanOutExceeded(AlgebraError):
    pass


class GentlenessViolation(AlgebraError):
    pass


class InfiniteDimensional(AlgebraError):
    pass


class UnknownVertex(AlgebraError):
    pass


class EndpointMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "where": self.where, "message": self.message}


_ERRORS = {
    "NonComposableRelation": NonComposableRelation,
    "FanOutExceeded": FanOutExceeded,
    "GentlenessViolation": GentlenessViolation,
    "InfiniteDimensional": InfiniteDimensional,
    "UnknownVertex": UnknownVertex,
}


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A path of the quiver; ``arrows`` empty means the trivial path at ``start``."""

    arrows: tuple[str, ...]
    start: str
    end: str

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __len__(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        return "*".join(self.arrows) if self.arrows else f"e{self.start}"


@dataclass(frozen=True)
class GentleAlgebra:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    @cached_property
    def arrow(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def trivial(self, v: str) -> Path:
        return Path((), v, v)

    def path(self, arrows: Iterable[str] | str) -> Path:
        """Path from written arrow names; raises if not composable."""
        if isinstance(arrows, str):
            arrows = [a for a in arrows.split("*") if a]
        arrows = tuple(arrows)
        if not arrows:
            raise ValueError("use trivial() for trivial paths")
        for a in arrows:
            if a not in self.arrow:
                raise KeyError(a)
        for left, right in zip(arrows, arrows[1:]):
            if self.arrow[right].target != self.arrow[left].source:
                raise EndpointMismatch(f"{left} and {right} do not compose")
        return Path(arrows, self.arrow[arrows[-1]].source, self.arrow[arrows[0]].target)

    def is_zero(self, p: Path) -> bool:
        return any((x, y) in self.relations for x, y in zip(p.arrows, p.arrows[1:]))

    def compose(self, p: Path, q: Path) -> Path | None:
        """``p`` after ``q``; ``None`` is the zero element."""
        if q.end != p.start:
            raise EndpointMismatch(f"{p} after {q}: {q.end} != {p.start}")
        if q.is_trivial:
            return p
        if p.is_trivial:
            return q
        if (p.arrows[-1], q.arrows[0]) in self.relations:
            return None
        return Path(p.arrows + q.arrows, q.start, p.end)

    def mul(self, p: Path, q: Path) -> Path | None:
        """Product ``pq`` in the algebra; zero when not composable."""
        if q.end != p.start:
            return None
        return self.compose(p, q)

    @cached_property
    def all_paths(self) -> tuple[Path, ...]:
        out = [self.trivial(v) for v in self.vertices]
        frontier = [Path((a.name,), a.source, a.target) for a in self.arrows]
        while frontier:
            out.extend(frontier)
            nxt = []
            for p in frontier:
                for b in self.arrows:
                    if b.source == p.end and (b.name, p.arrows[0]) not in self.relations:
                        nxt.append(Path((b.name,) + p.arrows, p.start, b.target))
            frontier = nxt
        return tuple(out)

    @cached_property
    def _paths_between(self) -> dict[tuple[str, str], tuple[Path, ...]]:
        table: dict[tuple[str, str], list[Path]] = {}
        for p in self.all_paths:
            table.setdefault((p.start, p.end), []).append(p)
        return {k: tuple(v) for k, v in table.items()}

    def paths_between(self, start: str, end: str) -> tuple[Path, ...]:
        return self._paths_between.get((start, end), ())

    def hom_basis(self, source_vertex: str, target_vertex: str) -> tuple[Path, ...]:
        """Basis of Hom(P_source, P_target): paths from target to source."""
        return self.paths_between(target_vertex, source_vertex)

    def projective_basis(self, v: str) -> tuple[Path, ...]:
        if v not in self.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return tuple(p for p in self.all_paths if p.start == v)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.arrows],
            "relations": [list(r) for r in sorted(self.relations)],
        }


def _violations(vertices, arrows, relations) -> list[Violation]:
    found: list[Violation] = []
    vset = set(vertices)
    names = [a.name for a in arrows]
    for n in {n for n in names if names.count(n) > 1}:
        found.append(Violation("GentlenessViolation", n, f"arrow name {n!r} repeated"))
    for a in arrows:
        for v in (a.source, a.target):
            if v not in vset:
                found.append(Violation("UnknownVertex", a.name, f"arrow {a.name} uses undeclared vertex {v!r}"))
    if found:
        return found
    by_name = {a.name: a for a in arrows}
    for rel in relations:
        if len(rel) != 2:
            found.append(Violation("GentlenessViolation", "*".join(rel), "relations must have length two"))
            continue
        x, y = rel
        if x not in by_name or y not in by_name:
            found.append(Violation("NonComposableRelation", f"{x}*{y}", "relation uses an unknown arrow"))
        elif by_name[y].target != by_name[x].source:
            found.append(Violation("NonComposableRelation", f"{x}*{y}", f"{x} cannot follow {y}"))
    if found:
        return found
    for v in vertices:
        n_in = sum(a.target == v for a in arrows)
        n_out = sum(a.source == v for a in arrows)
        if n_in > 2 or n_out > 2:
            found.append(Violation("FanOutExceeded", v, f"vertex {v} has {n_in} incoming and {n_out} outgoing arrows"))
    rels = set(relations)
    for a in arrows:
        after = [b.name for b in arrows if b.source == a.target]
        before = [b.name for b in arrows if b.target == a.source]
        if sum((b, a.name) not in rels for b in after) > 1:
            found.append(Violation("GentlenessViolation", a.name, f"two arrows continue {a.name} without a relation"))
        if sum((b, a.name) in rels for b in after) > 1:
            found.append(Violation("GentlenessViolation", a.name, f"two relations start after {a.name}"))
        if sum((a.name, b) not in rels for b in before) > 1:
            found.append(Violation("GentlenessViolation", a.name, f"two arrows precede {a.name} without a relation"))
        if sum((a.name, b) in rels for b in before) > 1:
            found.append(Violation("GentlenessViolation", a.name, f"two relations end before {a.name}"))
    if found:
        return found
    # a relation-free oriented cycle makes the algebra infinite dimensional
    succ = {a.name: [b.name for b in arrows if b.source == a.target and (b.name, a.name) not in rels] for a in arrows}
    state: dict[str, int] = {}

    def visit(n: str) -> str | None:
        state[n] = 1
        for m in succ[n]:
            if state.get(m) == 1:
                return m
            if m not in state:
                hit = visit(m)
                if hit:
                    return hit
        state[n] = 2
        return None

    for a in arrows:
        if a.name not in state:
            hit = visit(a.name)
            if hit:
                found.append(Violation("InfiniteDimensional", hit, f"relation-free cycle through {hit}"))
                break
    return found


def validate_gentle(vertices, arrows, relations=()) -> GentleAlgebra:
    """Validate a presentation; raises the error class of the first violation."""
    vertices = tuple(str(v) for v in vertices)
    arrows = tuple(a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), str(a[2])) for a in arrows)
    relations = tuple(tuple(r) for r in relations)
    found = _violations(vertices, arrows, relations)
    if found:
        raise _ERRORS[found[0].kind]("; ".join(v.message for v in found), found)
    return GentleAlgebra(vertices, arrows, frozenset(relations))


def algebra_from_dict(data: dict) -> GentleAlgebra:
    arrows = [Arrow(str(a["name"]), str(a["from"]), str(a["to"])) for a in data["arrows"]]
    return validate_gentle(data["vertices"], arrows, [tuple(r) for r in data.get("relations", [])])


def load_algebra(path) -> GentleAlgebra:
    with open(path) as fh:
        return algebra_from_dict(json.load(fh))


def kronecker_pair() -> GentleAlgebra:
    """The algebra 3 => 1 => 2 with relations ac = bd = 0."""
    return validate_gentle(
        ["1", "2", "3"],
        [("a", "1", "2"), ("b", "1", "2"), ("c", "3", "1"), ("d", "3", "1")],
        [("a", "c"), ("b", "d")],
    )


def five_vertex_example() -> GentleAlgebra:
    """Quiver 1 -a-> 2 -d-> 4, 1 -c-> 3 -e-> 4, 3 -b-> 2 with da = ec = 0."""
    return validate_gentle(
        ["1", "2", "3", "4"],
        [("a", "1", "2"), ("b", "3", "2"), ("c", "1", "3"), ("d", "2", "4"), ("e", "3", "4")],
        [("d", "a"), ("e", "c")],
    )
