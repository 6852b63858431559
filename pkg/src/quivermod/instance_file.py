"""Parser for the line-oriented instance format.

    vertices: 1 2
    edge: a 1 2
    algebra: preprojective | path | explicit
    truncation: auto | <positive integer>
    d: 1 0
    v: 1 1
    field: Q | F<p>
    nilpotent: true | false

Explicit algebras add ``basis: <label> <source> <target> [<degree>]`` lines
(idempotents ``e<vertex>`` are implicit) and ``mult: x y = c*z + ...`` lines.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .fields import FieldSpec
from .graded import AlgebraPresentation, BasisElement, DimVector, VertexSet
from .quivers import (Quiver, Edge, build_path_algebra_truncated, build_truncated_preprojective,
                      nilpotency_bound)

ALGEBRA_KINDS = ("preprojective", "path", "explicit")
KEYS = ("vertices", "edge", "algebra", "truncation", "d", "v", "field", "nilpotent", "basis", "mult")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class InstanceFile:
    vertices: tuple = ()
    edges: list = dc_field(default_factory=list)
    algebra: str = "preprojective"
    truncation: object = "auto"
    d: Optional[tuple] = None
    v: Optional[tuple] = None
    field: Optional[FieldSpec] = None
    nilpotent: bool = False
    basis: list = dc_field(default_factory=list)
    mult: dict = dc_field(default_factory=dict)

    @property
    def vertex_set(self) -> VertexSet:
        return VertexSet.of(self.vertices)

    def quiver(self) -> Quiver:
        return Quiver(self.vertex_set, tuple(self.edges))

    def dim_vector(self, which: str) -> DimVector:
        vals = getattr(self, which)
        if vals is None:
            raise ValueError(f"instance file has no '{which}:' line")
        return DimVector(self.vertex_set, tuple(vals))

    def length_bound(self) -> int:
        if self.truncation == "auto":
            return max(nilpotency_bound(self.dim_vector("v")), 1)
        return int(self.truncation)

    def build_algebra(self) -> AlgebraPresentation:
        if self.algebra == "explicit":
            return AlgebraPresentation.build(self.vertex_set, self.basis, self.mult, self.field)
        q = self.quiver()
        if self.algebra == "path":
            return build_path_algebra_truncated(q, self.length_bound(), self.field)
        if q.has_edge_loops():
            loops = [e.label for e in q.edges if e.source == e.target]
            raise ValueError(f"edge-loops {loops} not allowed: the preprojective construction "
                             "assumes a quiver without edge-loops")
        return build_truncated_preprojective(q, self.length_bound(), self.field)


_TERM = re.compile(r"^\s*(?:([+-]?\d+(?:/\d+)?)\s*\*\s*|(-)\s*)?([^\s*+]+)\s*$")


def _parse_combination(text: str, err) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    for raw in text.replace("- ", "+ -").split("+"):
        if not raw.strip():
            continue
        m = _TERM.match(raw)
        if not m:
            err(f"cannot parse term {raw.strip()!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(-1 if m.group(2) else 1)
        label = m.group(3)
        out[label] = out.get(label, 0) + coef
    return out


def parse_instance(text: str, source: str = "<input>") -> InstanceFile:
    inst = InstanceFile()
    seen: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1

        def err(msg, col=col0):
            raise ParseError(msg, lineno, col, source)

        if ":" not in line:
            err("expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        vcol = line.index(":") + 2 + (len(value) - len(value.lstrip()))
        value = value.strip()
        if key not in KEYS:
            err(f"unknown key {key!r}")
        if key not in ("edge", "basis", "mult") and key in seen:
            err(f"duplicate '{key}:' line")
        seen.add(key)
        toks = value.split()
        if key == "vertices":
            if not toks:
                err("vertex list is empty", vcol)
            if len(set(toks)) != len(toks):
                err("duplicate vertex labels", vcol)
            inst.vertices = tuple(toks)
        elif key == "edge":
            if len(toks) != 3:
                err("edge needs: <label> <source> <target>", vcol)
            for t in toks[1:]:
                if t not in inst.vertices:
                    err(f"edge endpoint {t!r} is not a declared vertex", vcol + value.index(t, len(toks[0])))
            if any(e.label == toks[0] for e in inst.edges):
                err(f"duplicate edge label {toks[0]!r}", vcol)
            inst.edges.append(Edge(toks[0], toks[1], toks[2]))
        elif key == "algebra":
            if value not in ALGEBRA_KINDS:
                err(f"algebra must be one of {', '.join(ALGEBRA_KINDS)}", vcol)
            inst.algebra = value
        elif key == "truncation":
            if value == "auto":
                inst.truncation = "auto"
            elif value.isdigit() and int(value) >= 1:
                inst.truncation = int(value)
            else:
                err("truncation must be 'auto' or a positive integer", vcol)
        elif key in ("d", "v"):
            if not inst.vertices:
                err(f"'{key}:' must come after 'vertices:'")
            if len(toks) != len(inst.vertices) or not all(t.isdigit() for t in toks):
                err(f"'{key}:' needs {len(inst.vertices)} non-negative integers", vcol)
            setattr(inst, key, tuple(int(t) for t in toks))
        elif key == "field":
            try:
                inst.field = FieldSpec.parse(value)
            except ValueError as exc:
                err(str(exc), vcol)
        elif key == "nilpotent":
            if value not in ("true", "false"):
                err("nilpotent must be true or false", vcol)
            inst.nilpotent = value == "true"
        elif key == "basis":
            if len(toks) not in (3, 4):
                err("basis needs: <label> <source> <target> [<degree>]", vcol)
            for t in toks[1:3]:
                if t not in inst.vertices:
                    err(f"basis endpoint {t!r} is not a declared vertex", vcol)
            deg = None
            if len(toks) == 4:
                if not toks[3].isdigit():
                    err("degree must be a non-negative integer", vcol)
                deg = int(toks[3])
            inst.basis.append(BasisElement(toks[0], toks[1], toks[2], deg))
        elif key == "mult":
            lhs, eq, rhs = value.partition("=")
            ltoks = lhs.split()
            if not eq or len(ltoks) != 2:
                err("mult needs: <x> <y> = <combination>", vcol)
            labels = {b.label for b in inst.basis} | {f"e{v}" for v in inst.vertices}
            combo = _parse_combination(rhs, lambda m: err(m, vcol + value.index("=") + 1))
            for lab in list(ltoks) + list(combo):
                if lab not in labels:
                    err(f"unknown basis label {lab!r}", vcol)
            inst.mult[(ltoks[0], ltoks[1])] = combo
    if not inst.vertices:
        raise ParseError("missing 'vertices:' line", 1, 1, source)
    if inst.field is None:
        raise ParseError("missing 'field:' line", 1, 1, source)
    if inst.algebra != "explicit" and (inst.basis or inst.mult):
        raise ParseError("'basis:'/'mult:' lines need 'algebra: explicit'", 1, 1, source)
    return inst


def load_instance(path) -> InstanceFile:
    p = Path(path)
    return parse_instance(p.read_text(), source=str(p))
