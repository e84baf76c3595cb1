"""Reading and writing complexes and covers.

Grammar (one record per line, ``#`` starts a comment, blank lines ignored)::

    complex file:   simplex <v0> <v1> ... <vk> : <birth>
    cover file:     cover <index>
                    simplex <v0> ... <vk> [: <birth>]

Vertices are integers. The colon separates the vertex list from the birth,
so a line that forgets its birth is caught instead of silently reading the
last vertex as a birth. Births are integers, or rationals/decimals when a
grid step is supplied (they are then floored onto the grid). In a cover
file a ``simplex`` line belongs to the most recent ``cover`` header; a line
without a birth takes the birth from the ambient complex (induced member).
Listing maximal simplices is enough, faces are added automatically.
"""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .complex import (
    ComplexError,
    FilteredComplex,
    FilteredCover,
    GridMap,
    _canon,
    all_faces,
    build_complex,
    cover_from_members,
    discretize,
)


class ParseError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        self.path, self.lineno = str(path), lineno
        super().__init__(f"{path}:{lineno}: {message}")


def _lines(path) -> Iterable[tuple[int, list[str]]]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace(":", " : ").strip()
        if line:
            yield lineno, line.split()


def _vertex(tok: str, path, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(path, lineno, f"vertex {tok!r} is not an integer") from None


def _birth(tok: str, path, lineno: int, rational: bool):
    try:
        if rational:
            return Fraction(tok)
        return int(tok)
    except (ValueError, ZeroDivisionError):
        kind = "a number" if rational else "an integer"
        raise ParseError(path, lineno, f"birth {tok!r} is not {kind}") from None


def _simplex_line(toks, path, lineno, *, birth_required: bool, rational: bool):
    """Parse ``simplex v0 .. vk [: birth]`` into ``(simplex, birth or None)``."""
    body = toks[1:]
    if body.count(":") > 1:
        raise ParseError(path, lineno, "more than one ':' on a simplex line")
    if ":" in body:
        k = body.index(":")
        verts, rest = body[:k], body[k + 1:]
        if len(rest) != 1:
            raise ParseError(path, lineno, "expected exactly one birth after ':'")
        b = _birth(rest[0], path, lineno, rational)
    else:
        if birth_required:
            raise ParseError(path, lineno, "missing birth; expected 'simplex <vertices...> : <birth>'")
        verts, b = body, None
    if not verts:
        raise ParseError(path, lineno, "simplex line without vertices")
    vs = [_vertex(t, path, lineno) for t in verts]
    try:
        s = _canon(vs)
    except ComplexError as e:
        raise ParseError(path, lineno, str(e)) from None
    return s, b


def parse_complex(path, grid: GridMap | None = None) -> FilteredComplex:
    """Load a complex file; with ``grid`` births may be rational and are floored onto it."""
    entries: dict = {}
    first_line = {}
    for lineno, toks in _lines(path):
        if toks[0] != "simplex":
            raise ParseError(path, lineno, f"unknown record {toks[0]!r}")
        s, b = _simplex_line(toks, path, lineno, birth_required=True, rational=grid is not None)
        if s in entries and entries[s] != b:
            raise ParseError(path, lineno, f"duplicate simplex {s} with conflicting births {entries[s]} and {b} (first at line {first_line[s]})")
        entries[s] = b
        first_line.setdefault(s, lineno)
    if grid is not None:
        return discretize(entries, grid)
    return build_complex(entries.items())


def parse_cover_members(path, ambient: FilteredComplex | None = None, grid: GridMap | None = None) -> dict:
    """Members of a cover file as ``{index: FilteredComplex}``, in declaration order, unvalidated."""
    sections: dict = {}
    current = None
    for lineno, toks in _lines(path):
        if toks[0] == "cover":
            if len(toks) != 2:
                raise ParseError(path, lineno, "expected 'cover <index>'")
            label = toks[1]
            try:
                label = int(label)
            except ValueError:
                pass
            if label in sections:
                raise ParseError(path, lineno, f"duplicate cover index {label!r}")
            sections[label] = []
            current = label
        elif toks[0] == "simplex":
            if current is None:
                raise ParseError(path, lineno, "simplex line before any 'cover' header")
            s, b = _simplex_line(toks, path, lineno, birth_required=False, rational=grid is not None)
            sections[current].append((lineno, s, b))
        else:
            raise ParseError(path, lineno, f"unknown record {toks[0]!r}")
    members = {}
    for label, rows in sections.items():
        births: dict = {}
        for lineno, s, b in rows:
            if b is None:
                if ambient is None:
                    raise ParseError(path, lineno, "simplex without birth needs an ambient complex")
                for f in all_faces(s):
                    if f not in ambient:
                        raise ParseError(path, lineno, f"simplex {f} of cover {label!r} is not in the ambient complex")
                    _put(births, f, ambient.births[f], path, lineno)
            else:
                _put(births, s, b, path, lineno)
        try:
            if grid is not None:
                members[label] = discretize(births, grid)
            else:
                members[label] = build_complex(births.items())
        except ComplexError as e:
            raise ParseError(path, rows[0][0] if rows else 0, f"cover {label!r}: {e}") from None
    return members


def _put(births, s, b, path, lineno):
    if s in births and births[s] != b:
        raise ParseError(path, lineno, f"simplex {s} listed with conflicting births {births[s]} and {b}")
    births[s] = b


def parse_cover(path, ambient: FilteredComplex | None = None, grid: GridMap | None = None) -> FilteredCover:
    """Load and validate a cover; without ``ambient`` the ambient births follow the min rule."""
    members = parse_cover_members(path, ambient, grid)
    return cover_from_members(members, ambient)


def serialize_complex(cx: FilteredComplex) -> str:
    lines = [f"simplex {' '.join(map(str, s))} : {cx.births[s]}" for s in cx.simplices()]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_cover(cover: FilteredCover, births: bool = True) -> str:
    out = []
    for label, m in cover.items():
        out.append(f"cover {label}")
        for s in m.simplices():
            out.append(f"simplex {' '.join(map(str, s))}" + (f" : {m.births[s]}" if births else ""))
    return "\n".join(out) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def output_dir(cli_value: str | None) -> Path:
    """Output directory: ``MVNERVE_OUT_DIR`` overrides the command line, then ``.``."""
    env = os.environ.get("MVNERVE_OUT_DIR")
    return Path(env or cli_value or ".")
