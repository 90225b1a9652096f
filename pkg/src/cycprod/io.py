"""Readers for the two group file formats.

Cayley format::

    n
    <n lines of n whitespace-separated 0-based products>

Permutation format::

    perm <degree>
    (1 2 3)(4 5)
    (1 2)

one generator per line, points numbered ``1..degree``.  Blank lines and
lines starting with ``#`` are ignored in both formats.  Every rejection is a
``TableInvalid`` carrying the 1-based line and column of the offending token.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import OrderBound, TableInvalid
from .group import DEFAULT_ASSOC_BOUND, DEFAULT_MAX_ORDER, FiniteGroup, permutation_group

_TOKEN = re.compile(r"\S+")
_CYCLE_TOKEN = re.compile(r"\(|\)|[^\s(),]+|,")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield lineno, raw


def parse_group_text(text: str, *, max_order: int = DEFAULT_MAX_ORDER,
                     assoc_bound: int = DEFAULT_ASSOC_BOUND, name: str = "") -> FiniteGroup:
    """Parse either file format, deciding by the first content line."""
    lines = list(_content_lines(text))
    if not lines:
        raise TableInvalid("empty input", line=1, column=1)
    first = lines[0][1].strip()
    if first.startswith("perm"):
        return parse_permutation_text(lines, max_order=max_order, name=name)
    return parse_cayley_text(lines, max_order=max_order, assoc_bound=assoc_bound, name=name)


def parse_cayley_text(text_or_lines, *, max_order: int = DEFAULT_MAX_ORDER,
                      assoc_bound: int = DEFAULT_ASSOC_BOUND, name: str = "") -> FiniteGroup:
    lines = (list(_content_lines(text_or_lines)) if isinstance(text_or_lines, str)
             else list(text_or_lines))
    if not lines:
        raise TableInvalid("empty input", line=1, column=1)
    lineno, raw = lines[0]
    tokens = list(_TOKEN.finditer(raw))
    if len(tokens) != 1 or not tokens[0].group().isdigit() or int(tokens[0].group()) < 1:
        raise TableInvalid("first line must be the positive group order", lineno,
                           tokens[0].start() + 1 if tokens else 1)
    n = int(tokens[0].group())
    if n > max_order:
        raise OrderBound(f"order {n} exceeds the configured maximum {max_order}")
    rows = lines[1:]
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else (rows[-1][0] + 1 if rows else lineno + 1)
        raise TableInvalid(f"expected {n} table rows, found {len(rows)}", where, 1)
    table = np.empty((n, n), dtype=np.int32)
    for r, (lineno, raw) in enumerate(rows):
        tokens = list(_TOKEN.finditer(raw))
        if len(tokens) != n:
            col = tokens[n].start() + 1 if len(tokens) > n else len(raw) + 1
            raise TableInvalid(f"expected {n} entries, found {len(tokens)}", lineno, col)
        for c, tok in enumerate(tokens):
            word = tok.group()
            if not word.isdigit() or int(word) >= n:
                raise TableInvalid(f"entry {word!r} is not an element index below {n}",
                                   lineno, tok.start() + 1)
            table[r, c] = int(word)
    _locate_table_errors(table, rows)
    try:
        return FiniteGroup(table, name=name, assoc_bound=assoc_bound)
    except TableInvalid as exc:
        raise TableInvalid(str(exc), rows[0][0], 1) from None


def _locate_table_errors(table: np.ndarray, rows) -> None:
    """Report identity and Latin-square violations at their source position."""
    n = table.shape[0]
    for i in range(n):
        lineno, raw = rows[i]
        cols = [m.start() + 1 for m in _TOKEN.finditer(raw)]
        if table[0, i] != i:
            raise TableInvalid("row 0 must be the identity row", rows[0][0],
                               [m.start() + 1 for m in _TOKEN.finditer(rows[0][1])][i])
        if table[i, 0] != i:
            raise TableInvalid("column 0 must be the identity column", lineno, cols[0])
        seen: dict[int, int] = {}
        for j in range(n):
            v = int(table[i, j])
            if v in seen:
                raise TableInvalid(f"value {v} repeated in row {i}", lineno, cols[j])
            seen[v] = j
    for j in range(n):
        col = table[:, j]
        _, first = np.unique(col, return_index=True)
        if len(first) != n:
            dup = sorted(set(range(n)) - set(first.tolist()))[0]
            lineno, raw = rows[dup]
            raise TableInvalid(f"value {int(col[dup])} repeated in column {j}", lineno,
                               [m.start() + 1 for m in _TOKEN.finditer(raw)][j])


def parse_cycles(text: str, degree: int, line: int = 1) -> list[int]:
    """Disjoint-cycle string on points ``1..degree`` to a 0-based image list."""
    image = list(range(degree))
    seen: set[int] = set()
    cycle: list[int] | None = None
    for tok in _CYCLE_TOKEN.finditer(text):
        word, col = tok.group(), tok.start() + 1
        if word == "(":
            if cycle is not None:
                raise TableInvalid("nested '('", line, col)
            cycle = []
        elif word == ")":
            if cycle is None:
                raise TableInvalid("unmatched ')'", line, col)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                image[a] = b
            cycle = None
        elif word == ",":
            if cycle is None:
                raise TableInvalid("',' outside a cycle", line, col)
        else:
            if cycle is None:
                raise TableInvalid(f"point {word!r} outside a cycle", line, col)
            if not word.isdigit() or not 1 <= int(word) <= degree:
                raise TableInvalid(f"point {word!r} not in 1..{degree}", line, col)
            point = int(word) - 1
            if point in seen:
                raise TableInvalid(f"point {word} repeated; cycles must be disjoint", line, col)
            seen.add(point)
            cycle.append(point)
    if cycle is not None:
        raise TableInvalid("unterminated cycle", line, len(text) + 1)
    return image


def parse_permutation_text(text_or_lines, *, max_order: int = DEFAULT_MAX_ORDER,
                           name: str = "") -> FiniteGroup:
    lines = (list(_content_lines(text_or_lines)) if isinstance(text_or_lines, str)
             else list(text_or_lines))
    lineno, raw = lines[0]
    m = re.fullmatch(r"\s*perm\s+(\d+)\s*", raw)
    if not m or int(m.group(1)) < 1:
        raise TableInvalid("header must read 'perm <degree>'", lineno, 1)
    degree = int(m.group(1))
    perms = []
    for lineno, raw in lines[1:]:
        perms.append(parse_cycles(raw, degree, line=lineno))
    g = permutation_group(degree, perms, max_order=max_order)
    g.name = name
    return g


def format_cycles(image) -> str:
    """Inverse of :func:`parse_cycles`; the identity prints as ``()``."""
    seen = set()
    parts = []
    for start in range(len(image)):
        if start in seen or image[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = image[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = image[x]
        parts.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(parts) or "()"
