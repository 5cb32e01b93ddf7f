"""Model file formats: UAI ``MARKOV`` (read) and the native ``MRF-E v1`` text format.

Native grammar (``#`` starts a comment, tokens are whitespace separated)::

    MRF-E v1
    <n>
    <label count of node 0> ... <label count of node n-1>
    <m>
    # then, for each of the m cliques:
    <arity> <node_1> ... <node_arity>
    <prod(dims) energies, row-major: last node's label varies fastest>

Energies are stored as-is. UAI factor values ``psi`` become energies
``-log(psi)``; tables list entries with the last scope variable fastest.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterator

import numpy as np

from ..exceptions import BadPreamble, CountMismatch, NonPositiveFactorValue, ParseError
from ..model import Clique, MrfModel

NATIVE_HEADER = ("MRF-E", "v1")


class _Tokens:
    def __init__(self, text: str, comment: str | None = None):
        self._items: list[tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if comment is not None:
                line = line.split(comment, 1)[0]
            self._items.extend((tok, lineno) for tok in line.split())
        self._pos = 0

    @property
    def line(self) -> int | None:
        if self._pos < len(self._items):
            return self._items[self._pos][1]
        return self._items[-1][1] if self._items else None

    def next(self, what: str) -> tuple[str, int]:
        if self._pos >= len(self._items):
            raise ParseError(f"unexpected end of file, expected {what}", self.line)
        item = self._items[self._pos]
        self._pos += 1
        return item

    def int(self, what: str, minimum: int = 0) -> int:
        tok, line = self.next(what)
        try:
            value = int(tok)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok!r}", line) from None
        if value < minimum:
            raise ParseError(f"{what} must be >= {minimum}, got {value}", line)
        return value

    def float(self, what: str) -> tuple[float, int]:
        tok, line = self.next(what)
        try:
            return float(tok), line
        except ValueError:
            raise ParseError(f"expected number {what}, got {tok!r}", line) from None

    def remaining(self) -> Iterator[tuple[str, int]]:
        return iter(self._items[self._pos :])


def _build(label_counts, cliques, line) -> MrfModel:
    try:
        return MrfModel(label_counts, cliques)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), line) from exc


def parse_uai(text: str) -> MrfModel:
    """Parse a UAI ``MARKOV`` network into an energy model (``f = -log psi``)."""
    toks = _Tokens(text)
    try:
        kind, line = toks.next("preamble")
    except ParseError:
        raise BadPreamble("empty file", 1) from None
    if kind != "MARKOV":
        raise BadPreamble(f"expected MARKOV, got {kind!r}", line)
    n = toks.int("variable count")
    cards = [toks.int(f"cardinality of variable {i}", 1) for i in range(n)]
    m = toks.int("function count")
    scopes = []
    for f in range(m):
        size = toks.int(f"scope size of function {f}", 1)
        scope = []
        for _ in range(size):
            var = toks.int(f"variable in scope of function {f}")
            if var >= n:
                raise ParseError(f"function {f}: variable {var} out of range", toks.line)
            scope.append(var)
        scopes.append(tuple(scope))
    cliques = []
    for f, scope in enumerate(scopes):
        dims = tuple(cards[v] for v in scope)
        count_line = toks.line
        count = toks.int(f"entry count of function {f}")
        if count != math.prod(dims):
            raise CountMismatch(f"function {f}: {count} entries, scope needs {math.prod(dims)}", count_line)
        values = np.empty(count)
        for k in range(count):
            psi, vline = toks.float(f"entry {k} of function {f}")
            if not psi > 0:
                raise NonPositiveFactorValue(f"function {f}: factor value {psi} is not positive", vline)
            values[k] = -math.log(psi)
        cliques.append(Clique(scope, values.reshape(dims)))
    extra = next(toks.remaining(), None)
    if extra is not None:
        raise ParseError(
            f"unexpected trailing data {extra[0]!r}; evidence sections are not supported", extra[1]
        )
    return _build(cards, cliques, None)


def parse_native(text: str) -> MrfModel:
    toks = _Tokens(text, comment="#")
    head = []
    for what in ("format name", "format version"):
        try:
            head.append(toks.next(what))
        except ParseError:
            raise BadPreamble(f"missing header {' '.join(NATIVE_HEADER)!r}", 1) from None
    if tuple(t for t, _ in head) != NATIVE_HEADER or head[0][1] != head[1][1]:
        raise BadPreamble(f"expected header {' '.join(NATIVE_HEADER)!r}", head[0][1])
    n = toks.int("node count")
    counts = [toks.int(f"label count of node {i}", 1) for i in range(n)]
    m = toks.int("clique count")
    cliques = []
    for ci in range(m):
        line = toks.line
        arity = toks.int(f"arity of clique {ci}", 1)
        nodes = [toks.int(f"node of clique {ci}") for _ in range(arity)]
        for v in nodes:
            if v >= n:
                raise ParseError(f"clique {ci}: node {v} out of range", line)
        dims = tuple(counts[v] for v in nodes)
        values = np.array([toks.float(f"energy of clique {ci}")[0] for _ in range(math.prod(dims))])
        if not np.all(np.isfinite(values)):
            raise ParseError(f"clique {ci}: non-finite energy", line)
        try:
            cliques.append(Clique(nodes, values.reshape(dims)))
        except ValueError as exc:
            raise ParseError(str(exc), line) from exc
    extra = next(toks.remaining(), None)
    if extra is not None:
        raise ParseError(f"unexpected trailing data {extra[0]!r}", extra[1])
    return _build(counts, cliques, None)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def serialize_native(model: MrfModel) -> str:
    lines = [" ".join(NATIVE_HEADER), str(model.num_nodes), " ".join(map(str, model.label_counts)), str(len(model.cliques))]
    for clique in model.cliques:
        lines.append(" ".join(map(str, (clique.arity, *clique.nodes))))
        rows = clique.potential.reshape(-1, clique.potential.shape[-1])
        lines.extend(" ".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def load_model(path) -> MrfModel:
    """Read a model file; ``.uai`` selects the UAI parser, anything else the native one."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".uai":
        return parse_uai(text)
    return parse_native(text)


def save_model(model: MrfModel, path) -> None:
    Path(path).write_text(serialize_native(model))
