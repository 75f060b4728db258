"""Reader and writer for the line-based ``.fring`` ring format.

Example::

    format = 1
    ring fibonacci
    rank = 2
    unit = 0
    dual = [0, 1]
    N[1,1] = {0:1, 1:1}

Whitespace inside a line is insignificant and ``#`` starts a comment.
Products with the unit may be omitted; any other omitted ``N[i,j]`` is
taken as zero, which the validator then reports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .ring import FusionRing, check_valid

__all__ = ["FORMAT", "MAX_RANK", "ParseError", "parse", "parse_file", "serialize"]

FORMAT = 1
MAX_RANK = 64

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.+\-]*)|(?P<punct>[=\[\]{},:]))"
)


class ParseError(ValueError):
    """Input rejected by the grammar; ``line`` and ``column`` are 1-based."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, lineno: int) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(lineno, col, f"unexpected character {text[col - 1]!r}")
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return toks


class _Line:
    """Cursor over one line's tokens."""

    def __init__(self, toks: list[_Tok], lineno: int, length: int):
        self.toks = toks
        self.pos = 0
        self.lineno = lineno
        self.end_col = length + 1

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        col = tok.col if tok else (self.toks[self.pos].col if self.pos < len(self.toks) else self.end_col)
        return ParseError(self.lineno, col, message)

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            got = "end of line" if tok is None else repr(tok.text)
            raise self.error(f"expected {want}, found {got}")
        self.pos += 1
        return tok

    def punct(self, ch: str) -> _Tok:
        return self.take("punct", ch)

    def integer(self) -> tuple[int, _Tok]:
        tok = self.take("int")
        return int(tok.text), tok

    def done(self) -> None:
        if self.pos != len(self.toks):
            raise self.error(f"unexpected {self.toks[self.pos].text!r}")


def parse(text: str | bytes, validate: bool = True) -> FusionRing:
    """Parse ``.fring`` text into a ring; axiom failures raise :class:`AxiomError`."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = text[: exc.start]
            line = prefix.count(b"\n") + 1
            col = exc.start - (prefix.rfind(b"\n") + 1) + 1
            raise ParseError(line, col, "input is not valid UTF-8") from None
    name = None
    rank = None
    dual = None
    entries: dict[tuple[int, int], dict[int, int]] = {}
    seen_decl = False
    seen: set[str] = set()

    def once(key: str, cur: _Line, tok: _Tok) -> None:
        if key in seen:
            raise cur.error(f"duplicate {key} declaration", tok)
        seen.add(key)

    def index(cur: _Line, what: str) -> int:
        value, tok = cur.integer()
        if rank is None:
            raise cur.error("rank must be declared before indices are used", tok)
        if value >= rank:
            raise cur.error(f"{what} {value} out of range for rank {rank}", tok)
        return value

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        cur = _Line(toks, lineno, len(line.rstrip()))
        head = cur.take("name")
        key = head.text
        if key == "format":
            if seen_decl:
                raise cur.error("format must be the first declaration", head)
            once(key, cur, head)
            cur.punct("=")
            value, tok = cur.integer()
            if value != FORMAT:
                raise cur.error(f"unsupported format {value}", tok)
        elif key == "ring":
            once(key, cur, head)
            name = cur.take("name").text
        elif key == "rank":
            once(key, cur, head)
            cur.punct("=")
            rank, tok = cur.integer()
            if not 1 <= rank <= MAX_RANK:
                raise cur.error(f"rank must be in 1..{MAX_RANK}", tok)
        elif key == "unit":
            once(key, cur, head)
            cur.punct("=")
            value, tok = cur.integer()
            if value != 0:
                raise cur.error("unit must be 0", tok)
        elif key == "dual":
            once(key, cur, head)
            cur.punct("=")
            open_tok = cur.punct("[")
            if rank is None:
                raise cur.error("rank must be declared before dual", open_tok)
            dual = []
            if cur.peek() is not None and cur.peek().text != "]":
                dual.append(index(cur, "dual entry"))
                while cur.peek() is not None and cur.peek().text == ",":
                    cur.punct(",")
                    dual.append(index(cur, "dual entry"))
            cur.punct("]")
            if len(dual) != rank:
                raise cur.error(f"dual has {len(dual)} entries, rank is {rank}", open_tok)
        elif key == "N":
            cur.punct("[")
            i = index(cur, "index")
            cur.punct(",")
            j = index(cur, "index")
            cur.punct("]")
            if (i, j) in entries:
                raise cur.error(f"duplicate entry N[{i},{j}]", head)
            cur.punct("=")
            cur.punct("{")
            row: dict[int, int] = {}
            if cur.peek() is not None and cur.peek().text != "}":
                while True:
                    m_tok = cur.peek()
                    m = index(cur, "index")
                    cur.punct(":")
                    c, _ = cur.integer()
                    if m in row:
                        raise cur.error(f"duplicate key {m} in N[{i},{j}]", m_tok)
                    row[m] = c
                    if cur.peek() is not None and cur.peek().text == ",":
                        cur.punct(",")
                        continue
                    break
            cur.punct("}")
            entries[(i, j)] = row
        else:
            raise cur.error(f"unknown declaration {key!r}", head)
        cur.done()
        seen_decl = True

    end = text.count("\n") + 1
    if rank is None:
        raise ParseError(end, 1, "missing rank declaration")
    if dual is None:
        raise ParseError(end, 1, "missing dual declaration")
    tensor = np.zeros((rank, rank, rank), dtype=object)
    for a in range(rank):
        if (0, a) not in entries:
            tensor[0, a, a] = 1
        if (a, 0) not in entries:
            tensor[a, 0, a] = 1
    for (i, j), row in entries.items():
        for m, c in row.items():
            tensor[i, j, m] = c
    ring = FusionRing(tuple(dual), tensor, name)
    return check_valid(ring) if validate else ring


def parse_file(path, validate: bool = True) -> FusionRing:
    with open(path, "rb") as fh:
        return parse(fh.read(), validate)


def serialize(ring: FusionRing) -> str:
    lines = [f"format = {FORMAT}"]
    if ring.name:
        lines.append(f"ring {ring.name}")
    lines += [f"rank = {ring.rank}", "unit = 0", "dual = [" + ", ".join(map(str, ring.dual)) + "]"]
    r = ring.rank
    T = ring.tensor
    for i in range(r):
        for j in range(r):
            unit_row = [int(i == 0 and m == j or j == 0 and m == i) for m in range(r)]
            row = [int(x) for x in T[i, j]]
            if (i == 0 or j == 0) and row == unit_row:
                continue
            body = ", ".join(f"{m}:{c}" for m, c in enumerate(row) if c)
            lines.append(f"N[{i},{j}] = {{{body}}}")
    return "\n".join(lines) + "\n"
