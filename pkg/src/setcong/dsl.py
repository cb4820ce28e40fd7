"""Text formats: the system language, words, and family JSON.

System text::

    # comment
    sets 4
    mode partition          # optional; partition or family
    A1 ~ A3                 # congruence
    A1 A2 ~ A1+A3 ~ 1,4     # chains expand to consecutive pairs
    A2 < A3 ∪ A4            # subcongruence
    ∅ ~ {}                  # empty unions

Words: whitespace-separated tokens; ``a``..``z`` are generators 1..26 and
uppercase letters their inverses, except that ``e`` is the identity, so
generator 5 is written ``f5`` / ``F5`` (any generator may be written that way).
"""
from __future__ import annotations

import json
import os
import re
from typing import Optional

from .errors import IndexOutOfRange, ParseError, UnknownSetName
from .finite import FiniteFamily, sort_words
from .systems import CONGRUENCE, SUBCONGRUENCE, CongruenceSystem, Statement
from .words import CosetSpace, Word, rank, reduce_word

_OPS = {"~": CONGRUENCE, "≅": CONGRUENCE, "<": SUBCONGRUENCE, "⪯": SUBCONGRUENCE, "<=": SUBCONGRUENCE}
_OP_RE = re.compile(r"<=|~|≅|<|⪯")
_SEP_RE = re.compile(r"[\s,+∪]+")
_NAME_RE = re.compile(r"(?:A(\d+)|(\d+))$")


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _parse_side(text: str, r: int, lineno: int, col0: int) -> frozenset[int]:
    body = text.strip()
    if body in ("∅", "{}"):
        return frozenset()
    if not body:
        raise ParseError("empty side (write ∅ or {} for the empty union)", lineno, col0 + 1)
    out = set()
    for m in re.finditer(r"[^\s,+∪]+", text):
        tok = m.group(0)
        col = col0 + m.start() + 1
        nm = _NAME_RE.match(tok)
        if nm is None:
            raise UnknownSetName(f"unknown set name {tok!r}", lineno, col)
        k = int(nm.group(1) or nm.group(2))
        if not 1 <= k <= r:
            raise IndexOutOfRange(f"set index {k} outside 1..{r}", lineno, col)
        out.add(k)
    return frozenset(out)


def parse_system(text: str) -> CongruenceSystem:
    r: Optional[int] = None
    mode = "partition"
    statements: list[Statement] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        words = line.split()
        head = words[0]
        if head == "sets":
            if r is not None:
                raise ParseError("duplicate 'sets' line", lineno, raw.find("sets") + 1)
            if len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                raise ParseError("expected 'sets <positive integer>'", lineno, 1)
            r = int(words[1])
            continue
        if r is None:
            raise ParseError("the first line must be 'sets <r>'", lineno, 1)
        if head == "mode":
            if len(words) != 2 or words[1] not in ("partition", "family"):
                raise ParseError("expected 'mode partition' or 'mode family'", lineno, 1)
            mode = words[1]
            continue
        ops = list(_OP_RE.finditer(line))
        if not ops:
            raise ParseError("expected a statement with '~' or '<'", lineno, len(line.rstrip()) + 1)
        sides = []
        start = 0
        for op in ops:
            sides.append((line[start:op.start()], start))
            start = op.end()
        sides.append((line[start:], start))
        parsed = [_parse_side(s, r, lineno, c) for s, c in sides]
        for k, op in enumerate(ops):
            statements.append(Statement(_OPS[op.group(0)], parsed[k], parsed[k + 1]))
    if r is None:
        raise ParseError("missing 'sets <r>' line", 1, 1)
    return CongruenceSystem(r, tuple(statements), mode)


def render_side(side: frozenset[int]) -> str:
    return " ".join(f"A{k}" for k in sorted(side)) if side else "∅"


def render_statement(st: Statement) -> str:
    op = "~" if st.is_congruence else "<"
    return f"{render_side(st.left)} {op} {render_side(st.right)}"


def render_system(sys: CongruenceSystem) -> str:
    lines = [f"sets {sys.r}", f"mode {sys.mode}"]
    lines += [render_statement(st) for st in sys.statements]
    return "\n".join(lines) + "\n"


# --- words ----------------------------------------------------------------


def _letter_tokens(tok: str, lineno: int, col: int) -> list[int]:
    m = re.fullmatch(r"([fF])(\d+)", tok)
    if m:
        k = int(m.group(2))
        if k < 1:
            raise ParseError("generator indices start at 1", lineno, col)
        return [k if m.group(1) == "f" else -k]
    if tok == "e":
        return []
    out = []
    for j, ch in enumerate(tok):
        if ch in "eE" or not ("a" <= ch.lower() <= "z"):
            raise ParseError(f"unexpected character {ch!r} in word", lineno, col + j)
        k = ord(ch.lower()) - ord("a") + 1
        out.append(k if ch.islower() else -k)
    return out


def parse_word(text: str) -> Word:
    letters: list[int] = []
    for m in re.finditer(r"\S+", text):
        letters += _letter_tokens(m.group(0), 1, m.start() + 1)
    return reduce_word(letters)


def render_letter(a: int) -> str:
    k = abs(a)
    if k == 5 or k > 26:
        return f"f{k}" if a > 0 else f"F{k}"
    ch = chr(ord("a") + k - 1)
    return ch if a > 0 else ch.upper()


def render_word(w: Word) -> str:
    return " ".join(render_letter(a) for a in w) if w else "e"


def parse_word_list(text: str) -> list[Word]:
    """Comma-separated words."""
    return [parse_word(part) for part in text.split(",") if part.strip()]


# --- families -------------------------------------------------------------


def _load_json(source: str):
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"family is neither a file nor valid JSON: {exc.msg}", exc.lineno, exc.colno) from exc


def parse_family(source: str, coset: Optional[Word] = None, m: Optional[int] = None) -> FiniteFamily:
    """Family JSON: a list of lists of word strings, or {"sets": [...], "coset": word, "m": int}."""
    data = _load_json(source)
    if isinstance(data, dict):
        sets_raw = data.get("sets")
        if coset is None and data.get("coset") is not None:
            coset = parse_word(data["coset"])
        m = data.get("m", m)
    else:
        sets_raw = data
    if not isinstance(sets_raw, list) or not all(isinstance(s, list) for s in sets_raw):
        raise ParseError("family JSON must hold a list of lists of words")
    sets = [[parse_word(w) for w in s] for s in sets_raw]
    if m is None:
        m = max(rank(*[w for s in sets for w in s]), rank(coset) if coset else 1)
    space = CosetSpace(m, coset) if coset is not None else None
    return FiniteFamily(tuple(frozenset(s) for s in sets), m, space)


def family_to_json(fam: FiniteFamily) -> dict:
    out = {"sets": [[render_word(w) for w in sort_words(s)] for s in fam.sets], "m": fam.m}
    if fam.coset is not None:
        out["coset"] = render_word(fam.coset.w)
    return out
