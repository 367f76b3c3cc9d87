"""Text format for corpus entries: family specs and polycyclic presentations.

Grammar (``#`` starts a comment line; ``;`` and newlines separate statements)::

    corpus    := { entry }
    entry     := family | group | statement { NEWLINE statement }
    family    := "family" SPEC [ "label" STRING ] [ "expect" pairs ]
    group     := "group" NAME "{" statement { ";" statement } "}"
    statement := "gens" NAME ":" INT { "," NAME ":" INT }
               | "pow" NAME ":" word            # NAME^order = word
               | "conj" NAME "^" NAME "=" word  # conjugation relation
               | "rel" word "=" word            # extra relation, checked after collection
               | "label" STRING
               | "expect" pairs
    pairs     := KEY "=" VALUE { "," KEY "=" VALUE }   # KEY is a fingerprint field
    word      := "1" | letter { letter }
    letter    := NAME [ "^" INT | "^" NAME | INT ]     # a2 is a^2, y^x is x^-1 y x

STRING is a double-quoted JSON string.  Bare statements outside a ``group``
block form one anonymous entry that runs until a blank line.

The canonical form prints each entry on one line, e.g.
``group Mod4 { gens x:8, y:2; pow y: 1; conj x^y = x^5 }``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from ..errors import ParseError, SemanticError
from ..families import FamilySpec, build, parse_spec
from ..group import Group
from ..invariants import FINGERPRINT_FIELDS
from ..presentation import PcPresentation, collect, is_prime_power

# A letter is (generator, exponent) or (generator, conjugating generator).
Letter = tuple[str, Union[int, str]]
Word = tuple[Letter, ...]

KEYWORDS = ("gens", "pow", "conj", "rel", "label", "expect")

_NAME = r"[A-Za-z_]+"
_LETTER = re.compile(rf"\s*({_NAME})(?:\^(-?\d+|{_NAME})|(\d+))?\s*")
_STRING = re.compile(r'"(?:[^"\\]|\\.)*"')


@dataclass(frozen=True)
class Pow:
    gen: str
    word: Word


@dataclass(frozen=True)
class Conj:
    target: str
    by: str
    word: Word


@dataclass(frozen=True)
class Rel:
    lhs: Word
    rhs: Word


@dataclass(frozen=True)
class GroupSource:
    """A presentation as written: generators in declared order plus relations."""

    name: str
    gens: tuple[tuple[str, int], ...]
    relations: tuple[Pow | Conj | Rel, ...] = ()

    @property
    def order(self) -> int:
        out = 1
        for _, r in self.gens:
            out *= r
        return out


@dataclass(frozen=True)
class CorpusEntry:
    body: FamilySpec | GroupSource
    label: str | None = None
    expected: tuple[tuple[str, str], ...] = ()
    line: int = field(default=1, compare=False)

    @property
    def name(self) -> str:
        if isinstance(self.body, FamilySpec):
            return self.body.text()
        return self.body.name

    def to_presentation(self) -> PcPresentation | None:
        if isinstance(self.body, FamilySpec):
            return None
        return to_presentation(self.body)

    def to_group(self) -> Group:
        if isinstance(self.body, FamilySpec):
            return build(self.body)
        return collect(to_presentation(self.body), name=self.body.name)

    def text(self) -> str:
        return format_entry(self)


# ------------------------------------------------------------------ printing

def format_word(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    for g, e in w:
        parts.append(g if e == 1 else f"{g}^{e}")
    return " ".join(parts)


def _format_tail(entry: CorpusEntry) -> list[str]:
    out = []
    if entry.label is not None:
        out.append("label " + json.dumps(entry.label))
    if entry.expected:
        out.append("expect " + ", ".join(f"{k}={v}" for k, v in entry.expected))
    return out


def format_entry(entry: CorpusEntry) -> str:
    """Canonical one-line form of an entry."""
    if isinstance(entry.body, FamilySpec):
        return " ".join(["family", entry.body.text(), *_format_tail(entry)])
    src = entry.body
    stmts = ["gens " + ", ".join(f"{g}:{r}" for g, r in src.gens)]
    for rel in src.relations:
        if isinstance(rel, Pow):
            stmts.append(f"pow {rel.gen}: {format_word(rel.word)}")
        elif isinstance(rel, Conj):
            stmts.append(f"conj {rel.target}^{rel.by} = {format_word(rel.word)}")
        else:
            stmts.append(f"rel {format_word(rel.lhs)} = {format_word(rel.rhs)}")
    stmts.extend(_format_tail(entry))
    return f"group {src.name} {{ " + "; ".join(stmts) + " }"


def format_corpus(entries: list[CorpusEntry]) -> str:
    return "".join(format_entry(e) + "\n" for e in entries)


# ------------------------------------------------------------------- parsing

@dataclass
class _Fragment:
    """A piece of source text with the position of its first character."""

    text: str
    line: int
    col: int

    def error(self, message: str, offset: int = 0, cls=ParseError) -> ParseError:
        return cls(message, self.line, self.col + offset)

    def strip(self) -> "_Fragment":
        lead = len(self.text) - len(self.text.lstrip())
        return _Fragment(self.text.strip(), self.line, self.col + lead)


def _parse_word(frag: _Fragment, gens: tuple[str, ...]) -> Word:
    frag = frag.strip()
    text = frag.text
    if text == "1":
        return ()
    if not text:
        raise frag.error("expected a word")
    letters: list[Letter] = []
    pos = 0
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if not m or m.end() == pos:
            raise frag.error(f"unexpected {text[pos]!r} in word", pos)
        name, exp, short = m.groups()
        if name not in gens:
            raise frag.error(f"undefined generator {name!r}", m.start(1), SemanticError)
        if short is not None:
            letters.append((name, int(short)))
        elif exp is None:
            letters.append((name, 1))
        elif exp.lstrip("-").isdigit():
            letters.append((name, int(exp)))
        else:
            if exp not in gens:
                raise frag.error(f"undefined generator {exp!r}", m.start(2), SemanticError)
            letters.append((name, exp))
        pos = m.end()
    return tuple(letters)


def _parse_expect(frag: _Fragment) -> tuple[tuple[str, str], ...]:
    out = []
    offset = 0
    for item in frag.text.split(","):
        key, sep, value = item.partition("=")
        lead = len(item) - len(item.lstrip())
        if not sep or not key.strip() or not value.strip():
            raise frag.error("expected key=value", offset + lead)
        key = key.strip()
        if key not in FINGERPRINT_FIELDS:
            raise frag.error(f"unknown fingerprint field {key!r}", offset + lead, SemanticError)
        out.append((key, value.strip()))
        offset += len(item) + 1
    return tuple(out)


def _parse_string(frag: _Fragment) -> str:
    frag = frag.strip()
    m = _STRING.fullmatch(frag.text)
    if not m:
        raise frag.error("expected a double-quoted string")
    return json.loads(frag.text)


_STMT = re.compile(r"\s*([a-z]+)\b")


def _statement_keyword(frag: _Fragment) -> tuple[str, _Fragment]:
    m = _STMT.match(frag.text)
    if not m or m.group(1) not in KEYWORDS:
        word = frag.text.strip().split()[0] if frag.text.strip() else ""
        raise frag.strip().error(f"unknown statement {word!r}")
    rest = _Fragment(frag.text[m.end():], frag.line, frag.col + m.end())
    return m.group(1), rest


_GEN = re.compile(rf"\s*({_NAME})\s*:\s*(\d+)\s*$")
_POW = re.compile(rf"\s*({_NAME})\s*:(.*)$")
_CONJ = re.compile(rf"\s*({_NAME})\s*\^\s*({_NAME})\s*=(.*)$")


def _parse_gens(frag: _Fragment) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    offset = 0
    for item in frag.text.split(","):
        m = _GEN.match(item)
        if not m:
            raise frag.error("expected name:order", offset)
        name, order = m.group(1), int(m.group(2))
        if any(name == g for g, _ in out):
            raise frag.error(f"duplicate generator {name!r}", offset + m.start(1), SemanticError)
        if not is_prime_power(order):
            raise frag.error(f"order {order} of {name} is not a prime power", offset + m.start(2), SemanticError)
        out.append((name, order))
        offset += len(item) + 1
    return tuple(out)


def _build_entry(name: str, stmts: list[_Fragment], line: int, head: FamilySpec | None = None) -> CorpusEntry:
    label = None
    expected: tuple[tuple[str, str], ...] = ()
    gens: tuple[tuple[str, int], ...] | None = None
    pending: list[tuple[str, _Fragment]] = []
    for frag in stmts:
        if not frag.text.strip() or frag.text.strip().startswith("#"):
            continue
        kw, rest = _statement_keyword(frag)
        if kw == "label":
            if label is not None:
                raise frag.error("duplicate label")
            label = _parse_string(rest)
        elif kw == "expect":
            expected += _parse_expect(rest)
        elif kw == "gens":
            if head is not None:
                raise frag.error("family entries take no generators")
            if gens is not None:
                raise frag.error("generators are declared twice")
            gens = _parse_gens(rest)
        else:
            if head is not None:
                raise frag.error("family entries take no relations")
            pending.append((kw, rest))
    if head is not None:
        return CorpusEntry(head, label, expected, line)
    if gens is None:
        raise ParseError("missing gens statement", line, 1)
    names = tuple(g for g, _ in gens)
    relations: list[Pow | Conj | Rel] = []
    for kw, rest in pending:
        if kw == "pow":
            m = _POW.match(rest.text)
            if not m:
                raise rest.error("expected 'pow NAME: word'")
            if m.group(1) not in names:
                raise rest.error(f"undefined generator {m.group(1)!r}", m.start(1), SemanticError)
            word = _parse_word(_Fragment(m.group(2), rest.line, rest.col + m.start(2)), names)
            relations.append(Pow(m.group(1), word))
        elif kw == "conj":
            m = _CONJ.match(rest.text)
            if not m:
                raise rest.error("expected 'conj NAME^NAME = word'")
            for k in (1, 2):
                if m.group(k) not in names:
                    raise rest.error(f"undefined generator {m.group(k)!r}", m.start(k), SemanticError)
            if m.group(1) == m.group(2):
                raise rest.error("a generator cannot conjugate itself", m.start(2), SemanticError)
            word = _parse_word(_Fragment(m.group(3), rest.line, rest.col + m.start(3)), names)
            relations.append(Conj(m.group(1), m.group(2), word))
        else:
            lhs, sep, rhs = rest.text.partition("=")
            if not sep:
                raise rest.error("expected 'rel word = word'")
            relations.append(Rel(
                _parse_word(_Fragment(lhs, rest.line, rest.col), names),
                _parse_word(_Fragment(rhs, rest.line, rest.col + len(lhs) + 1), names),
            ))
    src = GroupSource(name, gens, tuple(relations))
    try:
        to_presentation(src)
    except SemanticError as exc:
        raise SemanticError(str(exc), line, 1) from None
    return CorpusEntry(src, label, expected, line)


def _split_statements(text: str, line: int, col: int) -> list[_Fragment]:
    """Split at ';' and newlines outside strings, keeping positions."""
    out = []
    start, start_line, start_col = 0, line, col
    in_string = escaped = False
    for i, ch in enumerate(text):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch in ";\n":
            out.append(_Fragment(text[start:i], start_line, start_col))
            start = i + 1
            if ch == "\n":
                line, col = line + 1, 1
                start_line, start_col = line, col
                continue
            start_line, start_col = line, col + 1
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    out.append(_Fragment(text[start:], start_line, start_col))
    return out


_FAMILY = re.compile(r"family\s+(\S+)")
_GROUP = re.compile(rf"group\s+({_NAME}[A-Za-z_0-9]*)\s*\{{")


def _parse_family(frag: _Fragment) -> CorpusEntry:
    m = _FAMILY.match(frag.text)
    if not m:
        raise frag.error("expected 'family SPEC'")
    try:
        head = parse_spec(m.group(1))
    except SemanticError as exc:
        raise frag.error(str(exc), m.start(1), SemanticError) from None
    except ValueError as exc:
        raise frag.error(str(exc), m.start(1), SemanticError) from None
    tail = frag.text[m.end():]
    t = _FAMILY_TAIL.fullmatch(tail)
    if not t:
        lead = len(tail) - len(tail.lstrip())
        raise frag.error("expected 'label STRING' or 'expect pairs'", m.end() + lead)
    frags = []
    for k in ("label", "expect"):
        if t.group(k) is not None:
            frags.append(_Fragment(f"{k} " + t.group(k), frag.line, frag.col + m.end() + t.start(k) - len(k) - 1))
    return _build_entry(head.text(), frags, frag.line, head=head)


_FAMILY_TAIL = re.compile(r'\s*(?:label\s+(?P<label>"(?:[^"\\]|\\.)*"))?\s*(?:expect\s+(?P<expect>.+?))?\s*')


def _parse_group(frag: _Fragment) -> CorpusEntry:
    m = _GROUP.match(frag.text)
    if not m:
        raise frag.error("expected 'group NAME {'")
    body = frag.text[m.end():]
    close = _closing_brace(body)
    if close is None:
        raise frag.error("missing '}'", len(frag.text))
    if body[close + 1:].strip():
        raise frag.error("unexpected text after '}'", m.end() + close + 1)
    lines_before = frag.text[:m.end()].count("\n")
    col = frag.col + m.end() if lines_before == 0 else m.end() - frag.text[:m.end()].rfind("\n")
    stmts = _split_statements(body[:close], frag.line + lines_before, col)
    return _build_entry(m.group(1), stmts, frag.line)


def _closing_brace(body: str) -> int | None:
    in_string = escaped = False
    for i, ch in enumerate(body):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "}":
            return i
    return None


def parse(text: str) -> CorpusEntry:
    """Parse exactly one entry."""
    chunks = list(split_entries(text))
    if len(chunks) != 1:
        raise ParseError(f"expected one entry, found {len(chunks)}", 1, 1)
    return parse_chunk(chunks[0])


def parse_chunk(frag: _Fragment) -> CorpusEntry:
    stripped = frag.strip()
    head = stripped.text.split(None, 1)[0] if stripped.text else ""
    if head == "family":
        return _parse_family(stripped)
    if head == "group" or head.startswith("group{"):
        return _parse_group(stripped)
    return _build_entry("G", _split_statements(frag.text, frag.line, frag.col), frag.line)


def split_entries(text: str) -> Iterator[_Fragment]:
    """Cut a corpus into per-entry fragments without parsing them.

    A malformed entry stays confined to its own fragment, so callers can
    report it and carry on with the next one.
    """
    lines = text.split("\n")
    i = 0
    while i < len(lines):
        raw = lines[i]
        s = raw.strip()
        if not s or s.startswith("#"):
            i += 1
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        head = s.split(None, 1)[0]
        if head == "family":
            yield _Fragment(raw[col - 1:], i + 1, col)
            i += 1
        elif head == "group" or head.startswith("group{"):
            start = i
            buf = raw[col - 1:]
            while not _group_closed(buf):
                if i + 1 >= len(lines) or _starts_entry(lines[i + 1]):
                    break
                i += 1
                buf += "\n" + lines[i]
            yield _Fragment(buf, start + 1, col)
            i += 1
        else:
            start = i
            buf = [raw]
            i += 1
            while i < len(lines) and lines[i].strip() and not _starts_entry(lines[i]):
                buf.append(lines[i])
                i += 1
            yield _Fragment("\n".join(buf), start + 1, 1)


def _group_closed(text: str) -> bool:
    return "{" in text and _closing_brace(text.split("{", 1)[1]) is not None


def _starts_entry(line: str) -> bool:
    s = line.strip()
    return s.startswith("family") or s.startswith("group")


def parse_corpus(text: str) -> list[CorpusEntry]:
    """Parse every entry; the first malformed one raises."""
    return [parse_chunk(frag) for frag in split_entries(text)]


# --------------------------------------------------- presentation assembly

def _expand(w: Word) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for g, e in w:
        if isinstance(e, str):
            out.extend([(e, -1), (g, 1), (e, 1)])
        else:
            out.append((g, e))
    return out


def _pc_order(src: GroupSource) -> list[str]:
    """Order generators so conjugators come first and relation words only use later generators.

    The declared order is kept whenever it already works.
    """
    names = [g for g, _ in src.gens]
    before: dict[str, set[str]] = {g: set() for g in names}  # g must come after these
    for rel in src.relations:
        if isinstance(rel, Pow):
            for h, _ in _expand(rel.word):
                if h == rel.gen:
                    raise SemanticError(f"power relation of {rel.gen} must not involve {rel.gen}")
                before[h].add(rel.gen)
        elif isinstance(rel, Conj):
            before[rel.target].add(rel.by)
            for h, _ in _expand(rel.word):
                if h == rel.by:
                    raise SemanticError(f"relation {rel.target}^{rel.by} must not involve {rel.by}")
                before[h].add(rel.by)
    order: list[str] = []
    placed: set[str] = set()
    while len(order) < len(names):
        ready = [g for g in names if g not in placed and before[g] <= placed]
        if not ready:
            raise SemanticError("relations admit no polycyclic generator order")
        order.append(ready[0])
        placed.add(ready[0])
    return order


def to_presentation(src: GroupSource) -> PcPresentation:
    order = _pc_order(src)
    rel_order = dict(src.gens)
    idx = {g: i for i, g in enumerate(order)}

    def word(w: Word):
        return tuple((idx[g], e) for g, e in _expand(w))

    pows, conjs, extra = {}, {}, []
    for rel in src.relations:
        if isinstance(rel, Pow):
            if idx[rel.gen] in pows:
                raise SemanticError(f"two power relations for {rel.gen}")
            pows[idx[rel.gen]] = word(rel.word)
        elif isinstance(rel, Conj):
            key = (idx[rel.by], idx[rel.target])
            if key in conjs:
                raise SemanticError(f"two relations for {rel.target}^{rel.by}")
            conjs[key] = word(rel.word)
        else:
            extra.append((word(rel.lhs), word(rel.rhs)))
    return PcPresentation(tuple(order), tuple(rel_order[g] for g in order), pows, conjs,
                          tuple(extra), name=src.name)


__all__ = [
    "Conj",
    "CorpusEntry",
    "GroupSource",
    "Pow",
    "Rel",
    "format_corpus",
    "format_entry",
    "format_word",
    "parse",
    "parse_chunk",
    "parse_corpus",
    "split_entries",
    "to_presentation",
]
