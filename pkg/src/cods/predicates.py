"""Predicate data model and the two text formats (models and mapping blocks).

A model file holds one predicate per line, each terminated by ``.``;
``%`` starts a comment that runs to the end of the line.  A training file
groups ``map: <source> => <target>[; <target>]*.`` lines between
``block <id>`` and ``endblock`` lines.  Placeholder arguments are written
``$Name`` and only carry meaning inside mapping entries; everything else
is a literal (identifier, base-10 integer, or double-quoted string).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import LintWarning, PredicateSyntaxError

_NAME_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"-?[0-9]+")


@dataclass(frozen=True)
class Placeholder:
    """A ``$``-marked argument that unifies with any input argument."""

    name: str

    def __post_init__(self):
        if not _IDENT_RE.fullmatch(self.name):
            raise ValueError(f"invalid placeholder name {self.name!r}")

    def __str__(self) -> str:
        return "$" + self.name


@dataclass(frozen=True)
class Literal:
    """A concrete argument: identifier, integer, or quoted string."""

    value: Union[str, int]
    quoted: bool = False

    def __post_init__(self):
        if isinstance(self.value, str):
            if self.quoted:
                if "\n" in self.value:
                    raise ValueError("quoted strings cannot contain newlines")
            elif not _IDENT_RE.fullmatch(self.value):
                raise ValueError(f"invalid identifier literal {self.value!r}")
        elif self.quoted:
            raise ValueError("integer literals cannot be quoted")

    def __str__(self) -> str:
        if isinstance(self.value, int):
            return str(self.value)
        if self.quoted:
            escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.value


Arg = Union[Placeholder, Literal]

TODO_LITERAL = Literal("TODO")


@dataclass(frozen=True)
class Predicate:
    """A named term with positional arguments (arity may be 0)."""

    name: str
    args: tuple[Arg, ...] = ()

    def __post_init__(self):
        if not _NAME_RE.fullmatch(self.name):
            raise ValueError(f"invalid predicate name {self.name!r}")

    @property
    def arity(self) -> int:
        return len(self.args)

    def has_placeholders(self) -> bool:
        return any(isinstance(a, Placeholder) for a in self.args)

    def placeholder_names(self) -> set[str]:
        return {a.name for a in self.args if isinstance(a, Placeholder)}

    def __str__(self) -> str:
        return serialize_predicate(self)


@dataclass(frozen=True)
class MappingEntry:
    """One training pair: a source pattern and its target code predicates."""

    source: Predicate
    targets: tuple[Predicate, ...]

    def __post_init__(self):
        if not self.targets:
            raise ValueError("mapping entry needs at least one target")


@dataclass(frozen=True)
class MappingBlock:
    """A numbered group of mapping entries from one training example."""

    id: int
    entries: tuple[MappingEntry, ...]

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"block id must be positive, got {self.id}")
        if not self.entries:
            raise ValueError(f"block {self.id} has no entries")


@dataclass(frozen=True)
class ModelConstruct:
    """One predicate of the input model, numbered in file order."""

    index: int
    predicate: Predicate


class _LineScanner:
    """Cursor over a single source line with 1-based error positions."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.line_no = line_no
        self.pos = 0

    def error(self, message: str) -> PredicateSyntaxError:
        return PredicateSyntaxError(message, self.line_no, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def done(self) -> bool:
        """True once only trailing whitespace or a comment remains."""
        self.skip_ws()
        return self.pos >= len(self.text) or self.text[self.pos] == "%"

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token: str):
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

    def match_re(self, pattern: re.Pattern[str]) -> str | None:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if m is None:
            return None
        self.pos = m.end()
        return m.group()

    def end_of_line(self):
        if not self.done():
            raise self.error("unexpected text after end of statement")

    def parse_string(self) -> str:
        # opening quote already consumed by the caller
        chars: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated string")
            ch = self.text[self.pos]
            self.pos += 1
            if ch == '"':
                return "".join(chars)
            if ch == "\\":
                if self.pos >= len(self.text):
                    raise self.error("unterminated string")
                esc = self.text[self.pos]
                if esc not in ('"', "\\"):
                    raise self.error(f"unsupported escape '\\{esc}'")
                chars.append(esc)
                self.pos += 1
            else:
                chars.append(ch)

    def parse_arg(self) -> Arg:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise self.error("expected an argument")
        ch = self.text[self.pos]
        if ch == "$":
            self.pos += 1
            name = self.match_re(_IDENT_RE)
            if name is None:
                raise self.error("expected a placeholder name after '$'")
            return Placeholder(name)
        if ch == '"':
            self.pos += 1
            return Literal(self.parse_string(), quoted=True)
        value = self.match_re(_INT_RE)
        if value is not None:
            return Literal(int(value))
        ident = self.match_re(_IDENT_RE)
        if ident is not None:
            return Literal(ident)
        raise self.error(f"unexpected character {ch!r}")

    def parse_predicate(self) -> Predicate:
        self.skip_ws()
        start = self.pos
        name = self.match_re(_NAME_RE)
        if name is None:
            if self.match_re(_IDENT_RE):
                self.pos = start
                raise self.error("predicate name must start with a lowercase letter")
            raise self.error("expected a predicate name")
        if self.peek() != "(":
            return Predicate(name)
        self.expect("(")
        args = [self.parse_arg()]
        while self.peek() == ",":
            self.expect(",")
            args.append(self.parse_arg())
        self.expect(")")
        return Predicate(name, tuple(args))


def parse_predicate(text: str) -> Predicate:
    """Parse a single predicate, with or without the terminating dot."""
    sc = _LineScanner(text, 1)
    predicate = sc.parse_predicate()
    if sc.peek() == ".":
        sc.expect(".")
    sc.end_of_line()
    return predicate


def parse_predicates(text: str) -> list[ModelConstruct]:
    """Parse a model file into constructs numbered 0..N-1 in file order.

    Placeholders are accepted syntactically but raise a :class:`LintWarning`,
    since input models are expected to be fully concrete.
    """
    constructs: list[ModelConstruct] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        sc = _LineScanner(line, line_no)
        if sc.done():
            continue
        predicate = sc.parse_predicate()
        sc.expect(".")
        sc.end_of_line()
        if predicate.has_placeholders():
            warnings.warn(
                f"line {line_no}: placeholder in input model: {predicate}",
                LintWarning,
                stacklevel=2,
            )
        constructs.append(ModelConstruct(len(constructs), predicate))
    return constructs


def _parse_map_line(sc: _LineScanner) -> MappingEntry:
    sc.expect("map")
    sc.expect(":")
    source = sc.parse_predicate()
    sc.expect("=>")
    targets = [sc.parse_predicate()]
    while sc.peek() == ";":
        sc.expect(";")
        targets.append(sc.parse_predicate())
    sc.expect(".")
    sc.end_of_line()
    entry = MappingEntry(source, tuple(targets))
    unbound = set().union(*(t.placeholder_names() for t in targets)) - source.placeholder_names()
    if unbound:
        names = ", ".join("$" + n for n in sorted(unbound))
        warnings.warn(
            f"line {sc.line_no}: target placeholders not bound by the source: {names}",
            LintWarning,
            stacklevel=3,
        )
    return entry


def parse_mapping_blocks(text: str) -> list[MappingBlock]:
    """Parse a training file into its mapping blocks, ids kept as written."""
    blocks: list[MappingBlock] = []
    seen_ids: set[int] = set()
    current_id: int | None = None
    entries: list[MappingEntry] = []
    last_line = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        last_line = line_no
        sc = _LineScanner(line, line_no)
        if sc.done():
            continue
        keyword = sc.match_re(_NAME_RE)
        if keyword == "block":
            if current_id is not None:
                raise sc.error(f"'block' inside block {current_id} (missing 'endblock'?)")
            raw = sc.match_re(_INT_RE)
            if raw is None:
                raise sc.error("expected a block id")
            sc.end_of_line()
            block_id = int(raw)
            if block_id < 1:
                raise sc.error(f"block id must be positive, got {block_id}")
            if block_id in seen_ids:
                raise sc.error(f"duplicate block id {block_id}")
            seen_ids.add(block_id)
            current_id = block_id
            entries = []
        elif keyword == "endblock":
            sc.end_of_line()
            if current_id is None:
                raise sc.error("'endblock' outside a block")
            if not entries:
                raise sc.error(f"block {current_id} has no entries")
            blocks.append(MappingBlock(current_id, tuple(entries)))
            current_id = None
        elif keyword == "map":
            if current_id is None:
                raise sc.error("'map:' outside a block")
            sc.pos = 0
            entries.append(_parse_map_line(sc))
        else:
            raise sc.error("expected 'block', 'map:' or 'endblock'")
    if current_id is not None:
        raise PredicateSyntaxError(f"missing 'endblock' for block {current_id}", last_line + 1, 1)
    return blocks


def format_predicate(p: Predicate) -> str:
    """Canonical text of a predicate without the terminating dot."""
    if not p.args:
        return p.name
    return f"{p.name}({', '.join(str(a) for a in p.args)})"


def serialize_predicate(p: Predicate) -> str:
    """Canonical ``name(arg1, arg2).`` form (``name.`` at arity 0)."""
    return format_predicate(p) + "."


def serialize_model(constructs: Iterable[ModelConstruct]) -> str:
    """Model-file text for a sequence of constructs, one per line."""
    return "".join(serialize_predicate(c.predicate) + "\n" for c in constructs)


def format_entry(entry: MappingEntry) -> str:
    targets = "; ".join(format_predicate(t) for t in entry.targets)
    return f"map: {format_predicate(entry.source)} => {targets}."


def serialize_mapping_block(block: MappingBlock) -> str:
    lines = [f"block {block.id}"]
    lines.extend(format_entry(e) for e in block.entries)
    lines.append("endblock")
    return "\n".join(lines) + "\n"


def serialize_mapping_blocks(blocks: Iterable[MappingBlock]) -> str:
    """Training-file text for a sequence of blocks, blank line between blocks."""
    return "\n".join(serialize_mapping_block(b) for b in blocks)
