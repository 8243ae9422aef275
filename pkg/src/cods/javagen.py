"""Render code predicates into Java source files, one per class.

The recognized vocabulary is closed: java_class/1, java_extends/2,
java_field/3, java_method/3, java_param/4, java_stmt/4 (Seq, Code),
java_state_enum/2, java_initial_state/2 and java_transition/4
(Event, From, To).  Anything else is kept as an ``// UNMAPPED`` comment
and reported, never dropped.  State machines render as a nested ``State``
enum plus a ``handleEvent(String)`` dispatch method that reassigns
``currentState``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import CodegenError
from .predicates import Arg, Literal, Placeholder, Predicate, serialize_predicate
from .transform import CodeGroup, OutcomeStatus

KNOWN_PREDICATES: dict[str, int] = {
    "java_class": 1,
    "java_extends": 2,
    "java_field": 3,
    "java_method": 3,
    "java_param": 4,
    "java_stmt": 4,
    "java_state_enum": 2,
    "java_initial_state": 2,
    "java_transition": 4,
}

UNMAPPED_CLASS = "_Unmapped"

REASON_PARTIAL = "partial"
REASON_NO_MATCH = "no-match"
REASON_UNKNOWN = "unknown-predicate"
REASON_SYNTHESIZED = "synthesized-class"


@dataclass(frozen=True)
class SourceFile:
    filename: str
    content: str


@dataclass(frozen=True)
class CodegenRow:
    text: str
    reason: str
    filename: str | None


@dataclass(frozen=True)
class CodegenReport:
    rows: tuple[CodegenRow, ...]


def _text(arg: Arg) -> str:
    """Raw Java-side text of an argument (string literals unquoted)."""
    if isinstance(arg, Placeholder):
        return str(arg)
    if isinstance(arg.value, int):
        return str(arg.value)
    return arg.value


def _jstr(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


@dataclass
class _Method:
    name: str
    ret: str
    params: list[tuple[str, str]] = field(default_factory=list)  # (name, type)
    stmts: list[tuple[bool, int, str]] = field(default_factory=list)  # (seq missing, seq, code)


@dataclass
class _Class:
    name: str
    declared: bool = False
    extends: str | None = None
    states: list[str] = field(default_factory=list)
    initial: str | None = None
    transitions: list[tuple[str, str, str]] = field(default_factory=list)  # event, from, to
    fields: list[tuple[str, str]] = field(default_factory=list)  # (name, type)
    methods: dict[str, _Method] = field(default_factory=dict)
    method_order: list[str] = field(default_factory=list)
    unmapped: list[str] = field(default_factory=list)

    def method(self, name: str, ret: str | None = None) -> _Method:
        m = self.methods.get(name)
        if m is None:
            m = _Method(name, ret or "void")
            self.methods[name] = m
            self.method_order.append(name)
        elif ret is not None:
            m.ret = ret
        return m

    def add_state(self, state: str):
        if state not in self.states:
            self.states.append(state)

    @property
    def has_state_machine(self) -> bool:
        return bool(self.states or self.initial or self.transitions)


class _Model:
    def __init__(self, declared: set[str]):
        self._declared = declared
        self.classes: dict[str, _Class] = {}
        self.order: list[str] = []
        self.rows: list[CodegenRow] = []

    def cls(self, name: str, trigger: Predicate | None = None) -> _Class:
        c = self.classes.get(name)
        if c is None:
            c = _Class(name, declared=name in self._declared)
            self.classes[name] = c
            self.order.append(name)
            if not c.declared and trigger is not None:
                self.rows.append(
                    CodegenRow(serialize_predicate(trigger), REASON_SYNTHESIZED, f"{name}.java")
                )
        return c


def _dispatch(model: _Model, p: Predicate) -> str | None:
    """Accumulate one known predicate; returns the owning file name."""
    args = [_text(a) for a in p.args]
    name = p.name
    if name == "java_class":
        cls = model.cls(args[0])
        cls.declared = True
        return f"{cls.name}.java"
    cls = model.cls(args[0], trigger=p)
    if name == "java_extends":
        if cls.extends is not None and cls.extends != args[1]:
            raise CodegenError(
                f"class {cls.name} extends both {cls.extends} and {args[1]}"
            )
        cls.extends = args[1]
    elif name == "java_field":
        cls.fields.append((args[1], args[2]))
    elif name == "java_method":
        cls.method(args[1], ret=args[2])
    elif name == "java_param":
        cls.method(args[1]).params.append((args[2], args[3]))
    elif name == "java_stmt":
        seq_arg = p.args[2]
        if isinstance(seq_arg, Literal) and isinstance(seq_arg.value, int):
            cls.method(args[1]).stmts.append((False, seq_arg.value, args[3]))
        else:
            cls.method(args[1]).stmts.append((True, 0, args[3]))
    elif name == "java_state_enum":
        cls.add_state(args[1])
    elif name == "java_initial_state":
        if cls.initial is not None and cls.initial != args[1]:
            raise CodegenError(
                f"class {cls.name} has conflicting initial states"
                f" {cls.initial} and {args[1]}"
            )
        cls.initial = args[1]
        cls.add_state(args[1])
    elif name == "java_transition":
        event, src, dst = args[1], args[2], args[3]
        cls.transitions.append((event, src, dst))
        cls.add_state(src)
        cls.add_state(dst)
    return f"{cls.name}.java"


def _render_handle_event(cls: _Class) -> list[str]:
    lines = ["    public void handleEvent(String event) {"]
    dispatch_states = [s for s in cls.states if any(t[1] == s for t in cls.transitions)]
    for i, state in enumerate(dispatch_states):
        opener = "if" if i == 0 else "} else if"
        lines.append(f"        {opener} (currentState == State.{state}) {{")
        outgoing = [t for t in cls.transitions if t[1] == state]
        for j, (event, _, dst) in enumerate(outgoing):
            kw = "if" if j == 0 else "} else if"
            lines.append(f"            {kw} (event.equals({_jstr(event)})) {{")
            lines.append(f"                currentState = State.{dst};")
        lines.append("            }")
    if dispatch_states:
        lines.append("        }")
    lines.append("    }")
    return lines


def _render_method(m: _Method) -> list[str]:
    params = ", ".join(f"{ptype} {pname}" for pname, ptype in m.params)
    lines = [f"    public {m.ret} {m.name}({params}) {{"]
    for _, _, code in sorted(m.stmts, key=lambda s: (s[0], s[1])):
        lines.append(f"        {code}")
    lines.append("    }")
    return lines


def _render_class(cls: _Class) -> str:
    head = f"public class {cls.name}"
    if cls.extends:
        head += f" extends {cls.extends}"
    sections: list[list[str]] = []
    if cls.has_state_machine:
        enum_lines = ["    public enum State {"]
        for i, state in enumerate(cls.states):
            comma = "," if i < len(cls.states) - 1 else ""
            enum_lines.append(f"        {state}{comma}")
        enum_lines.append("    }")
        sections.append(enum_lines)
        initial = cls.initial or cls.states[0]
        sections.append([f"    private State currentState = State.{initial};"])
    if cls.fields:
        sections.append([f"    private {ftype} {fname};" for fname, ftype in cls.fields])
    if cls.has_state_machine:
        sections.append(_render_handle_event(cls))
    for name in cls.method_order:
        sections.append(_render_method(cls.methods[name]))
    if cls.unmapped:
        sections.append([f"    // UNMAPPED: {text}" for text in cls.unmapped])
    body = "\n\n".join("\n".join(s) for s in sections)
    if body:
        return f"{head} {{\n{body}\n}}\n"
    return f"{head} {{\n}}\n"


def render_files(groups: list[CodeGroup]) -> tuple[list[SourceFile], CodegenReport]:
    """Render annotated code predicates into Java files plus the report.

    Unknown predicates become ``// UNMAPPED`` comments in the file of
    their first argument when that names a declared class, otherwise in
    ``_Unmapped.java``; classes referenced by members without a
    ``java_class`` declaration are synthesized.  Every nearest or
    unmatched group and every unknown predicate yields one report row.
    """
    declared = {
        _text(p.args[0])
        for g in groups
        for p in g.predicates
        if p.name == "java_class" and p.arity == 1
    }
    model = _Model(declared)
    for group in groups:
        group_file: str | None = None
        todo_rows: list[tuple[str, str]] = []
        for p in group.predicates:
            if KNOWN_PREDICATES.get(p.name) == p.arity:
                owner = _dispatch(model, p)
                if group.origin is OutcomeStatus.EXACT and _mentions_todo(p):
                    todo_rows.append((serialize_predicate(p), owner))
            else:
                text = serialize_predicate(p)
                if p.arity >= 1 and isinstance(p.args[0], Literal) and _text(p.args[0]) in declared:
                    target = model.cls(_text(p.args[0]))
                else:
                    target = model.cls(UNMAPPED_CLASS)
                target.unmapped.append(text)
                owner = f"{target.name}.java"
                model.rows.append(CodegenRow(text, REASON_UNKNOWN, owner))
            if group_file is None:
                group_file = owner
        if group.origin is OutcomeStatus.NEAREST:
            model.rows.append(CodegenRow(group.construct_text, REASON_PARTIAL, group_file))
        elif group.origin is OutcomeStatus.UNMATCHED:
            model.rows.append(CodegenRow(group.construct_text, REASON_NO_MATCH, None))
        else:
            model.rows.extend(CodegenRow(t, REASON_PARTIAL, f) for t, f in todo_rows)
    order = [n for n in model.order if n != UNMAPPED_CLASS]
    if UNMAPPED_CLASS in model.classes:
        order.append(UNMAPPED_CLASS)
    files = [SourceFile(f"{name}.java", _render_class(model.classes[name])) for name in order]
    return files, CodegenReport(tuple(model.rows))


def _mentions_todo(p: Predicate) -> bool:
    return any(isinstance(a, Literal) and a.value == "TODO" and not a.quoted for a in p.args)


def write_codegen_report(report: CodegenReport) -> str:
    """Step-4 report: one header line, then rows sorted by file and text."""
    lines = ["file | reason | construct/predicate"]
    for row in sorted(report.rows, key=lambda r: (r.filename or "", r.text)):
        lines.append(f"{row.filename or '-'} | {row.reason} | {row.text}")
    return "\n".join(lines) + "\n"


def _strip_strings_and_comments(code: str) -> str:
    out: list[str] = []
    i = 0
    n = len(code)
    while i < n:
        ch = code[i]
        if ch == '"' or ch == "'":
            quote = ch
            i += 1
            while i < n and code[i] != quote:
                i += 2 if code[i] == "\\" else 1
            i += 1
        elif code.startswith("//", i):
            while i < n and code[i] != "\n":
                i += 1
        elif code.startswith("/*", i):
            end = code.find("*/", i + 2)
            i = n if end < 0 else end + 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def check_structure(f: SourceFile) -> list[str]:
    """Structural problems of a rendered file; empty list means clean."""
    problems = []
    code = _strip_strings_and_comments(f.content)
    if code.count("{") != code.count("}"):
        problems.append("unbalanced braces")
    if code.count("(") != code.count(")"):
        problems.append("unbalanced parentheses")
    classes = re.findall(r"^public class ([A-Za-z_][A-Za-z0-9_]*)", f.content, re.M)
    stem = f.filename.removesuffix(".java")
    if len(classes) != 1:
        problems.append(f"expected one top-level class, found {len(classes)}")
    elif classes[0] != stem:
        problems.append(f"class {classes[0]} does not match file name {f.filename}")
    if "$" in f.content:
        problems.append("contains '$'")
    return problems
