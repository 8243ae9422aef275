"""Apply an assignment to every construct and account for the outcome.

Each construct is transformed through the exact match in its assigned
block when one exists; otherwise the whole knowledge base is searched for
the nearest match above the threshold, whose targets are emitted with
unbound placeholders replaced by the literal ``TODO``; otherwise the
construct is left unmatched.  The emitted predicates go into a
``Predicates`` text file whose comment annotations keep enough context to
rebuild the code-generation accounting without re-reading the models.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import SearchError
from .knowledge import KnowledgeBase, MatchKind, best_match_in_kb, find_exact_in_block
from .predicates import (
    TODO_LITERAL,
    MappingBlock,
    ModelConstruct,
    Predicate,
    _LineScanner,
    serialize_predicate,
)
from .search import SearchOutcome


class OutcomeStatus(str, Enum):
    EXACT = "exact"
    NEAREST = "nearest"
    UNMATCHED = "unmatched"


@dataclass(frozen=True)
class ConstructOutcome:
    construct_index: int
    construct: Predicate
    status: OutcomeStatus
    score: float | None  # nearest only: the match score that was applied
    used_block: int | None
    used_entry: int | None
    code_predicates: tuple[Predicate, ...]


@dataclass(frozen=True)
class MismatchDetail:
    """One report row for a construct without an exact match in its block."""

    construct_text: str
    assigned_block: int
    best_score: float
    suggested_block: int | None
    suggested_entry: int | None


@dataclass(frozen=True)
class TransformReport:
    construct_count: int
    block_count: int
    best_fitness: float
    assignment: tuple[int, ...]
    evaluations: int
    mismatch_details: tuple[MismatchDetail, ...]


def transform_one(
    c: ModelConstruct,
    assigned_block: MappingBlock,
    kb: KnowledgeBase,
    theta: float,
) -> ConstructOutcome:
    """Transform a single construct through its assigned block."""
    exact = find_exact_in_block(c, assigned_block)
    if exact is not None:
        entry = assigned_block.entries[exact.entry_ordinal]
        code = tuple(exact.substitution.apply(t, unbound=TODO_LITERAL) for t in entry.targets)
        return ConstructOutcome(
            c.index, c.predicate, OutcomeStatus.EXACT, None,
            assigned_block.id, exact.entry_ordinal, code,
        )
    best = best_match_in_kb(c, kb)
    if best is not None and best.score >= theta and best.kind is not MatchKind.NONE:
        entry = kb.entry(best.block_id, best.entry_ordinal)
        code = tuple(best.substitution.apply(t, unbound=TODO_LITERAL) for t in entry.targets)
        return ConstructOutcome(
            c.index, c.predicate, OutcomeStatus.NEAREST, best.score,
            best.block_id, best.entry_ordinal, code,
        )
    return ConstructOutcome(c.index, c.predicate, OutcomeStatus.UNMATCHED, None, None, None, ())


def transform_all(
    constructs: list[ModelConstruct],
    outcome: SearchOutcome,
    kb: KnowledgeBase,
    theta: float,
) -> tuple[list[ConstructOutcome], TransformReport]:
    """Transform every construct and assemble the step-3 report."""
    assignment = outcome.best.block_ids
    if len(assignment) != len(constructs):
        raise SearchError(
            f"assignment length {len(assignment)} != construct count {len(constructs)}"
        )
    outcomes = [
        transform_one(c, kb.block(block_id), kb, theta)
        for c, block_id in zip(constructs, assignment)
    ]
    mismatches = []
    for c, o, block_id in zip(constructs, outcomes, assignment):
        if o.status is OutcomeStatus.EXACT:
            continue
        best = best_match_in_kb(c, kb)
        best_score = best.score if best is not None else 0.0
        if o.status is OutcomeStatus.NEAREST:
            suggestion = (o.used_block, o.used_entry)
        else:
            suggestion = (None, None)
        mismatches.append(
            MismatchDetail(serialize_predicate(c.predicate), block_id, best_score, *suggestion)
        )
    report = TransformReport(
        construct_count=len(constructs),
        block_count=kb.block_count,
        best_fitness=outcome.best_fitness,
        assignment=assignment,
        evaluations=outcome.evaluations,
        mismatch_details=tuple(mismatches),
    )
    return outcomes, report


def write_predicates_file(outcomes: list[ConstructOutcome]) -> str:
    """Render the ``Predicates`` file: code predicates in construct order.

    Nearest-derived groups are introduced by a ``% nearest`` comment naming
    the source construct and closed by a blank line; unmatched constructs
    leave a single ``% unmatched`` comment.
    """
    lines: list[str] = []
    for o in outcomes:
        if o.status is OutcomeStatus.EXACT:
            lines.extend(serialize_predicate(p) for p in o.code_predicates)
        elif o.status is OutcomeStatus.NEAREST:
            lines.append(f"% nearest (score={o.score:.4f}): {serialize_predicate(o.construct)}")
            lines.extend(serialize_predicate(p) for p in o.code_predicates)
            lines.append("")
        else:
            lines.append(f"% unmatched: {serialize_predicate(o.construct)}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CodeGroup:
    """A slice of the ``Predicates`` file attributable to one origin."""

    origin: OutcomeStatus
    predicates: tuple[Predicate, ...]
    score: float | None = None  # nearest groups only
    construct_text: str | None = None  # nearest and unmatched groups


def groups_from_outcomes(outcomes: list[ConstructOutcome]) -> list[CodeGroup]:
    """In-memory equivalent of writing and re-reading the Predicates file."""
    groups = []
    for o in outcomes:
        if o.status is OutcomeStatus.EXACT:
            groups.append(CodeGroup(OutcomeStatus.EXACT, o.code_predicates))
        elif o.status is OutcomeStatus.NEAREST:
            groups.append(
                CodeGroup(
                    OutcomeStatus.NEAREST,
                    o.code_predicates,
                    o.score,
                    serialize_predicate(o.construct),
                )
            )
        else:
            groups.append(
                CodeGroup(OutcomeStatus.UNMATCHED, (), None, serialize_predicate(o.construct))
            )
    return groups


_NEAREST_RE = re.compile(r"%\s*nearest \(score=([0-9.]+)\): (.+)$")
_UNMATCHED_RE = re.compile(r"%\s*unmatched: (.+)$")


def read_predicates_file(text: str) -> list[CodeGroup]:
    """Parse a ``Predicates`` file back into annotated predicate groups."""
    groups: list[CodeGroup] = []
    exact_run: list[Predicate] = []
    nearest: tuple[float, str] | None = None
    nearest_preds: list[Predicate] = []

    def flush_exact():
        nonlocal exact_run
        if exact_run:
            groups.append(CodeGroup(OutcomeStatus.EXACT, tuple(exact_run)))
            exact_run = []

    def flush_nearest():
        nonlocal nearest, nearest_preds
        if nearest is not None:
            score, construct_text = nearest
            groups.append(
                CodeGroup(OutcomeStatus.NEAREST, tuple(nearest_preds), score, construct_text)
            )
            nearest = None
            nearest_preds = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            flush_nearest()
            continue
        if stripped.startswith("%"):
            m = _NEAREST_RE.match(stripped)
            if m:
                flush_nearest()
                flush_exact()
                nearest = (float(m.group(1)), m.group(2))
                continue
            m = _UNMATCHED_RE.match(stripped)
            if m:
                flush_nearest()
                flush_exact()
                groups.append(CodeGroup(OutcomeStatus.UNMATCHED, (), None, m.group(1)))
            continue
        sc = _LineScanner(line, line_no)
        predicate = sc.parse_predicate()
        sc.expect(".")
        sc.end_of_line()
        if nearest is not None:
            nearest_preds.append(predicate)
        else:
            exact_run.append(predicate)
    flush_nearest()
    flush_exact()
    return groups


def _format_suggestion(row: MismatchDetail) -> str:
    if row.suggested_block is None:
        return "no suggestion"
    return f"suggestion: block {row.suggested_block} entry {row.suggested_entry}"


def write_transform_report(report: TransformReport) -> str:
    """Plain-text step-3 report: six numbered sections, stable formatting."""
    lines = [
        f"1. Input model constructs: {report.construct_count}",
        f"2. Mapping blocks: {report.block_count}",
        f"3. Best fitness: {report.best_fitness:.4f}",
        "4. Assignment (construct -> block):",
    ]
    lines.extend(f"   {i}: {block_id}" for i, block_id in enumerate(report.assignment))
    lines.append(f"5. Fitness evaluations: {report.evaluations}")
    lines.append("6. Constructs without an exact match in the assigned block:")
    if report.mismatch_details:
        lines.extend(
            f"   {row.construct_text} | assigned block {row.assigned_block}"
            f" | best score {row.best_score:.4f} | {_format_suggestion(row)}"
            for row in report.mismatch_details
        )
    else:
        lines.append("   none")
    return "\n".join(lines) + "\n"
