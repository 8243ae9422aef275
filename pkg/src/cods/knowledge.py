"""Knowledge base of mapping blocks and construct-to-entry match scoring.

A match between an input construct and an entry source pattern is scored
positionally: position k counts when the pattern holds a placeholder there
(bound consistently across the pattern) or when both sides carry the same
literal, and the sum is divided by the larger arity.  Score 1.0 is an
exact match, 0.0 is no match at all, anything between is partial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import KnowledgeBaseError
from .predicates import Arg, Literal, MappingBlock, MappingEntry, ModelConstruct, Placeholder, Predicate


class MatchKind(str, Enum):
    EXACT = "exact"
    PARTIAL = "partial"
    NONE = "none"


@dataclass(frozen=True)
class Substitution:
    """Placeholder-name to argument bindings produced by a match."""

    bindings: dict[str, Arg] = field(default_factory=dict)

    def apply(self, predicate: Predicate, unbound: Arg | None = None) -> Predicate:
        """Replace the predicate's placeholders by their bound values.

        Unbound placeholders become ``unbound`` when given, otherwise raise.
        """
        args: list[Arg] = []
        for a in predicate.args:
            if isinstance(a, Placeholder):
                value = self.bindings.get(a.name, unbound)
                if value is None:
                    raise KeyError(f"unbound placeholder ${a.name}")
                args.append(value)
            else:
                args.append(a)
        return Predicate(predicate.name, tuple(args))


@dataclass(frozen=True)
class MatchResult:
    kind: MatchKind
    score: float
    substitution: Substitution
    block_id: int | None = None
    entry_ordinal: int | None = None


@dataclass(frozen=True)
class KnowledgeBase:
    """Mapping blocks ordered by id, with a per-entry (name, arity) index."""

    blocks: tuple[MappingBlock, ...]
    index: dict[tuple[str, int], tuple[tuple[int, int], ...]]
    _by_id: dict[int, MappingBlock]
    _by_name: dict[str, tuple[tuple[int, int], ...]]

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def block_ids(self) -> tuple[int, ...]:
        """All block ids in ascending order (the decode order for search)."""
        return tuple(b.id for b in self.blocks)

    def block(self, block_id: int) -> MappingBlock:
        try:
            return self._by_id[block_id]
        except KeyError:
            raise KnowledgeBaseError(f"unknown block id {block_id}") from None

    def entry(self, block_id: int, ordinal: int) -> MappingEntry:
        return self.block(block_id).entries[ordinal]


def build_kb(blocks: list[MappingBlock]) -> KnowledgeBase:
    """Index parsed blocks into a queryable knowledge base."""
    if not blocks:
        raise KnowledgeBaseError("empty block list")
    by_id: dict[int, MappingBlock] = {}
    for b in blocks:
        if b.id in by_id:
            raise KnowledgeBaseError(f"duplicate block id {b.id}")
        by_id[b.id] = b
    ordered = tuple(sorted(blocks, key=lambda b: b.id))
    index: dict[tuple[str, int], list[tuple[int, int]]] = {}
    by_name: dict[str, list[tuple[int, int]]] = {}
    for b in ordered:
        for ordinal, entry in enumerate(b.entries):
            posting = (b.id, ordinal)
            index.setdefault((entry.source.name, entry.source.arity), []).append(posting)
            by_name.setdefault(entry.source.name, []).append(posting)
    return KnowledgeBase(
        blocks=ordered,
        index={k: tuple(v) for k, v in index.items()},
        _by_id=by_id,
        _by_name={k: tuple(v) for k, v in by_name.items()},
    )


def match_score(
    c: ModelConstruct,
    e: MappingEntry,
    block_id: int | None = None,
    entry_ordinal: int | None = None,
) -> MatchResult:
    """Score one construct against one entry source pattern.

    Positions are compared up to the smaller arity and the match count is
    divided by the larger arity.  Placeholders bind first-wins: a later
    occurrence that disagrees with its binding scores 0 at that position,
    which also rules the match out of being exact.
    """
    pattern = e.source
    predicate = c.predicate
    sub = Substitution()
    if pattern.name != predicate.name:
        return MatchResult(MatchKind.NONE, 0.0, sub, block_id, entry_ordinal)
    max_arity = max(pattern.arity, predicate.arity)
    if max_arity == 0:
        return MatchResult(MatchKind.EXACT, 1.0, sub, block_id, entry_ordinal)
    matched = 0
    for pat_arg, in_arg in zip(pattern.args, predicate.args):
        if isinstance(pat_arg, Placeholder):
            bound = sub.bindings.get(pat_arg.name)
            if bound is None:
                sub.bindings[pat_arg.name] = in_arg
                matched += 1
            elif bound == in_arg:
                matched += 1
        elif isinstance(in_arg, Literal) and pat_arg == in_arg:
            matched += 1
    score = matched / max_arity
    if matched == max_arity:
        kind = MatchKind.EXACT
    elif matched == 0:
        kind = MatchKind.NONE
    else:
        kind = MatchKind.PARTIAL
    return MatchResult(kind, score, sub, block_id, entry_ordinal)


def find_exact_in_block(c: ModelConstruct, b: MappingBlock) -> MatchResult | None:
    """First entry of the block (file order) that matches exactly, if any."""
    for ordinal, entry in enumerate(b.entries):
        result = match_score(c, entry, b.id, ordinal)
        if result.kind is MatchKind.EXACT:
            return result
    return None


def best_match_in_kb(c: ModelConstruct, kb: KnowledgeBase) -> MatchResult | None:
    """Highest-scoring entry over the whole knowledge base, if any score
    is above zero.  Ties keep the lower block id, then entry ordinal."""
    best: MatchResult | None = None
    for block_id, ordinal in kb._by_name.get(c.predicate.name, ()):
        result = match_score(c, kb.entry(block_id, ordinal), block_id, ordinal)
        if result.score > (best.score if best is not None else 0.0):
            best = result
            if best.kind is MatchKind.EXACT:
                break
    return best


def find_nearest_in_kb(c: ModelConstruct, kb: KnowledgeBase, theta: float) -> MatchResult | None:
    """Best match across the whole knowledge base, if it clears ``theta``."""
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    best = best_match_in_kb(c, kb)
    if best is None or best.score < theta:
        return None
    return best
