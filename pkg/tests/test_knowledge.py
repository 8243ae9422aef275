"""Knowledge-base construction and match scoring."""

import random

import pytest

from cods import (
    KnowledgeBaseError,
    Literal,
    MappingBlock,
    MappingEntry,
    MatchKind,
    ModelConstruct,
    Predicate,
    best_match_in_kb,
    build_kb,
    find_exact_in_block,
    find_nearest_in_kb,
    match_score,
    parse_mapping_blocks,
    parse_predicate,
    parse_predicates,
)
from genlib import random_ground_predicate, random_mapping_blocks, random_predicate


def construct(text):
    return parse_predicates(text)[0]


def entry(source, *targets):
    targets = targets or ("java_x.",)
    text = f"block 1\nmap: {source.rstrip('.')} => " + "; ".join(t.rstrip(".") for t in targets) + ".\nendblock"
    return parse_mapping_blocks(text)[0].entries[0]


def block(block_id, *map_lines):
    lines = [f"block {block_id}"]
    lines.extend(f"map: {m}" for m in map_lines)
    lines.append("endblock")
    return parse_mapping_blocks("\n".join(lines))[0]


def test_exact_match_single_placeholder():
    result = match_score(construct("class(Door)."), entry("class($C)"))
    assert result.kind is MatchKind.EXACT
    assert result.score == 1.0
    assert result.substitution.bindings == {"C": Literal("Door")}


def test_partial_match_literal_mismatch():
    c = construct("multiplicity(Order, Item, 0, many).")
    result = match_score(c, entry("multiplicity($A, $B, 1, many)"))
    assert result.kind is MatchKind.PARTIAL
    assert result.score == pytest.approx(0.75)
    assert result.substitution.bindings == {"A": Literal("Order"), "B": Literal("Item")}


def test_partial_match_arity_mismatch():
    c = construct("operation(Door, open).")
    result = match_score(c, entry("operation($C, $M, $R)"))
    assert result.kind is MatchKind.PARTIAL
    assert result.score == pytest.approx(2 / 3)
    assert result.substitution.bindings == {"C": Literal("Door"), "M": Literal("open")}
    assert "R" not in result.substitution.bindings


def test_name_mismatch_scores_zero():
    result = match_score(construct("class(Door)."), entry("attribute($C,$A,$T)"))
    assert result.kind is MatchKind.NONE
    assert result.score == 0.0


def test_zero_arity_exact():
    result = match_score(construct("shutdown."), entry("shutdown"))
    assert result.kind is MatchKind.EXACT
    assert result.score == 1.0


def test_binding_conflict_demotes_to_partial():
    c = construct("pair(a, b).")
    result = match_score(c, entry("pair($X, $X)"))
    assert result.kind is MatchKind.PARTIAL
    assert result.score == 0.5
    assert result.substitution.bindings == {"X": Literal("a")}  # first binding wins


def test_consistent_repeat_binding_stays_exact():
    result = match_score(construct("pair(a, a)."), entry("pair($X, $X)"))
    assert result.kind is MatchKind.EXACT
    assert result.score == 1.0


def test_exact_reconstructs_the_construct():
    rng = random.Random(5)
    checked = 0
    for _ in range(500):
        c = ModelConstruct(0, random_ground_predicate(rng))
        e = MappingEntry(random_predicate(rng, placeholder_prob=0.7), (Predicate("java_x"),))
        result = match_score(c, e)
        assert 0.0 <= result.score <= 1.0
        assert (result.kind is MatchKind.EXACT) == (result.score == 1.0)
        assert (result.kind is MatchKind.NONE) == (result.score == 0.0)
        if result.kind is MatchKind.EXACT:
            assert result.substitution.apply(e.source) == c.predicate
            checked += 1
    assert checked > 10


def test_find_exact_first_entry_wins():
    b = block(4, "class($C) => java_class($C).", "class($C) => java_interface($C).")
    result = find_exact_in_block(construct("class(Door)."), b)
    assert result.entry_ordinal == 0
    assert result.block_id == 4


def test_find_exact_absent():
    b = block(4, "attribute($C,$A,$T) => java_field($C,$A,$T).")
    assert find_exact_in_block(construct("class(Door)."), b) is None


def test_build_kb_indexes_every_entry():
    blocks = parse_mapping_blocks(
        "block 1\nmap: class($C) => java_class($C).\n"
        "map: attribute($C,$A,$T) => java_field($C,$A,$T).\nendblock\n"
        "block 2\nmap: class($C) => java_class($C).\nendblock"
    )
    kb = build_kb(blocks)
    assert kb.block_count == 2
    assert sum(len(v) for v in kb.index.values()) == 3
    assert kb.index[("class", 1)] == ((1, 0), (2, 0))


def test_build_kb_rejects_duplicates_and_empty():
    b1 = block(4, "a => b.")
    b2 = block(4, "c => d.")
    with pytest.raises(KnowledgeBaseError, match="duplicate block id 4"):
        build_kb([b1, b2])
    with pytest.raises(KnowledgeBaseError, match="empty"):
        build_kb([])


def test_unknown_block_id_lookup():
    kb = build_kb([block(1, "a => b.")])
    with pytest.raises(KnowledgeBaseError, match="unknown block id 9"):
        kb.block(9)


def test_find_nearest_respects_threshold():
    kb = build_kb([block(1, "operation($C, $M, $R) => java_method($C, $M, $R).")])
    c = construct("operation(Door, open).")
    result = find_nearest_in_kb(c, kb, 0.5)
    assert result.kind is MatchKind.PARTIAL
    assert result.score == pytest.approx(2 / 3)
    assert find_nearest_in_kb(c, kb, 0.7) is None


def test_find_nearest_absent_name():
    kb = build_kb([block(1, "class($C) => java_class($C).")])
    assert find_nearest_in_kb(construct("widget(X)."), kb, 0.5) is None


def test_find_nearest_prefers_exact():
    kb = build_kb(
        [
            block(1, "operation($C, $M) => java_method($C, $M, void)."),
            block(2, "operation($C, open) => java_method($C, open, void)."),
        ]
    )
    result = find_nearest_in_kb(construct("operation(Door, open)."), kb, 0.5)
    assert result.kind is MatchKind.EXACT
    assert result.block_id == 1  # both are exact; the lower block id wins


def test_find_nearest_tie_breaks_by_block_then_entry():
    kb = build_kb(
        [
            block(2, "state($C, $S, x) => java_state_enum($C, $S)."),
            block(5, "state($C, $S, x) => java_state_enum($C, $S)."),
        ]
    )
    result = find_nearest_in_kb(construct("state(Lift, Idle, y)."), kb, 0.5)
    assert result.block_id == 2
    assert result.entry_ordinal == 0


def test_theta_validation():
    kb = build_kb([block(1, "a => b.")])
    with pytest.raises(ValueError):
        find_nearest_in_kb(construct("a."), kb, 0.0)
    with pytest.raises(ValueError):
        find_nearest_in_kb(construct("a."), kb, 1.5)


def test_best_match_agrees_with_exhaustive_scan():
    rng = random.Random(31)
    for _ in range(60):
        kb = build_kb(random_mapping_blocks(rng))
        c = ModelConstruct(0, random_ground_predicate(rng))
        best = best_match_in_kb(c, kb)
        scores = []
        for b in kb.blocks:
            for ordinal in range(len(b.entries)):
                r = match_score(c, b.entries[ordinal], b.id, ordinal)
                scores.append((r.score, b.id, ordinal))
        top = max(scores, key=lambda s: s[0])
        if best is None:
            assert top[0] == 0.0
        else:
            assert best.score == top[0]
            expected = min((s for s in scores if s[0] == top[0]), key=lambda s: (s[1], s[2]))
            assert (best.block_id, best.entry_ordinal) == (expected[1], expected[2])


def test_parse_predicate_helper_accepts_placeholders_silently():
    p = parse_predicate("class($C)")
    assert p.has_placeholders()
