"""Seeded random generators shared by the unit and acceptance suites."""

from __future__ import annotations

import random

from cods import (
    KnowledgeBase,
    Literal,
    MappingBlock,
    MappingEntry,
    ModelConstruct,
    Placeholder,
    Predicate,
    build_kb,
)

IDENTS = ["Door", "Elevator", "Motor", "floor", "open", "close", "int", "boolean", "x1", "_tmp"]
NAMES = ["class", "attribute", "operation", "state", "transition", "move_to", "link9", "tiny"]
STRING_CHARS = 'abcXYZ 019_%$.,;()=>"\\' + "'"


def random_literal(rng: random.Random) -> Literal:
    kind = rng.randrange(3)
    if kind == 0:
        return Literal(rng.choice(IDENTS))
    if kind == 1:
        return Literal(rng.randrange(-5, 100))
    length = rng.randrange(0, 12)
    return Literal("".join(rng.choice(STRING_CHARS) for _ in range(length)), quoted=True)


def random_predicate(rng: random.Random, placeholder_prob: float = 0.0) -> Predicate:
    name = rng.choice(NAMES)
    arity = rng.randrange(0, 5)
    args = []
    for i in range(arity):
        if rng.random() < placeholder_prob:
            args.append(Placeholder(rng.choice("ABCXYZ") + str(i)))
        else:
            args.append(random_literal(rng))
    return Predicate(name, tuple(args))


def random_ground_predicate(rng: random.Random) -> Predicate:
    return random_predicate(rng, placeholder_prob=0.0)


def random_entry(rng: random.Random) -> MappingEntry:
    source = random_predicate(rng, placeholder_prob=0.6)
    bound = sorted(source.placeholder_names())
    targets = []
    for _ in range(rng.randrange(1, 3)):
        arity = rng.randrange(0, 4)
        args = []
        for _ in range(arity):
            if bound and rng.random() < 0.5:
                args.append(Placeholder(rng.choice(bound)))
            else:
                args.append(random_literal(rng))
        targets.append(Predicate("java_" + rng.choice(["a", "b", "c"]), tuple(args)))
    return MappingEntry(source, tuple(targets))


def random_mapping_blocks(rng: random.Random, max_blocks: int = 5) -> list[MappingBlock]:
    count = rng.randrange(1, max_blocks + 1)
    ids = rng.sample(range(1, 50), count)
    return [
        MappingBlock(block_id, tuple(random_entry(rng) for _ in range(rng.randrange(1, 4))))
        for block_id in sorted(ids)
    ]


def random_instance(
    rng: random.Random, max_n: int = 6, max_m: int = 5
) -> tuple[list[ModelConstruct], KnowledgeBase]:
    """A small search instance: ground constructs plus a knowledge base."""
    n = rng.randint(1, max_n)
    kb = build_kb(random_mapping_blocks(rng, max_blocks=max_m))
    constructs = []
    for i in range(n):
        if rng.random() < 0.7:
            # ground out some entry's source so exact matches exist
            block = rng.choice(kb.blocks)
            entry = rng.choice(block.entries)
            args = tuple(
                random_literal(rng) if isinstance(a, Placeholder) else a
                for a in entry.source.args
            )
            constructs.append(ModelConstruct(i, Predicate(entry.source.name, args)))
        else:
            constructs.append(ModelConstruct(i, random_ground_predicate(rng)))
    return constructs, kb
