"""Search for the best block-per-construct assignment.

Fitness is the fraction of constructs whose assigned block contains an
exact match, so it is separable: each component of the assignment vector
contributes independently.  The swarm search works in a continuous box
[0, M-1]^N and decodes positions by rounding each component to the index
of a block in ascending-id order.  A greedy pass and exhaustive
enumeration are provided as oracles; greedy is optimal here because of
separability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SearchError
from .knowledge import KnowledgeBase, find_exact_in_block
from .predicates import ModelConstruct


@dataclass(frozen=True)
class Assignment:
    """One mapping-block id per input construct."""

    block_ids: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.block_ids)


@dataclass
class PsoParams:
    swarm_size: int = 30
    iterations: int = 200
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    v_max: float | None = None  # None: (M - 1) / 2, from the knowledge base
    seed: int | None = None  # None: nondeterministic run

    def __post_init__(self):
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be at least 1")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.v_max is not None and self.v_max <= 0:
            raise ValueError("v_max must be positive")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass(frozen=True)
class SearchOutcome:
    best: Assignment
    best_fitness: float
    evaluations: int
    per_iteration_best: tuple[float, ...]


def fitness(a: Assignment, constructs: list[ModelConstruct], kb: KnowledgeBase) -> float:
    """Fraction of constructs exactly matched inside their assigned block."""
    if not constructs:
        raise SearchError("empty construct list")
    if len(a) != len(constructs):
        raise SearchError(f"assignment length {len(a)} != construct count {len(constructs)}")
    hits = sum(
        1
        for c, block_id in zip(constructs, a.block_ids)
        if find_exact_in_block(c, kb.block(block_id)) is not None
    )
    return hits / len(constructs)


def _exact_table(constructs: list[ModelConstruct], kb: KnowledgeBase) -> np.ndarray:
    """Boolean (construct, block) table of exact-match availability."""
    table = np.zeros((len(constructs), kb.block_count), dtype=bool)
    for i, c in enumerate(constructs):
        for j, b in enumerate(kb.blocks):
            table[i, j] = find_exact_in_block(c, b) is not None
    return table


def _check_instance(constructs: list[ModelConstruct], kb: KnowledgeBase):
    if not constructs:
        raise SearchError("empty construct list")
    if kb.block_count < 1:
        raise SearchError("empty knowledge base")


def pso_search(
    constructs: list[ModelConstruct],
    kb: KnowledgeBase,
    params: PsoParams | None = None,
) -> SearchOutcome:
    """Particle swarm over block assignments, deterministic under a fixed seed.

    Each iteration updates velocities and positions sequentially (one
    random vector pair per particle, in particle order), then evaluates
    and merges personal/global bests in particle order; ties keep the
    earlier candidate.  The returned trace holds the global best after
    initialization and after each iteration.
    """
    params = params or PsoParams()
    _check_instance(constructs, kb)
    n = len(constructs)
    m = kb.block_count
    ids = kb.block_ids
    hi = float(m - 1)
    v_max = params.v_max if params.v_max is not None else (m - 1) / 2
    table = _exact_table(constructs, kb)
    rng = np.random.default_rng(params.seed)
    row = np.arange(n)

    def decode(position: np.ndarray) -> np.ndarray:
        return np.rint(np.clip(position, 0.0, hi)).astype(int)

    def evaluate(position: np.ndarray) -> float:
        return float(table[row, decode(position)].mean())

    swarm: list[Particle] = []
    gbest_position = None
    gbest_fitness = -1.0
    for _ in range(params.swarm_size):
        position = rng.uniform(0.0, hi, n)
        velocity = rng.uniform(-v_max, v_max, n)
        fit = evaluate(position)
        swarm.append(Particle(position, velocity, position.copy(), fit))
        if fit > gbest_fitness:
            gbest_fitness = fit
            gbest_position = position.copy()
    trace = [gbest_fitness]

    for _ in range(params.iterations):
        for p in swarm:
            r1 = rng.uniform(size=n)
            r2 = rng.uniform(size=n)
            p.velocity = (
                params.inertia * p.velocity
                + params.cognitive * r1 * (p.pbest_position - p.position)
                + params.social * r2 * (gbest_position - p.position)
            )
            np.clip(p.velocity, -v_max, v_max, out=p.velocity)
            p.position = np.clip(p.position + p.velocity, 0.0, hi)
        for p in swarm:
            fit = evaluate(p.position)
            if fit > p.pbest_fitness:
                p.pbest_fitness = fit
                p.pbest_position = p.position.copy()
                if fit > gbest_fitness:
                    gbest_fitness = fit
                    gbest_position = p.position.copy()
        trace.append(gbest_fitness)

    best = Assignment(tuple(int(ids[j]) for j in decode(gbest_position)))
    evaluations = params.swarm_size * (params.iterations + 1)
    return SearchOutcome(best, gbest_fitness, evaluations, tuple(trace))


def greedy_oracle(constructs: list[ModelConstruct], kb: KnowledgeBase) -> SearchOutcome:
    """Optimal assignment by separability: lowest-id exactly-matching block
    per construct, falling back to the lowest id overall."""
    _check_instance(constructs, kb)
    table = _exact_table(constructs, kb)
    ids = kb.block_ids
    chosen = []
    for i in range(len(constructs)):
        hits = np.flatnonzero(table[i])
        chosen.append(ids[hits[0]] if hits.size else ids[0])
    best = Assignment(tuple(chosen))
    fit = fitness(best, constructs, kb)
    return SearchOutcome(best, fit, 1, (fit,))


def brute_force_oracle(
    constructs: list[ModelConstruct],
    kb: KnowledgeBase,
    cap: int = 1_000_000,
) -> SearchOutcome:
    """Exhaustive maximum over all M^N assignments (ties: lexicographically
    smallest id vector).  Refuses instances past ``cap`` assignments."""
    _check_instance(constructs, kb)
    n = len(constructs)
    m = kb.block_count
    total = m**n
    if total > cap:
        raise SearchError(f"{m}^{n} = {total} assignments exceeds the cap of {cap}")
    rows = [tuple(int(x) for x in r) for r in _exact_table(constructs, kb)]
    best_hits = -1
    best_combo: tuple[int, ...] | None = None
    for combo in itertools.product(range(m), repeat=n):
        hits = sum(rows[i][j] for i, j in enumerate(combo))
        if hits > best_hits:
            best_hits = hits
            best_combo = combo
    ids = kb.block_ids
    best = Assignment(tuple(ids[j] for j in best_combo))
    fit = best_hits / n
    return SearchOutcome(best, fit, total, (fit,))
