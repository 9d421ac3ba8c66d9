"""Random ground programs and the three-way differential check."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .depgraph import is_tight
from .exact import count_exact, count_filter_reference
from .program import Program, is_normal, parse_program, render_program
from .semantics import answer_set_masks, is_answer_set_by_subsets, is_model, mask_to_set

__all__ = ["FuzzParams", "random_program", "generate_corpus", "differential_check"]


@dataclass(frozen=True)
class FuzzParams:
    atoms: int = 8
    rules: int = 12
    neg_prob: float = 0.3
    disj_prob: float = 0.0
    cycle_prob: float = 0.6
    constraint_prob: float = 0.1
    choice_prob: float = 0.3


def _random_rules(rng: random.Random, names: list[str], prm: FuzzParams, budget: int) -> list[str]:
    if budget >= 2 and len(names) >= 2 and rng.random() < prm.choice_prob:
        x, y = rng.sample(names, 2)
        return [f"{x} :- not {y}.", f"{y} :- not {x}."]
    if rng.random() < prm.constraint_prob:
        head = []
    elif len(names) >= 2 and rng.random() < prm.disj_prob:
        head = rng.sample(names, rng.choice((2, 2, 3)) if len(names) >= 3 else 2)
    else:
        head = [rng.choice(names)]
    size = rng.randint(1 if not head else 0, 3)
    body = [("not " if rng.random() < prm.neg_prob else "") + rng.choice(names) for _ in range(size)]
    return [_statement(head, body)]


def _statement(head: list[str], body: list[str]) -> str:
    h = " | ".join(head)
    if not body:
        return f"{h}."
    return f"{h} :- {', '.join(body)}." if h else f":- {', '.join(body)}."


def random_program(rng: random.Random, prm: FuzzParams) -> Program:
    """Draw a program; cycles of positive dependencies are planted on purpose.

    Uniformly random rules are mostly tight, so with probability
    ``cycle_prob`` a chain ``x1 :- x2. ... xk :- x1.`` is closed first
    (each link may carry one extra random literal).
    """
    names = [f"a{i}" for i in range(prm.atoms)]
    lines: list[str] = []
    budget = prm.rules
    while budget > 0 and rng.random() < prm.cycle_prob:
        k = min(rng.randint(1, 4), len(names), budget)
        cyc = rng.sample(names, k)
        for i, x in enumerate(cyc):
            body = [cyc[(i + 1) % k]]
            if rng.random() < 0.5:
                body.append(("not " if rng.random() < prm.neg_prob else "") + rng.choice(names))
            lines.append(_statement([x], body))
        budget -= k
        if rng.random() < 0.5:
            break
    while budget > 0:
        new = _random_rules(rng, names, prm, budget)
        lines.extend(new)
        budget -= len(new)
    rng.shuffle(lines)
    # reparse so that atom ids follow first occurrence in the emitted text
    return parse_program(render_program(parse_program("\n".join(lines))))


def generate_corpus(seed: int, count: int, max_atoms: int = 12, max_rules: int = 20,
                    disj_prob: float = 0.0) -> list[Program]:
    rng = random.Random(seed)
    corpus = []
    for _ in range(count):
        prm = FuzzParams(
            atoms=rng.randint(2, max_atoms),
            rules=rng.randint(1, max_rules),
            neg_prob=rng.choice((0.2, 0.35, 0.5)),
            disj_prob=disj_prob,
            cycle_prob=0.75,
            constraint_prob=0.05,
            choice_prob=rng.choice((0.2, 0.4, 0.6)),
        )
        corpus.append(random_program(rng, prm))
    return corpus


def differential_check(p: Program) -> dict:
    """Compare every counting route available for ``p``.

    Normal programs: brute force vs. search vs. completion filter.
    Disjunctive programs: brute-force sweep vs. the definitional subset test,
    plus model and antichain checks on the sweep's output.
    """
    masks = [int(m) for m in answer_set_masks(p)]
    brute = len(masks)
    out = {"bruteforce": brute, "normal": is_normal(p), "tight": is_tight(p)}
    if is_normal(p):
        out["exact"] = count_exact(p).count
        out["filter"] = count_filter_reference(p).count
        out["ok"] = out["exact"] == out["filter"] == brute
    else:
        sets = [mask_to_set(m) for m in masks]
        ok = all(is_model(s, p) and is_answer_set_by_subsets(p, s) for s in sets)
        ok = ok and not any(a < b for a in sets for b in sets)
        if p.num_atoms <= 10:
            direct = sum(
                1 for m in range(1 << p.num_atoms) if is_answer_set_by_subsets(p, mask_to_set(m))
            )
            ok = ok and direct == brute
        out["ok"] = ok
    return out
