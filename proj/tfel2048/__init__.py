"""Exhaustive solver for generalized 2048 on small boards.

Guaranteed reachability against an adversarial spawner and proved
win-probability lower bounds against the random spawner, backed by the
native extension.
"""

from ._tfel import (
    Board,
    CountTable,
    Direction,
    check_lemma,
    goal_merge_reached,
    legal_moves,
    query_prob,
    query_reach,
    solve_prob,
    solve_reach,
    spawn,
    swipe,
)

__all__ = [
    "Board",
    "CountTable",
    "Direction",
    "check_lemma",
    "goal_merge_reached",
    "legal_moves",
    "query_prob",
    "query_reach",
    "solve_prob",
    "solve_reach",
    "spawn",
    "swipe",
]
