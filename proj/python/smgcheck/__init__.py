"""Model checking and strategy synthesis for turn-based stochastic multi-player games."""

from ._core import (
    Error,
    Game,
    TrustGame,
    attack_feasible,
    brute_force_value,
    check,
    evaluate_under,
    fig1,
    fig2,
    fig3,
    parse_formula,
    trust_game,
)

__all__ = [
    "Error",
    "Game",
    "TrustGame",
    "attack_feasible",
    "brute_force_value",
    "check",
    "evaluate_under",
    "fig1",
    "fig2",
    "fig3",
    "parse_formula",
    "trust_game",
]
