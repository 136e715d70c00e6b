"""Exact quantum algorithms for Mastermind, checked by state-vector simulation."""

from .algorithms import (
    ALGORITHMS,
    RunResult,
    adaptive_black_white,
    adaptive_exact_grover,
    appendix_b_klogk,
    inner_product_search,
    find_two_color_position,
    hunziker_meyer,
    nonadaptive_k_minus_1,
    nonadaptive_two_thirds,
    one_query_binary,
    run_via_padded_oracle,
)
from .game import GameInstance, black_peg, white_peg
from .oracles import QueryLedger
from .sim import GroverParams, RegisterLayout, StateVector

__all__ = [
    "ALGORITHMS",
    "GameInstance",
    "GroverParams",
    "QueryLedger",
    "RegisterLayout",
    "RunResult",
    "StateVector",
    "adaptive_black_white",
    "adaptive_exact_grover",
    "appendix_b_klogk",
    "inner_product_search",
    "black_peg",
    "find_two_color_position",
    "hunziker_meyer",
    "nonadaptive_k_minus_1",
    "nonadaptive_two_thirds",
    "one_query_binary",
    "run_via_padded_oracle",
    "white_peg",
]
