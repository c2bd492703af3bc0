"""Decision-tree rank, depth, size and the measures that bound them, for small Boolean functions."""

from __future__ import annotations

from .boolfun import (
    AND, MAJ, MAJ_OR_PARITY, OR, PARITY, THR, TRIBES, TRIBES_D, ArityError, BoolFun, ParseError,
    Subcube, compose, dual, from_profile, iterate, negate, parse_expr, symmetric_profile,
)
from .measures import (
    cert_summary, kill_number, measure_report, opt_depth, opt_rank, opt_size, opt_weighted_depth,
    rank_value, values,
)
from .fourier import spar, spar_tilde, wht
from .games import asym_game_value, game_value, play
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "AND", "MAJ", "MAJ_OR_PARITY", "OR", "PARITY", "THR", "TRIBES", "TRIBES_D", "ArityError",
    "BoolFun", "ParseError", "Subcube", "compose", "dual", "from_profile", "iterate", "negate",
    "parse_expr", "symmetric_profile", "cert_summary", "kill_number", "measure_report", "opt_depth",
    "opt_rank", "opt_size", "opt_weighted_depth", "rank_value", "values", "spar", "spar_tilde", "wht",
    "asym_game_value", "game_value", "play", "run_suite",
]
