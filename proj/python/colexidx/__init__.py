"""Co-lex orders and path indexes for finite automata."""

from ._core import (  # noqa: F401
    BudgetExceeded,
    FormatError,
    Nfa,
    ParseError,
    PathIndex,
    chains,
    exact_width,
    format_nfa,
    gen_cycle,
    gen_lp,
    gen_primes,
    gen_random,
    make_input_consistent,
    order_pairs,
    parse_nfa,
    powerset,
    rho_exists,
    trim,
    validate,
    width,
)

__version__ = "0.1.0"
