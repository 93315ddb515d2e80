"""Cut-free sequent calculi for normal modal and conditional logics, with provers and a model oracle."""

from .syntax import (
    And, Bot, Box, Cond, Formula, Neg, ParseError, Sequent, Var,
    parse_formula, parse_sequent, print_formula, print_sequent,
)
from .calculus import (
    Derivation, DerivationError, LogicId, MarkedSequent, RuleId, RuleInstance, check_derivation,
)
from .prover import (
    Provable, ResourceExceeded, SearchLimits, Strategy, Unprovable, prove, prove_marked,
    prove_with_cut, random_provable,
)

__version__ = "0.1.0"
