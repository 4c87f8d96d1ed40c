"""Decision procedure and uniform Lyndon interpolants for intuitionistic monotone modal logic."""
from .formula import (BOT, NEG, POS, TOP, TOP_N, And, Atom, Bot, Box, Formula, FormulaSyntaxError,
                      Imp, Or, Polarity, Top, atoms, big_and, big_or, is_polarity_free,
                      normalize_top, parse, render, vars_of, weight)
from .sequent import (FormulaBag, Sequent, SequentSyntaxError, bag_precedes, canonical_key,
                      multiply, parse_bag, parse_sequent, seq_precedes, seq_vars)
from .prover import (Derivation, G3Prover, G4Prover, ProofCache, check_derivation, provable,
                     provable_g3, prove)

__version__ = "0.1.0"
