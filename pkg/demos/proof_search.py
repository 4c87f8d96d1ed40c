"""
Deciding sequents of iM
=======================

"""

# parse a sequent and ask the contraction-free prover about it
from imulip import parse_sequent, prove, provable
from imulip.prover import G3Prover, check_derivation

s = parse_sequent("[](p & q) => []p & []q")
print(provable(s))

# the derivation is a plain tree, checked rule by rule
d = prove(s)
print(d.to_text())
print(check_derivation(d), d.size(), d.height())

# the box is monotone but does not collect conjuncts
s = parse_sequent("[]p, []q => [](p & q)")
print(provable(s), G3Prover().provable(s))

# weakening of the context around a boxed formula shows up as explicit Lw steps
print(prove(parse_sequent("r, []p => [](p | q)")).to_text())

# LaTeX for the paper-and-pencil crowd
print(prove(parse_sequent("p & (p -> q) => q")).to_latex())
