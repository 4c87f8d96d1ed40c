"""
Lyndon interpolation from uniform interpolants
==============================================

"""

from imulip.formula import parse, render
from imulip.interpolation import lyndon_interpolant, simplify
from imulip.prover import provable
from imulip.sequent import Sequent
from imulip.suites import LYNDON_CASES, lyndon_suite

phi, psi = parse("p & q"), parse("q | r")
theta = lyndon_interpolant(phi, psi)
print(render(simplify(theta)))

# both halves are derivable and polarities are respected
print(provable(Sequent.of([phi], theta)), provable(Sequent.of([theta], psi)))
print(sorted(theta.pos), sorted(theta.neg))

# the curated list used by the acceptance tests
for row in lyndon_suite(LYNDON_CASES[:8])["cases"]:
    print(f"{row['phi']:24} {row['psi']:24} {row['theta']}")
