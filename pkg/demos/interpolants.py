"""
Uniform interpolants, raw and tidied
====================================

"""

from imulip.formula import NEG, POS, parse, render
from imulip.interpolation import (exists_interp, forall_interp, simplify, uip_exists,
                                  uip_forall, verify_ulip)
from imulip.sequent import parse_sequent

# strongest consequence of p -> q, p that says nothing positive about p
raw = exists_interp([parse("p -> q"), parse("p")], "p", POS)
print(render(raw))
print(render(simplify(raw)))

# weakest antecedent of => []q | p without positive p
raw = forall_interp(parse_sequent("=> []q | p"), "p", POS)
print(render(simplify(raw)))

# eliminating both polarities gives the ordinary uniform interpolants
print(render(simplify(uip_exists(parse("p & (p -> q)"), "p"))))
print(render(simplify(uip_forall(parse("q -> p"), "p"))))

# the harness checks the defining conditions against small contexts
rep = verify_ulip([parse("q -> p")], "p", POS, weight_bound=4)
print(rep.ok, rep.checked, rep.counterexamples)

# raw interpolants grow quickly; sizes for a few inputs
for text in ["p", "p | q", "(p -> q) -> p", "[]p -> q"]:
    f = exists_interp([parse(text)], "p", NEG)
    tidy = render(simplify(f))
    print(f"{text:16} raw weight {f.weight:5}  tidy {tidy[:60]}{'...' if len(tidy) > 60 else ''}")
