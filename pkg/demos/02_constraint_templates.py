#!/usr/bin/env python3
"""Tour of the constraint templates and their two evaluators.

Each template is checked by a compiled automaton over a tiny projected
alphabet (the production path) and, independently, by directly scanning
the window (the test oracle). This script shows both agree and what the
automata look like.
"""

from pam import ConstraintTemplate, compile_template, evaluate_template
from pam.declare import oracle_evaluate_template

# A window from a loan-handling style process: one decline event followed
# by three completion steps. Activities are plain Python values here.
WINDOW = ("Declined", "Complete", "Complete", "Complete")

CHECKS = [
    (ConstraintTemplate("init"), "Declined", None),
    (ConstraintTemplate("exactly", 1), "Declined", None),
    (ConstraintTemplate("existence", 3), "Complete", None),
    (ConstraintTemplate("last"), "Complete", None),
    (ConstraintTemplate("chain_response"), "Declined", "Complete"),
    (ConstraintTemplate("alternate_precedence"), "Declined", "Complete"),
    (ConstraintTemplate("not_succession"), "Complete", "Declined"),
]

print(f"window: {WINDOW}\n")
for template, first, second in CHECKS:
    fast = evaluate_template(template, first, second, WINDOW)
    slow = oracle_evaluate_template(template, first, second, WINDOW)
    args = first if second is None else f"{first}, {second}"
    print(f"  {str(template):25s}({args}) -> {fast}   oracle agrees: {fast == slow}")

# The compiled automaton for a binary template runs over just three
# symbols: first argument, second argument, anything else. One automaton
# serves every activity pair, which is what makes mining fast.
dfa = compile_template(ConstraintTemplate("response"))
print(f"\nresponse pattern: {ConstraintTemplate('response').pattern}")
print(f"minimal DFA: {len(dfa.table)} states over alphabet {dfa.alphabet!r}")
for state, row in enumerate(dfa.table):
    mark = "*" if dfa.accepting[state] else " "
    moves = ", ".join(f"{sym}->{row[i]}" for i, sym in enumerate(dfa.alphabet))
    print(f"  {mark}q{state}: {moves}")
