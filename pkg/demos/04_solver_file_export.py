"""Export a counterexample query as a standard QF_LRA solver file.

The engine decides queries with its own exact procedure; the export lets
any off-the-shelf SMT solver re-check a verdict: the document is
satisfiable exactly when a counterexample to the query exists.
"""

from gbtexplain import Query, export_smtlib
from gbtexplain.zoo import MAMMAL, load

ensemble, space, instances = load()
bear = instances[2]

milk_only = bear.restrict([space.index_of("milk")])
doc = export_smtlib(ensemble, space, Query(milk_only, MAMMAL))
print(doc)
print("; feed this to `z3 -in` or `cvc5 --lang smt2`: expected verdict is unsat,")
print("; i.e. milk=1 alone already guarantees the mammal prediction.")
