"""Audit a heuristic explanation: find out when it lies and fix it.

A popular local explainer claims the pitviper is a reptile because of
{not hair, not milk, not toothed, not fins}.  The engine checks that claim
over the entire instance space, exhibits counterexamples, and repairs the
explanation into one that is provably correct.
"""

from gbtexplain import Oracle, audit, validate
from gbtexplain.zoo import CLASS_NAMES, REPTILE, load

ensemble, space, instances = load()
oracle = Oracle(ensemble, space)
pitviper = instances[0]

claimed = pitviper.restrict(space.index_of(n) for n in ("hair", "milk", "toothed", "fins"))
print("claimed explanation:", claimed.describe(space))

witness = validate(oracle, pitviper, REPTILE, claimed)
print(f"\ncounterexample found: an instance matching all four literals is "
      f"classified as {CLASS_NAMES[witness.predicted]}:")
print(" ", witness.instance.describe(space))

several = oracle.enumerate_counterexamples(claimed, REPTILE, limit=4)
print(f"\n{len(several)} distinct ways the claim fails (one per behavior cell):")
for cex in several:
    print(f"  -> {CLASS_NAMES[cex.predicted]}: {cex.instance.describe(space)}")

verdict = audit(oracle, pitviper, REPTILE, claimed)
print(f"\naudit verdict: {verdict.status}")
print("repaired explanation:", verdict.repaired.literals.describe(space))
print("\nEvery instance agreeing with the repaired literals is a reptile; the")
print("repair also kept as much of the original claim as possible (milk, fins).")
