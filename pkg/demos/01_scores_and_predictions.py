"""Walk through the bundled animal-classification model.

Loads the 7-class toy ensemble (one depth-1 tree per class), scores the
three bundled instances exactly, and shows how the winning class is picked.
"""

from gbtexplain import predict, score
from gbtexplain.rational import to_decimal_str
from gbtexplain.zoo import CLASS_NAMES, load

ensemble, space, instances = load()
print(f"model: {ensemble.num_classes} classes x {ensemble.trees_per_class} tree(s), "
      f"{len(space)} declared features")
print(f"features actually split on: "
      f"{sorted(space.decl(f).name for f in ensemble.used_features())}\n")

for name, cube in zip(("pitviper", "toad", "bear"), instances):
    result = predict(ensemble, space, cube)
    print(f"{name}:")
    for cls, value in zip(CLASS_NAMES, result.scores):
        marker = "  <-- winner" if CLASS_NAMES[result.pi] == cls else ""
        print(f"  {cls:<12} {to_decimal_str(value):>14}{marker}")
    print()

# scores are exact rationals, so ties and tiny margins are decided exactly
pitviper = instances[0]
values = score(ensemble, space, pitviper)
print("exact reptile score for the pitviper:", values[6], "=", to_decimal_str(values[6]))
