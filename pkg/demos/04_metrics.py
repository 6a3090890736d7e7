"""Scoring predictions against ground truth
============================================

Each test image has an actual species set t and a predicted species set
p. Recall asks how much of t was found, precision asks how much of p was
real, and the f-measure is their harmonic mean (zero as soon as either
side is zero — including the model that predicts nothing at all).
"""

from wildvision.metrics import EvalRecord, aggregate, evaluate

cases = [
    ("exact match", ["banana", "cacao"], ["banana", "cacao"]),
    ("one missed", ["banana", "cacao"], ["banana"]),
    ("one extra", ["banana", "cacao"], ["banana", "cacao", "sugarpalm"]),
    ("all wrong", ["banana", "cacao"], ["taro"]),
    ("nothing predicted", ["banana", "cacao"], []),
]

print(f"{'case':20s} {'recall':>7s} {'precision':>10s} {'f-measure':>10s}")
results = []
for name, t, p in cases:
    res = evaluate(EvalRecord.of(name, t, p))
    results.append(res)
    print(f"{name:20s} {res.recall:7.3f} {res.precision:10.3f} {res.fmeasure:10.3f}")

agg = aggregate(results)
print("-" * 49)
print(
    f"{'mean over ' + str(agg.n) + ' images':20s} "
    f"{agg.mean_recall:7.3f} {agg.mean_precision:10.3f} {agg.mean_fmeasure:10.3f}"
)
