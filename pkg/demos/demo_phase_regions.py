"""Phase-diagram classification from the computable gates.

Only the uniqueness threshold beta_DU(alpha) = 1/(2 zeta(alpha)) is a
closed form; the true critical curve has none, so everything above the
gate is reported as conjectural, never as fact.
"""

import dysonlab as dl
from dysonlab.cli import classify_region

print("uniqueness threshold beta_DU(alpha) = 1/(2 zeta(alpha)):")
for alpha in (1.1, 1.3, 1.5, 1.8, 2.0, 2.5, 3.0):
    bdu, _ = dl.beta_dobrushin(alpha)
    print(f"   alpha = {alpha:3.1f}: beta_DU = {bdu:.6f}")

print("\nclassification samples:")
for alpha, beta in [(3.0, 5.0), (1.8, 0.1), (1.4, 0.05), (1.8, 1.0), (1.2, 10.0)]:
    rep = classify_region(alpha, beta)
    print(f"   (alpha={alpha}, beta={beta}): {rep['region']} -- {rep['label']}")
    print(f"      {rep['basis']}")
