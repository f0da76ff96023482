"""Full tour of the worked three-label example.

A bag of 20 A's, 30 B's and 50 C's is pushed through the conformal
transducer under the one-minus-empirical-pmf measure; everything that
follows — upper/lower probabilities, Moebius masses, the nested focal
chain, prediction regions, credal extreme points — is derived from the
resulting contour (21/101, 51/101, 1) in exact rational arithmetic.

Run:  python3 demos/three_label_walkthrough.py
"""

from consonance import (
    Event,
    FiniteOutcomeSpace,
    NonconformityMeasure,
    cpr,
    enumerate_events,
    extreme_points,
    focal_elements,
    in_credal_set,
    lower_entropy,
    lower_prob,
    mass_from_belief,
    transduce_grid,
    upper_prob,
    ProbabilityVector,
)
from fractions import Fraction

space = FiniteOutcomeSpace(("A", "B", "C"))
bag = ("A",) * 20 + ("B",) * 30 + ("C",) * 50

result = transduce_grid(bag, space, NonconformityMeasure.one_minus_emp())
contour = result.contour
print("data: 20 x A, 30 x B, 50 x C  (n = 100)")
print("contour:", dict(zip(space.labels, map(str, contour.values))))

print("\nupper / lower probability of every nonempty event")
for ev in enumerate_events(space):
    if len(ev) == 0:
        continue
    labels = ",".join(ev.to_labels(space))
    print(f"  {{{labels:5s}}}  lower {str(lower_prob(contour, ev)):>7s}"
          f"   upper {str(upper_prob(contour, ev)):>7s}")

mass = mass_from_belief(lambda ev: lower_prob(contour, ev), space)
print("\nMoebius masses (only focal events carry any)")
for ev, m in sorted(mass.masses.items(), key=lambda kv: len(kv[0])):
    print(f"  {{{','.join(ev.to_labels(space))}}}: {m}")
print("focal chain nested:", focal_elements(mass).nested)

print("\nprediction regions shrink as alpha grows")
for alpha in (Fraction(1, 10), Fraction(3, 10), Fraction(6, 10)):
    region = cpr(contour, alpha)
    print(f"  alpha = {alpha}: {{{','.join(region.event.to_labels(space))}}}")

print("\ncredal set corner points (weights for A, B, C)")
for p in extreme_points(contour):
    print("  (" + ", ".join(str(w) for w in p.weights) + ")")

p_emp = ProbabilityVector((Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)))
print("\nempirical pmf (1/5, 3/10, 1/2) is a member:", in_credal_set(p_emp, contour))
print("lower entropy over the credal set:", lower_entropy(contour),
      "(a point mass is always dominated)")
