"""Export the worked example's credal set for a ternary plot.

Samples members of the three-label credal set, converts each weight
vector to barycentric plot coordinates, and writes them to a CSV next to
the set's extreme points.  Any plotting tool that reads x/y pairs can
render the result; the extreme points trace the boundary polygon.

Run:  python3 demos/ternary_export.py [out.csv]
"""

import csv
import sys

from consonance import (
    FiniteOutcomeSpace,
    NonconformityMeasure,
    extreme_points,
    sample_credal,
    ternary_coords,
    transduce_grid,
)

space = FiniteOutcomeSpace(("A", "B", "C"))
bag = ("A",) * 20 + ("B",) * 30 + ("C",) * 50
contour = transduce_grid(bag, space, NonconformityMeasure.one_minus_emp()).contour

corners = extreme_points(contour)
members = sample_credal(contour, count=200, seed=7)
out = sys.argv[1] if len(sys.argv) > 1 else "ternary_points.csv"

with open(out, "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["x", "y", "label"])
    for p in corners:
        x, y = ternary_coords(p)
        writer.writerow([f"{x:.12g}", f"{y:.12g}", "extreme"])
    for p in members:
        x, y = ternary_coords(p)
        writer.writerow([f"{x:.12g}", f"{y:.12g}", "sample"])

print(f"wrote {len(corners)} extreme points and {len(members)} samples to {out}")
print("\nextreme points (weights -> plot coordinates):")
for p in corners:
    x, y = ternary_coords(p)
    weights = ", ".join(str(w) for w in p.weights)
    print(f"  ({weights})  ->  ({x:.3f}, {y:.3f})")
