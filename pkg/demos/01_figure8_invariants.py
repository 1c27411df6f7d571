"""
Twisted Alexander invariants of the figure-eight knot
=====================================================

Lift the holonomy to its symmetric powers and print the invariants for
small dimensions.  Coefficients are printed after normalising the unit
``+-t^p`` away.
"""

from twv import Pipeline, SignAssignment, figure8
from twv.laurent import working_precision

data = figure8()
pipe = Pipeline(data)
plus = SignAssignment.parse("+")

# the parabolic meridian makes the denominator a power of (t - 1); reduced()
# cancels what it shares with the numerator
for n in range(2, 6):
    w = pipe.certified_invariant(n, plus)
    with working_precision(w.bits):
        num, den = w.reduced()
        print(f"n={n}:  ({num.normalized().format(6)}) / ({den.normalized().format(6)})")

# odd dimensions vanish at t = 1, even ones do not
for n in range(2, 8):
    pair = pipe.local(n, plus, 1)
    print(f"n={n}: zero order at t=1 is {pair.order}")
