"""Numeric supremum over diagonal elements compared with the closed form.

At theta = 0 the two agree.  At theta > 0 they agree along the axes and at
(1,1), but the closed form is larger for other rectangle pairs, and the
rectangle element built from it lies outside the unit ball.  Takes about
half a minute.
"""

from ncps_distance import closed_form as cf
from ncps_distance.hilbert import make_params
from ncps_distance.numeric import SupSolverConfig, sup_distance
from ncps_distance.triple import diagonal_commutator_norm

cfg = SupSolverConfig(cutoff=24, buffer=8)
targets = [(1, 0), (0, 2), (1, 1), (2, 1), (2, 2), (3, 3)]

for theta in (0.0, 0.6):
    p = make_params(1.0, theta)
    print(f"theta = {theta}")
    print(f"  {'target':>7} {'closed form':>12} {'numeric':>12} {'gap':>10} {'rect. norm':>11}")
    for b in targets:
        closed = cf.distance(p, (0, 0), b).closed_form
        num = sup_distance(p, (0, 0), b, cfg).value
        if 0 in b:
            norm = float("nan")  # axis pairs use the one-mode element
        else:
            el = cf.optimal_element_general(p, (0, 0), b, cfg.cutoff, cfg.buffer)
            norm = diagonal_commutator_norm(el.coeffs, p)
        print(f"  {str(b):>7} {closed:12.7f} {num:12.7f} {closed - num:10.2e} {norm:11.6f}")
    print()
