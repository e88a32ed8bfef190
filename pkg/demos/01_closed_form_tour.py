"""Closed-form distances between Fock states, and how they shrink with theta.

Run with ``python demos/01_closed_form_tour.py``.
"""

from ncps_distance import closed_form as cf
from ncps_distance.hilbert import make_params

moyal = make_params(1.0, 0.0)

# Along one mode, each extra level adds step / sqrt(level), so the steps get smaller.
print("distance from |0,0> along the first mode (theta = 0)")
for k in range(1, 7):
    d = cf.distance(moyal, (0, 0), (k, 0)).closed_form
    print(f"  |{k},0>  {d:.6f}")

# Moving along both modes combines the two one-mode distances like the sides of a right triangle.
d_x = cf.distance(moyal, (0, 0), (2, 0)).closed_form
d_y = cf.distance(moyal, (0, 0), (0, 3)).closed_form
d_xy = cf.distance(moyal, (0, 0), (2, 3)).closed_form
print(f"\nd(|0,0>,|2,3>) = {d_xy:.6f}, hypot of the sides = {(d_x**2 + d_y**2) ** 0.5:.6f}")

# A nonzero theta multiplies every distance by sqrt(1 - theta^2 / hbar^2).
print("\nd(|0,0>,|1,1>) as theta grows")
for theta in (0.0, 0.3, 0.6, 0.9, 0.99):
    p = make_params(1.0, theta)
    d = cf.distance(p, (0, 0), (1, 1)).closed_form
    print(f"  theta={theta:<5} d={d:.6f}  ratio to theta=0: {p.shortening:.6f}")
