"""Do non-diagonal elements reach further than diagonal ones?

On a small window of levels both suprema can be computed exactly.  At
theta = 0 allowing off-diagonal entries gains nothing.  At theta = 0.6 it
gains a lot, even for the pair |0,0>, |1,0>.
"""

from ncps_distance.hilbert import make_params
from ncps_distance.numeric import probe_off_diagonal

for theta in (0.0, 0.6):
    p = make_params(1.0, theta)
    print(f"theta = {theta}")
    for b in [(1, 0), (1, 1), (2, 1)]:
        r = probe_off_diagonal(p, (0, 0), b, window=4)
        print(f"  (0,0)->{b}: diagonal {r.diagonal:.6f}, hermitian {r.hermitian:.6f}, "
              f"gain {r.gain:.2e}, closed form {r.closed_form:.6f}")
