"""Numerical limit studies for the mollified double-integral regularizer.

Two experiments on 1D signals:

1. As epsilon -> 0 with s = 1, the mollified functional approaches a
   constant multiple of the classical integral of |u'|^p (a localization
   limit).  The reported ratio of the discrete functional to the local
   reference should approach 1.

2. With 0 < s < 1 the mollified functional is compared against the
   fractional (Gagliardo-type) seminorm at the same s; the ratio is
   tracked over a decreasing epsilon sequence to see whether it
   stabilizes, and compared across two independent rough test signals.

Run:  python3 demos/limit_studies.py
"""

import numpy as np

from circlereg import (
    GridSpec,
    bbm_limit_study,
    conjecture_study,
    roughness_test_signal,
)


def main():
    n = 2048
    grid = GridSpec((n,))
    x = grid.coords()[:, 0]

    print("localization limit (s = 1), u(x) = 2 + sin(2*pi*x), p = 2")
    u = 2.0 + np.sin(2 * np.pi * x)
    for row in bbm_limit_study(u, grid, p=2, eps_list=[0.04, 0.02, 0.01, 0.005]):
        print(f"  eps = {row['eps']:.4f}   ratio to local functional = {row['ratio']:.6f}")

    print()
    print("fractional comparison (s = 0.5, p = 2), two rough signals")
    for seed in (7, 8):
        u = roughness_test_signal(n, s=0.5, seed=seed)
        res = conjecture_study(
            u, grid, p=2, s=0.5, eps_list=[0.08, 0.04, 0.02, 0.01, 0.005])
        last = res["rows"][-1]
        print(f"  seed {seed}: final ratio = {last['ratio']:.6f}, "
              f"stabilized = {res['stabilized']}")


if __name__ == "__main__":
    main()
