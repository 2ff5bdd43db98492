"""Continue noisy Fourier data of a compactly supported function and compare with the bound.

Run with ``python demos/continuation_walkthrough.py``. The script samples the
transform of the indicator of [-1, 1] at Chebyshev nodes on [-1, 1], adds
worst-case noise, continues the data to [-2, 2] at several truncation orders
and prints the measured sup error next to the a-priori estimate.
"""

import numpy as np

from chebext import GridSpec, NodeGrid, bound_lemma21, extend, suite_member
from chebext.bounds import bound_holder_theorem
from chebext.harness import inject_noise


def main():
    member = suite_member("indicator", 1)
    r, R, delta = 1.0, 2.0, 1e-8
    rho = 4 * R / r
    prior = member.prior(r)
    nodes = NodeGrid(1, 128, r)
    data = inject_noise(member.fourier_nodes(nodes), delta, seed=1)
    grid = GridSpec.cube(1, R, 257)
    exact = member.fourier(grid).values

    print(f"indicator of [-1, 1]: N={prior.N:.4f}, sigma={prior.sigma}, data on [-{r}, {r}], delta={delta:g}")
    print(f"{'n':>4} {'sup error on [-R, R]':>22} {'bound':>12}")
    for n in (2, 4, 8, 12, 16, 24, 32):
        err = np.abs(extend(nodes, data, R, n, grid).values - exact).max()
        print(f"{n:>4} {err:>22.3e} {bound_lemma21(prior, delta, R, rho, n):>12.3e}")

    hb = bound_holder_theorem(prior, delta, R, rho)
    print(f"\nbalanced order n*={hb.n_star}, Hölder exponent 1 - tau = {1 - hb.tau_rho:.3f}, bound {hb.value:.3e}")


if __name__ == "__main__":
    main()
