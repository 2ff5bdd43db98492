"""Functions with almost no Fourier data on [-1, 1]^2 and yet sizeable L2 norm.

Run with ``python demos/instability_exhibit.py``. Shows that no reconstruction
method can beat logarithmic stability: the data of v_{n,m} decays like e^{-cn}
while the function itself only shrinks like n^{-m}.
"""

from chebext.harness import instability_fits, instability_table


def main():
    for d, label in ((2, "planar exhibit v_{n,1}"), (1, "line exhibit h_{n,1}")):
        table = instability_table(d, 1, (10, 20, 30, 40))
        print(label)
        print(f"  {'n':>3} {'L2 norm':>11} {'data sup':>11}")
        for n, l2, dn in table:
            print(f"  {n:>3} {l2:>11.3e} {dn:>11.3e}")
        fits = instability_fits(table)
        print(f"  fitted L2 power {fits['l2_rate']:.3f}, data decay {fits['decay_rate']:.2f} per unit n\n")


if __name__ == "__main__":
    main()
