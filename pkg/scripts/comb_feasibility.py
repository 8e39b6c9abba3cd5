#!/usr/bin/env python3
"""Physical lattice scales and the noise-to-failure mapping across comb repetition rates."""
import argparse

import numpy as np

from tfgkp import CombParams, LabNoiseBudget, lab_to_dimensionless, lattice_scales, p_fail_analytic


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-jitter", type=float, default=1e-12, help="timing jitter, s")
    ap.add_argument("--w-linewidth", type=float, default=1e6, help="spectral jitter, rad/s")
    args = ap.parse_args()

    budget = LabNoiseBudget(t_jitter=args.t_jitter, w_seed=args.w_linewidth)
    print(f"{'f_rep':>9} {'dt_stab':>10} {'dw_stab':>10} {'sigma_tau':>10} {'sigma_om':>10} {'p_fail':>10}")
    for f_rep in np.geomspace(1e7, 1e10, 7):
        comb = CombParams(float(f_rep))
        s = lattice_scales(comb)
        m = lab_to_dimensionless(budget, comb)
        print(f"{f_rep:9.3g} {s.dt_stab:10.4g} {s.dw_stab:10.4g} {m.sigma_tau:10.3g} {m.sigma_omega:10.3g}"
              f" {p_fail_analytic(m):10.3g}")


if __name__ == "__main__":
    main()
