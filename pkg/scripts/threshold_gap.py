"""Compare the local threshold R_c with the global threshold J_c across vaccination rates.

The gap J_c/R_c measures how far the sufficient global condition is from
the sharp local one. Prints a CSV table to stdout.

    python scripts/threshold_gap.py --points 25
"""

import argparse
import csv
import sys

import numpy as np

from sveirc import ModelParams, certify_global_stability
from sveirc.stability import dfe_spectrum_modulus, kamgang_sallet_upper_bound
from sveirc.linalg import stability_modulus
from sveirc.thresholds import threshold_report

BASE = ModelParams(
    Lambda=1.0, mu=0.1, beta1=0.12, beta2=0.04, alpha1=0.08, alpha2=0.04,
    gamma=0.1, d=0.05, xi=0.2, sigma=0.2, phi=1.0, p=0.5, eta=0.5,
    omega=0.5, kappa=10.0, n=1,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--sigma-min", type=float, default=1e-3)
    ap.add_argument("--sigma-max", type=float, default=10.0)
    args = ap.parse_args(argv)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["sigma", "r_c", "j_c", "r0", "s_dfe", "s_upper", "local_stable", "gas_certified"])
    for sigma in np.geomspace(args.sigma_min, args.sigma_max, args.points):
        P = BASE.replace(sigma=float(sigma))
        rep = threshold_report(P)
        verdict = certify_global_stability(P)
        out.writerow([
            f"{sigma:.6g}", f"{rep.r_c:.6g}", f"{rep.j_c:.6g}", f"{rep.r0:.6g}",
            f"{dfe_spectrum_modulus(P):.6g}",
            f"{stability_modulus(kamgang_sallet_upper_bound(P)):.6g}",
            verdict.locally_stable, verdict.globally_stable_certified,
        ])


if __name__ == "__main__":
    main()
