"""Observed convergence of the Dormand-Prince integrator on the model.

Prints fixed-step errors (order of the scheme) and adaptive errors versus
tolerance against a tight-tolerance reference.
"""

import math

import numpy as np

from sveirc import IntegratorConfig, ModelParams, integrate
from sveirc.dynamics import dp_step
from sveirc.model import make_rhs
from sveirc.sampling import with_rc

P = with_rc(ModelParams(
    Lambda=1.0, mu=0.1, beta1=0.03, beta2=0.01, alpha1=0.02, alpha2=0.01,
    gamma=0.1, d=0.05, xi=0.2, sigma=0.2, phi=1.0, p=0.5, eta=0.5,
    omega=0.5, kappa=10.0, n=1,
), 2.0)
X0 = (6.0, 0.5, 0.5, 2.0, 1.0)


def main():
    T = 20.0
    ref = np.array(integrate(P, X0, IntegratorConfig(t_end=T, rel_tol=1e-13, abs_tol=1e-16)).final)
    rhs = make_rhs(P)
    print("fixed step: steps  error  observed order")
    prev = None
    for m in (10, 20, 40, 80, 160):
        y, h = list(X0), T / m
        for k in range(m):
            y, _ = dp_step(rhs, k * h, y, rhs(k * h, y), h)
        err = float(np.max(np.abs(np.array(y) - ref)))
        order = f"{math.log2(prev / err):.2f}" if prev else ""
        print(f"{m:6d}  {err:.3e}  {order}")
        prev = err

    print("adaptive: rel_tol  steps  error")
    for tol in (1e-4, 1e-6, 1e-8, 1e-10):
        tr = integrate(P, X0, IntegratorConfig(t_end=T, rel_tol=tol, abs_tol=tol * 1e-3))
        err = float(np.max(np.abs(np.array(tr.final) - ref)))
        print(f"{tol:8.0e}  {tr.accepted_steps:5d}  {err:.3e}")


if __name__ == "__main__":
    main()
