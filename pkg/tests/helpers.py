"""Independent oracles shared by the test modules.

These deliberately avoid the closed-form code paths they are used to
check: gradients come from central finite differences, prox solutions
from a dense grid plus Nelder-Mead refinement, and the scalar cubic from
plain bisection.
"""

import numpy as np
from scipy.optimize import minimize


def fd_gradient(fn, x, step=1e-6):
    g = np.zeros_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        g[j] = (fn(x + e) - fn(x - e)) / (2.0 * step)
    return g


def prox_subproblem(kernel, g_value, y, grad, lam):
    """The map u -> g(u) + <grad, u - y> + D_h(u, y) / lam, inf off-domain."""
    def phi(u):
        u = np.asarray(u, dtype=float)
        if not kernel.in_interior_domain(u):
            return np.inf
        return (g_value(u) + float(np.dot(grad, u - y))
                + kernel.bregman(u, y) / lam)
    return phi


def prox_oracle(kernel, g_value, y, grad, lam, lo, hi, grid_n=41):
    """Dense-grid scan over [lo, hi]^d followed by Nelder-Mead refinement."""
    d = y.size
    assert d <= 3, "oracle is exponential in the dimension"
    phi = prox_subproblem(kernel, g_value, y, grad, lam)
    axes = [np.linspace(lo, hi, grid_n)] * d
    best_u, best_v = None, np.inf
    for point in np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, d):
        v = phi(point)
        if v < best_v:
            best_u, best_v = point, v
    res = minimize(phi, best_u, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14,
                            "maxiter": 20000, "maxfev": 20000})
    return (res.x, res.fun) if res.fun <= best_v else (best_u, best_v)


def bisect_cubic(s, tol=1e-13):
    """Root of r^3 + r = s by bisection on [0, max(1, s)]."""
    lo, hi = 0.0, max(1.0, s)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid ** 3 + mid < s:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
