"""Runtime invariant suite backing the `check` CLI subcommand.

These are the same guards the test suite exercises, packaged so a seeded
instance can be vetted from the command line: finite-difference gradient
agreement, the sampled descent envelopes, the first-order condition of
the closed-form prox, and monotonicity of the descent certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from . import harness
from .problems import check_smad, default_sampler
from .solvers import LineSearchConfig, SolverConfig, bpge_solve


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str


def finite_difference_gradient(fn, x, step: float = 1e-6) -> np.ndarray:
    g = np.zeros_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        g[j] = (fn(x + e) - fn(x - e)) / (2.0 * step)
    return g


def _check_gradient(obj, rng, points: int = 20) -> CheckOutcome:
    sampler = default_sampler(obj.kernel)
    worst = 0.0
    for _ in range(points):
        x = sampler(rng)
        g = obj.smooth.gradient(x)
        fd = finite_difference_gradient(obj.smooth.value, x)
        err = np.linalg.norm(g - fd) / max(1.0, np.linalg.norm(g))
        worst = max(worst, err)
    return CheckOutcome("gradient_fd", worst < 1e-5,
                        "max relative error %.3e" % worst)


def _check_smad(obj, seed: int) -> CheckOutcome:
    report = check_smad(obj, samples=200, rng_seed=seed)
    detail = "max upper %.3e, max lower %.3e" % (
        report.max_upper_violation, report.max_lower_violation)
    return CheckOutcome("smad_envelopes", not report.failed, detail)


def _check_prox(obj, rng, calls: int = 20) -> CheckOutcome:
    """First-order condition of the prox output at random interior points."""
    sampler = default_sampler(obj.kernel)
    lam = 1.0 / obj.smooth.smad_constant()
    kernel = obj.kernel
    theta = getattr(obj.nonsmooth, "weight", None)
    worst = 0.0
    for _ in range(calls):
        y = sampler(rng)
        grad = obj.smooth.gradient(y)
        u = obj.nonsmooth.prox(kernel, y, grad, lam)
        c = kernel.gradient(y) - lam * grad
        gu = kernel.gradient(u)
        if theta is None:
            worst = max(worst, float(np.linalg.norm(gu - c)))
        else:
            tau = lam * theta
            for j in range(u.size):
                if u[j] != 0.0:
                    worst = max(worst, abs(gu[j] + tau * np.sign(u[j]) - c[j]))
                else:
                    worst = max(worst, abs(c[j]) - tau)
    return CheckOutcome("prox_first_order", worst < 1e-8,
                        "max residual %.3e" % worst)


def _check_lyapunov(obj, x0) -> CheckOutcome:
    cfg = SolverConfig(
        lam=1.0 / obj.smooth.smad_constant(),
        line_search=LineSearchConfig(),
        k_max=200,
    )
    result = bpge_solve(obj, x0, cfg)
    worst = 0.0
    for prev, curr in zip(result.trace, result.trace[1:]):
        slack = 1e-10 * max(1.0, abs(prev.lyapunov))
        worst = max(worst, curr.lyapunov - prev.lyapunov - slack)
    return CheckOutcome("lyapunov_monotone", worst <= 0.0,
                        "max increase beyond slack %.3e" % worst)


def run_invariant_checks(problem: str, m: int, d: int, seed: int,
                         theta: float = 1.0) -> List[CheckOutcome]:
    inst = harness.generate_instance(problem, m, d, seed, theta=theta)
    obj, x0 = harness.problem_bundle(problem, inst)
    rng = np.random.default_rng([seed, 2])
    return [
        _check_gradient(obj, rng),
        _check_smad(obj, seed),
        _check_prox(obj, rng),
        _check_lyapunov(obj, x0),
    ]
