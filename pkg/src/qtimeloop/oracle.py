"""Loop-unrolling solver: sums traversals of the backward loop.

Substituting the early-coupler relations into the loop return gives the
affine fixed-point equation psi4 = T psi4 + S psi with
T = M (alpha^2 G2 - beta^2 G1) and S = -i alpha beta M (G1 + G2).
Iterating from psi4 = 0 adds one loop traversal per step, so the partial
sums are truncated geometric series and the converged iterate certifies
the closed-form answer without ever forming the denominator inverse.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import as_state, couple, spectral_radius
from .network import FeedbackNetwork, NetworkSolution, _assemble_solution

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1_000_000


@dataclass(frozen=True)
class IterationReport:
    iterations_used: int
    final_update_norm: float
    loop_spectral_radius_estimate: float
    converged: bool


class NotConvergedError(Exception):
    """Iteration budget exhausted or the iterate blew up; carries the report."""

    def __init__(self, message: str, report: IterationReport):
        super().__init__(message)
        self.report = report


def loop_map(net: FeedbackNetwork) -> tuple[np.ndarray, np.ndarray]:
    """Return (T, S) of the fixed-point equation psi4 = T psi4 + S psi."""
    a, b = net.splitter.alpha, net.splitter.beta
    t = net.m @ (a * a * net.g2 - b * b * net.g1)
    s = -1j * a * b * (net.m @ (net.g1 + net.g2))
    return t, s


def solve_by_iteration(
    net: FeedbackNetwork,
    psi,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[NetworkSolution, IterationReport]:
    """Solve by unrolling the loop until the psi4 update falls below ``tol``.

    Starts from psi4 = 0, the no-traversal history. Convergence is
    guaranteed when the loop spectral radius is below one; the estimate is
    checked up front and a RuntimeWarning recorded otherwise (the closed
    form may still exist there, the series just stops representing it).
    The update max-norm is the cheap per-step test; certify the result with
    :func:`qtimeloop.network.verify_fixed_point` when it matters.

    Returns ``(solution, report)``. Raises :class:`NotConvergedError` with
    the report attached when the budget runs out or the iterate stops being
    finite. The solution's ``denom_condition`` is None: no denominator is
    ever formed here.
    """
    psi = as_state(psi, net.dim)
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    t, s = loop_map(net)
    drive = s @ psi
    radius = spectral_radius(t, iterations=200, seed=0)
    # an undriven loop (alpha=1 or g2=-g1 at a balanced coupler) converges
    # in one step no matter what T looks like
    if radius >= 1.0 and np.any(drive != 0.0):
        warnings.warn(
            f"loop spectral radius estimate {radius:.4g} >= 1; iteration may not converge",
            RuntimeWarning,
        )
    psi4 = np.zeros(net.dim, dtype=complex)
    update_norm = float("inf")
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new = t @ psi4 + drive
        update_norm = float(np.max(np.abs(new - psi4)))
        psi4 = new
        if update_norm <= tol:
            converged = True
            break
        if not np.isfinite(update_norm):
            break
    report = IterationReport(
        iterations_used=iterations,
        final_update_norm=update_norm,
        loop_spectral_radius_estimate=radius,
        converged=converged,
    )
    if not converged:
        raise NotConvergedError(
            f"no convergence after {iterations} iterations "
            f"(last update {update_norm:.3e})",
            report,
        )
    psi1, psi2 = couple(net.splitter, psi, psi4)
    solution = _assemble_solution(net, psi, psi1, psi2, psi4, denom_condition=None)
    return solution, report
