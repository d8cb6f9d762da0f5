"""Expected first-passage times to the span-m lattice and the renewal-route gain.

Starting from 0, the expected number of plays until the walk first sits at
+m or -m solves a tridiagonal linear system over the 2m-1 interior states.
Combining that expectation with the embedded success probability gives the
asymptotic gain by a route independent of the stationary-cofactor one.
"""

import numpy as np

from .games import GainReport, InvalidSpecError, WalkSpec, classify, p_star, rho
from .stationary import _frozen, asymptotic_gain_cofactor

__all__ = [
    "HittingSystem",
    "TauVector",
    "expected_interoccurrence",
    "gain_report",
    "gain_via_renewal",
    "hitting_system",
]

from dataclasses import dataclass


@dataclass(frozen=True)
class HittingSystem:
    """Tridiagonal system H tau = rhs over states m-1, .., 1, 0, -1, .., -(m-1).

    H has 1 on the diagonal, -p/(p+q) below it and -q/(p+q) above it, drawing
    parameters from the state's congruence class; rhs is 1/(p+q) per state
    (all ones when the walk has no holds).
    """

    m: int
    matrix: np.ndarray
    rhs: np.ndarray
    states: tuple


@dataclass(frozen=True)
class TauVector:
    """Expected plays to reach the lattice, ordered from state m-1 down to -(m-1)."""

    tau: tuple

    @property
    def tau0(self) -> float:
        return self.tau[len(self.tau) // 2]


def hitting_system(w: WalkSpec) -> HittingSystem:
    m = w.m
    n = 2 * m - 1
    states = tuple(range(m - 1, -m, -1))
    r = w.r
    H = np.zeros((n, n))
    rhs = np.empty(n)
    for idx, j in enumerate(states):
        cls = j % m
        move = 1.0 if r[cls] == 0.0 else w.p[cls] + w.q[cls]
        H[idx, idx] = 1.0
        if idx > 0:  # state j+1 sits to the left
            H[idx, idx - 1] = -w.p[cls] / move
        if idx < n - 1:  # state j-1 sits to the right
            H[idx, idx + 1] = -w.q[cls] / move
        rhs[idx] = 1.0 / move
    return HittingSystem(m, _frozen(H), _frozen(rhs), states)


def _thomas(sub, diag, sup, rhs):
    # Tridiagonal forward elimination + back substitution; the system is an
    # M-matrix (unit diagonal, nonpositive off-diagonals with row sums >= 0),
    # so the sweep is stable without pivoting.  sub and sup have n-1 entries.
    n = len(rhs)
    c = np.zeros(n)
    d = np.empty(n)
    d[0] = rhs[0] / diag[0]
    if n > 1:
        c[0] = sup[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - sub[i - 1] * c[i - 1]
        if i < n - 1:
            c[i] = sup[i] / denom
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / denom
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def expected_interoccurrence(w: WalkSpec) -> TauVector:
    """Solve the hitting system; the middle component is tau0 = E(T2 - T1)."""
    hs = hitting_system(w)
    n = 2 * w.m - 1
    if n == 1:
        tau = np.array([hs.rhs[0]])
    else:
        tau = _thomas(
            np.diag(hs.matrix, -1),
            np.diag(hs.matrix).copy(),
            np.diag(hs.matrix, 1),
            hs.rhs,
        )
    if not np.all(np.isfinite(tau)) or np.any(tau <= 0.0):
        raise RuntimeError("hitting-time solve produced a non-positive expectation")
    return TauVector(tuple(float(t) for t in tau))


def gain_via_renewal(w: WalkSpec) -> float:
    """Asymptotic gain m (p* - q*) / E(T2 - T1)."""
    return w.m * (2.0 * p_star(w) - 1.0) / expected_interoccurrence(w).tau0


def gain_report(w: WalkSpec, tol: float | None = None) -> GainReport:
    """Assemble the full exact summary of one walk."""
    return GainReport(
        rho=rho(w),
        p_star=p_star(w),
        tau0=expected_interoccurrence(w).tau0,
        gain_cofactor=asymptotic_gain_cofactor(w),
        gain_renewal=gain_via_renewal(w),
        game_class=classify(w, tol),
    )
