"""Congruence-class chain analysis: cofactors, stationary law, cofactor-weighted gain.

The walk's class process is a Markov chain on {0, .., m-1} with a cyclic
transition matrix C.  Its stationary probabilities are proportional to the
diagonal cofactors of I - C, which this module computes two independent ways:
numerically from determinants of minors, and from a closed-form alternating
sum available when all holds vanish.  The stationary distribution weighted by
the per-class drift gives the walk's asymptotic gain.
"""

import math
from dataclasses import dataclass

import numpy as np

from .games import InvalidSpecError, WalkSpec

__all__ = [
    "DEFAULT_COFACTOR_CAP",
    "CofactorSet",
    "CongruenceMatrix",
    "DriftVector",
    "StationaryVector",
    "asymptotic_gain_cofactor",
    "congruence_matrix",
    "diag_cofactors_closed",
    "diag_cofactors_det",
    "drift_vector",
    "period2_decompose",
    "stationary",
]

DEFAULT_COFACTOR_CAP = 64


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CongruenceMatrix:
    """m x m class-transition matrix: row i holds p[i] at column i+1 (mod m),
    q[i] at column i-1 (mod m) and r[i] on the diagonal; for m <= 2 the
    overlapping positions accumulate."""

    m: int
    entries: np.ndarray


@dataclass(frozen=True)
class CofactorSet:
    """Diagonal cofactors of I - C, ordered by the deleted row/column index."""

    gammas: tuple

    @property
    def total(self) -> float:
        return math.fsum(self.gammas)


@dataclass(frozen=True)
class StationaryVector:
    pi: tuple


@dataclass(frozen=True)
class DriftVector:
    """Per-class mean increments b[j] = p[j] - q[j]."""

    b: tuple


def congruence_matrix(w: WalkSpec) -> CongruenceMatrix:
    m = w.m
    C = np.zeros((m, m))
    r = w.r
    for i in range(m):
        C[i, (i + 1) % m] += w.p[i]
        C[i, (i - 1) % m] += w.q[i]
        C[i, i] += r[i]
    return CongruenceMatrix(m, _frozen(C))


def diag_cofactors_det(c: CongruenceMatrix, max_m: int = DEFAULT_COFACTOR_CAP) -> CofactorSet:
    """Diagonal cofactors as determinants of minors of I - C (LU with partial
    pivoting).  Valid for any hold pattern; sizes are capped at ``max_m``."""
    if c.m > max_m:
        raise InvalidSpecError(f"cofactor computation capped at m={max_m}, got m={c.m}")
    A = np.eye(c.m) - c.entries
    gammas = []
    for i in range(c.m):
        keep = [j for j in range(c.m) if j != i]
        gammas.append(float(np.linalg.det(A[np.ix_(keep, keep)])))
    return CofactorSet(tuple(gammas))


def _leading_cofactor(p, q) -> float:
    # Alternating sum over non-adjacent index sets of p[i]q[i+1] products,
    # folded into the three-term recurrence D[k] = D[k-1] - p[k]q[k+1]*D[k-2].
    m = len(p)
    prev2, prev1 = 1.0, 1.0
    for i in range(1, m - 1):
        prev2, prev1 = prev1, prev1 - p[i] * q[i + 1] * prev2
    return prev1


def diag_cofactors_closed(w: WalkSpec) -> CofactorSet:
    """Closed-form diagonal cofactors for hold-free walks.

    The leading cofactor is the alternating inclusion-exclusion sum over
    non-adjacent products p[i]q[i+1]; the rest follow by cyclically permuting
    the parameter vectors.  Rejects walks with nonzero holds.
    """
    if w.has_holds:
        raise InvalidSpecError("closed-form cofactors require all holds to be zero")
    m = w.m
    gammas = []
    for s in range(m):
        p = [w.p[(j + s) % m] for j in range(m)]
        q = [w.q[(j + s) % m] for j in range(m)]
        gammas.append(_leading_cofactor(p, q))
    return CofactorSet(tuple(gammas))


def stationary(cs: CofactorSet) -> StationaryVector:
    """Normalize the cofactor vector into stationary probabilities."""
    total = cs.total
    if not total > 0.0:
        raise InvalidSpecError(
            f"cofactor total must be positive, got {total} (reducible or invalid chain)"
        )
    return StationaryVector(tuple(g / total for g in cs.gammas))


def drift_vector(w: WalkSpec) -> DriftVector:
    return DriftVector(tuple(pj - qj for pj, qj in zip(w.p, w.q)))


def asymptotic_gain_cofactor(w: WalkSpec) -> float:
    """Asymptotic average gain lim S_n / n as the cofactor-weighted mean drift.

    Works for every period, even or odd, and for nonzero holds.
    """
    cs = diag_cofactors_det(congruence_matrix(w))
    b = drift_vector(w).b
    return math.fsum(g * bj for g, bj in zip(cs.gammas, b)) / cs.total


def _mihoc_stationary(P: np.ndarray) -> np.ndarray:
    k = P.shape[0]
    A = np.eye(k) - P
    gam = np.empty(k)
    for i in range(k):
        keep = [j for j in range(k) if j != i]
        gam[i] = np.linalg.det(A[np.ix_(keep, keep)])
    return gam / math.fsum(gam)


def period2_decompose(c: CongruenceMatrix):
    """Split an even-period hold-free chain into its two-step halves.

    Clustering even and odd classes writes C as [[0, A], [B, 0]]; the returned
    pair (delta, rho) holds the stationary vectors of AB and BA.  These equal
    the even- and odd-indexed diagonal cofactors of I - C scaled by
    2/sum(cofactors).
    """
    if c.m % 2:
        raise InvalidSpecError(f"period-2 decomposition requires even m, got {c.m}")
    if np.any(np.abs(np.diag(c.entries)) > 0.0):
        raise InvalidSpecError("period-2 decomposition requires all holds to be zero")
    evens = list(range(0, c.m, 2))
    odds = list(range(1, c.m, 2))
    A = c.entries[np.ix_(evens, odds)]
    B = c.entries[np.ix_(odds, evens)]
    delta = _mihoc_stationary(A @ B)
    rho_vec = _mihoc_stationary(B @ A)
    return _frozen(delta), _frozen(rho_vec)
