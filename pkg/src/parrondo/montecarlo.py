"""Monte Carlo validation of the exact quantities, with reproducible replicas.

Each replica draws from its own substream, keyed by (seed, replica index)
through numpy's SeedSequence spawn keys, so results are bit-identical for a
fixed configuration regardless of batching.  Slopes use the endpoint
difference after a burn-in; lattice renewals (visits to the span-m lattice a
full span away from the previous one) yield empirical counterparts of the
embedded success probability and the interoccurrence time.
"""

import math
from dataclasses import dataclass

import numpy as np

from .games import InvalidSpecError, WalkSpec, mix_random, p_star
from .hitting import expected_interoccurrence, gain_via_renewal
from .mixtures import PatternSchedule, pattern_gain
from .stationary import asymptotic_gain_cofactor

__all__ = [
    "ConcordanceReport",
    "RandomMixGame",
    "ScheduledGame",
    "SimConfig",
    "SimResult",
    "estimate_vs_exact",
    "simulate",
    "trace_path",
]

# Replica batches are sized so one batch's uniforms stay near this many floats.
_BATCH_BUDGET_FLOATS = 20_000_000


@dataclass(frozen=True)
class SimConfig:
    """Replica count, plays per replica, RNG seed, and the burn-in discarded
    before slope estimation."""

    steps: int
    replicas: int
    seed: int
    burn_in: int = 100

    def __post_init__(self):
        if self.replicas < 1:
            raise InvalidSpecError(f"replicas must be >= 1, got {self.replicas}")
        if self.burn_in < 0:
            raise InvalidSpecError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.steps <= self.burn_in:
            raise InvalidSpecError(
                f"steps ({self.steps}) must exceed burn_in ({self.burn_in})"
            )
        if not 0 <= self.seed < 2**64:
            raise InvalidSpecError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class ScheduledGame:
    """Two walks played in a fixed periodic pattern such as 'AABB'."""

    a: WalkSpec
    b: WalkSpec
    pattern: str

    def __post_init__(self):
        if self.a.m != self.b.m:
            raise InvalidSpecError(f"schedule needs equal periods, got {self.a.m} and {self.b.m}")
        object.__setattr__(self, "pattern", PatternSchedule(self.pattern).pattern)


@dataclass(frozen=True)
class RandomMixGame:
    """Two walks, the first chosen independently with probability pi each play."""

    a: WalkSpec
    b: WalkSpec
    pi: float

    def __post_init__(self):
        if self.a.m != self.b.m:
            raise InvalidSpecError(f"mixture needs equal periods, got {self.a.m} and {self.b.m}")
        pi = float(self.pi)
        if not 0.0 <= pi <= 1.0:
            raise InvalidSpecError(f"mixing probability must lie in [0, 1], got {pi}")
        object.__setattr__(self, "pi", pi)


@dataclass(frozen=True)
class SimResult:
    mean_slope: float
    stderr: float
    p_star_hat: float
    p_star_stderr: float
    tau0_hat: float
    tau0_stderr: float
    replica_count: int
    total_steps: int


def _phase_tables(game):
    """Per-phase up/down probability rows, plus the mixture split if any.

    Returns (m, P, Q, pi, draws_per_step) where P and Q have one row per
    schedule phase (or two rows, game a then game b, for a random mixture).
    """
    if isinstance(game, WalkSpec):
        return game.m, np.array([game.p]), np.array([game.q]), None, 1
    if isinstance(game, ScheduledGame):
        rows_p = [(game.a if ch == "A" else game.b).p for ch in game.pattern]
        rows_q = [(game.a if ch == "A" else game.b).q for ch in game.pattern]
        return game.a.m, np.array(rows_p), np.array(rows_q), None, 1
    if isinstance(game, RandomMixGame):
        return (
            game.a.m,
            np.array([game.a.p, game.b.p]),
            np.array([game.a.q, game.b.q]),
            game.pi,
            2,
        )
    raise InvalidSpecError(f"cannot simulate object of type {type(game).__name__}")


def _replica_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def simulate(game, cfg: SimConfig) -> SimResult:
    """Run the replicas and pool slope and renewal statistics.

    ``game`` is a WalkSpec, a ScheduledGame, or a RandomMixGame.  A random
    mixture draws the game choice independently at each play (one extra
    uniform per step).  Deterministic for a fixed (game, cfg).
    """
    m, P, Q, pi_mix, k = _phase_tables(game)
    L = P.shape[0] if pi_mix is None else 1
    steps, burn = cfg.steps, cfg.burn_in

    batch = max(1, min(cfg.replicas, _BATCH_BUDGET_FLOATS // (k * steps) or 1))
    slopes = np.empty(cfg.replicas)
    renew_count = 0
    renew_sum = 0.0
    renew_sumsq = 0.0
    succ = 0

    for start in range(0, cfg.replicas, batch):
        stop = min(start + batch, cfg.replicas)
        nb = stop - start
        U = np.empty((nb, steps * k))
        for i in range(nb):
            U[i] = _replica_stream(cfg.seed, start + i).random(steps * k)
        S = np.zeros(nb, dtype=np.int64)
        cls = np.zeros(nb, dtype=np.int64)
        last_s = np.zeros(nb, dtype=np.int64)
        last_t = np.zeros(nb, dtype=np.int64)
        s_burn = np.zeros(nb, dtype=np.int64)
        for n in range(steps):
            if pi_mix is None:
                row = n % L
                pj = P[row][cls]
                qj = Q[row][cls]
                u = U[:, n]
            else:
                use_a = U[:, 2 * n] < pi_mix
                pj = np.where(use_a, P[0][cls], P[1][cls])
                qj = np.where(use_a, Q[0][cls], Q[1][cls])
                u = U[:, 2 * n + 1]
            move = (u < pj).astype(np.int64) - ((u >= pj) & (u < pj + qj)).astype(np.int64)
            S += move
            cls += move
            cls[cls == m] = 0
            cls[cls < 0] = m - 1
            diff = S - last_s
            hit = np.abs(diff) == m
            if hit.any():
                t = n + 1
                xi = (t - last_t[hit]).astype(float)
                renew_count += xi.size
                renew_sum += float(xi.sum())
                renew_sumsq += float((xi * xi).sum())
                succ += int((diff[hit] == m).sum())
                last_s[hit] = S[hit]
                last_t[hit] = t
            if n + 1 == burn:
                s_burn[:] = S
        slopes[start:stop] = (S - s_burn) / float(steps - burn)

    mean_slope = float(np.mean(slopes))
    stderr = (
        float(np.std(slopes, ddof=1) / math.sqrt(cfg.replicas)) if cfg.replicas > 1 else 0.0
    )
    if renew_count == 0:
        raise RuntimeError(
            "no lattice renewals observed; increase steps relative to the period"
        )
    phat = succ / renew_count
    p_se = math.sqrt(max(phat * (1.0 - phat), 0.0) / renew_count)
    tau_hat = renew_sum / renew_count
    var = max(renew_sumsq - renew_sum**2 / renew_count, 0.0) / max(renew_count - 1, 1)
    tau_se = math.sqrt(var / renew_count)
    return SimResult(
        mean_slope=mean_slope,
        stderr=stderr,
        p_star_hat=phat,
        p_star_stderr=p_se,
        tau0_hat=tau_hat,
        tau0_stderr=tau_se,
        replica_count=cfg.replicas,
        total_steps=cfg.replicas * cfg.steps,
    )


def trace_path(game, cfg: SimConfig) -> np.ndarray:
    """Fortune S_0 .. S_steps of replica 0 (the same stream simulate uses)."""
    m, P, Q, pi_mix, k = _phase_tables(game)
    L = P.shape[0] if pi_mix is None else 1
    u = _replica_stream(cfg.seed, 0).random(cfg.steps * k)
    path = np.empty(cfg.steps + 1, dtype=np.int64)
    path[0] = 0
    s = 0
    cls = 0
    for n in range(cfg.steps):
        if pi_mix is None:
            p_row, q_row = P[n % L], Q[n % L]
            draw = u[n]
        else:
            which = 0 if u[2 * n] < pi_mix else 1
            p_row, q_row = P[which], Q[which]
            draw = u[2 * n + 1]
        if draw < p_row[cls]:
            move = 1
        elif draw < p_row[cls] + q_row[cls]:
            move = -1
        else:
            move = 0
        s += move
        cls = (cls + move) % m
        path[n + 1] = s
    return path


@dataclass(frozen=True)
class ConcordanceReport:
    """z-scores of the simulated estimates against the exact values."""

    z_scores: dict
    exact: dict
    result: SimResult


def _z(estimate: float, exact: float, se: float) -> float:
    if se > 0.0:
        return (estimate - exact) / se
    return 0.0 if estimate == exact else math.inf


def estimate_vs_exact(game, cfg: SimConfig) -> ConcordanceReport:
    """Simulate and compare against the exact quantities.

    Plain walks and random mixtures (which are walks in distribution) get
    z-scores for the slope against both exact gain routes plus the embedded
    success probability and interoccurrence time; schedules compare the slope
    against the exact pattern gain.
    """
    res = simulate(game, cfg)
    if isinstance(game, WalkSpec):
        w = game
    elif isinstance(game, RandomMixGame):
        w = mix_random(game.a, game.b, game.pi)
    else:
        w = None
    if w is not None:
        exact = {
            "gain_cofactor": asymptotic_gain_cofactor(w),
            "gain_renewal": gain_via_renewal(w),
            "p_star": p_star(w),
            "tau0": expected_interoccurrence(w).tau0,
        }
        z = {
            "slope_vs_cofactor": _z(res.mean_slope, exact["gain_cofactor"], res.stderr),
            "slope_vs_renewal": _z(res.mean_slope, exact["gain_renewal"], res.stderr),
            "p_star": _z(res.p_star_hat, exact["p_star"], res.p_star_stderr),
            "tau0": _z(res.tau0_hat, exact["tau0"], res.tau0_stderr),
        }
    else:
        exact = {"gain": pattern_gain(game.a, game.b, game.pattern)}
        z = {"slope_vs_exact": _z(res.mean_slope, exact["gain"], res.stderr)}
    return ConcordanceReport(z, exact, res)
