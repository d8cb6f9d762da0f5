"""Diffusions with periodic piecewise-constant drift and their embedded walks.

A Brownian motion with drift rate mu[j] on each unit interval (j, j+1] hits
one of its two neighboring integers first with probabilities that depend only
on the two adjacent drift rates, so the integer skeleton of the diffusion is
a mod-m walk.  All recurrence and gain questions are answered through that
embedded walk and the scale function; for m = 3 the map from transition
probabilities back to drift rates is inverted exactly.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .games import InvalidSpecError, WalkSpec
from .roots import BracketError, bisect_root, deflate

__all__ = [
    "DriftProfile",
    "ScaleTable",
    "anderson_hit_prob",
    "diffusion_p_star",
    "diffusion_rho",
    "embedded_probs",
    "invert_drifts_m3",
    "r_func",
    "scale_at_integers",
]

_TAYLOR_CUTOFF = 1e-4
_HALF_TOL = 1e-10
_SCAN_STEP = 0.1
_SCAN_LIMIT = 1200  # scan w = exp(+-k*step) out to |ln w| = 120


def r_func(u: float) -> float:
    """(e^(2u) - 1)/u, extended continuously by r(0) = 2; strictly increasing."""
    u = float(u)
    if abs(u) < _TAYLOR_CUTOFF:
        # series cutoff avoids the 0/0 form; next term is (4/15)u^4
        return 2.0 + u * (2.0 + u * (4.0 / 3.0 + u * (2.0 / 3.0)))
    return math.expm1(2.0 * u) / u


@dataclass(frozen=True)
class DriftProfile:
    """Periodic drift rates mu[j] on the unit intervals, j taken mod m."""

    m: int
    mu: tuple

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidSpecError(f"period m must be a positive integer, got {self.m!r}")
        mu = tuple(float(v) for v in self.mu)
        if len(mu) != self.m:
            raise InvalidSpecError(f"mu must have length m={self.m}, got {len(mu)}")
        if not all(math.isfinite(v) for v in mu):
            raise InvalidSpecError("drift rates must be finite")
        object.__setattr__(self, "mu", mu)


def embedded_probs(d: DriftProfile) -> WalkSpec:
    """Transition probabilities of the integer skeleton:
    p[j] = r(mu[j-1]) / (r(mu[j-1]) + r(-mu[j])), indices mod m; no holds."""
    p = []
    for j in range(d.m):
        up = r_func(d.mu[(j - 1) % d.m])
        down = r_func(-d.mu[j])
        p.append(up / (up + down))
    return WalkSpec(d.m, tuple(p), tuple(1.0 - v for v in p))


def scale_at_integers(d: DriftProfile, n: int) -> float:
    """Scale function at integer n (0 at n = 0, strictly increasing).

    Hitting probabilities are linear ratios of these values: the chance of
    reaching b before a from x is (S(x) - S(a)) / (S(b) - S(a)).
    """
    n = int(n)
    mu = lambda k: d.mu[k % d.m]
    if n == 0:
        return 0.0
    terms = []
    if n > 0:
        expo = 0.0
        for k in range(n):
            expo += mu(k)
            terms.append(r_func(mu(k)) * math.exp(-2.0 * expo))
    else:
        expo = 0.0
        for k in range(-1, n - 1, -1):
            terms.append(-r_func(mu(k)) * math.exp(2.0 * expo))
            expo += mu(k)
    return math.fsum(terms)


@dataclass(frozen=True)
class ScaleTable:
    """Cached scale-function values on a range of integers."""

    values: dict

    @classmethod
    def build(cls, d: DriftProfile, lo: int, hi: int) -> "ScaleTable":
        if lo > hi:
            raise InvalidSpecError(f"empty integer range [{lo}, {hi}]")
        vals = {n: scale_at_integers(d, n) for n in range(lo, hi + 1)}
        ordered = [vals[n] for n in range(lo, hi + 1)]
        if any(b <= a for a, b in zip(ordered, ordered[1:])):
            raise RuntimeError("scale values must be strictly increasing")
        return cls(vals)


def diffusion_rho(d: DriftProfile) -> float:
    """Product ratio of the embedded walk: exp(2 * sum(mu))."""
    return math.exp(2.0 * math.fsum(d.mu))


def diffusion_p_star(d: DriftProfile) -> float:
    """Embedded success probability 1 / (1 + exp(-2 sum(mu))); the diffusion is
    fair exactly when the drift rates sum to zero."""
    return 1.0 / (1.0 + math.exp(-2.0 * math.fsum(d.mu)))


def anderson_hit_prob(mu: float, a: float, b: float) -> float:
    """Chance that Brownian motion with constant drift mu, started at 0, hits
    b before a (a < 0 < b)."""
    if not a < 0.0 < b:
        raise InvalidSpecError(f"need a < 0 < b, got a={a}, b={b}")
    mu = float(mu)
    if mu == 0.0:
        return -a / (b - a)
    return math.expm1(2.0 * a * mu) / math.expm1(-2.0 * (b - a) * mu)


# --- inverse problem for m = 3 ------------------------------------------------

def _solve_r_equals(c: float) -> float:
    """Unique u with r(u) = c for c > 0 (r is a strictly increasing bijection
    onto (0, inf))."""
    if c == 2.0:
        return 0.0
    lo, hi = (-1.0, 0.0) if c < 2.0 else (0.0, 1.0)
    if c < 2.0:
        while r_func(lo) > c:
            lo *= 2.0
            if lo < -400.0:
                raise BracketError(f"cannot bracket r(u) = {c} below")
    else:
        while r_func(hi) < c:
            hi *= 2.0
            if hi > 400.0:
                raise BracketError(f"cannot bracket r(u) = {c} above")
    return bisect_root(lambda u: r_func(u) - c, lo, hi)


def _pow_safe(w: float, theta: float) -> float:
    t = theta * math.log(w)
    if t > 709.0:
        return math.inf
    if t < -745.0:
        return 0.0
    return math.exp(t)


def _w_poly_route(alpha: float, frac: Fraction):
    # theta = num/den in (0, 1): substituting z = w^(1/den) turns the equation
    # into a polynomial with a known root at z = 1 to deflate away.
    num, den = frac.numerator, frac.denominator
    c = [0.0] * (den + 1)
    c[den] += alpha
    c[num] -= 1.0
    c[0] += 1.0 - alpha
    quotient = deflate(tuple(c), 1.0)
    roots = np.roots(quotient[::-1])
    cands = [
        z.real
        for z in roots
        if abs(z.imag) <= 1e-9 * max(1.0, abs(z)) and z.real > 0.0 and abs(z.real - 1.0) > 1e-9
    ]
    if len(cands) != 1:
        return None
    return float(cands[0]) ** den


def _w_bisect_route(alpha: float, theta: float) -> float:
    # g(w) = (alpha*w - w^theta + 1 - alpha) / (w - 1) removes the trivial root
    # at w = 1; g(1) = alpha - theta analytically.  Scan both half-lines on a
    # geometric grid for a sign change in g and bisect.
    def g(w: float) -> float:
        return (alpha * w - _pow_safe(w, theta) + 1.0 - alpha) / (w - 1.0)

    slope = alpha - theta
    if slope == 0.0:
        raise BracketError("degenerate equation: alpha equals theta (double root at w = 1)")
    scanned = []
    for direction in (1.0, -1.0):
        prev_w = 1.0
        prev_g = slope
        for k in range(1, _SCAN_LIMIT + 1):
            wk = math.exp(direction * k * _SCAN_STEP)
            gk = g(wk)
            if gk == 0.0:
                return wk
            if (gk > 0.0) != (prev_g > 0.0):
                lo, hi = (prev_w, wk) if prev_w < wk else (wk, prev_w)
                flo, fhi = (prev_g, gk) if prev_w < wk else (gk, prev_g)
                return bisect_root(g, lo, hi, flo=flo, fhi=fhi)
            prev_w, prev_g = wk, gk
        scanned.append((direction, prev_w, prev_g))
    raise BracketError(
        f"no second root of alpha*w - w^theta + (1-alpha) found for alpha={alpha}, "
        f"theta={theta}; scan endpoints: {scanned}"
    )


def _solve_w(alpha: float, theta: float):
    frac = Fraction(theta).limit_denominator(12)
    if 0 < frac < 1 and abs(float(frac) - theta) <= 1e-12 * max(1.0, abs(theta)):
        w = _w_poly_route(alpha, frac)
        if w is not None:
            return w, "polynomial"
    return _w_bisect_route(alpha, theta), "bisection"


def invert_drifts_m3(p0: float, p1: float, p2: float, *,
                     recurrence_tol: float = 1e-8, return_audit: bool = False):
    """Recover the drift rates of a recurrent period-3 diffusion from its
    embedded transition probabilities.

    The input must satisfy p0*p1*p2 = q0*q1*q2 within ``recurrence_tol``
    (relative).  Probabilities within 1e-10 of 1/2 are treated as exactly 1/2
    for the case split: all at 1/2 gives zero drifts; exactly one at 1/2 is
    solved through r(-x) = 2 p/q after rotating that class into the last
    position; otherwise the answer is mu1 * (-(1-theta), 1, -theta) with
    w = e^(2*mu1) the positive non-unit root of alpha*w - w^theta + (1-alpha).

    With ``return_audit`` the solved case and intermediate quantities are
    returned alongside the profile.
    """
    probs = (float(p0), float(p1), float(p2))
    for i, v in enumerate(probs):
        if not 0.0 < v < 1.0:
            raise InvalidSpecError(f"p{i} must lie strictly in (0, 1), got {v}")
    prod_p = probs[0] * probs[1] * probs[2]
    prod_q = (1.0 - probs[0]) * (1.0 - probs[1]) * (1.0 - probs[2])
    if abs(prod_p - prod_q) > recurrence_tol * (prod_p + prod_q):
        raise InvalidSpecError(
            "drift inversion requires a recurrent walk: "
            f"prod(p)={prod_p} differs from prod(q)={prod_q}"
        )
    halves = [abs(v - 0.5) <= _HALF_TOL for v in probs]
    n_half = sum(halves)

    if n_half == 3:
        profile = DriftProfile(3, (0.0, 0.0, 0.0))
        audit = {"case": "i"}
    elif n_half == 1:
        k = halves.index(True)
        shift = (k - 2) % 3  # rotate so the 1/2 entry sits at position 2
        rot = tuple(probs[(j + shift) % 3] for j in range(3))
        u = _solve_r_equals(2.0 * rot[0] / (1.0 - rot[0]))
        x = -u
        mu_rot = (0.0, x, -x)
        profile = DriftProfile(3, tuple(mu_rot[(i - shift) % 3] for i in range(3)))
        audit = {"case": "ii", "x": x, "rotation": shift}
    elif n_half == 0:
        q = tuple(1.0 - v for v in probs)
        theta = (1.0 - q[1] / probs[1]) / (1.0 - probs[0] / q[0])
        alpha = (q[2] / probs[2]) * theta
        w, route = _solve_w(alpha, theta)
        mu1 = 0.5 * math.log(w)
        profile = DriftProfile(3, (-(1.0 - theta) * mu1, mu1, -theta * mu1))
        audit = {"case": "iii", "theta": theta, "alpha": alpha, "w": w, "route": route}
    else:
        raise InvalidSpecError(
            "two probabilities at 1/2 with a third elsewhere cannot be recurrent; "
            "input is inconsistent with the case split"
        )
    return (profile, audit) if return_audit else profile
