"""Mod-m random walk games: specifications, product ratio, fair/winning/losing verdicts.

A mod-m walk moves +1 with probability p[j], -1 with probability q[j] and
holds with probability r[j] = 1 - p[j] - q[j], where j is the current state's
congruence class modulo m.  Everything downstream (stationary analysis,
hitting times, mixtures, diffusion embeddings) consumes the ``WalkSpec``
defined here.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

__all__ = [
    "DEFAULT_CLASSIFY_REL_TOL",
    "GainReport",
    "GameClass",
    "InvalidSpecError",
    "ParrondoSpec",
    "WalkSpec",
    "classify",
    "fair_family",
    "game_from_json",
    "make_parrondo",
    "mix_random",
    "p_star",
    "parrondo_from_json",
    "parrondo_to_json",
    "product_gap",
    "rho",
    "swap",
    "walk_from_json",
    "walk_to_json",
]

# Slack for p + q marginally above 1 from computing q = 1 - p in floating point;
# holds that tiny are snapped to exactly zero.
_HOLD_SNAP = 5e-15

# Default fairness threshold, relative to prod(p) + prod(q).
DEFAULT_CLASSIFY_REL_TOL = 1e-12


class InvalidSpecError(ValueError):
    """A game or walk specification violates its invariants."""


class GameClass(Enum):
    """Long-run verdict: recurrent, transient to +infinity, or transient to -infinity."""

    FAIR = "fair"
    WINNING = "winning"
    LOSING = "losing"


def _as_prob(value) -> float:
    """Parse a probability given as a number or an exact 'a/b' / decimal string."""
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


@dataclass(frozen=True)
class WalkSpec:
    """A mod-m random walk G(m, p, q).

    Parameters
    ----------
    m : int
        Period (number of congruence classes).
    p, q : sequence of m probabilities
        Up-step and down-step probabilities per congruence class.  Entries may
        be numbers or exact rational strings such as ``"3/4"``.  Every class
        must satisfy 0 < p[j], 0 < q[j] and p[j] + q[j] <= 1.
    """

    m: int
    p: tuple
    q: tuple

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidSpecError(f"period m must be a positive integer, got {self.m!r}")
        p = tuple(_as_prob(x) for x in self.p)
        q = tuple(_as_prob(x) for x in self.q)
        if len(p) != self.m or len(q) != self.m:
            raise InvalidSpecError(
                f"p and q must each have length m={self.m}, got {len(p)} and {len(q)}"
            )
        for j, (pj, qj) in enumerate(zip(p, q)):
            if not (pj > 0.0 and qj > 0.0):
                raise InvalidSpecError(
                    f"class {j}: p and q must be strictly positive (got p={pj}, q={qj}); "
                    "degenerate 0/1 probabilities are not allowed"
                )
            if pj + qj > 1.0 + _HOLD_SNAP:
                raise InvalidSpecError(f"class {j}: p + q = {pj + qj} exceeds 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def r(self) -> tuple:
        """Hold probabilities 1 - p - q, with float dust snapped to exact zeros."""
        out = []
        for pj, qj in zip(self.p, self.q):
            rj = 1.0 - pj - qj
            out.append(0.0 if abs(rj) <= _HOLD_SNAP else rj)
        return tuple(out)

    @property
    def has_holds(self) -> bool:
        return any(rj != 0.0 for rj in self.r)


@dataclass(frozen=True)
class ParrondoSpec:
    """Two-probability game G(m, p, p'): p_on applies on the span-m lattice, p_off elsewhere."""

    m: int
    p_off: float
    p_on: float

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidSpecError(f"period m must be a positive integer, got {self.m!r}")
        p_off = _as_prob(self.p_off)
        p_on = _as_prob(self.p_on)
        for name, v in (("p_off", p_off), ("p_on", p_on)):
            if not 0.0 <= v <= 1.0:
                raise InvalidSpecError(f"{name} must lie in [0, 1], got {v}")
        if abs(p_off - p_on) >= 1.0:
            raise InvalidSpecError("|p_off - p_on| must be < 1")
        object.__setattr__(self, "p_off", p_off)
        object.__setattr__(self, "p_on", p_on)


@dataclass(frozen=True)
class GainReport:
    """Everything exact about one walk: product ratio, embedded success
    probability, expected lattice interoccurrence time, asymptotic gain by the
    two independent routes, and the verdict."""

    rho: float
    p_star: float
    tau0: float
    gain_cofactor: float
    gain_renewal: float
    game_class: GameClass

    @property
    def gain(self) -> float:
        return self.gain_renewal


def make_parrondo(spec: ParrondoSpec) -> WalkSpec:
    """Expand a two-probability game into its per-class walk.

    The on-lattice probability occupies congruence class 0; classes 1..m-1
    get the off-lattice probability; q = 1 - p and all holds are zero.
    Raises ``InvalidSpecError`` when either used probability is 0 or 1.
    """
    if spec.m == 1:
        p = (spec.p_on,)
    else:
        p = (spec.p_on,) + (spec.p_off,) * (spec.m - 1)
    q = tuple(1.0 - x for x in p)
    return WalkSpec(spec.m, p, q)


def fair_family(m: int, x: float) -> ParrondoSpec:
    """The fair game with off-lattice odds x: q = 1/(1+x) and p_on = 1/(1+x^(m-1))."""
    if not isinstance(m, int) or m < 1:
        raise InvalidSpecError(f"period m must be a positive integer, got {m!r}")
    x = float(x)
    if not x > 0.0:
        raise InvalidSpecError(f"odds x must be positive, got {x}")
    return ParrondoSpec(m, x / (1.0 + x), 1.0 / (1.0 + x ** (m - 1)))


def _log_products(w: WalkSpec):
    lp = math.fsum(math.log(v) for v in w.p)
    lq = math.fsum(math.log(v) for v in w.q)
    return lp, lq


def rho(w: WalkSpec) -> float:
    """Product ratio prod(p) / prod(q); equals 1 exactly when the walk is recurrent."""
    lp, lq = _log_products(w)
    return math.exp(lp - lq)


def product_gap(w: WalkSpec):
    """Return (prod(p) - prod(q), prod(p) + prod(q)).

    Both products are accumulated in log space so the gap keeps its sign and
    relative scale even when m is large or the probabilities are extreme.
    """
    lp, lq = _log_products(w)
    top = max(lp, lq)
    scale = math.exp(top)
    return (
        (math.exp(lp - top) - math.exp(lq - top)) * scale,
        (math.exp(lp - top) + math.exp(lq - top)) * scale,
    )


def classify(w: WalkSpec, tol: float | None = None) -> GameClass:
    """Fair, winning or losing by the sign of prod(p) - prod(q).

    ``tol`` is an absolute threshold on the product gap.  When omitted it
    defaults to ``DEFAULT_CLASSIFY_REL_TOL`` relative to prod(p) + prod(q):
    exact fairness is a measure-zero condition, so the boundary needs an
    explicit width to be testable.
    """
    gap, total = product_gap(w)
    if tol is None:
        tol = DEFAULT_CLASSIFY_REL_TOL * total
    elif tol < 0:
        raise InvalidSpecError(f"tol must be nonnegative, got {tol}")
    if abs(gap) <= tol:
        return GameClass.FAIR
    return GameClass.WINNING if gap > 0 else GameClass.LOSING


def p_star(w: WalkSpec) -> float:
    """Probability that the walk, started on the span-m lattice, next touches it
    at +m rather than -m; equals rho/(1+rho)."""
    lp, lq = _log_products(w)
    return 1.0 / (1.0 + math.exp(lq - lp))


def mix_random(a: WalkSpec, b: WalkSpec, pi: float) -> WalkSpec:
    """The walk obtained by playing ``a`` with probability pi and ``b`` otherwise,
    chosen independently at each step: a componentwise convex combination."""
    if a.m != b.m:
        raise InvalidSpecError(f"cannot mix walks of different periods ({a.m} vs {b.m})")
    pi = float(pi)
    if not 0.0 <= pi <= 1.0:
        raise InvalidSpecError(f"mixing probability must lie in [0, 1], got {pi}")
    p = tuple(pi * pa + (1.0 - pi) * pb for pa, pb in zip(a.p, b.p))
    q = tuple(pi * qa + (1.0 - pi) * qb for qa, qb in zip(a.q, b.q))
    return WalkSpec(a.m, p, q)


def swap(w: WalkSpec) -> WalkSpec:
    """Exchange the up and down probability vectors (mirrors the walk)."""
    return WalkSpec(w.m, w.q, w.p)


# --- JSON wire formats -------------------------------------------------------

def walk_to_json(w: WalkSpec) -> dict:
    return {"m": w.m, "p": list(w.p), "q": list(w.q)}


def walk_from_json(obj: dict) -> WalkSpec:
    try:
        return WalkSpec(int(obj["m"]), tuple(obj["p"]), tuple(obj["q"]))
    except KeyError as exc:
        raise InvalidSpecError(f"walk JSON is missing key {exc}") from exc


def parrondo_to_json(s: ParrondoSpec) -> dict:
    return {"m": s.m, "p": s.p_off, "pp": s.p_on}


def parrondo_from_json(obj: dict) -> ParrondoSpec:
    try:
        return ParrondoSpec(int(obj["m"]), obj["p"], obj["pp"])
    except KeyError as exc:
        raise InvalidSpecError(f"game JSON is missing key {exc}") from exc


def game_from_json(obj: dict) -> WalkSpec:
    """Accept a walk object, a two-probability game object, or a report wrapping one."""
    if not isinstance(obj, dict):
        raise InvalidSpecError("game JSON must be an object")
    if "game" in obj:
        return game_from_json(obj["game"])
    if "pp" in obj:
        return make_parrondo(parrondo_from_json(obj))
    return walk_from_json(obj)
