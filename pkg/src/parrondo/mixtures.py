"""Random mixtures of two-probability games and deterministic play schedules.

The random mixture of two games is itself a mod-m game, so its verdict comes
straight from the product-gap classification.  The certificate behind "two
fair games mix into a winning one" is a degree-2r polynomial whose sign
pattern and behavior at its double root are computed here.  Deterministic
schedules (AB, AABB, arbitrary periodic strings) are handled exactly through
the stationary law of the chain on (congruence class) x (schedule phase).
"""

import math
from dataclasses import dataclass

import numpy as np

from .games import (
    GameClass,
    InvalidSpecError,
    ParrondoSpec,
    WalkSpec,
    classify,
    make_parrondo,
    mix_random,
)
from .roots import BracketError, bisect_root, deflate

__all__ = [
    "SIGN_ZERO_REL_TOL",
    "MixtureProblem",
    "PatternSchedule",
    "QDiagnostics",
    "QPolynomial",
    "alternation_quotient",
    "fairness_odds_check",
    "mixture_verdict",
    "pattern_gain",
    "q_diagnostics",
    "q_polynomial",
]

# Coefficients below this fraction of the largest one count as zero in the
# Descartes sign count.
SIGN_ZERO_REL_TOL = 1e-12


def _odds(prob: float) -> float:
    return prob / (1.0 - prob)


@dataclass(frozen=True)
class MixtureProblem:
    """Random mixture of two games on the same period; game_a is chosen with
    probability pi at each play.  game_b's off-lattice odds must not exceed
    game_a's (swap the roles and replace pi by 1-pi otherwise)."""

    game_a: ParrondoSpec
    game_b: ParrondoSpec
    pi: float

    def __post_init__(self):
        if self.game_a.m != self.game_b.m:
            raise InvalidSpecError(
                f"mixture needs equal periods, got {self.game_a.m} and {self.game_b.m}"
            )
        pi = float(self.pi)
        if not 0.0 < pi < 1.0:
            raise InvalidSpecError(f"mixing probability must lie strictly in (0, 1), got {pi}")
        object.__setattr__(self, "pi", pi)
        if self.xhat > self.x:
            raise InvalidSpecError(
                "game_b's off-lattice odds exceed game_a's; swap the games and use 1-pi"
            )

    @property
    def lam(self) -> float:
        """Mixing odds (1 - pi) / pi."""
        return (1.0 - self.pi) / self.pi

    @property
    def x(self) -> float:
        return _odds(self.game_a.p_off)

    @property
    def y(self) -> float:
        return _odds(self.game_a.p_on)

    @property
    def xhat(self) -> float:
        return _odds(self.game_b.p_off)

    @property
    def yhat(self) -> float:
        return _odds(self.game_b.p_on)

    @property
    def xbar(self) -> float:
        """Off-lattice odds of the mixed game."""
        lam = self.lam
        return (self.game_a.p_off + lam * self.game_b.p_off) / (
            (1.0 - self.game_a.p_off) + lam * (1.0 - self.game_b.p_off)
        )

    @property
    def ybar(self) -> float:
        """On-lattice odds of the mixed game."""
        lam = self.lam
        return (self.game_a.p_on + lam * self.game_b.p_on) / (
            (1.0 - self.game_a.p_on) + lam * (1.0 - self.game_b.p_on)
        )


def fairness_odds_check(spec: ParrondoSpec) -> float:
    """y - x^-(m-1) in the odds variables; zero/positive/negative matches the
    fair/winning/losing verdict of the expanded walk."""
    x = _odds(spec.p_off)
    y = _odds(spec.p_on)
    return y - x ** (-(spec.m - 1))


@dataclass(frozen=True)
class QPolynomial:
    """Degree-2r positivity certificate for mixtures of fair games.

    ``coeffs`` lists q_0 .. q_2r in ascending powers; x = a is always a double
    root.  ``sign_changes`` is the Descartes count over the thresholded
    coefficients (never more than 3).
    """

    r: int
    a: float
    lam: float
    coeffs: tuple
    sign_changes: int


def _count_sign_changes(coeffs) -> int:
    biggest = max(abs(c) for c in coeffs)
    if biggest == 0.0:
        return 0
    thr = SIGN_ZERO_REL_TOL * biggest
    signs = [c > 0.0 for c in coeffs if abs(c) > thr]
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


def _middle_coefficient(a: float, lam: float, r: int) -> float:
    # q_r = (1+lam+a^r)((1+lam)a+1)^r - ((1+lam)a^r+1)(1+lam+a)^r is a difference
    # of large near-equal products; expand both binomials and add the signed
    # terms with exact (compensated) summation.
    u = 1.0 + lam
    terms = []
    for i in range(r + 1):
        c = math.comb(r, i)
        terms.append((u + a**r) * c * (u * a) ** i)
        terms.append(-(u * a**r + 1.0) * c * u ** (r - i) * a**i)
    return math.fsum(terms)


def q_polynomial(a: float, lam: float, r: int) -> QPolynomial:
    """Coefficients of the mixture certificate polynomial Q for off-lattice
    odds a of the first game, mixing odds lam, and r = m - 1."""
    a = float(a)
    lam = float(lam)
    if not a > 0.0:
        raise InvalidSpecError(f"a must be positive, got {a}")
    if not lam > 0.0:
        raise InvalidSpecError(f"lam must be positive, got {lam}")
    if not isinstance(r, int) or r < 1:
        raise InvalidSpecError(f"r must be an integer >= 1, got {r!r}")
    coeffs = []
    for j in range(r):
        coeffs.append(
            math.comb(r, j)
            * a**r
            * (
                (1.0 + lam + a**r) * (1.0 + lam + 1.0 / a) ** j * lam ** (r - j)
                - (1.0 + lam + a) ** (r - j) * lam ** (j + 1)
            )
        )
    coeffs.append(_middle_coefficient(a, lam, r))
    for j in range(r + 1, 2 * r + 1):
        k = j - r
        coeffs.append(
            math.comb(r, k)
            * a**r
            * (
                (1.0 + lam + 1.0 / a) ** k * lam ** (2 * r - j + 1)
                - (1.0 + lam + a ** (-r)) * (1.0 + lam + a) ** (2 * r - j) * lam**k
            )
        )
    return QPolynomial(r, a, lam, tuple(coeffs), _count_sign_changes(coeffs))


@dataclass(frozen=True)
class QDiagnostics:
    q_at_a: float
    qprime_at_a: float
    qsecond_at_a: float
    largest_positive_root: float


def _horner(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative(coeffs):
    return tuple(i * c for i, c in enumerate(coeffs))[1:]


def _largest_root_above(coeffs, a: float):
    # Scan a geometric grid downward from the Cauchy bound and refine the
    # topmost sign change; None when the deflated polynomial has no root > a.
    coeffs = [c for c in coeffs]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return None
    if not all(math.isfinite(c) for c in coeffs):
        raise BracketError("non-finite coefficients; cannot bracket roots")
    lead = abs(coeffs[-1])
    bound = 1.0 + max(abs(c) for c in coeffs[:-1]) / lead
    lo_edge = a * (1.0 + 1e-12)
    if bound <= lo_edge:
        return None
    xs = np.geomspace(bound, lo_edge, 1025)
    vals = [_horner(coeffs, x) for x in xs]
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            return float(xs[i])
        if (vals[i] > 0.0) != (vals[i + 1] > 0.0):
            return bisect_root(
                lambda x: _horner(coeffs, x), float(xs[i + 1]), float(xs[i]),
                flo=vals[i + 1], fhi=vals[i],
            )
    return None


def q_diagnostics(qp: QPolynomial) -> QDiagnostics:
    """Evaluate Q, Q' and Q'' at the double root and locate the largest
    positive root beyond it (returns a itself when none exists)."""
    d1 = _derivative(qp.coeffs)
    d2 = _derivative(d1)
    reduced = deflate(deflate(qp.coeffs, qp.a), qp.a)
    root = _largest_root_above(reduced, qp.a)
    return QDiagnostics(
        q_at_a=_horner(qp.coeffs, qp.a),
        qprime_at_a=_horner(d1, qp.a),
        qsecond_at_a=_horner(d2, qp.a),
        largest_positive_root=qp.a if root is None else float(root),
    )


def mixture_verdict(mp: MixtureProblem, tol: float | None = None) -> GameClass:
    """Classify the randomly mixed game."""
    mixed = mix_random(make_parrondo(mp.game_a), make_parrondo(mp.game_b), mp.pi)
    return classify(mixed, tol)


@dataclass(frozen=True)
class PatternSchedule:
    """Finite periodic play pattern over the letters A and B, e.g. 'AABB'."""

    pattern: str

    def __post_init__(self):
        pattern = str(self.pattern).upper()
        if not pattern:
            raise InvalidSpecError("schedule pattern must be nonempty")
        extra = set(pattern) - {"A", "B"}
        if extra:
            raise InvalidSpecError(f"schedule may only use letters A and B, got {sorted(extra)}")
        object.__setattr__(self, "pattern", pattern)

    @property
    def period(self) -> int:
        return len(self.pattern)


def _closed_class(P: np.ndarray, start: int):
    # Forward-reachable set of the start state; closed by construction and a
    # single communicating class for these walk-driven chains.
    n = P.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    stack = [start]
    while stack:
        s = stack.pop()
        for t in np.nonzero(P[s] > 0.0)[0]:
            if not seen[t]:
                seen[t] = True
                stack.append(int(t))
    return np.nonzero(seen)[0]


def _stationary_dense(P: np.ndarray) -> np.ndarray:
    k = P.shape[0]
    A = P.T - np.eye(k)
    A[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    return np.linalg.solve(A, rhs)


def pattern_gain(a: WalkSpec, b: WalkSpec, sched) -> float:
    """Exact asymptotic gain of the periodic schedule, via the stationary law
    of the chain on (congruence class mod m) x (phase mod period).

    The walk starts at state 0 on phase 0; only the communicating class of
    that start contributes (even periods with hold-free games split the
    product space into two parity classes).
    """
    if isinstance(sched, str):
        sched = PatternSchedule(sched)
    if a.m != b.m:
        raise InvalidSpecError(f"schedule needs equal periods, got {a.m} and {b.m}")
    m, L = a.m, sched.period
    games = [a if ch == "A" else b for ch in sched.pattern]
    n = m * L
    P = np.zeros((n, n))
    for l, g in enumerate(games):
        nl = (l + 1) % L
        r = g.r
        for j in range(m):
            P[l * m + j, nl * m + (j + 1) % m] += g.p[j]
            P[l * m + j, nl * m + (j - 1) % m] += g.q[j]
            P[l * m + j, nl * m + j] += r[j]
    reach = _closed_class(P, 0)
    pi_vec = _stationary_dense(P[np.ix_(reach, reach)])
    drift = np.array([games[s // m].p[s % m] - games[s // m].q[s % m] for s in reach])
    return float(pi_vec @ drift)


def alternation_quotient(a: WalkSpec, b: WalkSpec, start_parity: int = 0) -> float:
    """Up/down product quotient of the two-step game obtained by alternating
    two hold-free games on an even period; > 1, = 1 or < 1 decides winning,
    fair or losing for the alternation started on the given parity."""
    if a.m != b.m:
        raise InvalidSpecError(f"alternation needs equal periods, got {a.m} and {b.m}")
    if a.m % 2:
        raise InvalidSpecError(f"alternation quotient requires even m, got {a.m}")
    if a.has_holds or b.has_holds:
        raise InvalidSpecError("alternation quotient requires hold-free games")
    if start_parity not in (0, 1):
        raise InvalidSpecError(f"start parity must be 0 or 1, got {start_parity!r}")
    num = 1.0
    den = 1.0
    for k in range(0, a.m, 2):
        i = (k + start_parity) % a.m
        j = (k + 1 + start_parity) % a.m
        num *= a.p[i] * b.p[j]
        den *= a.q[i] * b.q[j]
    return num / den
