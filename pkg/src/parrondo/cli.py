"""Command-line interface: exact analyses, mixtures, diffusion maps, simulation, sweeps.

Exit codes: 0 success, 2 invalid input, 3 numerical failure (root bracketing).
Diagnostics go to stderr; stdout carries data only.  CSV output uses '.'
decimals with 15 significant digits.
"""

import argparse
import json
import sys

from .diffusion import DriftProfile, embedded_probs, invert_drifts_m3
from .games import (
    InvalidSpecError,
    ParrondoSpec,
    WalkSpec,
    _as_prob,
    classify,
    game_from_json,
    make_parrondo,
    mix_random,
    walk_to_json,
)
from .hitting import gain_report
from .mixtures import pattern_gain, q_diagnostics, q_polynomial
from .montecarlo import RandomMixGame, ScheduledGame, SimConfig, simulate, trace_path
from .roots import BracketError
from .stationary import asymptotic_gain_cofactor

__all__ = ["main"]


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _emit(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _prob_list(text: str):
    return [_as_prob(tok) for tok in text.split(",") if tok.strip()]


def _add_game_flags(parser, suffix=""):
    tag = f"-{suffix}" if suffix else ""
    parser.add_argument(
        f"--parrondo{tag}", nargs=3, metavar=("M", "P", "PP"),
        help="two-probability game: period, off-lattice and on-lattice probabilities",
    )
    parser.add_argument(f"--game{tag}", metavar="FILE", help="game spec JSON file")
    if not suffix:
        parser.add_argument("--m", type=int, help="period for an inline walk spec")
        parser.add_argument("--p", help="comma-separated up probabilities (or drift CSV)")
        parser.add_argument("--q", help="comma-separated down probabilities")


def _load_game(ns, suffix="") -> WalkSpec:
    key = f"parrondo_{suffix}" if suffix else "parrondo"
    parrondo = getattr(ns, key, None)
    if parrondo is not None:
        m, p_off, p_on = parrondo
        return make_parrondo(ParrondoSpec(int(m), _as_prob(p_off), _as_prob(p_on)))
    key = f"game_{suffix}" if suffix else "game"
    path = getattr(ns, key, None)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return game_from_json(json.load(fh))
    if not suffix and ns.m is not None and ns.p and ns.q:
        return WalkSpec(ns.m, tuple(_prob_list(ns.p)), tuple(_prob_list(ns.q)))
    where = f" ({suffix})" if suffix else ""
    raise InvalidSpecError(f"no game specified{where}: use --parrondo, --game or --m/--p/--q")


def _report_payload(w: WalkSpec, tol):
    rep = gain_report(w, tol)
    return {
        "game": walk_to_json(w),
        "rho": rep.rho,
        "p_star": rep.p_star,
        "tau0": rep.tau0,
        "lambda_cofactor": rep.gain_cofactor,
        "lambda_renewal": rep.gain_renewal,
        "lambda_diff": rep.gain_cofactor - rep.gain_renewal,
        "class": rep.game_class.value,
    }


def _cmd_analyze(ns) -> int:
    payload = _report_payload(_load_game(ns), ns.tol)
    if ns.format == "csv":
        cols = ["rho", "p_star", "tau0", "lambda_cofactor", "lambda_renewal",
                "lambda_diff", "class"]
        lines = [",".join(cols)]
        lines.append(",".join(
            payload[c] if c == "class" else _fmt(payload[c]) for c in cols
        ))
        _emit("\n".join(lines), ns.output)
    else:
        _emit(json.dumps(payload), ns.output)
    return 0


def _cmd_mix(ns) -> int:
    a = _load_game(ns, "a")
    b = _load_game(ns, "b")
    if ns.mix_mode == "random":
        mixed = mix_random(a, b, _as_prob(ns.pi))
        gain = asymptotic_gain_cofactor(mixed)
        payload = {
            "mode": "random",
            "pi": _as_prob(ns.pi),
            "verdict": classify(mixed, ns.tol).value,
            "gain": gain,
            "game": walk_to_json(mixed),
        }
    else:
        gain = pattern_gain(a, b, ns.sched)
        thr = 1e-12 if ns.tol is None else ns.tol
        verdict = "fair" if abs(gain) <= thr else ("winning" if gain > 0 else "losing")
        payload = {"mode": "pattern", "sched": ns.sched.upper(), "verdict": verdict, "gain": gain}
    _emit(json.dumps(payload), ns.output)
    return 0


def _cmd_qpoly(ns) -> int:
    qp = q_polynomial(_as_prob(ns.a), _as_prob(ns.lam), ns.r)
    if ns.format == "json":
        diag = q_diagnostics(qp)
        payload = {
            "r": qp.r,
            "a": qp.a,
            "lam": qp.lam,
            "coeffs": list(qp.coeffs),
            "sign_changes": qp.sign_changes,
            "q_at_a": diag.q_at_a,
            "qprime_at_a": diag.qprime_at_a,
            "qsecond_at_a": diag.qsecond_at_a,
            "largest_positive_root": diag.largest_positive_root,
        }
        _emit(json.dumps(payload), ns.output)
    else:
        lines = ["j,coeff"] + [f"{j},{_fmt(c)}" for j, c in enumerate(qp.coeffs)]
        _emit("\n".join(lines), ns.output)
    return 0


def _cmd_diffusion(ns) -> int:
    if ns.diffusion_mode == "forward":
        mu = tuple(float(v) for v in _prob_list(ns.mu))
        w = embedded_probs(DriftProfile(len(mu), mu))
        _emit(json.dumps(walk_to_json(w)), ns.output)
    else:
        probs = _prob_list(ns.p)
        if len(probs) != 3:
            raise InvalidSpecError(f"invert needs exactly 3 probabilities, got {len(probs)}")
        profile, audit = invert_drifts_m3(*probs, return_audit=True)
        _emit(json.dumps({"m": profile.m, "mu": list(profile.mu), "audit": audit}), ns.output)
    return 0


def _cmd_simulate(ns) -> int:
    if ns.sched is not None or ns.pi is not None:
        a = _load_game(ns, "a")
        b = _load_game(ns, "b")
        if ns.sched is not None:
            game = ScheduledGame(a, b, ns.sched)
        else:
            game = RandomMixGame(a, b, _as_prob(ns.pi))
    else:
        game = _load_game(ns)
    cfg = SimConfig(steps=ns.steps, replicas=ns.replicas, seed=ns.seed, burn_in=ns.burn_in)
    res = simulate(game, cfg)
    payload = {
        "mean_slope": res.mean_slope,
        "stderr": res.stderr,
        "p_star_hat": res.p_star_hat,
        "p_star_stderr": res.p_star_stderr,
        "tau0_hat": res.tau0_hat,
        "tau0_stderr": res.tau0_stderr,
        "replica_count": res.replica_count,
        "total_steps": res.total_steps,
    }
    _emit(json.dumps(payload), ns.output)
    if ns.trace is not None:
        path = trace_path(game, cfg)
        lines = ["step,fortune"] + [f"{i},{v}" for i, v in enumerate(path)]
        _emit("\n".join(lines), ns.trace)
    return 0


def _cmd_sweep(ns) -> int:
    if ns.parrondo is None:
        raise InvalidSpecError("sweep requires --parrondo M P PP as the base game")
    m, p_off, p_on = ns.parrondo
    m = int(m)
    base_off = _as_prob(p_off)
    base_on = _as_prob(p_on)
    eps = ns.eps_from
    rows = ["epsilon,lambda,n_lambda"]
    while eps <= ns.eps_to + 1e-15:
        w = make_parrondo(ParrondoSpec(m, base_off - eps, base_on - eps))
        lam = asymptotic_gain_cofactor(w)
        rows.append(f"{_fmt(eps)},{_fmt(lam)},{_fmt(ns.n * lam)}")
        eps += ns.eps_step
    _emit("\n".join(rows), ns.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="parrondo",
        description="Exact analysis and simulation of mod-m random walk games",
    )
    sub = top.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="rho, p*, tau0, gain (both routes) and verdict")
    _add_game_flags(pa)
    pa.add_argument("--tol", type=float, default=None, help="fairness tolerance (absolute)")
    pa.add_argument("--format", choices=("json", "csv"), default="json")
    pa.add_argument("-o", "--output", default=None)
    pa.set_defaults(func=_cmd_analyze)

    pm = sub.add_parser("mix", help="verdict and gain of a random or pattern mixture")
    msub = pm.add_subparsers(dest="mix_mode", required=True)
    for mode in ("random", "pattern"):
        mp = msub.add_parser(mode)
        _add_game_flags(mp, "a")
        _add_game_flags(mp, "b")
        if mode == "random":
            mp.add_argument("--pi", required=True, help="probability of playing game a")
        else:
            mp.add_argument("--sched", required=True, help="pattern string over A and B")
        mp.add_argument("--tol", type=float, default=None)
        mp.add_argument("-o", "--output", default=None)
        mp.set_defaults(func=_cmd_mix)

    pq = sub.add_parser("qpoly", help="mixture certificate polynomial coefficients")
    pq.add_argument("--a", required=True, help="off-lattice odds of the first game")
    pq.add_argument("--lam", required=True, help="mixing odds (1-pi)/pi")
    pq.add_argument("--r", type=int, required=True, help="degree parameter, m-1")
    pq.add_argument("--format", choices=("json", "csv"), default="csv")
    pq.add_argument("-o", "--output", default=None)
    pq.set_defaults(func=_cmd_qpoly)

    pd = sub.add_parser("diffusion", help="drift-to-walk forward map and its m=3 inverse")
    dsub = pd.add_subparsers(dest="diffusion_mode", required=True)
    df = dsub.add_parser("forward")
    df.add_argument("--mu", required=True, help="comma-separated drift rates")
    df.add_argument("-o", "--output", default=None)
    df.set_defaults(func=_cmd_diffusion)
    di = dsub.add_parser("invert")
    di.add_argument("--p", required=True, help="comma-separated p0,p1,p2")
    di.add_argument("-o", "--output", default=None)
    di.set_defaults(func=_cmd_diffusion)

    ps = sub.add_parser("simulate", help="Monte Carlo estimate of slope, p* and tau0")
    _add_game_flags(ps)
    _add_game_flags(ps, "a")
    _add_game_flags(ps, "b")
    ps.add_argument("--sched", default=None, help="pattern string for a scheduled pair")
    ps.add_argument("--pi", default=None, help="mixing probability for a random pair")
    ps.add_argument("--steps", type=int, default=10_000)
    ps.add_argument("--replicas", type=int, default=1_000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--burn-in", type=int, default=100, dest="burn_in")
    ps.add_argument("--trace", default=None, help="write a step,fortune CSV of replica 0")
    ps.add_argument("-o", "--output", default=None)
    ps.set_defaults(func=_cmd_simulate)

    pw = sub.add_parser("sweep", help="gain of the family (p-eps, pp-eps) over an eps grid")
    pw.add_argument("--parrondo", nargs=3, metavar=("M", "P", "PP"), required=True)
    pw.add_argument("--eps-from", type=float, default=0.0, dest="eps_from")
    pw.add_argument("--eps-to", type=float, required=True, dest="eps_to")
    pw.add_argument("--eps-step", type=float, required=True, dest="eps_step")
    pw.add_argument("--n", type=int, default=100, help="play count for the n*lambda column")
    pw.add_argument("-o", "--output", default=None)
    pw.set_defaults(func=_cmd_sweep)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except InvalidSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BracketError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
