"""Shared helpers: random spec generators and independent oracles."""

import numpy as np
import pytest

from parrondo import GameClass, WalkSpec


def random_walk(rng, m, holds=False, lo=0.1, hi=0.9):
    """Random valid walk spec; with holds=True, p + q < 1 on every class."""
    p = rng.uniform(lo, hi, m)
    if holds:
        q = (1.0 - p) * rng.uniform(0.3, 0.95, m)
        q = np.maximum(q, 0.02)
    else:
        q = 1.0 - p
    return WalkSpec(m, tuple(p), tuple(q))


def flip(verdict):
    if verdict is GameClass.WINNING:
        return GameClass.LOSING
    if verdict is GameClass.LOSING:
        return GameClass.WINNING
    return GameClass.FAIR


def absorbing_p_star(w):
    """First-step-analysis oracle: probability of hitting +m before -m from 0,
    solved as a dense linear system over the interior states -m+1 .. m-1."""
    m = w.m
    states = list(range(-m + 1, m))
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    A = np.zeros((n, n))
    b = np.zeros(n)
    r = w.r
    for i, s in enumerate(states):
        cls = s % m
        A[i, i] = 1.0 - r[cls]
        if s + 1 == m:
            b[i] += w.p[cls]
        else:
            A[i, idx[s + 1]] -= w.p[cls]
        if s - 1 > -m:
            A[i, idx[s - 1]] -= w.q[cls]
    h = np.linalg.solve(A, b)
    return h[idx[0]]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
