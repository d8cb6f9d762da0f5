"""Small numeric helpers shared by the mixture and diffusion modules."""

__all__ = ["BracketError", "bisect_root", "deflate"]


class BracketError(RuntimeError):
    """A root bracket could not be established or refined."""


def bisect_root(f, lo, hi, flo=None, fhi=None, rtol=1e-15, maxiter=200):
    """Bisection on [lo, hi]; endpoint values may be supplied to avoid
    re-evaluation (or when an endpoint value is known analytically)."""
    flo = f(lo) if flo is None else flo
    fhi = f(hi) if fhi is None else fhi
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if hi - lo <= rtol * max(abs(lo), abs(hi), 1.0):
            break
    return 0.5 * (lo + hi)


def deflate(coeffs, root):
    """Divide a polynomial (ascending coefficients) by (x - root), dropping the
    remainder; returns the quotient's ascending coefficients."""
    desc = list(reversed(coeffs))
    out = [desc[0]]
    for c in desc[1:-1]:
        out.append(c + root * out[-1])
    return tuple(reversed(out))
