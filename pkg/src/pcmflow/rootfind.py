"""Anderson-Bjorck modified regula falsi for increasing functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_ITERS = 1000


class BadBracket(ValueError):
    pass


@dataclass
class Bracket:
    """Sign bracket ``h_lo < 0 <= h_hi`` with ``z_lo < z_hi``."""

    z_lo: float
    z_hi: float
    h_lo: float
    h_hi: float

    @classmethod
    def from_function(cls, f, z_lo, z_hi):
        return cls(float(z_lo), float(z_hi), float(f(z_lo)), float(f(z_hi)))

    def check(self):
        if not (self.z_lo < self.z_hi):
            raise BadBracket(f"empty interval [{self.z_lo}, {self.z_hi}]")
        if not (self.h_lo < 0 <= self.h_hi):
            raise BadBracket(
                f"no sign change: f({self.z_lo}) = {self.h_lo}, f({self.z_hi}) = {self.h_hi}"
            )


def anderson_bjorck(f, bracket, epsilon: float, full_output: bool = False):
    """Locate the root of an increasing ``f`` inside a sign bracket.

    Parameters
    ----------
    f : callable
        Strictly increasing on the bracket.
    bracket : Bracket or (z_lo, z_hi)
        Must satisfy ``f(z_lo) < 0 <= f(z_hi)``.
    epsilon : float
        Iteration stops once the bracket is narrower than this.
    full_output : bool
        Also return the number of function evaluations after the bracket.

    Returns
    -------
    float
        The right end of the final bracket, so ``f(z_bar) >= 0`` always holds.
    """
    if not isinstance(bracket, Bracket):
        bracket = Bracket.from_function(f, *bracket)
    bracket.check()
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    lo, hi, f_lo, f_hi = bracket.z_lo, bracket.z_hi, bracket.h_lo, bracket.h_hi
    # the most recent iterate; it sits at one end of the bracket
    last_hi = True
    iterations = 0
    while hi - lo >= epsilon:
        if iterations >= MAX_ITERS:
            raise BadBracket(f"no convergence after {MAX_ITERS} iterations")
        iterations += 1
        slope = (f_hi - f_lo) / (hi - lo)
        z_new = hi - f_hi / slope
        if not (lo < z_new < hi):
            z_new = 0.5 * (lo + hi)
        f_new = float(f(z_new))
        if f_new == 0.0:
            lo, hi, f_hi = lo, z_new, 0.0
            break

        new_hi = f_new > 0
        z_last, f_last = (hi, f_hi) if last_hi else (lo, f_lo)
        if new_hi == last_hi:
            # same side twice: damp the retained end by h23 / h12
            h12 = slope
            h23 = (f_new - f_last) / (z_new - z_last)
            m = h23 / h12
            if not m > 0:
                m = 0.5
            if new_hi:
                f_lo *= m
            else:
                f_hi *= m
        if new_hi:
            hi, f_hi = z_new, f_new
        else:
            lo, f_lo = z_new, f_new
        last_hi = new_hi

    if full_output:
        return hi, iterations
    return hi
