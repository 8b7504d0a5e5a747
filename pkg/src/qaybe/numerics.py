"""Richardson extrapolation and Laurent-coefficient fitting."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = ["richardson_extrapolate", "LaurentFit", "laurent_fit"]


def richardson_extrapolate(base_values: Sequence[np.ndarray | complex], p: int, r: float = 2.0):
    """Limit of a sequence whose error expands in powers h^p, h^{2p}, ...

    ``base_values[k]`` is the approximation at step ``h / r**k``.
    """
    n = len(base_values)
    if n < 2:
        raise ValueError("richardson_extrapolate requires at least two base values")
    vals = [np.asarray(v, dtype=complex) for v in base_values]
    for j in range(1, n):
        factor = r ** (p * j)
        for k in range(n - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)
    return vals[-1]


class LaurentFit:
    """Coefficients of f(h) = c_{-1}/h + c_0 + c_1 h + O(h^2)."""

    def __init__(self, c_minus1, c0, c1, steps):
        self.c_minus1 = c_minus1
        self.c0 = c0
        self.c1 = c1
        self.steps = tuple(steps)


def laurent_fit(f: Callable[[complex], np.ndarray], h0: float, levels: int = 3) -> LaurentFit:
    """Fit the leading Laurent coefficients of ``f`` at 0.

    ``f`` is sampled at ``±h0 / 2**k`` for ``k < levels``.  The even part
    (f(h) + f(-h))/2 = c_0 + c_2 h^2 + ... and the odd part
    h (f(h) - f(-h))/2 = c_{-1} + c_1 h^2 + ... are each extrapolated in h^2,
    which keeps the truncation error at O(h0^{2 levels}).
    """
    steps = [h0 / 2 ** k for k in range(levels)]
    even, odd = [], []
    for h in steps:
        fp, fm = np.asarray(f(h)), np.asarray(f(-h))
        even.append((fp + fm) / 2)
        odd.append(h * (fp - fm) / 2)
    c0 = richardson_extrapolate(even, p=2)
    cm1 = richardson_extrapolate(odd, p=2)
    c1 = richardson_extrapolate([(o - cm1) / h ** 2 for o, h in zip(odd, steps)], p=2)
    return LaurentFit(cm1, c0, c1, steps)
