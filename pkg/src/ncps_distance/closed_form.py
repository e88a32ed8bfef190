"""Closed-form Fock-state distances and the candidate optimal elements.

With ``zeta(p, q) = sum_{i=p+1}^{q} 1/sqrt(i)`` (antisymmetric in its
arguments), the distance between ``|m,n>`` and ``|k,l>`` is ::

    prefactor * sqrt(zeta(m, k)**2 + zeta(n, l)**2),
    prefactor = sqrt(hbar**2 - theta**2) / sqrt(2 hbar).

Optimal-element coefficients are extended by constant continuation outside
the rectangle spanned by the two labels, so every difference outside it
vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ball import DiagonalElement
from .errors import DegeneratePair, InvalidParameter, LabelOutOfRange
from .hilbert import FockLabel, PhaseSpaceParams, _check_cutoff, as_label

__all__ = [
    "DistanceReport",
    "zeta_partial",
    "zeta_table",
    "distance",
    "optimal_element_axis",
    "optimal_element_general",
    "check_additivity",
    "check_pythagoras",
]

DEFAULT_BUFFER = 8


def _nonneg_int(x, name):
    if isinstance(x, bool) or int(x) != x or x < 0:
        raise InvalidParameter(f"{name} must be a non-negative integer, got {x!r}")
    return int(x)


def zeta_partial(p: int, q: int) -> float:
    """Signed partial sum ``sum_{i=p+1}^{q} 1/sqrt(i)``, summed in increasing order.

    Examples
    --------
    >>> zeta_partial(0, 1)
    1.0
    >>> round(zeta_partial(3, 1), 7)
    -1.2844571
    """
    p, q = _nonneg_int(p, "p"), _nonneg_int(q, "q")
    if p == q:
        return 0.0
    lo, hi = min(p, q), max(p, q)
    val = math.fsum(1.0 / math.sqrt(i) for i in range(lo + 1, hi + 1))
    return val if q > p else -val


def zeta_table(size: int) -> np.ndarray:
    """``zeta(0, p)`` for ``p = 0 .. size-1``."""
    out = np.zeros(size)
    out[1:] = np.cumsum(1.0 / np.sqrt(np.arange(1, size)))
    return out


@dataclass(frozen=True)
class DistanceReport:
    source: FockLabel
    target: FockLabel
    closed_form: float
    prefactor: float
    zeta_x: float
    zeta_y: float


def distance(params: PhaseSpaceParams, a, b) -> DistanceReport:
    a, b = as_label(a), as_label(b)
    zx = abs(zeta_partial(a.m, b.m))
    zy = abs(zeta_partial(a.n, b.n))
    pref = params.prefactor
    return DistanceReport(a, b, pref * math.hypot(zx, zy), pref, zx, zy)


def _check_window(labels, cutoff, buffer):
    cutoff = _check_cutoff(cutoff)
    if not 0 <= buffer < cutoff:
        raise InvalidParameter(f"buffer must satisfy 0 <= buffer < cutoff, got {buffer}")
    limit = cutoff - buffer
    for lab in labels:
        if max(lab) >= limit:
            raise LabelOutOfRange(
                f"label ({lab.m},{lab.n}) must stay below cutoff - buffer = {limit}"
            )
    return cutoff


def _clamped_profile(cutoff, lo, hi):
    """``zeta(0, clip(p, lo, hi))`` for every level ``p``."""
    z = zeta_table(cutoff)
    return z[np.clip(np.arange(cutoff), lo, hi)]


def optimal_element_axis(params: PhaseSpaceParams, m: int, k: int, n: int, cutoff: int,
                         buffer: int = DEFAULT_BUFFER, mode: int = 1) -> DiagonalElement:
    """Element attaining the distance between ``|m,n>`` and ``|m+k,n>``.

    Coefficients step by ``step / sqrt(p)`` between levels ``p-1`` and ``p``
    of the first mode for ``m < p <= m+k`` and are constant elsewhere.
    ``mode=2`` moves along the second mode instead, between ``|n,m>`` and
    ``|n,m+k>``.
    """
    m, k, n = (_nonneg_int(x, name) for x, name in ((m, "m"), (k, "k"), (n, "n")))
    if mode not in (1, 2):
        raise InvalidParameter(f"mode must be 1 or 2, got {mode!r}")
    a, b = FockLabel(m, n), FockLabel(m + k, n)
    cutoff = _check_window((a, b), cutoff, buffer)
    prof = params.step * _clamped_profile(cutoff, m, m + k)
    c = np.repeat(prof[:, None], cutoff, axis=1)
    return DiagonalElement(c if mode == 1 else c.T)


def optimal_element_general(params: PhaseSpaceParams, a, b, cutoff: int,
                            buffer: int = DEFAULT_BUFFER) -> DiagonalElement:
    """Rectangle element for an arbitrary pair, with ``c[b] - c[a]`` equal to the distance.

    ``c[p, q] = step * (zeta(0, p) zx + zeta(0, q) zy) / sqrt(zx^2 + zy^2)``
    on the rectangle spanned by ``a`` and ``b``, with signed
    ``zx = zeta(a.m, b.m)``, ``zy = zeta(a.n, b.n)``; constant outside.
    """
    a, b = as_label(a), as_label(b)
    if a == b:
        raise DegeneratePair(f"labels coincide ({a}); the distance is 0 and needs no element")
    cutoff = _check_window((a, b), cutoff, buffer)
    zx = zeta_partial(a.m, b.m)
    zy = zeta_partial(a.n, b.n)
    norm = math.hypot(zx, zy)
    px = _clamped_profile(cutoff, min(a.m, b.m), max(a.m, b.m))
    py = _clamped_profile(cutoff, min(a.n, b.n), max(a.n, b.n))
    c = params.step * (px[:, None] * zx + py[None, :] * zy) / norm
    return DiagonalElement(c)


def check_additivity(params: PhaseSpaceParams, m: int, n: int, k: int, l: int) -> float:
    """``|d(m+k+l, m) - d(m+k, m) - d(m+k+l, m+k)|`` along the first mode at fixed ``n``."""
    m, n, k, l = (_nonneg_int(x, "label") for x in (m, n, k, l))
    d = lambda x, y: distance(params, (x, n), (y, n)).closed_form  # noqa: E731
    return abs(d(m + k + l, m) - d(m + k, m) - d(m + k + l, m + k))


def check_pythagoras(params: PhaseSpaceParams, m: int, n: int, k: int, l: int) -> float:
    """``|d(diag)^2 - d(horizontal)^2 - d(vertical)^2|`` for the rectangle at ``(m, n)``."""
    m, n, k, l = (_nonneg_int(x, "label") for x in (m, n, k, l))
    d = lambda x: distance(params, (m, n), x).closed_form  # noqa: E731
    return abs(d((m + k, n + l)) ** 2 - d((m + k, n)) ** 2 - d((m, n + l)) ** 2)
