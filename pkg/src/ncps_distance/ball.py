"""Finite-difference calculus for diagonal elements.

A diagonal element ``e = sum c[i, j] |i,j><i,j|`` is stored as its real
``N x N`` coefficient grid.  The ball condition constrains it through

    E[i, j] = c[i, j] - c[i-1, j],    G[i, j] = i * E[i, j]**2,
    F[i, j] = c[i, j] - c[i, j-1],    H[i, j] = j * F[i, j]**2,

with ``E[0, :]`` and ``F[:, 0]`` unused (their weights vanish).  The four
relations checked by :func:`constraint_relations` are necessary conditions
for ``||[D, pi(e)]|| <= 1``; the operator norm from
:func:`ncps_distance.triple.ball_condition` remains the authority.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian
from .hilbert import HERMITIAN_TOL, PhaseSpaceParams, TruncatedOperator, _check_cutoff, as_label

__all__ = [
    "DiagonalElement",
    "GHGrid",
    "ConstraintReport",
    "gh_grid",
    "constraint_relations",
    "feasible_diagonal",
    "commutator_diagonals",
]


@dataclass(frozen=True, eq=False)
class DiagonalElement:
    """Real diagonal element on the truncated two-mode space.

    Parameters
    ----------
    coeffs : array_like, shape (N, N)
        ``coeffs[i, j]`` is the eigenvalue on ``|i, j>``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if np.iscomplexobj(c):
            if np.max(np.abs(c.imag), initial=0.0) > HERMITIAN_TOL:
                raise NotHermitian("diagonal element coefficients must be real")
            c = c.real
        c = np.array(c, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimensionMismatch(f"coefficient grid must be square, got shape {c.shape}")
        _check_cutoff(c.shape[0])
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def cutoff(self) -> int:
        return self.coeffs.shape[0]

    def operator(self) -> TruncatedOperator:
        return TruncatedOperator(self.cutoff, np.diag(self.coeffs.ravel()).astype(complex), hermitian=True)

    def value(self, label) -> float:
        """``tr(rho_label e)``, i.e. the coefficient at ``label``."""
        m, n = as_label(label).check(self.cutoff)
        return float(self.coeffs[m, n])

    def scaled(self, alpha: float) -> "DiagonalElement":
        return DiagonalElement(alpha * self.coeffs)

    def shifted(self, const: float) -> "DiagonalElement":
        return DiagonalElement(self.coeffs + const)

    @classmethod
    def zeros(cls, cutoff: int) -> "DiagonalElement":
        n = _check_cutoff(cutoff)
        return cls(np.zeros((n, n)))

    @classmethod
    def from_operator(cls, op) -> "DiagonalElement":
        mat = op.matrix if isinstance(op, TruncatedOperator) else np.asarray(op)
        n = int(round(np.sqrt(mat.shape[0])))
        if n * n != mat.shape[0] or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"cannot read a two-mode grid from shape {mat.shape}")
        off = mat - np.diag(np.diag(mat))
        if np.max(np.abs(off), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("operator is not diagonal")
        return cls(np.diag(mat).reshape(n, n))


@dataclass(frozen=True, eq=False)
class GHGrid:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray


def _coeffs(e) -> np.ndarray:
    if isinstance(e, DiagonalElement):
        return e.coeffs
    return DiagonalElement(e).coeffs


def gh_grid(e) -> GHGrid:
    c = _coeffs(e)
    N = c.shape[0]
    E = np.zeros_like(c)
    F = np.zeros_like(c)
    E[1:, :] = c[1:, :] - c[:-1, :]
    F[:, 1:] = c[:, 1:] - c[:, :-1]
    idx = np.arange(N, dtype=float)
    G = idx[:, None] * E**2
    H = idx[None, :] * F**2
    return GHGrid(E, F, G, H)


@dataclass(frozen=True, eq=False)
class ConstraintReport:
    """Residuals ``LHS - 1/beta^2`` of the four relations.

    ``residuals[r, i, j]`` holds relation ``r`` at ``(i, j)`` for
    ``0 <= i, j <= N - 2`` (every stencil stays inside the grid).
    """

    residuals: np.ndarray
    max_residual: float
    feasible: bool
    tol: float

    def tight(self, atol: float = 1e-9) -> np.ndarray:
        """Mask of relations satisfied with equality."""
        return np.abs(self.residuals) <= atol


def constraint_relations(e, params: PhaseSpaceParams, tol: float = 1e-9) -> ConstraintReport:
    gh = gh_grid(e)
    G, H = gh.G, gh.H
    t2 = params.t ** 2
    bound = 1.0 / params.beta ** 2
    Gi, Gn = G[:-1, :-1], G[1:, :-1]    # G[i, j], G[i+1, j]
    Hi, Hn = H[:-1, :-1], H[:-1, 1:]    # H[i, j], H[i, j+1]
    lhs = np.stack([
        (Gn + Hi) + t2 * (Gi + Hn),
        (1 + t2) * (Gn + Hn),
        (Gi + Hn) + t2 * (Gn + Hi),
        (1 + t2) * (Gi + Hi),
    ])
    res = lhs - bound
    worst = float(res.max())
    return ConstraintReport(res, worst, worst <= tol, tol)


def feasible_diagonal(e, params: PhaseSpaceParams, tol: float = 1e-9) -> bool:
    """Fast necessary screen for the ball condition."""
    return constraint_relations(e, params, tol).feasible


def commutator_diagonals(e, params: PhaseSpaceParams) -> dict[str, np.ndarray]:
    """Predicted diagonals of ``[A_i, e][A_i, e]^H`` and ``[A_i, e]^H [A_i, e]`` on the interior.

    Keys are ``"A1A1h"``, ``"A1hA1"``, ``"A2A2h"`` and ``"A2hA2"``; each value
    is an ``(N-1, N-1)`` grid indexed by ``(i, j)``.
    """
    gh = gh_grid(e)
    G, H = gh.G, gh.H
    t2 = params.t ** 2
    Gi, Gn = G[:-1, :-1], G[1:, :-1]
    Hi, Hn = H[:-1, :-1], H[:-1, 1:]
    return {
        "A1A1h": Gn + t2 * Hn,
        "A1hA1": Gi + t2 * Hi,
        "A2A2h": Hn + t2 * Gn,
        "A2hA2": Hi + t2 * Gi,
    }
