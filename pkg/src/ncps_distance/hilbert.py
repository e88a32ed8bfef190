"""Deformation parameters and the truncated two-mode Fock space.

Basis ordering is lexicographic: ``|m, n>`` sits at flat index ``m * N + n``
where ``N`` is the number of levels kept per mode.  Mode-1 operators are
therefore block matrices made of ``N x N`` blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidCutoff,
    InvalidParameter,
    LabelOutOfRange,
    NotHermitian,
    SingularRegime,
)

__all__ = [
    "PhaseSpaceParams",
    "FockLabel",
    "TruncatedOperator",
    "FockStateDensity",
    "make_params",
    "make_params_mu_nu",
    "as_label",
    "basis_vector",
    "lowering_matrix",
    "annihilation_mode",
    "creation_mode",
    "deformed_ladder",
    "fock_density",
]

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class PhaseSpaceParams:
    """Deformation data ``(hbar, theta)`` with the derived ``s``, ``beta``, ``t``.

    ``s = sqrt(hbar^2 - theta^2)``, ``beta = sqrt(hbar + s) / s`` and
    ``t = theta / (hbar + s)``.  Build through :func:`make_params` or
    :func:`make_params_mu_nu`; the constructor validates as well.
    """

    hbar: float = 1.0
    theta: float = 0.0
    s: float = field(init=False)
    beta: float = field(init=False)
    t: float = field(init=False)

    def __post_init__(self):
        hbar, theta = float(self.hbar), float(self.theta)
        if not (math.isfinite(hbar) and math.isfinite(theta)):
            raise InvalidParameter(f"non-finite parameters hbar={hbar!r}, theta={theta!r}")
        if hbar <= 0:
            raise InvalidParameter(f"hbar must be positive, got {hbar}")
        if theta < 0:
            raise InvalidParameter(f"theta must be non-negative, got {theta}")
        if theta >= hbar:
            raise SingularRegime(
                f"theta={theta} >= hbar={hbar}: singular regime, all distances collapse to zero"
            )
        s = math.sqrt(hbar * hbar - theta * theta)
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "beta", math.sqrt(hbar + s) / s)
        object.__setattr__(self, "t", theta / (hbar + s))

    @property
    def prefactor(self) -> float:
        """``sqrt(hbar^2 - theta^2) / sqrt(2 hbar)``, the scale of every distance."""
        return self.s / math.sqrt(2.0 * self.hbar)

    @property
    def step(self) -> float:
        """``1 / (beta sqrt(1 + t^2))``; algebraically equal to :attr:`prefactor`."""
        return 1.0 / (self.beta * math.sqrt(1.0 + self.t * self.t))

    @property
    def shortening(self) -> float:
        """Ratio of any distance to its commutative (theta = 0) value."""
        return math.sqrt(1.0 - (self.theta / self.hbar) ** 2)

    @property
    def is_commutative(self) -> bool:
        return self.theta == 0.0


def make_params(hbar: float = 1.0, theta: float = 0.0) -> PhaseSpaceParams:
    return PhaseSpaceParams(hbar, theta)


def make_params_mu_nu(hbar: float, mu: float, nu: float) -> PhaseSpaceParams:
    """Parameters from the position/momentum noncommutativities, ``theta = sqrt(mu nu)``.

    Only ``mu, nu > 0`` is supported; the rescaling that removes the
    asymmetry between ``mu`` and ``nu`` needs both to be positive.
    """
    mu, nu = float(mu), float(nu)
    if not (mu > 0 and nu > 0):
        raise InvalidParameter(f"mu and nu must both be positive, got mu={mu}, nu={nu}")
    return PhaseSpaceParams(hbar, math.sqrt(mu * nu))


@dataclass(frozen=True, order=True)
class FockLabel:
    """Occupation numbers ``(m, n)`` of the two modes."""

    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise InvalidParameter(f"Fock label component {name}={v!r} is not an integer")
            if v < 0:
                raise InvalidParameter(f"Fock label component {name}={v} is negative")
            object.__setattr__(self, name, int(v))

    def __iter__(self):
        yield self.m
        yield self.n

    def flat(self, cutoff: int) -> int:
        """Flat basis index in the lexicographic ordering."""
        self.check(cutoff)
        return self.m * cutoff + self.n

    def check(self, limit: int) -> "FockLabel":
        if self.m >= limit or self.n >= limit:
            raise LabelOutOfRange(f"label ({self.m},{self.n}) needs both components < {limit}")
        return self

    @classmethod
    def parse(cls, text: str) -> "FockLabel":
        """Parse the ``"m,n"`` syntax (no whitespace)."""
        parts = text.split(",")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InvalidParameter(f"cannot parse Fock label {text!r}; expected 'm,n'")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self):
        return f"{self.m},{self.n}"


def as_label(x) -> FockLabel:
    if isinstance(x, FockLabel):
        return x
    if isinstance(x, str):
        return FockLabel.parse(x)
    m, n = x
    return FockLabel(m, n)


def _check_cutoff(cutoff) -> int:
    if isinstance(cutoff, bool) or int(cutoff) != cutoff or cutoff < 2:
        raise InvalidCutoff(f"cutoff must be an integer >= 2, got {cutoff!r}")
    return int(cutoff)


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense ``N^2 x N^2`` complex matrix on the truncated two-mode Fock space."""

    cutoff: int
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        n2 = self.cutoff * self.cutoff
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (n2, n2):
            raise DimensionMismatch(
                f"expected a {n2}x{n2} matrix for cutoff {self.cutoff}, got shape {mat.shape}"
            )
        if self.hermitian:
            defect = np.max(np.abs(mat - mat.conj().T), initial=0.0)
            if defect > HERMITIAN_TOL:
                raise NotHermitian(f"operator flagged Hermitian deviates by {defect:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.cutoff * self.cutoff

    def dag(self) -> "TruncatedOperator":
        return TruncatedOperator(self.cutoff, self.matrix.conj().T, self.hermitian)

    def apply(self, label) -> np.ndarray:
        """Image of the basis state ``|m, n>``."""
        return self.matrix[:, as_label(label).flat(self.cutoff)]

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return bool(np.max(np.abs(off), initial=0.0) <= tol)


@dataclass(frozen=True, eq=False)
class FockStateDensity:
    label: FockLabel
    operator: TruncatedOperator

    def expectation(self, e) -> float:
        """``tr(rho e)`` for a Hermitian element (operator, matrix, or diagonal element)."""
        m, n = self.label
        if hasattr(e, "coeffs"):
            return float(e.coeffs[m, n])
        mat = e.matrix if isinstance(e, TruncatedOperator) else np.asarray(e)
        return float(np.real(np.trace(self.operator.matrix @ mat)))


def basis_vector(label, cutoff: int) -> np.ndarray:
    cutoff = _check_cutoff(cutoff)
    v = np.zeros(cutoff * cutoff, dtype=complex)
    v[as_label(label).flat(cutoff)] = 1.0
    return v


def lowering_matrix(cutoff: int) -> np.ndarray:
    """Single-mode ``a`` with ``a|n> = sqrt(n)|n-1>`` on levels ``0..N-1``."""
    cutoff = _check_cutoff(cutoff)
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)


def _check_mode(mode) -> int:
    if mode not in (1, 2):
        raise InvalidParameter(f"mode must be 1 or 2, got {mode!r}")
    return mode


def annihilation_mode(mode: int, cutoff: int) -> TruncatedOperator:
    """``a_1 = a (x) I`` or ``a_2 = I (x) a`` on the two-mode space."""
    mode = _check_mode(mode)
    a = lowering_matrix(cutoff)
    eye = np.eye(cutoff)
    mat = np.kron(a, eye) if mode == 1 else np.kron(eye, a)
    return TruncatedOperator(cutoff, mat)


def creation_mode(mode: int, cutoff: int) -> TruncatedOperator:
    """Adjoint of :func:`annihilation_mode`; the top level ``N-1`` is sent to zero."""
    return annihilation_mode(mode, cutoff).dag()


def deformed_ladder(mode: int, params: PhaseSpaceParams, cutoff: int) -> TruncatedOperator:
    """``A_1 = a_1 - i t a_2`` and ``A_2 = a_2 + i t a_1``."""
    mode = _check_mode(mode)
    a1 = annihilation_mode(1, cutoff).matrix
    a2 = annihilation_mode(2, cutoff).matrix
    t = params.t
    if mode == 1:
        mat = a1 - 1j * t * a2
    else:
        mat = a2 + 1j * t * a1
    return TruncatedOperator(cutoff, mat)


def fock_density(label, cutoff: int) -> FockStateDensity:
    """Rank-one projector ``|m,n><m,n|``."""
    cutoff = _check_cutoff(cutoff)
    label = as_label(label)
    idx = label.flat(cutoff)
    mat = np.zeros((cutoff * cutoff, cutoff * cutoff), dtype=complex)
    mat[idx, idx] = 1.0
    return FockStateDensity(label, TruncatedOperator(cutoff, mat, hermitian=True))
