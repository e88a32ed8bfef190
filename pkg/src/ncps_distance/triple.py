"""Spectral triple: gamma matrices, Dirac operator, commutators and norms.

The Hilbert space is four copies of the truncated Fock space; an algebra
element ``e`` acts diagonally, ``pi(e) = diag(e, e, e, e)``.  The Dirac
operator has vanishing diagonal 2x2 superblocks, so for Hermitian ``e``

    [D, pi(e)] = beta * [[0, D1], [-D1^H, 0]],
    D1 = [[[A2, e]^H, [A1, e]^H], [[A1, e], -[A2, e]]],

and ``||[D, pi(e)]|| = beta * ||D1||``.

For a diagonal element, every ``[A_i, e]`` lowers the total occupation
``m + n`` by exactly one.  ``D1`` then splits into independent blocks
labelled by the total occupation ``n`` of its input, each at most
``2N x 2N`` (see :class:`SectorLayout`).  Its norm is the largest singular
value over those blocks.  This is the same matrix with rows and columns
permuted, not an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import DimensionMismatch, NotHermitian, NumericalFailure
from .hilbert import (
    HERMITIAN_TOL,
    PhaseSpaceParams,
    TruncatedOperator,
    _check_cutoff,
    deformed_ladder,
)

__all__ = [
    "GammaSet",
    "DiracOperator",
    "BallReport",
    "SectorLayout",
    "gamma_matrices",
    "dirac_operator",
    "represent",
    "dirac_commutator",
    "commutator_d1",
    "operator_norm",
    "diagonal_commutator_norm",
    "ball_condition",
]

STRUCTURE_TOL = 1e-12


class GammaSet(NamedTuple):
    """Four Hermitian 4x4 Euclidean Dirac matrices."""

    g1: np.ndarray
    g2: np.ndarray
    g3: np.ndarray
    g4: np.ndarray

    def anticommutator(self, k: int, l: int) -> np.ndarray:
        """``{g^k, g^l}`` with 1-based indices."""
        a, b = self[k - 1], self[l - 1]
        return a @ b + b @ a


def gamma_matrices() -> GammaSet:
    i = 1j
    g1 = np.array([[0, 0, 0, i], [0, 0, i, 0], [0, -i, 0, 0], [-i, 0, 0, 0]], dtype=complex)
    g2 = np.array([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=complex)
    g3 = np.array([[0, 0, i, 0], [0, 0, 0, -i], [-i, 0, 0, 0], [0, i, 0, 0]], dtype=complex)
    g4 = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex)
    return GammaSet(g1, g2, g3, g4)


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """``D = beta * [[0, 0, -A2^H, -A1^H], [0, 0, A1, -A2], [-A2, A1^H, 0, 0], [-A1, -A2^H, 0, 0]]``."""

    params: PhaseSpaceParams
    cutoff: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 4 * self.cutoff * self.cutoff

    def block(self, r: int, c: int) -> np.ndarray:
        """The ``(r, c)`` entry of the 4x4 block pattern (0-based)."""
        n2 = self.cutoff * self.cutoff
        return self.matrix[r * n2:(r + 1) * n2, c * n2:(c + 1) * n2]

    @property
    def blocks(self) -> list[list[np.ndarray]]:
        return [[self.block(r, c) for c in range(4)] for r in range(4)]

    @cached_property
    def sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix(self.matrix)


def dirac_operator(params: PhaseSpaceParams, cutoff: int) -> DiracOperator:
    cutoff = _check_cutoff(cutoff)
    A1 = deformed_ladder(1, params, cutoff).matrix
    A2 = deformed_ladder(2, params, cutoff).matrix
    Z = np.zeros_like(A1)
    H = lambda x: x.conj().T  # noqa: E731
    mat = params.beta * np.block([
        [Z, Z, -H(A2), -H(A1)],
        [Z, Z, A1, -A2],
        [-A2, H(A1), Z, Z],
        [-A1, -H(A2), Z, Z],
    ])
    return DiracOperator(params, cutoff, mat)


def _as_matrix(e) -> np.ndarray:
    if isinstance(e, TruncatedOperator):
        return e.matrix
    if hasattr(e, "operator"):
        return e.operator().matrix
    return np.asarray(e, dtype=complex)


def represent(e) -> np.ndarray:
    """``pi(e) = diag(e, e, e, e)``."""
    mat = _as_matrix(e)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"element must be a square matrix, got shape {mat.shape}")
    cutoff = int(round(np.sqrt(mat.shape[0])))
    if cutoff * cutoff != mat.shape[0]:
        raise DimensionMismatch(f"dimension {mat.shape[0]} is not N^2 for an integer cutoff N")
    return np.kron(np.eye(4), mat)


def _check_element(D: DiracOperator, e) -> np.ndarray:
    mat = _as_matrix(e)
    n2 = D.cutoff * D.cutoff
    if mat.shape != (n2, n2):
        raise DimensionMismatch(f"element of shape {mat.shape} does not match cutoff {D.cutoff}")
    defect = np.max(np.abs(mat - mat.conj().T), initial=0.0)
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f"element is not Hermitian (defect {defect:.3e})")
    return mat


def commutator_d1(params: PhaseSpaceParams, e) -> np.ndarray:
    """The ``2N^2 x 2N^2`` block ``D1`` built from ``[A_i, e]``."""
    mat = _as_matrix(e)
    cutoff = int(round(np.sqrt(mat.shape[0])))
    A1 = sp.csr_matrix(deformed_ladder(1, params, cutoff).matrix)
    A2 = sp.csr_matrix(deformed_ladder(2, params, cutoff).matrix)
    c1 = A1 @ mat - (A1.T @ mat.T).T
    c2 = A2 @ mat - (A2.T @ mat.T).T
    c1, c2 = np.asarray(c1), np.asarray(c2)
    return np.block([[c2.conj().T, c1.conj().T], [c1, -c2]])


def dirac_commutator(D: DiracOperator, e) -> np.ndarray:
    """``[D, pi(e)]`` for Hermitian ``e``, checked against the ``beta * D1`` block form."""
    mat = _check_element(D, e)
    n2 = D.cutoff * D.cutoff
    S = D.sparse
    # pi(e) is block diagonal, so D pi(e) - pi(e) D acts blockwise
    big = np.kron(np.eye(4), mat)
    comm = np.asarray(S @ big) - np.asarray((S.T @ big.T).T)

    d1 = D.params.beta * commutator_d1(D.params, mat)
    top_right = comm[: 2 * n2, 2 * n2:]
    bottom_left = comm[2 * n2:, : 2 * n2]
    diag_defect = max(
        np.max(np.abs(comm[: 2 * n2, : 2 * n2]), initial=0.0),
        np.max(np.abs(comm[2 * n2:, 2 * n2:]), initial=0.0),
    )
    scale = max(1.0, np.max(np.abs(d1), initial=0.0))
    form_defect = max(
        np.max(np.abs(top_right - d1), initial=0.0),
        np.max(np.abs(bottom_left + d1.conj().T), initial=0.0),
    )
    if diag_defect > STRUCTURE_TOL * scale or form_defect > STRUCTURE_TOL * scale:
        raise NumericalFailure(
            f"commutator lost its anti-diagonal block form "
            f"(diagonal {diag_defect:.3e}, D1 mismatch {form_defect:.3e})"
        )
    return comm


def operator_norm(op) -> float:
    """Largest singular value.

    Hermitian and anti-Hermitian inputs go through ``eigvalsh``; anything
    else through a full singular-value computation.
    """
    mat = _as_matrix(op)
    if mat.size == 0:
        return 0.0
    if not np.all(np.isfinite(mat)):
        raise NumericalFailure("operator has non-finite entries")
    tol = HERMITIAN_TOL * max(1.0, np.max(np.abs(mat)))
    try:
        if mat.shape[0] == mat.shape[1]:
            if np.max(np.abs(mat - mat.conj().T)) <= tol:
                return float(np.max(np.abs(np.linalg.eigvalsh(mat))))
            if np.max(np.abs(mat + mat.conj().T)) <= tol:
                return float(np.max(np.abs(np.linalg.eigvalsh(1j * mat))))
        return float(scipy.linalg.svdvals(mat)[0])
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(f"singular value computation failed: {exc}") from exc


class SectorLayout:
    """Index bookkeeping that splits ``D1`` of a diagonal element into sector blocks.

    Block ``k`` takes inputs of total occupation ``k`` on both spinor
    components and returns occupation ``k + 1`` (upper half of ``D1``) and
    ``k - 1`` (lower half).  The entries are linear in the weighted
    differences ::

        x1[i, j] = sqrt(i + 1) * (c[i + 1, j] - c[i, j])
        x2[i, j] = sqrt(j + 1) * (c[i, j + 1] - c[i, j])

    with fixed complex factors that depend only on ``t``.
    """

    def __init__(self, cutoff: int):
        N = _check_cutoff(cutoff)
        self.cutoff = N
        nsec = 2 * N - 1
        lo = np.maximum(0, np.arange(nsec) - (N - 1))
        hi = np.minimum(np.arange(nsec), N - 1)
        size = np.concatenate([hi - lo + 1, [0]])  # size[-1] == 0 pads sector -1 and 2N-1

        def local(i, j):
            return i - lo[i + j]

        def sz(k):
            return size[np.where((k >= 0) & (k < nsec), k, -1)]

        # each weighted difference feeds four D1 entries; see the class docstring
        blks, rows, cols, kinds, flats, slots = [], [], [], [], [], []
        for kind in (0, 1):
            shape = (N - 1, N) if kind == 0 else (N, N - 1)
            I, J = (a.ravel() for a in np.indices(shape))
            flat = np.arange(I.size)
            upper = (I + 1, J) if kind == 0 else (I, J + 1)
            k_low = I + J
            k_up = k_low + 1
            # upper half of block k_low: row is the raised state in sector k_low + 1
            r_top = local(*upper)
            # lower half of block k_up: row is the lowered state in sector k_up - 1
            r_bot = sz(k_up + 1) + local(I, J)
            entries = (
                (k_low, r_top, local(I, J)),
                (k_low, r_top, size[k_low] + local(I, J)),
                (k_up, r_bot, local(*upper)),
                (k_up, r_bot, size[k_up] + local(*upper)),
            )
            for s_idx, (b, r, c) in enumerate(entries):
                blks.append(b)
                rows.append(r)
                cols.append(c)
                kinds.append(np.full(I.size, kind))
                flats.append(flat)
                slots.append(np.full(I.size, s_idx))
        self.nblocks = nsec
        self.shape = (nsec, 2 * N, 2 * N)
        self.block = np.concatenate(blks)
        self.row = np.concatenate(rows)
        self.col = np.concatenate(cols)
        self.kind = np.concatenate(kinds)
        self.flat = np.concatenate(flats)
        self.slot = np.concatenate(slots)
        self.n1 = (N - 1) * N  # number of x1 entries; x2 entries follow

    def factors(self, t: float) -> np.ndarray:
        """Complex factor multiplying the source difference of every entry."""
        it = 1j * t
        table = np.array([
            [-it, 1.0, 1.0, -it],   # x1 -> B^H, A^H, A, -B
            [1.0, it, -it, -1.0],   # x2 -> B^H, A^H, A, -B
        ])
        return table[self.kind, self.slot]

    def source_index(self) -> np.ndarray:
        """Position of every entry's difference in ``concat(x1.ravel(), x2.ravel())``."""
        return np.where(self.kind == 0, self.flat, self.n1 + self.flat)


@lru_cache(maxsize=32)
def sector_layout(cutoff: int) -> SectorLayout:
    return SectorLayout(cutoff)


def weighted_differences(coeffs: np.ndarray) -> np.ndarray:
    """``concat(x1.ravel(), x2.ravel())`` for a coefficient grid."""
    c = np.asarray(coeffs, dtype=float)
    N = c.shape[0]
    x1 = np.sqrt(np.arange(1, N))[:, None] * (c[1:, :] - c[:-1, :])
    x2 = np.sqrt(np.arange(1, N))[None, :] * (c[:, 1:] - c[:, :-1])
    return np.concatenate([x1.ravel(), x2.ravel()])


def sector_blocks(coeffs: np.ndarray, t: float) -> np.ndarray:
    """Stack of zero-padded ``D1`` sector blocks, shape ``(2N-1, 2N, 2N)``."""
    c = np.asarray(coeffs, dtype=float)
    lay = sector_layout(c.shape[0])
    x = weighted_differences(c)
    M = np.zeros(lay.shape, dtype=complex)
    M[lay.block, lay.row, lay.col] = lay.factors(t) * x[lay.source_index()]
    return M


def diagonal_commutator_norm(coeffs, params: PhaseSpaceParams) -> float:
    """``||[D, pi(e)]||`` for ``e = sum c[i, j] |i,j><i,j|`` via the sector blocks."""
    c = getattr(coeffs, "coeffs", coeffs)
    M = sector_blocks(c, params.t)
    try:
        s = np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"sector SVD failed: {exc}") from exc
    return float(params.beta * s.max(initial=0.0))


@dataclass(frozen=True)
class BallReport:
    norm: float
    feasible: bool
    tol: float


def ball_condition(e, params: PhaseSpaceParams, cutoff: int | None = None, tol: float = 1e-9,
                   method: str = "auto") -> BallReport:
    """Evaluate ``||[D, pi(e)]||`` and compare it with 1.

    ``method`` is ``"sectors"`` (diagonal elements only), ``"dense"`` (the
    full ``4N^2`` commutator) or ``"auto"``, which picks sectors whenever
    ``e`` is diagonal.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    coeffs = getattr(e, "coeffs", None)
    if coeffs is None:
        mat = _as_matrix(e)
        n = int(round(np.sqrt(mat.shape[0])))
        if method != "dense" and np.count_nonzero(mat - np.diag(np.diag(mat))) == 0:
            coeffs = np.real(np.diag(mat)).reshape(n, n)
            if np.max(np.abs(np.imag(np.diag(mat))), initial=0.0) > HERMITIAN_TOL:
                raise NotHermitian("diagonal element has complex entries")
    if cutoff is not None and coeffs is not None and np.shape(coeffs)[0] != cutoff:
        raise DimensionMismatch(f"element cutoff {np.shape(coeffs)[0]} != requested {cutoff}")

    if method == "sectors" or (method == "auto" and coeffs is not None):
        if coeffs is None:
            raise ValueError("sector method needs a diagonal element")
        norm = diagonal_commutator_norm(coeffs, params)
    elif method in ("dense", "auto"):
        mat = _as_matrix(e)
        n = int(round(np.sqrt(mat.shape[0])))
        D = dirac_operator(params, n)
        comm = dirac_commutator(D, mat)
        n2 = n * n
        # structure was verified above; the norm is that of the upper-right superblock
        norm = operator_norm(comm[: 2 * n2, 2 * n2:])
    else:
        raise ValueError(f"unknown method {method!r}")
    return BallReport(norm=norm, feasible=bool(norm <= 1.0 + tol), tol=tol)
