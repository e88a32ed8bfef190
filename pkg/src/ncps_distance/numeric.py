"""Numerical supremum of ``c[b] - c[a]`` over diagonal elements in the ball.

The feasible set ``{c : ||[D, pi(c)]|| <= 1}`` is convex and the norm is
positively homogeneous, so the supremum equals ::

    max_c (c[b] - c[a]) / ||[D, pi(c)]||  =  1 / min_{c[b] - c[a] = 1} ||[D, pi(c)]||.

The solver minimises a log-sum-exp smoothing of the largest singular value
over the sector blocks of ``D1`` (see :mod:`ncps_distance.triple`) with
L-BFGS, tightening the smoothing width in stages.  The returned element is
``c / ||[D, pi(c)]||`` evaluated exactly at the full cutoff, so the value is
always a certified lower bound on the supremum.

Coefficients vary inside a square window of levels and are continued
constantly beyond it.  For such elements a cutoff of ``window + 1`` already
gives the exact commutator norm, which keeps the inner solve small.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .ball import DiagonalElement, gh_grid
from .closed_form import DEFAULT_BUFFER, distance, optimal_element_general
from .errors import InvalidParameter, LabelOutOfRange, NotConverged, NumericalFailure, ZeroElement
from .hilbert import PhaseSpaceParams, _check_cutoff, as_label, deformed_ladder
from .triple import commutator_d1, diagonal_commutator_norm, sector_layout

__all__ = [
    "SupSolverConfig",
    "SupResult",
    "OffDiagonalProbe",
    "default_cutoff",
    "sup_distance",
    "scale_to_ball",
    "brute_force_oracle",
    "relation_norm",
    "probe_off_diagonal",
]

CONSTRAINT_MODES = ("operator_norm", "constraint_relations", "both")


def default_cutoff() -> int:
    """24, unless ``NCPS_DEFAULT_CUTOFF`` says otherwise."""
    env = os.environ.get("NCPS_DEFAULT_CUTOFF")
    if env is None or env == "":
        return 24
    try:
        return _check_cutoff(int(env))
    except ValueError as exc:
        raise InvalidParameter(f"NCPS_DEFAULT_CUTOFF={env!r} is not a valid cutoff") from exc


@dataclass(frozen=True)
class SupSolverConfig:
    """Settings for :func:`sup_distance`.

    ``window`` fixes the number of levels per mode whose coefficients are
    free; ``None`` picks ``max label + 1 + window_margin``, capped at
    ``cutoff - buffer``.  ``smoothing`` lists the log-sum-exp widths, one
    L-BFGS stage each.  ``max_iters`` is the iteration budget shared by all
    stages.
    """

    cutoff: int = field(default_factory=default_cutoff)
    buffer: int = DEFAULT_BUFFER
    window: int | None = None
    window_margin: int = 4
    max_iters: int = 5000
    stage_iters: int = 400
    smoothing: tuple[float, ...] = (1e-3, 1e-4, 1e-5, 3e-6)
    tol_obj: float = 1e-7
    constraint_mode: str = "operator_norm"
    seed: int = 42

    def __post_init__(self):
        cutoff = _check_cutoff(self.cutoff)
        if not 0 <= self.buffer < cutoff:
            raise InvalidParameter(f"buffer must satisfy 0 <= buffer < cutoff, got {self.buffer}")
        if self.window is not None and not 2 <= self.window <= cutoff - self.buffer:
            raise InvalidParameter(f"window must lie in [2, cutoff - buffer], got {self.window}")
        if self.window_margin < 0 or self.max_iters < 1 or self.stage_iters < 1:
            raise InvalidParameter("window_margin must be >= 0 and iteration limits >= 1")
        if not self.smoothing or min(self.smoothing) <= 0 or self.tol_obj <= 0:
            raise InvalidParameter("smoothing widths and tol_obj must be positive")
        if self.constraint_mode not in CONSTRAINT_MODES:
            raise InvalidParameter(f"constraint_mode must be one of {CONSTRAINT_MODES}")

    def window_for(self, a, b) -> int:
        if self.window is not None:
            return self.window
        top = max(*a, *b) + 1 + self.window_margin
        return max(2, min(self.cutoff - self.buffer, top))


@dataclass(frozen=True, eq=False)
class SupResult:
    value: float
    element: DiagonalElement
    norm_at_solution: float
    iterations: int
    converged: bool
    ball_norm: float = float("nan")
    window: int = 0


# -- objective pieces -------------------------------------------------------

def _sector_terms(c: np.ndarray, params: PhaseSpaceParams, mu: float | None):
    """Largest singular value over sector blocks, or its smoothing and gradient."""
    lay = sector_layout(c.shape[0])
    N = c.shape[0]
    fac = lay.factors(params.t)
    src = lay.source_index()
    sq = np.sqrt(np.arange(1, N, dtype=float))
    x = np.concatenate([
        (sq[:, None] * (c[1:, :] - c[:-1, :])).ravel(),
        (sq[None, :] * (c[:, 1:] - c[:, :-1])).ravel(),
    ])
    M = np.zeros(lay.shape, dtype=complex)
    M[lay.block, lay.row, lay.col] = fac * x[src]
    if mu is None:
        return params.beta * np.linalg.svd(M, compute_uv=False).max()
    U, S, Vh = np.linalg.svd(M, full_matrices=False)
    s = params.beta * S
    f = mu * logsumexp(s / mu)
    w = np.exp(s / mu - f / mu)
    Gm = np.einsum("bik,bk,bkj->bij", U, w, Vh)
    gx = params.beta * np.bincount(
        src, weights=np.real(np.conj(Gm[lay.block, lay.row, lay.col]) * fac), minlength=x.size
    )
    g1 = gx[: (N - 1) * N].reshape(N - 1, N) * sq[:, None]
    g2 = gx[(N - 1) * N:].reshape(N, N - 1) * sq[None, :]
    gc = np.zeros_like(c)
    gc[1:, :] += g1
    gc[:-1, :] -= g1
    gc[:, 1:] += g2
    gc[:, :-1] -= g2
    return f, gc, s


def _relation_values(c: np.ndarray, params: PhaseSpaceParams):
    gh = gh_grid(c)
    G, H = gh.G, gh.H
    t2 = params.t ** 2
    Gi, Gn = G[:-1, :-1], G[1:, :-1]
    Hi, Hn = H[:-1, :-1], H[:-1, 1:]
    # coefficients of (Gi, Gn, Hi, Hn) in each relation
    coef = np.array([
        [t2, 1.0, 1.0, t2],
        [0.0, 1 + t2, 0.0, 1 + t2],
        [1.0, t2, t2, 1.0],
        [1 + t2, 0.0, 1 + t2, 0.0],
    ])
    lhs = np.einsum("rk,kij->rij", coef, np.stack([Gi, Gn, Hi, Hn]))
    return gh, coef, lhs


def relation_norm(c, params: PhaseSpaceParams) -> float:
    """``beta * sqrt(max LHS)`` over the four relations; at most the operator norm."""
    c = np.asarray(getattr(c, "coeffs", c), dtype=float)
    _, _, lhs = _relation_values(c, params)
    return float(params.beta * math.sqrt(max(lhs.max(), 0.0)))


def _relation_terms(c: np.ndarray, params: PhaseSpaceParams, mu: float):
    gh, coef, lhs = _relation_values(c, params)
    s = params.beta * np.sqrt(np.maximum(lhs, 0.0))
    f = mu * logsumexp(s / mu)
    p = np.exp(s / mu - f / mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(s > 0, p * params.beta ** 2 / (2 * s), 0.0)
    wk = np.einsum("rk,rij->kij", coef, lam)  # weights on Gi, Gn, Hi, Hn
    N = c.shape[0]
    WG = np.zeros_like(c)
    WH = np.zeros_like(c)
    WG[:-1, :-1] += wk[0]
    WG[1:, :-1] += wk[1]
    WH[:-1, :-1] += wk[2]
    WH[:-1, 1:] += wk[3]
    idx = np.arange(N, dtype=float)
    dG = 2 * WG * idx[:, None] * gh.E
    dH = 2 * WH * idx[None, :] * gh.F
    gc = np.zeros_like(c)
    gc[1:, :] += dG[1:, :]
    gc[:-1, :] -= dG[1:, :]
    gc[:, 1:] += dH[:, 1:]
    gc[:, :-1] -= dH[:, 1:]
    return f, gc, s.ravel()


def _smoothed(c, params, mu, mode):
    if mode == "operator_norm":
        f, g, _ = _sector_terms(c, params, mu)
        return f, g
    if mode == "constraint_relations":
        f, g, _ = _relation_terms(c, params, mu)
        return f, g
    f1, g1, s1 = _sector_terms(c, params, mu)
    f2, g2, s2 = _relation_terms(c, params, mu)
    f = mu * np.logaddexp(f1 / mu, f2 / mu)
    w1 = np.exp((f1 - f) / mu)
    return f, w1 * g1 + (1 - w1) * g2


def _mode_norm(c, params, mode):
    if mode == "operator_norm":
        return diagonal_commutator_norm(c, params)
    if mode == "constraint_relations":
        return relation_norm(c, params)
    return max(diagonal_commutator_norm(c, params), relation_norm(c, params))


def _embed(window_coeffs: np.ndarray, cutoff: int) -> np.ndarray:
    """Constant continuation of a window grid to the full cutoff."""
    W = window_coeffs.shape[0]
    idx = np.minimum(np.arange(cutoff), W - 1)
    return window_coeffs[np.ix_(idx, idx)]


def sup_distance(params: PhaseSpaceParams, a, b, cfg: SupSolverConfig | None = None) -> SupResult:
    """Largest ``c[b] - c[a]`` over diagonal elements with ``||[D, pi(c)]|| <= 1``.

    Raises
    ------
    LabelOutOfRange
        If a label component reaches ``cutoff - buffer``.
    NotConverged
        If the iteration budget runs out while the objective still moves by
        more than ``tol_obj``; the partial result is attached as ``.result``.
    """
    cfg = cfg or SupSolverConfig()
    a, b = as_label(a), as_label(b)
    limit = cfg.cutoff - cfg.buffer
    for lab in (a, b):
        if max(lab) >= limit:
            raise LabelOutOfRange(f"label ({lab}) must stay below cutoff - buffer = {limit}")
    if a == b:
        return SupResult(0.0, DiagonalElement.zeros(cfg.cutoff), 0.0, 0, True, 0.0, 0)

    W = cfg.window_for(a, b)
    if max(*a, *b) >= W:
        raise LabelOutOfRange(f"labels {a} and {b} do not fit in a window of {W} levels")
    n_solve = W + 1
    ia, ib = a.m * W + a.n, b.m * W + b.n
    free = np.setdiff1d(np.arange(W * W), [ia, ib])

    def full(y):
        cw = np.zeros(W * W)
        cw[free] = y
        cw[ib] = 1.0
        return cw.reshape(W, W)

    # start from the clamped linear ramp between the two labels
    P, Q = np.indices((W, W))
    d = np.array([b.m - a.m, b.n - a.n], dtype=float)
    ramp = np.clip(((P - a.m) * d[0] + (Q - a.n) * d[1]) / (d @ d), 0.0, 1.0)
    y = ramp.ravel()[free]

    budget = cfg.max_iters
    iters = 0
    tail_gain = 0.0
    capped = False
    idx = np.minimum(np.arange(n_solve), W - 1)
    for mu in cfg.smoothing:
        if budget <= 0:
            break
        history = []

        def fg(yv, mu=mu):
            f, gc = _smoothed(_embed(full(yv), n_solve), params, mu, cfg.constraint_mode)
            # fold the gradient of the continued levels back onto the window
            gw = np.zeros((W, W))
            np.add.at(gw, (idx[:, None], idx[None, :]), gc)
            fg.last = f
            return f, gw.ravel()[free]

        cap = min(cfg.stage_iters, budget)
        try:
            res = minimize(fg, y, jac=True, method="L-BFGS-B",
                           callback=lambda _x: history.append(fg.last),
                           options=dict(maxiter=cap, maxcor=30, gtol=1e-10, ftol=1e-14))
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalFailure(f"solver step failed: {exc}") from exc
        y = res.x
        iters += res.nit
        budget -= res.nit
        capped = res.status == 1 and res.nit >= cap
        # objective movement over the last tenth of the stage
        if len(history) >= 2:
            back = history[-max(2, len(history) // 10)]
            tail_gain = abs(1.0 / history[-1] - 1.0 / back)
        else:
            tail_gain = 0.0

    c_full = _embed(full(y), cfg.cutoff)
    norm = _mode_norm(c_full, params, cfg.constraint_mode)
    if not np.isfinite(norm) or norm <= 0:
        raise NumericalFailure(f"solver produced a degenerate element (norm {norm})")
    element = DiagonalElement(c_full / norm)
    value = element.coeffs[b.m, b.n] - element.coeffs[a.m, a.n]
    op_norm = (diagonal_commutator_norm(element.coeffs, params)
               if cfg.constraint_mode == "constraint_relations" else _mode_norm(element.coeffs, params, "operator_norm"))
    mode_norm = _mode_norm(element.coeffs, params, cfg.constraint_mode)
    converged = not (capped and budget <= 0 and tail_gain > cfg.tol_obj)
    result = SupResult(float(value), element, float(mode_norm), iters, converged, float(op_norm), W)
    if not converged:
        raise NotConverged(
            f"budget of {cfg.max_iters} iterations exhausted with objective still moving by {tail_gain:.2e}",
            result=result,
        )
    return result


def scale_to_ball(e, params: PhaseSpaceParams, cutoff: int | None = None) -> DiagonalElement:
    """``e / ||[D, pi(e)]||``, which sits on the boundary of the ball."""
    el = e if isinstance(e, DiagonalElement) else DiagonalElement(getattr(e, "coeffs", e))
    if cutoff is not None and el.cutoff != cutoff:
        raise InvalidParameter(f"element cutoff {el.cutoff} != requested {cutoff}")
    norm = diagonal_commutator_norm(el.coeffs, params)
    scale = max(1.0, float(np.max(np.abs(el.coeffs))))
    if norm <= 1e-14 * scale:
        raise ZeroElement("commutator vanishes: the element is a multiple of the identity")
    return DiagonalElement(el.coeffs / norm)


def brute_force_oracle(params: PhaseSpaceParams, a, b, cutoff: int | None = None, samples: int = 200,
                       seed: int = 42, buffer: int = DEFAULT_BUFFER,
                       include_closed_form: bool = True) -> float:
    """Best ``|c[b] - c[a]|`` among sampled directions scaled onto the ball.

    Candidates are every single-site projector on the support, ``samples``
    Gaussian coefficient grids, and, unless disabled, the closed-form
    element.  The result is a lower bound on the supremum.
    """
    cutoff = _check_cutoff(cutoff if cutoff is not None else default_cutoff())
    a, b = as_label(a), as_label(b)
    limit = cutoff - buffer
    for lab in (a, b):
        if max(lab) >= limit:
            raise LabelOutOfRange(f"label ({lab}) must stay below cutoff - buffer = {limit}")
    if a == b:
        return 0.0
    rng = np.random.default_rng(seed)
    best = 0.0

    def score(c):
        try:
            el = scale_to_ball(c, params)
        except ZeroElement:
            return 0.0
        return abs(el.coeffs[b.m, b.n] - el.coeffs[a.m, a.n])

    for i in range(limit):
        for j in range(limit):
            c = np.zeros((cutoff, cutoff))
            c[i, j] = 1.0
            best = max(best, score(c))
    for _ in range(samples):
        c = np.zeros((cutoff, cutoff))
        c[:limit, :limit] = rng.standard_normal((limit, limit))
        best = max(best, score(c))
    if include_closed_form:
        best = max(best, score(optimal_element_general(params, a, b, cutoff, buffer).coeffs))
    return float(best)


# -- exploratory: do off-diagonal terms help? -------------------------------

@dataclass(frozen=True)
class OffDiagonalProbe:
    """Best values over finite-rank elements supported on a window of levels.

    ``diagonal`` restricts to diagonal elements, ``hermitian`` allows every
    Hermitian element on the same window; ``gain = hermitian - diagonal``.
    ``element`` is the best Hermitian element found, scaled onto the ball,
    as a ``(window+1)^2``-dimensional matrix in the lexicographic basis.
    """

    diagonal: float
    hermitian: float
    gain: float
    window: int
    closed_form: float
    element: np.ndarray = field(repr=False, default=None)


def _hermitian_from(params_vec, n, ia, ib, diag_only):
    """Hermitian matrix from its independent real parameters, with ``e[b,b] = e[a,a] + 1``."""
    dfree = np.setdiff1d(np.arange(n), [ib])
    e = np.zeros((n, n), dtype=complex)
    nd = dfree.size
    e[dfree, dfree] = params_vec[:nd]
    e[ib, ib] = e[ia, ia] + 1.0
    if not diag_only:
        iu = np.triu_indices(n, 1)
        k = iu[0].size
        z = params_vec[nd:nd + k] + 1j * params_vec[nd + k:nd + 2 * k]
        e[iu] = z
        e[(iu[1], iu[0])] = np.conj(z)
    return e, dfree


def probe_off_diagonal(params: PhaseSpaceParams, a, b, window: int = 4, mu_schedule=(1e-2, 1e-3, 1e-4),
                       seed: int = 42, max_iters: int = 3000) -> OffDiagonalProbe:
    """Compare diagonal and general Hermitian suprema on a finite-rank window.

    Elements live on levels ``< window`` in both modes and vanish elsewhere,
    so the commutator is computed exactly at cutoff ``window + 1``.  Both
    problems use the same smoothed-norm L-BFGS solver; the Hermitian solve
    starts from the diagonal optimum plus a small seeded perturbation.
    Not part of acceptance: it reports what it finds.
    """
    a, b = as_label(a), as_label(b)
    if a == b:
        raise InvalidParameter("probe needs two distinct labels")
    W = int(window)
    if max(*a, *b) >= W:
        raise LabelOutOfRange(f"labels must fit in a window of {W} levels")
    N = W + 1
    keep = np.array([i * N + j for i in range(W) for j in range(W)])
    n = keep.size
    pos = {int(k): p for p, k in enumerate(keep)}
    ia, ib = pos[a.m * N + a.n], pos[b.m * N + b.n]
    A1 = deformed_ladder(1, params, N).matrix
    A2 = deformed_ladder(2, params, N).matrix
    n2 = N * N

    def lift(e_small):
        e = np.zeros((n2, n2), dtype=complex)
        e[np.ix_(keep, keep)] = e_small
        return e

    def fg(vec, mu, diag_only):
        e_small, dfree = _hermitian_from(vec, n, ia, ib, diag_only)
        d1 = params.beta * commutator_d1(params, lift(e_small))
        U, S, Vh = np.linalg.svd(d1)
        f = mu * logsumexp(S / mu)
        w = np.exp(S / mu - f / mu)
        Gm = params.beta * (U * w) @ Vh
        G11, G12 = Gm[:n2, :n2], Gm[:n2, n2:]
        G21, G22 = Gm[n2:, :n2], Gm[n2:, n2:]
        PA = G12.conj().T + G21
        PB = G11.conj().T - G22
        ge = (A1.conj().T @ PA - PA @ A1.conj().T) + (A2.conj().T @ PB - PB @ A2.conj().T)
        ge = ge[np.ix_(keep, keep)]
        gh = 0.5 * (ge + ge.conj().T)
        gd = np.real(np.diag(gh)).copy()
        gd[ia] += gd[ib]  # e[b,b] follows e[a,a]
        grad = [gd[dfree]]
        if not diag_only:
            iu = np.triu_indices(n, 1)
            grad += [2 * np.real(gh[iu]), 2 * np.imag(gh[iu])]
        return f, np.concatenate(grad)

    def solve(x0, diag_only):
        x = x0
        for mu in mu_schedule:
            r = minimize(fg, x, args=(mu, diag_only), jac=True, method="L-BFGS-B",
                         options=dict(maxiter=max_iters, maxcor=30, gtol=1e-10, ftol=1e-14))
            x = r.x
        e = lift(_hermitian_from(x, n, ia, ib, diag_only)[0])
        norm = np.linalg.svd(params.beta * commutator_d1(params, e), compute_uv=False).max()
        return x, 1.0 / norm, e / norm

    # diagonal start: the linear ramp between the labels
    P, Q = np.divmod(keep, N)
    d = np.array([b.m - a.m, b.n - a.n], dtype=float)
    ramp = np.clip(((P - a.m) * d[0] + (Q - a.n) * d[1]) / (d @ d), 0.0, 1.0)
    dfree = np.setdiff1d(np.arange(n), [ib])
    xd, vd, _ = solve(ramp[dfree], True)

    rng = np.random.default_rng(seed)
    k = n * (n - 1) // 2
    x0 = np.concatenate([xd, 1e-3 * rng.standard_normal(2 * k)])
    _, vh, best = solve(x0, False)
    cf = distance(params, a, b).closed_form
    return OffDiagonalProbe(float(vd), float(vh), float(vh - vd), W, float(cf), best)
