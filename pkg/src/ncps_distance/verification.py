"""Named numerical checks, run by ``ncps verify``.

Each check returns a :class:`Check` with its worst residual and the
tolerance it was held to.  Nothing here is loosened to make a check pass;
a failing check reports the residual that failed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from .ball import commutator_diagonals, constraint_relations, feasible_diagonal
from .closed_form import (
    check_additivity,
    check_pythagoras,
    distance,
    optimal_element_axis,
    optimal_element_general,
)
from .errors import NCPSError
from .hilbert import annihilation_mode, creation_mode, deformed_ladder, make_params
from .numeric import SupSolverConfig, sup_distance
from .triple import diagonal_commutator_norm, dirac_operator, gamma_matrices

__all__ = ["Check", "VerifyConfig", "run_checks", "DEFAULT_THETAS"]

DEFAULT_THETAS = (0.0, 0.3, 0.6, 0.9)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VerifyConfig:
    hbar: float = 1.0
    thetas: tuple[float, ...] = DEFAULT_THETAS
    cutoff: int = 24
    buffer: int = 8
    max_label: int = 3
    seed: int = 42
    sandwich_tol: float = 1e-4
    ball_tol: float = 1e-6


def _check(name, residual, tol, detail=""):
    residual = float(residual)
    return Check(name, bool(np.isfinite(residual) and residual <= tol), residual, tol, detail)


def _targets(max_label):
    return [(k, l) for k in range(max_label + 1) for l in range(max_label + 1)]


def check_gammas() -> Check:
    g = gamma_matrices()
    worst = max(
        np.max(np.abs(g.anticommutator(k, l) - 2.0 * (k == l) * np.eye(4)))
        for k in range(1, 5) for l in range(1, 5)
    )
    herm = max(np.max(np.abs(x - x.conj().T)) for x in g)
    return _check("gamma-anticommutation", max(worst, herm), 0.0)


def check_dirac_hermitian(params, cutoff) -> Check:
    D = dirac_operator(params, cutoff).matrix
    return _check(f"dirac-hermitian[theta={params.theta:g}]", np.max(np.abs(D - D.conj().T)), 1e-12)


def check_ladder_interior(cutoff) -> Check:
    """``[a_i, a_j^H] = delta_ij`` away from the top level of each mode."""
    N = cutoff
    interior = np.array([m * N + n for m in range(N - 1) for n in range(N - 1)])
    worst = 0.0
    for i, j in itertools.product((1, 2), repeat=2):
        a = annihilation_mode(i, N).matrix
        ad = creation_mode(j, N).matrix
        comm = a @ ad - ad @ a
        target = np.eye(N * N) if i == j else np.zeros((N * N, N * N))
        worst = max(worst, np.max(np.abs((comm - target)[np.ix_(interior, interior)])))
    return _check("ladder-commutators-interior", worst, 1e-12)


def check_gh_formulas(params, cutoff, rng) -> Check:
    """Diagonals of ``[A_i, e][A_i, e]^H`` and friends against the G/H combinations."""
    N = cutoff
    c = rng.standard_normal((N, N))
    e = np.diag(c.ravel()).astype(complex)
    A1 = deformed_ladder(1, params, N).matrix
    A2 = deformed_ladder(2, params, N).matrix
    C1 = A1 @ e - e @ A1
    C2 = A2 @ e - e @ A2
    ops = {
        "A1A1h": C1 @ C1.conj().T,
        "A1hA1": C1.conj().T @ C1,
        "A2A2h": C2 @ C2.conj().T,
        "A2hA2": C2.conj().T @ C2,
    }
    pred = commutator_diagonals(c, params)
    # interior: one level away from the top so the truncated raising operator is exact
    worst = 0.0
    for key, op in ops.items():
        diag = np.real(np.diag(op)).reshape(N, N)[: N - 2, : N - 2]
        worst = max(worst, np.max(np.abs(diag - pred[key][: N - 2, : N - 2])))
    return _check(f"gh-commutator-diagonals[theta={params.theta:g}]", worst, 1e-10)


def check_relation_consistency(params, cutoff, buffer, rng, samples=50) -> Check:
    """Operator-norm feasibility must imply the constraint relations."""
    lim = cutoff - buffer
    bad = 0
    for _ in range(samples):
        c = np.zeros((cutoff, cutoff))
        c[:lim, :lim] = rng.standard_normal((lim, lim))
        c /= diagonal_commutator_norm(c, params) * rng.uniform(0.8, 1.2)
        if diagonal_commutator_norm(c, params) <= 1 + 1e-9 and not feasible_diagonal(c, params):
            bad += 1
    return _check(f"relations-necessary[theta={params.theta:g}]", bad, 0,
                  f"{bad} of {samples} ball-feasible elements violated a relation")


def check_saturation(params, cfg: VerifyConfig) -> list[Check]:
    """Closed-form optimal elements sit on the ball boundary and make relations tight."""
    out = []
    tag = f"theta={params.theta:g}"
    worst_norm, worst_pair = 0.0, None
    worst_tight = 0.0
    for k, l in _targets(cfg.max_label):
        if (k, l) == (0, 0):
            continue
        if l == 0:
            el = optimal_element_axis(params, 0, k, 0, cfg.cutoff, cfg.buffer)
        elif k == 0:
            el = optimal_element_axis(params, 0, l, 0, cfg.cutoff, cfg.buffer, mode=2)
        else:
            el = optimal_element_general(params, (0, 0), (k, l), cfg.cutoff, cfg.buffer)
        dev = abs(diagonal_commutator_norm(el.coeffs, params) - 1.0)
        if dev > worst_norm:
            worst_norm, worst_pair = dev, (k, l)
        rep = constraint_relations(el, params)
        # feasible and tight: the largest residual is zero
        worst_tight = max(worst_tight, abs(rep.max_residual))
    out.append(_check(f"optimal-element-ball-norm[{tag}]", worst_norm, cfg.ball_tol,
                      f"worst | norm - 1 | at (0,0)->{worst_pair}"))
    out.append(_check(f"optimal-element-relations-tight[{tag}]", worst_tight, 1e-9))
    return out


def check_sandwich(params, cfg: VerifyConfig, rows: list) -> Check:
    scfg = SupSolverConfig(cutoff=cfg.cutoff, buffer=cfg.buffer, seed=cfg.seed)
    worst, where = 0.0, None
    for k, l in _targets(cfg.max_label):
        cf = distance(params, (0, 0), (k, l)).closed_form
        res = sup_distance(params, (0, 0), (k, l), scfg)
        gap = abs(res.value - cf)
        if gap > worst:
            worst, where = gap, (k, l)
        rows.append(dict(m=0, n=0, k=k, l=l, theta=params.theta, closed_form=cf,
                         numeric_sup=res.value, ball_norm=res.ball_norm))
    return _check(f"closed-form-vs-numeric[theta={params.theta:g}]", worst, cfg.sandwich_tol,
                  f"largest gap at (0,0)->{where}")


def check_identities(params, max_label=6) -> list[Check]:
    rng = range(max_label + 1)
    add = max(check_additivity(params, *q) for q in itertools.product(rng, repeat=4))
    pyth = max(check_pythagoras(params, *q) for q in itertools.product(rng, repeat=4))
    tag = f"theta={params.theta:g}"
    return [_check(f"additivity[{tag}]", add, 1e-12), _check(f"pythagoras[{tag}]", pyth, 1e-12)]


def check_shortening(params, max_label=3) -> Check:
    base = make_params(params.hbar, 0.0)
    ratio = params.shortening
    worst = 0.0
    for a in itertools.product(range(max_label + 1), repeat=2):
        for b in itertools.product(range(max_label + 1), repeat=2):
            d0 = distance(base, a, b).closed_form
            worst = max(worst, abs(distance(params, a, b).closed_form - ratio * d0))
    return _check(f"shortening-factor[theta={params.theta:g}]", worst, 1e-12)


def run_checks(cfg: VerifyConfig) -> tuple[list[Check], list[dict]]:
    """Run every check for every theta in the grid; returns checks and distance rows."""
    checks: list[Check] = []
    rows: list[dict] = []
    rng = np.random.default_rng(cfg.seed)
    checks.append(check_gammas())
    checks.append(check_ladder_interior(cfg.cutoff))
    window = cfg.cutoff - cfg.buffer
    truncation = _check("truncation-window", max(0, cfg.max_label + 1 - window), 0,
                        f"labels up to {cfg.max_label} need cutoff - buffer >= {cfg.max_label + 1}, "
                        f"have {window}")
    checks.append(truncation)
    for theta in cfg.thetas:
        params = make_params(cfg.hbar, theta)
        checks.append(check_dirac_hermitian(params, cfg.cutoff))
        checks.append(check_gh_formulas(params, cfg.cutoff, rng))
        checks.extend(check_identities(params))
        checks.append(check_shortening(params))
        if not truncation.passed:
            continue
        checks.append(check_relation_consistency(params, cfg.cutoff, cfg.buffer, rng))
        checks.extend(check_saturation(params, cfg))
        try:
            checks.append(check_sandwich(params, cfg, rows))
        except NCPSError as exc:
            checks.append(Check(f"closed-form-vs-numeric[theta={theta:g}]", False, math.inf,
                                cfg.sandwich_tol, f"{type(exc).__name__}: {exc}"))
    return checks, rows
