"""Projection-based reduction algorithms.

All four reductors produce a reduced model through the congruence

    Ar = W^T A V,  Br = W^T B,  Cr = C V,  Mr_i = V^T M_i V

with ``W^T V = I``.  The balancing methods (``bt``, ``tlbt``) pick the
projection from a square-root balancing of the controllability and total
observability Gramians; the fixed-point methods (``homora``, ``tlhnoia``)
iterate projections built from coupled Gramian blocks until the reduced
poles stagnate.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import matfun, optimality
from .errors import DimensionError, RankError, SolverError, ValidationError
from .gramians import cross_gramians, timelimited_gramians
from .model import LqoSystem, TimeInterval

#: Condition-number limit beyond which a normalization factor counts as singular.
COND_LIMIT = 1e12


@dataclass(frozen=True)
class ProjectionPair:
    """Right and left projection bases with ``W^T V = I``."""

    V: np.ndarray
    W: np.ndarray


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of one reduction run.

    ``pole_history`` has one sorted eigenvalue list per iterate including
    the starting point, so its length is ``iterations + 1``;
    ``convergence_metric`` holds the relative pole change per iteration.
    """

    method: str
    rom: LqoSystem
    iterations: int
    pole_history: list
    convergence_metric: list
    converged: bool
    residuals: optimality.OptimalityReport = None
    projection: ProjectionPair = None
    sigma: np.ndarray = None
    warnings: tuple = ()


def pole_change(prev, new):
    """Relative pole displacement between two eigenvalue lists.

    Both lists are sorted lexicographically by (real, imaginary) part and
    compared pairwise; the metric is
    ``max_k |prev_k - new_k| / max(1, |prev_k|)``.
    """
    prev = np.sort_complex(np.asarray(prev, dtype=complex).reshape(-1))
    new = np.sort_complex(np.asarray(new, dtype=complex).reshape(-1))
    if prev.size != new.size:
        raise DimensionError(
            f"eigenvalue lists differ in length: {prev.size} vs {new.size}"
        )
    return float(np.max(np.abs(prev - new) / np.maximum(1.0, np.abs(prev))))


def biorthogonalize(v, w):
    """Column-by-column bi-orthogonal Gram-Schmidt sweep.

    Each column pair is deflated against the previously fixed columns,
    normalized to unit 2-norm, and the right column is rescaled by
    ``1 / (w^T v)`` so that ``W^T V = I``.

    Returns
    -------
    ProjectionPair

    Raises
    ------
    RankError
        If a column collapses under deflation or the normalization pivot
        ``|w^T v|`` falls below 1e-13, reported with the column index.
    """
    v = np.array(v, dtype=float)
    w = np.array(w, dtype=float)
    if v.shape != w.shape or v.ndim != 2:
        raise DimensionError(f"V and W must share a shape, got {v.shape} and {w.shape}")
    if v.shape[1] > v.shape[0]:
        raise DimensionError(f"more columns than rows: {v.shape}")
    for col in range(v.shape[1]):
        vc = v[:, col].copy()
        wc = w[:, col].copy()
        v0 = np.linalg.norm(vc)
        w0 = np.linalg.norm(wc)
        for j in range(col):
            vc -= v[:, j] * (w[:, j] @ vc)
            wc -= w[:, j] * (v[:, j] @ wc)
        nv = np.linalg.norm(vc)
        nw = np.linalg.norm(wc)
        if nv <= 1e-13 * max(v0, 1.0) or nw <= 1e-13 * max(w0, 1.0):
            raise RankError(
                f"column {col} collapsed during deflation", column=col
            )
        vc /= nv
        wc /= nw
        pivot = wc @ vc
        if abs(pivot) < 1e-13:
            raise RankError(
                f"normalization pivot |w^T v| = {abs(pivot):.3e} at column {col}",
                column=col,
            )
        v[:, col] = vc / pivot
        w[:, col] = wc
    return ProjectionPair(V=v, W=w)


def _project(system, v, w, check_hurwitz=False):
    return LqoSystem(
        w.T @ system.A @ v,
        w.T @ system.B,
        system.C @ v,
        [v.T @ mi @ v for mi in system.M],
        check_hurwitz=check_hurwitz,
    )


def _psd_factor(x):
    wv, vec = np.linalg.eigh((x + x.T) / 2.0)
    wv = np.clip(wv, 0.0, None)
    order = np.argsort(wv)[::-1]
    return vec[:, order] * np.sqrt(wv[order])


def _square_root_balance(p, q, n):
    """Square-root balanced projection of order ``n`` from Gramians P and Q."""
    fp = _psd_factor(p)
    fq = _psd_factor(q)
    u, s, vt = sla.svd(fq.T @ fp)
    if n > s.size or s[n - 1] <= 1e-12 * s[0]:
        raise RankError(
            f"requested order {n} exceeds the numerical rank of the balancing "
            f"problem (sigma_n = {s[n - 1] if n <= s.size else 0.0:.3e})",
            order=n,
        )
    scale = 1.0 / np.sqrt(s[:n])
    w = fq @ u[:, :n] * scale
    v = fp @ vt[:n].T * scale
    return v, w, s


def _balancing_report(method, system, gset, n):
    v, w, sigma = _square_root_balance(gset.P, gset.Q, n)
    rom = _project(system, v, w)
    notes = []
    if not rom.is_hurwitz:
        notes.append(
            "reduced A is not Hurwitz; horizon-limited balancing does not "
            "guarantee stability"
        )
    return ReductionReport(
        method=method,
        rom=rom,
        iterations=0,
        pole_history=[rom.poles()],
        convergence_metric=[],
        converged=True,
        projection=ProjectionPair(V=v, W=w),
        sigma=sigma,
        warnings=tuple(notes),
    )


def bt(system, n):
    """Balanced truncation with infinite-horizon Gramians.

    Balances the controllability Gramian against the total observability
    Gramian (linear plus quadratic part) and truncates to the ``n`` largest
    singular values, so that ``W^T P W = V^T Q V = diag(sigma_1..sigma_n)``.

    Returns
    -------
    ReductionReport
    """
    if not 0 < n <= system.order:
        raise ValidationError(f"order n must satisfy 0 < n <= {system.order}, got {n}")
    interval = TimeInterval(0.0, np.inf)
    gset = timelimited_gramians(system, interval)
    return _balancing_report("bt", system, gset, n)


def tlbt(system, n, interval):
    """Balanced truncation with horizon-limited Gramians.

    Same square-root balancing as :func:`bt` applied to the Gramians of the
    given horizon.  Stability of the reduced model is not guaranteed; a
    non-Hurwitz result is returned with a warning entry, not an error.

    Returns
    -------
    ReductionReport
    """
    if not 0 < n <= system.order:
        raise ValidationError(f"order n must satisfy 0 < n <= {system.order}, got {n}")
    gset = timelimited_gramians(system, interval)
    return _balancing_report("tlbt", system, gset, n)


def _solve_right(num, den, what):
    """Solve ``X den = num`` for X, guarding against a singular factor."""
    if np.linalg.cond(den) > COND_LIMIT:
        raise SolverError(f"{what} is numerically singular", factor=what)
    return np.linalg.solve(den.T, num.T).T


def homora(system, rom0, tol=1e-6, max_iter=200):
    """Fixed-point iteration for the infinite-horizon optimality conditions.

    Per sweep: solve the coupled infinite-horizon Gramian blocks of the pair,
    set ``V = Pt`` and ``W = Gt (Pt^T Gt)^{-1}`` (the inverse factor enforces
    ``W^T V = I``), project, and repeat until the reduced poles stagnate.

    The infinite-horizon blocks lose their Gramian meaning on non-Hurwitz
    iterates.  Transiently unstable iterates are passed through (the
    algebraic solves stay well posed) but the returned model is always the
    last Hurwitz iterate; if the iteration stagnates on an unstable iterate,
    breaks down, or hits ``max_iter``, that last Hurwitz iterate comes back
    with ``converged=False`` and a diagnostic entry.

    Returns
    -------
    ReductionReport
        With ``residuals`` populated by :func:`lqomor.optimality.h2_residuals`.
    """
    matfun.require_hurwitz(system.A, "A")
    matfun.require_hurwitz(rom0.A, "initial reduced A")
    if not 0 < rom0.order <= system.order:
        raise ValidationError(
            f"initial order must satisfy 0 < n <= {system.order}, got {rom0.order}"
        )
    rom = rom0
    pole_history = [rom.poles()]
    metric = []
    notes = []
    last_stable = (rom, None)
    converged = False
    stopped = False
    for it in range(1, max_iter + 1):
        a, ah = system.A, rom.A
        try:
            pt = matfun.solve_sylvester(a, ah.T, system.B @ rom.B.T)
            yt = matfun.solve_sylvester(a.T, ah, system.C.T @ rom.C)
            kt = sum(mi @ pt @ mhi for mi, mhi in zip(system.M, rom.M))
            zt = matfun.solve_sylvester(a.T, ah, kt)
            gt = yt + 2.0 * zt
            v = pt
            w = _solve_right(gt, pt.T @ gt, "normalization factor Pt^T Gt")
            rom = _project(system, v, w)
        except (SolverError, np.linalg.LinAlgError) as exc:
            notes.append(
                f"iteration {it} broke down ({exc}); returning last Hurwitz iterate"
            )
            stopped = True
            break
        poles = rom.poles()
        metric.append(pole_change(pole_history[-1], poles))
        pole_history.append(poles)
        if rom.is_hurwitz:
            last_stable = (rom, ProjectionPair(V=v, W=w))
            if metric[-1] <= tol:
                converged = True
                stopped = True
                break
        else:
            notes.append(f"iterate {it} is not Hurwitz; continuing")
            if metric[-1] <= tol:
                notes.append(
                    "poles stagnated on a non-Hurwitz iterate; returning last "
                    "Hurwitz iterate"
                )
                stopped = True
                break
    rom, pair = last_stable
    if not stopped:
        notes.append(f"no pole stagnation within {max_iter} iterations")
    return ReductionReport(
        method="homora",
        rom=rom,
        iterations=len(metric),
        pole_history=pole_history,
        convergence_metric=metric,
        converged=converged,
        residuals=optimality.h2_residuals(system, rom),
        projection=pair,
        warnings=tuple(notes),
    )


def tlhnoia(system, rom0, interval, tol=1e-6, max_iter=200):
    """Fixed-point iteration for the horizon-limited near-optimality conditions.

    Per sweep: solve the horizon-limited blocks Pt, Ph, Gt = Yt + 2 Zt and
    Gh = Yh + 2 Zh of the pair, set ``V = Pt Ph^{-1}`` and ``W = Gt Gh^{-1}``,
    bi-orthogonalize, project, and repeat until the reduced poles stagnate.

    The finite-horizon equations stay well posed for unstable iterates, and
    the converged model itself may legitimately be non-Hurwitz (it is then
    flagged in the warnings, not rejected).  A numerically singular Ph or Gh
    raises :class:`SolverError`.

    Returns
    -------
    ReductionReport
        With ``residuals`` populated by :func:`lqomor.optimality.tl_residuals`
        (whose first condition is omitted for a non-Hurwitz result).
    """
    if interval.is_infinite:
        raise ValidationError("this reductor requires a finite horizon")
    matfun.require_hurwitz(system.A, "A")
    matfun.require_hurwitz(rom0.A, "initial reduced A")
    if not 0 < rom0.order <= system.order:
        raise ValidationError(
            f"initial order must satisfy 0 < n <= {system.order}, got {rom0.order}"
        )
    rom = rom0
    pole_history = [rom.poles()]
    metric = []
    notes = []
    pair = None
    converged = False
    for it in range(1, max_iter + 1):
        cg = cross_gramians(system, rom, interval)
        gt = cg.Yt + 2.0 * cg.Zt
        gh = cg.Yh + 2.0 * cg.Zh
        v = _solve_right(cg.Pt, cg.Ph, "controllability factor Ph")
        w = _solve_right(gt, gh, "observability factor Gh")
        pair = biorthogonalize(v, w)
        rom = _project(system, pair.V, pair.W)
        poles = rom.poles()
        metric.append(pole_change(pole_history[-1], poles))
        pole_history.append(poles)
        if metric[-1] <= tol:
            converged = True
            break
    if not rom.is_hurwitz:
        notes.append("returned reduced model is not Hurwitz")
    if not converged:
        notes.append(f"no pole stagnation within {max_iter} iterations")
    residuals = optimality.tl_residuals(system, rom, interval)
    return ReductionReport(
        method="tlhnoia",
        rom=rom,
        iterations=len(metric),
        pole_history=pole_history,
        convergence_metric=metric,
        converged=converged,
        residuals=residuals,
        projection=pair,
        warnings=tuple(notes),
    )
