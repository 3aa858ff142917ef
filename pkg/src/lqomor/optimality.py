"""Reduction objective, analytic gradients and optimality-condition residuals.

The objective is the part of the squared horizon-limited error norm that
depends on the reduced model,

    J = trace(-2 B^T Qt Br + Br^T Qh Br),

so that ``||H - Hr||^2 = ||H||^2 + J``.  First-order stationarity of J
yields four matrix conditions.  Three of them involve only horizon-limited
Gramian blocks; the condition on the reduced A additionally carries a
deviation term ``L`` built from infinite-horizon blocks, the differences
between infinite and horizon-limited blocks, and a Frechet-derivative term
of the matrix exponential at the horizon boundaries.

All gradients follow the entrywise convention ``dJ = sum_ij G_ij dX_ij``
and are validated against central finite differences of :func:`objective_J`
in the test suite.
"""

from dataclasses import dataclass

import numpy as np

from . import matfun
from .errors import SolverError, ValidationError
from .gramians import cross_gramians
from .model import TimeInterval


@dataclass(frozen=True)
class GradientReport:
    """Objective value and its gradients with respect to the reduced matrices."""

    J: float
    grad_A: np.ndarray
    grad_B: np.ndarray
    grad_C: np.ndarray
    grad_M: list


@dataclass(frozen=True)
class OptimalityReport:
    """Residual matrices and norms of the four stationarity conditions.

    ``op1_residual = petrov_galerkin_term + L`` holds exactly as assembled.
    For horizon-limited residuals of a non-Hurwitz reduced model the
    infinite-horizon blocks do not exist, so ``op1_residual`` and ``L`` are
    ``None`` and a note records why.
    """

    op1_residual: np.ndarray
    op1_norm: float
    op2_residuals: list
    op2_norms: list
    op3_residual: np.ndarray
    op3_norm: float
    op4_residual: np.ndarray
    op4_norm: float
    L: np.ndarray
    petrov_galerkin_term: np.ndarray
    horizon: str
    w_method: str = None
    splits: dict = None
    notes: tuple = ()


@dataclass(frozen=True)
class Theorem2Report:
    """Premise and conclusion deviations of the identity-Gramian projection test.

    Premise deviations measure, at each finite horizon boundary tau,
    ``||W^T e^(A tau) B - e^(Ar tau) Br||``, ``||C e^(A tau) V - Cr e^(Ar tau)||``
    and ``max_i ||V^T M_i e^(A tau) V - Mr_i e^(Ar tau)||`` (maximum over the
    boundaries).  Conclusion deviations measure how far the reduced blocks are
    from the identity: ``||Ph - I||`` and ``||Yh + 2 Zh - I||``.
    """

    premise_input: float
    premise_output: float
    premise_quadratic: float
    conclusion_controllability: float
    conclusion_observability: float


def objective_J(system, rom, interval):
    """Reduced-model-dependent part of the squared error norm.

    Satisfies ``h2tau_error(system, rom)^2 = h2tau_norm(system)^2 + J``.
    """
    cg = cross_gramians(system, rom, interval)
    return float(
        np.trace(-2.0 * system.B.T @ cg.Qt @ rom.B + rom.B.T @ cg.Qh @ rom.B)
    )


def _infinite_adjoints(system, rom, cg):
    """Infinite-horizon blocks entering the gradient of J with respect to Ar.

    ``pti, phi`` solve the unweighted controllability-type equations;
    ``zb, zbn`` solve infinite-horizon observability-type equations whose
    right-hand sides carry the horizon-limited Pt and Ph.
    """
    a, ah = system.A, rom.A
    pti = matfun.solve_sylvester(a, ah.T, system.B @ rom.B.T)
    phi = matfun.solve_lyapunov(ah, rom.B @ rom.B.T, side="controllability")
    kt = sum(mi @ cg.Pt @ mhi for mi, mhi in zip(system.M, rom.M))
    zb = matfun.solve_sylvester(a.T, ah, kt)
    kh = sum(mhi @ cg.Ph @ mhi for mhi in rom.M)
    zbn = matfun.solve_lyapunov(ah, kh, side="observability")
    return pti, phi, zb, zbn


def _boundary_direction(system, rom, cg, pti, phi, zb, zbn, s, sh):
    """Direction matrix of the Frechet boundary term at one horizon endpoint."""
    b, c = system.B, system.C
    bh, ch = rom.B, rom.C
    v = (
        pti.T @ s.T @ c.T @ ch
        + bh @ b.T @ s.T @ zb
        - phi @ sh.T @ ch.T @ ch
        - bh @ bh.T @ sh.T @ zbn
    )
    for mi, mhi in zip(system.M, rom.M):
        v = v + pti.T @ s.T @ mi @ cg.Pt @ mhi - phi @ sh.T @ mhi @ cg.Ph @ mhi
    return v


def _frechet_term(ah, v, t, w_method):
    if t == 0.0:
        return np.zeros_like(ah)
    if w_method == "frechet":
        return matfun.expm_frechet(ah, v, t)
    if w_method == "integral":
        # Literal evaluation of int_0^t e^(Ar (t - s)) V e^((Ar + V) s) ds
        # through one block exponential; agrees with the Frechet variant to
        # first order in V only.
        n = ah.shape[0]
        blk = np.zeros((2 * n, 2 * n))
        blk[:n, :n] = ah
        blk[:n, n:] = v
        blk[n:, n:] = ah + v
        return matfun.expm(blk, t)[:n, n:]
    raise ValidationError(f"unknown w_method {w_method!r}")


def _w_total(system, rom, cg, pti, phi, zb, zbn, interval, w_method):
    """Combined Frechet boundary term over both horizon endpoints."""
    if interval.is_infinite:
        raise ValidationError("boundary term requires a finite horizon")
    a, ah = system.A, rom.A
    t0, t1 = interval.t_start, interval.t_end
    w = -_frechet_term(
        ah,
        _boundary_direction(
            system, rom, cg, pti, phi, zb, zbn, matfun.expm(a, t0), matfun.expm(ah, t0)
        ),
        t0,
        w_method,
    )
    w = w + _frechet_term(
        ah,
        _boundary_direction(
            system, rom, cg, pti, phi, zb, zbn, matfun.expm(a, t1), matfun.expm(ah, t1)
        ),
        t1,
        w_method,
    )
    return w


def gradients(system, rom, interval, w_method="frechet"):
    """Analytic gradients of the objective with respect to (Ar, Br, Cr, Mr_i).

    Requires a finite horizon and Hurwitz A on both sides (the gradient of J
    with respect to the reduced A involves infinite-horizon blocks).  Every
    block matches a central finite difference of :func:`objective_J`.

    Returns
    -------
    GradientReport
    """
    if interval.is_infinite:
        raise ValidationError("gradients require a finite horizon")
    matfun.require_hurwitz(system.A, "A")
    matfun.require_hurwitz(rom.A, "reduced A")
    cg = cross_gramians(system, rom, interval)
    pti, phi, zb, zbn = _infinite_adjoints(system, rom, cg)
    w = _w_total(system, rom, cg, pti, phi, zb, zbn, interval, w_method)

    grad_a = 2.0 * (-cg.Qt.T @ pti + cg.Qh @ phi - zb.T @ cg.Pt + zbn @ cg.Ph + w.T)
    gt = cg.Yt + 2.0 * cg.Zt
    gh = cg.Yh + 2.0 * cg.Zh
    grad_b = 2.0 * (-gt.T @ system.B + gh @ rom.B)
    grad_c = 2.0 * (-system.C @ cg.Pt + rom.C @ cg.Ph)
    grad_m = [
        2.0 * (-cg.Pt.T @ mi @ cg.Pt + cg.Ph @ mhi @ cg.Ph)
        for mi, mhi in zip(system.M, rom.M)
    ]
    j = float(np.trace(-2.0 * system.B.T @ cg.Qt @ rom.B + rom.B.T @ cg.Qh @ rom.B))
    return GradientReport(J=j, grad_A=grad_a, grad_B=grad_b, grad_C=grad_c, grad_M=grad_m)


def _condition_residuals(system, rom, cg):
    gt = cg.Yt + 2.0 * cg.Zt
    gh = cg.Yh + 2.0 * cg.Zh
    op2 = [
        -cg.Pt.T @ mi @ cg.Pt + cg.Ph @ mhi @ cg.Ph
        for mi, mhi in zip(system.M, rom.M)
    ]
    op3 = -gt.T @ system.B + gh @ rom.B
    op4 = -system.C @ cg.Pt + rom.C @ cg.Ph
    pg = -gt.T @ cg.Pt + gh @ cg.Ph
    return op2, op3, op4, pg


def tl_residuals(system, rom, interval, w_method="frechet"):
    """Residuals of the four horizon-limited stationarity conditions.

    The first condition reads ``petrov_galerkin_term + L = 0`` where L
    collects the infinite-minus-limited splits and the boundary Frechet
    term; conditions two to four use horizon-limited blocks only.  When the
    reduced A is not Hurwitz the L machinery is skipped (``op1_residual``
    and ``L`` come back ``None`` with an explanatory note) while the other
    three residuals remain exact.

    Returns
    -------
    OptimalityReport
    """
    if interval.is_infinite:
        raise ValidationError("horizon-limited residuals require a finite horizon")
    cg = cross_gramians(system, rom, interval)
    op2, op3, op4, pg = _condition_residuals(system, rom, cg)

    notes = []
    op1 = l_mat = splits = None
    if rom.is_hurwitz and system.is_hurwitz:
        pti, phi, zb, zbn = _infinite_adjoints(system, rom, cg)
        w = _w_total(system, rom, cg, pti, phi, zb, zbn, interval, w_method)
        p12 = pti - cg.Pt
        pn = phi - cg.Ph
        z12 = zb - cg.Zt
        zn = zbn - cg.Zh
        l_mat = -cg.Qt.T @ p12 + cg.Qh @ pn - z12.T @ cg.Pt + zn @ cg.Ph + w.T
        op1 = pg + l_mat
        splits = {"P12": p12, "Pn": pn, "Z12": z12, "Zn": zn, "W": w}
    else:
        notes.append(
            "reduced A is not Hurwitz: infinite-horizon blocks for the first "
            "condition do not exist, op1 and L omitted"
        )

    return OptimalityReport(
        op1_residual=op1,
        op1_norm=None if op1 is None else float(np.linalg.norm(op1, 2)),
        op2_residuals=op2,
        op2_norms=[float(np.linalg.norm(r, 2)) for r in op2],
        op3_residual=op3,
        op3_norm=float(np.linalg.norm(op3, 2)),
        op4_residual=op4,
        op4_norm=float(np.linalg.norm(op4, 2)),
        L=l_mat,
        petrov_galerkin_term=pg,
        horizon="limited",
        w_method=w_method,
        splits=splits,
        notes=tuple(notes),
    )


def h2_residuals(system, rom):
    """Residuals of the four infinite-horizon stationarity conditions.

    Both systems must be Hurwitz.  Here the first condition has no
    deviation term, so ``op1_residual`` equals the Petrov-Galerkin term and
    ``L`` is exactly zero.

    Returns
    -------
    OptimalityReport
    """
    interval = TimeInterval(0.0, np.inf)
    cg = cross_gramians(system, rom, interval)
    op2, op3, op4, pg = _condition_residuals(system, rom, cg)
    return OptimalityReport(
        op1_residual=pg,
        op1_norm=float(np.linalg.norm(pg, 2)),
        op2_residuals=op2,
        op2_norms=[float(np.linalg.norm(r, 2)) for r in op2],
        op3_residual=op3,
        op3_norm=float(np.linalg.norm(op3, 2)),
        op4_residual=op4,
        op4_norm=float(np.linalg.norm(op4, 2)),
        L=np.zeros_like(pg),
        petrov_galerkin_term=pg,
        horizon="infinite",
    )


def theorem2_check(system, rom, pair, interval):
    """Diagnose the premises and conclusions of the identity-Gramian property.

    For the projection choice whose reduced Gramian blocks would collapse to
    the identity, the property requires the projected propagator to commute
    with reduction at the horizon boundaries.  This diagnostic reports the
    deviations without asserting any threshold.

    Returns
    -------
    Theorem2Report
    """
    if interval.is_infinite:
        raise ValidationError("the identity-Gramian diagnostic requires a finite horizon")
    v, w = pair.V, pair.W
    a, b, c = system.A, system.B, system.C
    ah, bh, ch = rom.A, rom.B, rom.C
    times = [interval.t_end]
    if interval.t_start > 0.0:
        times.append(interval.t_start)
    dev_in = dev_out = dev_quad = 0.0
    for t in times:
        s = matfun.expm(a, t)
        sh = matfun.expm(ah, t)
        dev_in = max(dev_in, float(np.linalg.norm(w.T @ s @ b - sh @ bh, 2)))
        dev_out = max(dev_out, float(np.linalg.norm(c @ s @ v - ch @ sh, 2)))
        for mi, mhi in zip(system.M, rom.M):
            dev_quad = max(
                dev_quad, float(np.linalg.norm(v.T @ mi @ s @ v - mhi @ sh, 2))
            )
    cg = cross_gramians(system, rom, interval)
    eye = np.eye(rom.order)
    return Theorem2Report(
        premise_input=dev_in,
        premise_output=dev_out,
        premise_quadratic=dev_quad,
        conclusion_controllability=float(np.linalg.norm(cg.Ph - eye, 2)),
        conclusion_observability=float(np.linalg.norm(cg.Yh + 2.0 * cg.Zh - eye, 2)),
    )
