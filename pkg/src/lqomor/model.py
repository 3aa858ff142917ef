"""State-space model of a linear system with quadratic outputs.

The system is

    x'(t) = A x(t) + B u(t)
    y_i(t) = (C x(t))_i + x(t)^T M_i x(t),   i = 1..p

with ``A`` of order N, ``B`` mapping m inputs, ``C`` producing p linear
output rows and one quadratic form matrix ``M_i`` per output channel.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import matfun
from .errors import DimensionError, NonFiniteError, ValidationError

#: Sentinel for an unbounded right endpoint of a :class:`TimeInterval`.
INFINITE = math.inf


@dataclass(frozen=True)
class TimeInterval:
    """Time horizon ``[t_start, t_end]`` in seconds; ``t_end`` may be infinite."""

    t_start: float = 0.0
    t_end: float = INFINITE

    def __post_init__(self):
        object.__setattr__(self, "t_start", float(self.t_start))
        object.__setattr__(self, "t_end", float(self.t_end))
        if not math.isfinite(self.t_start) or self.t_start < 0.0:
            raise ValidationError(
                f"t_start must be finite and nonnegative, got {self.t_start}"
            )
        if math.isnan(self.t_end) or self.t_end <= self.t_start:
            raise ValidationError(
                f"t_end must exceed t_start={self.t_start}, got {self.t_end}"
            )

    @property
    def is_infinite(self):
        return math.isinf(self.t_end)

    def __str__(self):
        end = "inf" if self.is_infinite else f"{self.t_end:g}"
        return f"[{self.t_start:g}, {end}]"


class LqoSystem:
    """Realization ``(A, B, C, M_1..M_p)`` of a quadratic-output system.

    Dimensions and finiteness are always validated on construction.  The
    stability requirement (``A`` Hurwitz) is enforced by default; reduction
    algorithms that legitimately produce or pass through unstable iterates
    construct instances with ``check_hurwitz=False`` and the stability flag
    is then reported rather than enforced.
    """

    def __init__(self, a, b, c, m, check_hurwitz=True):
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_2d(np.asarray(b, dtype=float))
        c = np.atleast_2d(np.asarray(c, dtype=float))
        if isinstance(m, np.ndarray) and m.ndim == 2:
            m = [m]
        m = tuple(np.atleast_2d(np.asarray(mi, dtype=float)) for mi in m)

        n = a.shape[0]
        if a.shape != (n, n):
            raise DimensionError(f"A must be square, got shape {a.shape}")
        if b.shape[0] != n:
            raise DimensionError(f"B must have {n} rows, got shape {b.shape}")
        if c.shape[1] != n:
            raise DimensionError(f"C must have {n} columns, got shape {c.shape}")
        p = c.shape[0]
        if len(m) != p:
            raise DimensionError(
                f"M length {len(m)} != p {p}", m_length=len(m), n_outputs=p
            )
        for i, mi in enumerate(m):
            if mi.shape != (n, n):
                raise DimensionError(
                    f"M[{i}] must have shape {(n, n)}, got {mi.shape}", index=i
                )
        for name, mat in (("A", a), ("B", b), ("C", c)) + tuple(
            (f"M[{i}]", mi) for i, mi in enumerate(m)
        ):
            if not np.isfinite(mat).all():
                raise NonFiniteError(f"{name} contains non-finite entries", name=name)

        for i, mi in enumerate(m):
            dev = np.linalg.norm(mi - mi.T)
            if dev > 1e-12 * max(np.linalg.norm(mi), 1.0):
                # Values are kept verbatim; several Gramian formulas assume
                # symmetric quadratic-form matrices, hence the diagnostic.
                warnings.warn(
                    f"M[{i}] is not symmetric (deviation {dev:.3g}); "
                    "quadratic-output Gramians assume symmetric forms",
                    stacklevel=2,
                )

        self.A = a
        self.B = b
        self.C = c
        self.M = m
        self._hurwitz = None
        if check_hurwitz:
            matfun.require_hurwitz(a, "A")
            self._hurwitz = True

    @property
    def order(self):
        return self.A.shape[0]

    @property
    def n_inputs(self):
        return self.B.shape[1]

    @property
    def n_outputs(self):
        return self.C.shape[0]

    @property
    def is_hurwitz(self):
        if self._hurwitz is None:
            self._hurwitz = matfun.is_hurwitz(self.A)
        return self._hurwitz

    def poles(self):
        """Eigenvalues of A, sorted by (real, imaginary) part."""
        return np.sort_complex(np.linalg.eigvals(self.A))

    def __repr__(self):
        return (
            f"LqoSystem(order={self.order}, n_inputs={self.n_inputs}, "
            f"n_outputs={self.n_outputs})"
        )


def validate(system):
    """Re-run all construction checks, including the Hurwitz requirement.

    Returns the validated system; raises on dimension mismatch, non-finite
    entries or a non-Hurwitz A.
    """
    if not isinstance(system, LqoSystem):
        raise ValidationError(f"expected LqoSystem, got {type(system).__name__}")
    return LqoSystem(system.A, system.B, system.C, system.M, check_hurwitz=True)


@dataclass(frozen=True)
class Trajectory:
    """Sampled state and output response on a strictly increasing time grid."""

    times: np.ndarray
    states: np.ndarray
    outputs: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ValidationError("time grid must be a nonempty 1-d array")
        if t.size > 1 and not (np.diff(t) > 0).all():
            raise ValidationError("time grid must be strictly increasing")


def eval_output(system, x):
    """Output vector ``C x + [x^T M_i x]_i`` for a single state ``x``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != system.order:
        raise DimensionError(
            f"state length {x.size} != system order {system.order}"
        )
    quad = np.array([x @ mi @ x for mi in system.M])
    return system.C @ x + quad


def _output_trajectory(system, states):
    lin = states @ system.C.T
    for i, mi in enumerate(system.M):
        lin[:, i] += np.einsum("kn,nm,km->k", states, mi, states)
    return lin


def simulate(system, u, grid, x0=None, substeps=1):
    """Integrate the forced response with the classical fixed-step RK4 scheme.

    Parameters
    ----------
    system : LqoSystem
    u : callable
        Input signal ``t -> float`` (single input) or ``t -> (m,) array``.
    grid : array_like
        Strictly increasing output times; integration takes ``substeps``
        RK4 steps between consecutive grid points.
    x0 : array_like, optional
        Initial state, zero by default.
    substeps : int
        Number of RK4 substeps per grid interval (default 1).

    Returns
    -------
    Trajectory
    """
    t = np.asarray(grid, dtype=float).reshape(-1)
    if t.size == 0:
        raise ValidationError("empty time grid")
    if t.size > 1 and not (np.diff(t) > 0).all():
        raise ValidationError("time grid must be strictly increasing")
    if substeps < 1:
        raise ValidationError(f"substeps must be >= 1, got {substeps}")
    n = system.order
    m = system.n_inputs
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).reshape(-1)
    if x.size != n:
        raise DimensionError(f"x0 length {x.size} != system order {n}")

    a, b = system.A, system.B

    def forcing(tk):
        val = np.asarray(u(tk), dtype=float).reshape(-1)
        if val.size == 1 and m > 1:
            val = np.full(m, val[0])
        if val.size != m:
            raise DimensionError(
                f"input signal returned {val.size} values, expected {m}"
            )
        if not np.isfinite(val).all():
            raise NonFiniteError(f"input signal non-finite at t={tk:g}")
        return b @ val

    states = np.empty((t.size, n))
    states[0] = x
    for k in range(t.size - 1):
        h = (t[k + 1] - t[k]) / substeps
        tk = t[k]
        for _ in range(substeps):
            f1 = a @ x + forcing(tk)
            f2 = a @ (x + 0.5 * h * f1) + forcing(tk + 0.5 * h)
            f3 = a @ (x + 0.5 * h * f2) + forcing(tk + 0.5 * h)
            f4 = a @ (x + h * f3) + forcing(tk + h)
            x = x + (h / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
            tk += h
        states[k + 1] = x

    return Trajectory(times=t, states=states, outputs=_output_trajectory(system, states))


def error_system(system, rom):
    """Block realization of the output difference of two systems.

    For ``H`` of order N and ``Hr`` of order n the result has order N + n with

        A_e = blkdiag(A, Ar),  B_e = [B; Br],
        C_e = [C, -Cr],        M_{e,i} = blkdiag(M_i, -Mr_i),

    so that, driven by the same input from zero state, its output equals
    ``y(t) - y_r(t)``.
    """
    if system.n_inputs != rom.n_inputs or system.n_outputs != rom.n_outputs:
        raise DimensionError(
            "input/output dimensions differ: "
            f"({system.n_inputs}, {system.n_outputs}) vs ({rom.n_inputs}, {rom.n_outputs})"
        )
    n1, n2 = system.order, rom.order
    a_e = np.zeros((n1 + n2, n1 + n2))
    a_e[:n1, :n1] = system.A
    a_e[n1:, n1:] = rom.A
    b_e = np.vstack([system.B, rom.B])
    c_e = np.hstack([system.C, -rom.C])
    m_e = []
    for mi, mri in zip(system.M, rom.M):
        blk = np.zeros((n1 + n2, n1 + n2))
        blk[:n1, :n1] = mi
        blk[n1:, n1:] = -mri
        m_e.append(blk)
    return LqoSystem(a_e, b_e, c_e, m_e, check_hurwitz=False)
