"""Shared random-system generators for the test suite."""

import numpy as np

from lqomor.model import LqoSystem


def stable_matrix(rng, n, margin=1.0):
    """Random dense matrix shifted to put all eigenvalues left of -margin/2."""
    g = rng.normal(size=(n, n))
    shift = np.linalg.eigvals(g).real.max() + margin
    return g - shift * np.eye(n)


def rand_system(rng, n, m=1, p=1, mscale=0.4, margin=1.0):
    """Random Hurwitz quadratic-output system with symmetric form matrices."""
    a = stable_matrix(rng, n, margin)
    b = rng.normal(size=(n, m))
    c = rng.normal(size=(p, n))
    mats = []
    for _ in range(p):
        s = rng.normal(size=(n, n)) * mscale
        mats.append((s + s.T) / 2.0)
    return LqoSystem(a, b, c, mats)


def rand_lti(rng, n, m=1, p=1, margin=1.0):
    """Random Hurwitz system with zero quadratic part."""
    a = stable_matrix(rng, n, margin)
    return LqoSystem(
        a, rng.normal(size=(n, m)), rng.normal(size=(p, n)),
        [np.zeros((n, n)) for _ in range(p)],
    )


def lyap_residual(a, x, q, side="controllability"):
    if side == "controllability":
        return np.linalg.norm(a @ x + x @ a.T + q)
    return np.linalg.norm(a.T @ x + x @ a + q)


def sylv_residual(a, b, x, c):
    return np.linalg.norm(a @ x + x @ b + c)
