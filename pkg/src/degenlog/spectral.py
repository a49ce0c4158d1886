"""Dirichlet eigenvalues on masked subdomains and the characteristic value.

Principal and second eigenpairs of the discrete negative Laplacian are
computed by inverse power iteration (with deflation for the second mode).
The characteristic value of a compact set K is the limit of the principal
eigenvalue of shrinking neighborhoods {d(x, K) <= delta}; it is estimated on
a geometric delta schedule with first-order Richardson extrapolation, and
reported as infinite when the values blow past a cap (thin sets such as
points in 2-d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.ndimage as ndi
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.special import j0

from .geometry import DomainSpec, SetShape
from .grid import (Field, Grid, MaskedOperator, mask_connected_components,
                   mask_within_distance)

__all__ = [
    "EigenPair",
    "Lambda0Estimate",
    "principal_eigenvalue",
    "principal_eigenpair",
    "second_eigenvalue",
    "lambda0_of_set",
    "analytic_lambda1",
    "bessel_j0_first_root",
    "linear_evolve",
]

#: First positive zero of the Bessel function J0, computed once by bisection.
J0_FIRST_ROOT = None  # set lazily by bessel_j0_first_root()


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue with its L2-normalized, positive principal eigenfunction."""

    value: float
    vector: Field
    mask: np.ndarray


@dataclass(frozen=True)
class Lambda0Estimate:
    """Principal eigenvalues of shrinking neighborhoods of a compact set."""

    deltas: tuple          # strictly decreasing
    values: tuple          # lambda_1 of each neighborhood
    verdict: str           # "finite" | "infinite"
    value: float           # extrapolated limit, or math.inf

    @property
    def is_finite(self) -> bool:
        return self.verdict == "finite"


class EigenFailure(RuntimeError):
    """Inverse iteration did not converge."""


def _check_mask(mask: np.ndarray) -> None:
    if not mask.any():
        raise ValueError("eigenproblem needs a nonempty mask")
    if mask_connected_components(mask) != 1:
        raise ValueError("eigenproblem needs a connected mask")


def _inverse_iteration(op: MaskedOperator, tol: float, deflate=None,
                       maxiter: int = 500):
    """Smallest eigenpair of op.matrix, optionally orthogonal to `deflate`."""
    lu = spla.splu(op.matrix.tocsc())
    rng = np.random.default_rng(1234)
    x = np.ones(op.n) + 0.01 * rng.standard_normal(op.n)
    if deflate is not None:
        x = x - (deflate @ x) / (deflate @ deflate) * deflate
    x /= np.linalg.norm(x)
    lam = None
    for _ in range(maxiter):
        y = lu.solve(x)
        if deflate is not None:
            y = y - (deflate @ y) / (deflate @ deflate) * deflate
        y /= np.linalg.norm(y)
        lam = float(y @ (op.matrix @ y))
        residual = float(np.linalg.norm(op.matrix @ y - lam * y))
        if residual <= tol * max(1.0, abs(lam)):
            return lam, y
        x = y
    raise EigenFailure(f"inverse iteration stalled at eigenvalue {lam!r} "
                       f"(residual {residual:.3e})")


def principal_eigenpair(grid: Grid, mask: np.ndarray,
                        tol: float = 1e-10) -> EigenPair:
    """Smallest Dirichlet eigenvalue and positive normalized eigenfunction."""
    _check_mask(mask)
    op = MaskedOperator(grid, mask)
    lam, vec = _inverse_iteration(op, tol)
    if vec.sum() < 0:
        vec = -vec
    if np.any(vec <= 0):
        # the principal mode of an irreducible M-matrix is strictly one-signed;
        # clip roundoff-level negatives only
        if np.min(vec) < -1e-8 * np.max(vec):
            raise EigenFailure("principal eigenvector is not one-signed")
        vec = np.maximum(vec, np.finfo(float).tiny)
    vec = vec / math.sqrt(op.inner(vec, vec))
    return EigenPair(value=lam, vector=Field(grid, op.extend(vec)), mask=mask)


def principal_eigenvalue(grid: Grid, mask: np.ndarray,
                         tol: float = 1e-10) -> float:
    """Smallest Dirichlet eigenvalue of a mask.

    Unlike principal_eigenpair this accepts disconnected masks, returning the
    minimum over connected components (the smallest eigenvalue of the direct
    sum).
    """
    if not mask.any():
        raise ValueError("eigenproblem needs a nonempty mask")
    labels, n_comp = ndi.label(mask)
    if n_comp == 1:
        return principal_eigenpair(grid, mask, tol).value
    return min(principal_eigenpair(grid, labels == c, tol).value
               for c in range(1, n_comp + 1))


def second_eigenvalue(grid: Grid, mask: np.ndarray, tol: float = 1e-10) -> float:
    """Second Dirichlet eigenvalue via shift-invert Lanczos.

    Lanczos is used here (rather than the deflated inverse iteration of the
    principal pair) because second modes of discretized symmetric shapes are
    often near-degenerate, which stalls plain power-type iterations.
    """
    _check_mask(mask)
    op = MaskedOperator(grid, mask)
    # fixed start vector keeps repeated calls bit-identical (the default is
    # drawn from the global RNG, which would break report determinism)
    v0 = np.full(op.n, 1.0 / math.sqrt(op.n))
    vals = spla.eigsh(op.matrix.tocsc(), k=2, sigma=0.0, which="LM",
                      tol=tol, v0=v0, return_eigenvectors=False)
    return float(np.sort(vals)[1])


def default_delta_schedule(delta0: float, h: float) -> tuple:
    """Geometric schedule delta0, delta0/2, ..., stopping at 2h."""
    if delta0 < 2.0 * h:
        raise ValueError("delta0 below grid resolution")
    deltas = []
    d = float(delta0)
    while d >= 2.0 * h:
        deltas.append(d)
        d *= 0.5
    return tuple(deltas)


def lambda0_of_set(grid: Grid, k: SetShape, deltas=None,
                   cap: float = 1e4, tol: float = 1e-10) -> Lambda0Estimate:
    """Characteristic value of a compact set via shrinking neighborhoods.

    Computes lambda_1 of {x in the domain : d(x, k) <= delta} for each delta;
    verdict "infinite" if the tightest neighborhood exceeds cap, otherwise
    linear extrapolation of the reciprocal square root of the eigenvalue
    (the length scale) from the two tightest neighborhoods to delta = 0.
    """
    if k.is_empty:
        raise ValueError("characteristic value of the empty set is undefined")
    if deltas is None:
        deltas = default_delta_schedule(
            max(8.0 * grid.h, 0.1), grid.h)
    deltas = tuple(float(d) for d in deltas)
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly decreasing")
    if deltas[-1] < 2.0 * grid.h:
        raise ValueError("smallest delta is below grid resolution (2h)")
    values = []
    for d in deltas:
        m = mask_within_distance(grid, k, d)
        values.append(principal_eigenvalue(grid, m, tol))
    if values[-1] > cap:
        return Lambda0Estimate(deltas, tuple(values), "infinite", math.inf)
    if len(values) >= 2:
        # The eigenvalue scales like an inverse squared length, and the
        # neighborhood inflates lengths linearly in delta, so the reciprocal
        # square root of the eigenvalue is the quantity that is (to first
        # order) linear in delta; extrapolate that to delta = 0.
        d0, d1 = deltas[-2], deltas[-1]
        s0, s1 = values[-2] ** -0.5, values[-1] ** -0.5
        s_limit = s1 + (s1 - s0) * d1 / (d0 - d1)
        extrapolated = s_limit ** -2.0 if s_limit > 0.0 else math.inf
    else:
        extrapolated = values[-1]
    if extrapolated > cap:
        return Lambda0Estimate(deltas, tuple(values), "infinite", math.inf)
    return Lambda0Estimate(deltas, tuple(values), "finite", float(extrapolated))


def bessel_j0_first_root(tol: float = 1e-12) -> float:
    """First positive zero of J0 by bisection on [2, 3]."""
    global J0_FIRST_ROOT
    if J0_FIRST_ROOT is not None:
        return J0_FIRST_ROOT
    a, b = 2.0, 3.0
    fa = float(j0(a))
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = float(j0(mid))
        if fa * fm <= 0.0:
            b = mid
        else:
            a, fa = mid, fm
    J0_FIRST_ROOT = 0.5 * (a + b)
    return J0_FIRST_ROOT


def analytic_lambda1(shape) -> float:
    """Closed-form principal Dirichlet eigenvalue for simple shapes.

    Rectangles: pi^2 sum(1/side^2).  Intervals: pi^2 / L^2.  Discs/balls in
    2-d: (first J0 root)^2 / r^2.  1-d balls are intervals of length 2r.
    """
    if isinstance(shape, DomainSpec):
        if shape.kind == "rectangle":
            sides = [b - a for a, b in zip(shape.lo, shape.hi)]
            return math.pi ** 2 * sum(1.0 / s ** 2 for s in sides)
        return bessel_j0_first_root() ** 2 / shape.radius ** 2
    if isinstance(shape, SetShape) and shape.kind == "ball" and shape.radius > 0:
        if shape.dim == 2:
            return bessel_j0_first_root() ** 2 / shape.radius ** 2
        return math.pi ** 2 / (4.0 * shape.radius ** 2)
    raise ValueError(f"no closed-form eigenvalue for {shape!r}")


def linear_evolve(op: MaskedOperator, v0: np.ndarray, t: float,
                  lam: float = 0.0) -> np.ndarray:
    """Exact-in-time linear flow exp(t (lam I - A)) v0 on a mask."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0.0:
        return v0.copy()
    gen = sp.identity(op.n, format="csr") * lam - op.matrix
    return spla.expm_multiply(gen * t, v0)
