"""Sup-norm polynomial fitting on a sample grid.

Least squares runs in a basis orthogonalized against the discrete sample
inner product (Vandermonde-with-orthogonalization; never raw monomial
normal equations), followed by optional iteratively reweighted refinement
that pushes the residual toward equioscillation.  The returned polynomial
is always coefficient form after basis back-substitution, and its reported
sup error is recomputed from those coefficients, so conversion loss is
measured, never hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import BudgetExceeded, BudgetNotMet, InsufficientSamples, InvalidSpec, RankDeficient
from .geometry import CompactSet, SampleGrid
from .polynomial import Polynomial, derivative_bound, evaluate

_LAWSON_WEIGHT_FLOOR = 1e-14
_DEFAULT_LAWSON_ITERS = 10


@dataclass(frozen=True)
class TargetFunction:
    """Target values aligned 1:1 with a SampleGrid."""

    samples: tuple[complex, ...]
    description: str = ""

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.samples)
        if not vals:
            raise InvalidSpec("target function needs at least one sample")
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
            raise InvalidSpec("target function contains non-finite samples")
        object.__setattr__(self, "samples", vals)


@dataclass(frozen=True)
class FitResult:
    polynomial: Polynomial
    sup_error_on_samples: float
    degree_used: int
    iterations: int
    # covering radius h of the grid the sup error was measured on; together
    # with a derivative bound L_P it states the between-samples slack L_P * h
    grid_covering_radius: float = float("nan")


def _weighted_basis(z: np.ndarray, w: np.ndarray, degree: int):
    """Orthonormal polynomial basis for the inner product sum_i w_i conj(u_i) v_i.

    Returns the basis values Q (n x (degree+1)) and the matrix P whose column
    k holds the ascending monomial coefficients of basis polynomial k.
    """
    n = len(z)
    Q = np.zeros((n, degree + 1), dtype=complex)
    P = np.zeros((degree + 1, degree + 1), dtype=complex)
    norm0 = math.sqrt(float(np.sum(w)))
    Q[:, 0] = 1.0 / norm0
    P[0, 0] = 1.0 / norm0
    for k in range(1, degree + 1):
        q = z * Q[:, k - 1]
        pk = np.roll(P[:, k - 1], 1)
        pk[0] = 0.0
        # modified Gram-Schmidt with one reorthogonalization pass
        for _ in range(2):
            for j in range(k):
                h = complex(np.sum(w * np.conj(Q[:, j]) * q))
                q -= h * Q[:, j]
                pk -= h * P[:, j]
        hn = math.sqrt(float(np.sum(w * np.abs(q) ** 2).real))
        if hn < 1e-14:
            raise RankDeficient(
                f"orthogonalization collapsed at degree {k}; "
                "the grid has too few distinct points"
            )
        Q[:, k] = q / hn
        P[:, k] = pk / hn
    return Q, P


def _fit_weighted(grid: SampleGrid, target: TargetFunction, degree: int, w: np.ndarray):
    z = grid.points
    f = np.array(target.samples)
    Q, P = _weighted_basis(z, w, degree)
    a = np.array([complex(np.sum(w * np.conj(Q[:, j]) * f)) for j in range(degree + 1)])
    poly = Polynomial(tuple(P @ a))
    residual = evaluate(poly, z) - f
    return poly, float(np.max(np.abs(residual)))


def _validate_fit_args(grid: SampleGrid, target: TargetFunction, degree: int):
    if degree < 0:
        raise InvalidSpec("degree must be >= 0")
    if len(target.samples) != len(grid):
        raise InvalidSpec("target and grid lengths differ")
    if len(grid) < degree + 1:
        raise InsufficientSamples(
            f"degree {degree} needs at least {degree + 1} samples, grid has {len(grid)}"
        )


def fit_least_squares(grid: SampleGrid, target: TargetFunction, degree: int) -> FitResult:
    """Discrete least squares on the grid; sup error recomputed from the
    returned coefficient-form polynomial."""
    _validate_fit_args(grid, target, degree)
    w = np.full(len(grid), 1.0 / len(grid))
    poly, sup = _fit_weighted(grid, target, degree, w)
    return FitResult(poly, sup, degree, 1, grid.covering_radius)


def lawson_refine(
    grid: SampleGrid,
    target: TargetFunction,
    degree: int,
    max_iters: int = _DEFAULT_LAWSON_ITERS,
) -> FitResult:
    """Iteratively reweighted least squares toward the sup-norm objective.

    Weights update as w_i <- w_i * |residual_i| (then normalized, floored at
    1e-14 so no point is dropped).  The best iterate by recomputed sup error
    is returned, so the result is never worse than plain least squares;
    max_iters = 0 returns the plain fit verbatim.
    """
    _validate_fit_args(grid, target, degree)
    n = len(grid)
    z = grid.points
    f = np.array(target.samples)
    w = np.full(n, 1.0 / n)

    best_poly, best_sup = _fit_weighted(grid, target, degree, w)
    iterations = 1
    scale = max(1.0, float(np.max(np.abs(f))))
    poly = best_poly
    for _ in range(max_iters):
        if best_sup <= 1e-15 * scale:
            break
        r = np.abs(evaluate(poly, z) - f)
        w = w * r
        total = float(np.sum(w))
        if total <= 0.0:
            break
        w = np.maximum(w / total, _LAWSON_WEIGHT_FLOOR)
        w = w / float(np.sum(w))
        poly, sup = _fit_weighted(grid, target, degree, w)
        iterations += 1
        if sup < best_sup:
            best_poly, best_sup = poly, sup
    return FitResult(best_poly, best_sup, degree, iterations, grid.covering_radius)


def approximate(
    K: CompactSet,
    target_spec,
    budget: float,
    max_degree: int = 60,
    lawson_iters: int = _DEFAULT_LAWSON_ITERS,
    zeta_params=None,
    grid_cap: int = 20_000,
) -> FitResult:
    """Find the least degree whose refined fit beats the budget on a grid
    tied to it (covering radius min(0.01, budget/10), re-fit once on a denser
    grid if the fitted polynomial's derivative bound invalidates that choice).
    The budget-tied density is relaxed when it would exceed grid_cap samples,
    so minuscule budgets fail with BudgetNotMet instead of an unbuildable grid.

    Degree escalation doubles (1, 2, 4, ...) up to the cap, then bisects for
    the least sufficient degree.  Raises BudgetNotMet carrying the best
    attempt if the cap is reached.
    """
    from .targets import resolve_target

    if not budget > 0:
        raise InvalidSpec("budget must be positive")

    h0 = min(0.01, budget / 10.0)
    while True:
        try:
            grid = geometry.discretize(K, h0, cap=grid_cap)
            break
        except BudgetExceeded:
            h0 *= 8.0
    target = resolve_target(target_spec, grid, zeta_params)
    result = _escalate(grid, target, budget, max_degree, lawson_iters)

    # one re-fit if the fitted polynomial's derivative bound invalidates the
    # grid choice; skipped when no feasible density could restore the slack
    # (the certificate then reports the oversized L_P * h honestly)
    fit = result if isinstance(result, FitResult) else result.best
    lp = derivative_bound(fit.polynomial, geometry.bounding_radius(K))
    if grid.covering_radius * lp > budget:
        h1 = budget / (10.0 * lp)
        if h0 / 64.0 <= h1 < grid.covering_radius:
            try:
                dense = geometry.discretize(K, h1, cap=grid_cap)
            except BudgetExceeded:
                dense = None
            if dense is not None:
                target = resolve_target(target_spec, dense, zeta_params)
                result = _escalate(dense, target, budget, max_degree, lawson_iters)

    if isinstance(result, FitResult):
        return result
    raise result


def _escalate(grid, target, budget, max_degree, lawson_iters):
    """Doubling-then-bisection search for the least sufficient degree.
    Returns a FitResult on success or a BudgetNotMet exception object."""
    cap = min(max_degree, len(grid) - 1)
    best = None
    success_fits: dict[int, FitResult] = {}

    def attempt(d):
        nonlocal best
        fit = lawson_refine(grid, target, d, lawson_iters)
        if best is None or fit.sup_error_on_samples < best.sup_error_on_samples:
            best = fit
        if fit.sup_error_on_samples < budget:
            success_fits[d] = fit
            return True
        return False

    d = 1
    lo, hi = -1, None
    while True:
        if d > cap:
            if hi is None and cap > lo and cap not in success_fits:
                if attempt(cap):
                    hi = cap
                else:
                    lo = cap
            break
        if attempt(d):
            hi = d
            break
        lo = d
        d *= 2
    if hi is None:
        return BudgetNotMet(best, budget)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if attempt(mid):
            hi = mid
        else:
            lo = mid
    return success_fits[hi]
