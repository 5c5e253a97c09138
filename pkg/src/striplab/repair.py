"""Relocation of polynomial roots off a compact set, with certificates.

Each root close to the set is replaced by a verified exterior point chosen
near enough that the aggregate coefficient perturbation stays under the
caller's budget; the certificate carries a rigorous sup-norm bound for the
change and a positive lower bound for the repaired polynomial's modulus on
the set.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geometry
from .approximation import FitResult, approximate
from .errors import BudgetInfeasible, InvalidSpec, NoConvergence, ResolutionExhausted, RootFindingFailed
from .geometry import CompactSet
from .polynomial import (
    FactoredPolynomial,
    Polynomial,
    min_modulus_certificate,
    perturbation_bound,
    roots,
)

_CLEARANCE_FLOOR = 1e-9
_MAX_DELTA_HALVINGS = 60


@dataclass(frozen=True)
class RepairCertificate:
    """Proof data for one repair: bound on the polynomial change over the
    disk |z| <= bounding_radius(K), positive modulus floor on the set, and
    the individual root moves."""

    perturbation_bound_value: float
    min_modulus_lower_bound: float
    moved_roots: tuple[tuple[complex, complex, float], ...]
    budget: float

    def to_spec(self) -> dict:
        return {
            "perturbation_bound_value": self.perturbation_bound_value,
            "min_modulus_lower_bound": self.min_modulus_lower_bound,
            "budget": self.budget,
            "moved_roots": [
                {
                    "old": [old.real, old.imag],
                    "new": [new.real, new.imag],
                    "distance_moved": dist,
                }
                for old, new, dist in self.moved_roots
            ],
        }


def original_roots(fp: FactoredPolynomial, cert: RepairCertificate) -> tuple[complex, ...]:
    """Pre-repair root list, index-aligned with fp.roots (kept roots map to
    themselves); lets the certificate bound be recomputed from its fields."""
    old = list(fp.roots)
    used = [False] * len(old)
    for before, after, _ in cert.moved_roots:
        for i, r in enumerate(old):
            if not used[i] and r == after:
                old[i] = before
                used[i] = True
                break
        else:
            raise InvalidSpec("certificate moved_roots do not match the factored polynomial")
    return tuple(old)


def repair_nonvanishing(
    P: Polynomial,
    K: CompactSet,
    budget: float,
    root_tol: float = 1e-12,
) -> tuple[FactoredPolynomial, RepairCertificate]:
    """Move every root on or near the set to a verified exterior point while
    keeping the sup-norm change below the budget.

    Roots with clearance above tau = max(1e-9, budget*1e-3 / (m * M**(m-1) * |c0|))
    are kept in place (paired to themselves); the displacement for the rest
    starts at half its telescoping-bound allowance and halves until the
    recomputed bound clears the budget.  The zero polynomial is replaced by
    the constant budget/2, the only nonvanishing choice available.
    """
    if not budget > 0:
        raise InvalidSpec("budget must be positive")

    if P.degree == 0:
        if P.is_zero():
            c = budget / 2.0
            fp = FactoredPolynomial(c, ())
            cert = RepairCertificate(c, c, (), budget)
            return fp, cert
        fp = FactoredPolynomial(P.coeffs[0], ())
        return fp, RepairCertificate(0.0, abs(P.coeffs[0]), (), budget)

    try:
        old = roots(P, root_tol)
    except NoConvergence as exc:
        raise RootFindingFailed(str(exc)) from exc

    c0 = P.leading
    m = P.degree
    R = geometry.bounding_radius(K)
    M = R + max(abs(r) for r in old)
    growth = abs(c0) * M ** (m - 1) if m > 1 else abs(c0)
    tau = _CLEARANCE_FLOOR
    if growth > 0 and m * growth < float("inf"):
        tau = max(_CLEARANCE_FLOOR, budget * 1e-3 / (m * growth))

    clearances = [geometry.distance(K, r) for r in old]
    flagged = [i for i, d in enumerate(clearances) if d <= tau]

    if not flagged:
        fp = FactoredPolynomial(c0, old)
        L = min_modulus_certificate(fp, K)
        return fp, RepairCertificate(0.0, L, (), budget)

    delta = budget / (2.0 * len(flagged) * growth) if growth > 0 else R + 1.0
    if not delta > 0:
        raise BudgetInfeasible(
            f"even an infinitesimal move exceeds budget {budget:g} "
            f"(coefficient growth factor {growth:g})",
            required_delta=delta,
        )
    delta = min(delta, R + 1.0)

    for _ in range(_MAX_DELTA_HALVINGS):
        try:
            new = list(old)
            for i in flagged:
                new[i] = geometry.nearest_exterior(K, old[i], delta)
        except ResolutionExhausted:
            delta *= 0.5
            continue
        bound = perturbation_bound(c0, old, new, R)
        if bound < budget:
            fp = FactoredPolynomial(c0, tuple(new))
            L = min_modulus_certificate(fp, K)
            if not L > 0:
                raise BudgetInfeasible(
                    "modulus certificate collapsed to zero after the repair",
                    required_delta=delta,
                )
            moved = tuple(
                (old[i], new[i], abs(old[i] - new[i])) for i in flagged if new[i] != old[i]
            )
            return fp, RepairCertificate(bound, L, moved, budget)
        delta *= 0.5
    raise BudgetInfeasible(
        f"perturbation bound stayed at or above budget {budget:g} down to "
        f"displacement {delta:g}",
        required_delta=delta,
    )


def approximate_nonvanishing(
    K: CompactSet,
    target_spec,
    eps: float,
    max_degree: int = 60,
    lawson_iters: int = 10,
    zeta_params=None,
) -> tuple[FactoredPolynomial, FitResult, RepairCertificate]:
    """Full pipeline: fit to eps/2 on the set, then repair the roots with the
    remaining eps/2, so that fit error + perturbation bound < eps."""
    if not eps > 0:
        raise InvalidSpec("eps must be positive")
    fit = approximate(K, target_spec, eps / 2.0, max_degree, lawson_iters, zeta_params)
    fp, cert = repair_nonvanishing(fit.polynomial, K, eps / 2.0)
    return fp, fit, cert
