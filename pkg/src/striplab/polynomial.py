"""Complex polynomial arithmetic, simultaneous root finding, and the two
certified bounds used by the nonvanishing repair."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import DegreeZero, LengthMismatch, NoConvergence


@dataclass(frozen=True)
class Polynomial:
    """Coefficient-form polynomial, ascending powers, trailing zeros trimmed."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = [complex(c) for c in self.coeffs]
        if not cs:
            cs = [0j]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    def to_spec(self) -> dict:
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @staticmethod
    def from_spec(spec: dict) -> "Polynomial":
        return Polynomial(tuple(complex(re, im) for re, im in spec["coeffs"]))


@dataclass(frozen=True)
class FactoredPolynomial:
    """leading * prod_k (z - roots[k]); the numerically stable view."""

    leading: complex
    roots: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "leading", complex(self.leading))
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))
        if self.leading == 0:
            raise ValueError("factored polynomial needs a nonzero leading coefficient")

    @property
    def degree(self) -> int:
        return len(self.roots)

    def to_spec(self) -> dict:
        return {
            "leading": [self.leading.real, self.leading.imag],
            "roots": [[r.real, r.imag] for r in self.roots],
        }


def evaluate(p: Polynomial, z):
    """Horner evaluation; z may be a scalar or an ndarray."""
    if isinstance(z, np.ndarray):
        acc = np.zeros_like(z, dtype=complex)
        for c in reversed(p.coeffs):
            acc = acc * z + c
        return acc
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def evaluate_factored(fp: FactoredPolynomial, z):
    """Product-form evaluation; stable regardless of coefficient conditioning."""
    if isinstance(z, np.ndarray):
        acc = np.full_like(z, fp.leading, dtype=complex)
        for r in fp.roots:
            acc = acc * (z - r)
        return acc
    acc = fp.leading
    for r in fp.roots:
        acc = acc * (z - r)
    return acc


def from_roots(leading: complex, roots) -> Polynomial:
    """Expand leading * prod (z - r) by sequential multiplication.

    Expansion round-off is treated as negligible at the degrees this library
    works at (up to ~60); factored evaluation is available where that matters.
    """
    leading = complex(leading)
    if leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    cs = np.array([leading], dtype=complex)
    for r in roots:
        shifted = np.concatenate([[0j], cs])
        cs = shifted - complex(r) * np.concatenate([cs, [0j]])
    return Polynomial(tuple(cs))


def _horner_pair(coeffs: np.ndarray, z: np.ndarray):
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def roots(p: Polynomial, tol: float = 1e-12, max_sweeps: int = 1000) -> tuple[complex, ...]:
    """All roots via simultaneous (Aberth-Ehrlich) iteration.

    Deterministic start: a ring at the Cauchy radius 1 + max|c_k / c_m|,
    angles offset by 0.4 rad to break symmetry.  A root is accepted when
    |p(root)| <= tol * max|coeff| * max(1, |root|)**m; sweeps continue until
    corrections stagnate so clustered roots reach their attainable accuracy.
    """
    m = p.degree
    if m == 0:
        raise DegreeZero("constant polynomials have no roots to extract")
    coeffs = np.array(p.coeffs, dtype=complex)
    if m == 1:
        return (-coeffs[0] / coeffs[1],)

    radius = 1.0 + float(np.max(np.abs(coeffs[:-1] / coeffs[-1])))
    z = radius * np.exp(1j * (2.0 * np.pi * np.arange(m) / m + 0.4))
    scale = float(np.max(np.abs(coeffs)))

    best_rel = math.inf
    stall = 0
    for sweep in range(1, max_sweeps + 1):
        pv, dpv = _horner_pair(coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = pv / dpv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            delta = newton / (1.0 - newton * np.sum(1.0 / diff, axis=1))
        bad = ~np.isfinite(delta)
        if np.any(bad):
            kick = 0.1 * (1.0 + np.abs(z[bad])) * np.exp(1j * sweep)
            delta[bad] = np.where(np.isfinite(newton[bad]), newton[bad], kick)
        z = z - delta
        resid_ok = np.all(np.abs(pv) <= tol * scale * np.maximum(1.0, np.abs(z)) ** m)
        rel = float(np.max(np.abs(delta) / (1.0 + np.abs(z))))
        if resid_ok:
            if rel <= 4e-16:
                return tuple(z)
            if rel < 0.5 * best_rel:
                best_rel = rel
                stall = 0
            else:
                stall += 1
                if stall >= 6:
                    return tuple(z)
        else:
            stall = 0
            best_rel = math.inf
    pv, _ = _horner_pair(coeffs, z)
    if np.all(np.abs(pv) <= tol * scale * np.maximum(1.0, np.abs(z)) ** m):
        return tuple(z)
    raise NoConvergence(max_sweeps)


def perturbation_bound(leading: complex, roots_old, roots_new, R: float) -> float:
    """Rigorous bound for sup over |z| <= R of the difference between the
    polynomials with the old and the new root sets (paired by index).

    Telescoping the product difference gives
        |leading| * sum_k |old_k - new_k| * prod_{j != k} (R + max(|old_j|, |new_j|)).
    """
    old = [complex(r) for r in roots_old]
    new = [complex(r) for r in roots_new]
    if len(old) != len(new):
        raise LengthMismatch(f"root lists differ in length: {len(old)} vs {len(new)}")
    if R < 0:
        raise ValueError("R must be nonnegative")
    m = len(old)
    if m == 0:
        return 0.0
    factors = np.array([R + max(abs(a), abs(b)) for a, b in zip(old, new)])
    total = 0.0
    for k in range(m):
        move = abs(old[k] - new[k])
        if move == 0.0:
            continue
        others = np.concatenate([factors[:k], factors[k + 1 :]])
        total += move * float(np.prod(others))
    return abs(complex(leading)) * total


def min_modulus_certificate(fp: FactoredPolynomial, K: geometry.CompactSet) -> float:
    """Lower bound L with |p(z)| >= L on the set: |leading| times the product
    of root-to-set distances.  L = 0 signals a root lying on the set."""
    L = abs(fp.leading)
    for r in fp.roots:
        L *= geometry.distance(K, r)
    return L


def derivative_bound(p: Polynomial, R: float) -> float:
    """sum_k k * |c_k| * R**(k-1): a bound for |p'| on |z| <= R, used to
    state how much the polynomial part can move between grid samples."""
    ks = np.arange(1, p.degree + 1, dtype=float)
    if len(ks) == 0:
        return 0.0
    cs = np.abs(np.array(p.coeffs[1:], dtype=complex))
    return float(np.sum(ks * cs * R ** (ks - 1.0)))
