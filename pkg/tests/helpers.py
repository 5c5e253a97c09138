"""Shared randomized-case machinery for the repair and acceptance suites."""

import math

import numpy as np

from striplab import (
    Arc,
    PointSet,
    Segment,
    bounding_radius,
    distance,
    evaluate_factored,
    from_roots,
)

EPS = np.finfo(float).eps


def point_on(K, rng):
    t = rng.uniform()
    if isinstance(K, Segment):
        return K.a + t * (K.b - K.a)
    if isinstance(K, Arc):
        return K.center + K.radius * np.exp(1j * (K.angle_start + t * K.span))
    if isinstance(K, PointSet):
        return K.points[rng.integers(len(K.points))]
    raise TypeError(type(K))


def random_compact_set(rng):
    kind = int(rng.integers(3))
    if kind == 0:
        a = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        b = a + complex(rng.uniform(0.2, 1.0), rng.uniform(-0.5, 0.5))
        return Segment(a, b)
    if kind == 1:
        center = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        start = rng.uniform(0, 2 * math.pi)
        return Arc(center, rng.uniform(0.05, 0.5), start, start + rng.uniform(0.3, 5.5))
    pts = tuple(
        complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(int(rng.integers(1, 6)))
    )
    return PointSet(pts)


def random_repair_case(rng):
    """(K, P, budget) with a mix of on-set and clear roots."""
    K = random_compact_set(rng)
    m = int(rng.integers(1, 9))
    roots = []
    for _ in range(m):
        if rng.uniform() < 0.5:
            roots.append(point_on(K, rng))
        else:
            roots.append(complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)))
    leading = complex(rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0))
    budget = 10.0 ** rng.uniform(-4.0, -0.5)
    return K, from_roots(leading, tuple(roots)), budget


def disk_audit_points(R, rng, n=2000):
    r = R * np.sqrt(rng.uniform(0, 1, n))
    th = rng.uniform(0, 2 * math.pi, n)
    boundary = R * np.exp(1j * np.linspace(0, 2 * math.pi, n, endpoint=False))
    return np.concatenate([r * np.exp(1j * th), boundary])


def set_audit_points(K, rng, n=10_000):
    ts = rng.uniform(0, 1, n)
    return np.array([_param_point(K, t) for t in ts])


def _param_point(K, t):
    if isinstance(K, Segment):
        return K.a + t * (K.b - K.a)
    if isinstance(K, Arc):
        return K.center + K.radius * np.exp(1j * (K.angle_start + t * K.span))
    if isinstance(K, PointSet):
        return K.points[int(t * len(K.points)) % len(K.points)]
    raise TypeError(type(K))


def repair_round_trip_checks(K, P, budget, fp, cert, rng):
    """The two certificate dominations, with an ulp allowance for comparing
    two float evaluations of mathematically identical objects.

    The bound certifies the factored polynomial at the extracted roots
    against the factored polynomial at the moved roots; root-extraction
    backward error (relevant only for clustered roots) is outside its scope
    and is surfaced by fit-level audits instead.
    """
    from striplab import FactoredPolynomial, original_roots

    R = bounding_radius(K)
    m = P.degree
    coeff_scale = max(abs(c) for c in P.coeffs)
    ulp_allowance = 64.0 * EPS * coeff_scale * max(1.0, R) ** m

    before = FactoredPolynomial(fp.leading, original_roots(fp, cert))
    zs = disk_audit_points(R, rng)
    diff = np.abs(evaluate_factored(before, zs) - evaluate_factored(fp, zs))
    assert cert.perturbation_bound_value + ulp_allowance >= float(diff.max())

    on_set = set_audit_points(K, rng)
    min_mod = float(np.min(np.abs(evaluate_factored(fp, on_set))))
    assert cert.min_modulus_lower_bound <= min_mod * (1.0 + 1e-12) + 1e-300
    for _, new, _ in cert.moved_roots:
        assert distance(K, new) > 0.0
