import math

import numpy as np
import pytest
from helpers import random_repair_case, repair_round_trip_checks

from striplab import (
    Arc,
    Polynomial,
    Segment,
    approximate_nonvanishing,
    bounding_radius,
    discretize,
    distance,
    evaluate_factored,
    from_roots,
    original_roots,
    perturbation_bound,
    repair_nonvanishing,
)
from striplab.errors import BudgetNotMet, InvalidSpec

ARC = Arc(0.75, 0.1, 0.0, 1.5 * math.pi)


# ---------------------------------------------------------------- repair


def test_repair_moves_root_on_segment():
    K = Segment(-0.1, 0.1)
    fp, cert = repair_nonvanishing(Polynomial((0, 1)), K, 0.05)
    (root,) = fp.roots
    # degree one: the bound is exactly the displacement, delta = budget/2
    assert cert.perturbation_bound_value == pytest.approx(0.025, rel=1e-9)
    assert abs(root) == pytest.approx(0.025, rel=1e-9)
    assert cert.min_modulus_lower_bound == pytest.approx(0.025, rel=1e-9)
    assert cert.perturbation_bound_value < 0.05
    assert distance(K, root) > 0


def test_repair_identity_when_all_roots_clear():
    K = Segment(0.6, 0.9)
    P = from_roots(2.0, (0.2j, 1.5, -0.5 - 0.5j))
    fp, cert = repair_nonvanishing(P, K, 1e-3)
    assert cert.moved_roots == ()
    assert cert.perturbation_bound_value == 0.0
    assert cert.min_modulus_lower_bound > 0


def test_repair_triple_root_cluster_on_segment():
    K = Segment(0.6, 0.9)
    P = from_roots(1.0, (0.7, 0.75, 0.8))
    fp, cert = repair_nonvanishing(P, K, 1e-2)
    assert len(cert.moved_roots) == 3
    assert cert.perturbation_bound_value < 1e-2
    assert cert.min_modulus_lower_bound > 0
    grid = discretize(K, 0.3 / 20_000)
    sampled_min = float(np.min(np.abs(evaluate_factored(fp, grid.points))))
    assert sampled_min >= cert.min_modulus_lower_bound


def test_repair_zero_polynomial_becomes_small_constant():
    K = Segment(-0.1, 0.1)
    fp, cert = repair_nonvanishing(Polynomial((0,)), K, 0.05)
    assert fp.roots == ()
    assert fp.leading == 0.025
    assert cert.perturbation_bound_value == 0.025
    assert cert.min_modulus_lower_bound == 0.025


def test_repair_nonzero_constant_untouched():
    K = Segment(-0.1, 0.1)
    fp, cert = repair_nonvanishing(Polynomial((3 + 4j,)), K, 0.05)
    assert fp.leading == 3 + 4j and fp.roots == ()
    assert cert.perturbation_bound_value == 0.0
    assert cert.min_modulus_lower_bound == 5.0


def test_repair_budget_validation():
    with pytest.raises(InvalidSpec):
        repair_nonvanishing(Polynomial((0, 1)), Segment(-0.1, 0.1), 0.0)


def test_repair_degenerate_origin_point_set():
    # all roots on a single-point set at the origin: growth factor vanishes
    from striplab import PointSet

    fp, cert = repair_nonvanishing(Polynomial((0, 0, 1)), PointSet((0,)), 0.5)
    assert cert.perturbation_bound_value < 0.5
    assert cert.min_modulus_lower_bound > 0
    assert all(r != 0 for r in fp.roots)


def test_repair_on_cantor_fiber_edges():
    # the empty-interior skeleton of a product set admits the repair even for
    # roots placed exactly on its vertical edges
    from striplab import CantorProduct, fat_cantor, fiber_edges

    cp = CantorProduct(fat_cantor(2), y_lo=0.0, y_hi=0.3, scale=0.3, offset=0.55 + 0.1j)
    K = fiber_edges(cp)
    edge_x = K.offset.real + K.scale * K.intervals[0, 0]
    on_edge = complex(edge_x, 0.55 * (K.offset.imag + K.scale * (K.y_lo + K.y_hi)))
    P = from_roots(1.0, (on_edge, on_edge + 0.02, 1.5))
    fp, cert = repair_nonvanishing(P, K, 1e-3)
    assert cert.perturbation_bound_value < 1e-3
    assert cert.min_modulus_lower_bound > 0
    for r in fp.roots:
        assert distance(K, r) > 0


def test_repair_idempotent():
    K = Segment(0.6, 0.9)
    fp, cert = repair_nonvanishing(from_roots(1.0, (0.7, 0.75, 0.8)), K, 1e-2)
    again, cert2 = repair_nonvanishing(from_roots(fp.leading, fp.roots), K, 1e-2)
    assert cert2.moved_roots == ()
    assert cert2.perturbation_bound_value == 0.0


def test_repair_budget_accounting_recomputable():
    rng = np.random.default_rng(21)
    for _ in range(25):
        K, P, budget = random_repair_case(rng)
        fp, cert = repair_nonvanishing(P, K, budget)
        old = original_roots(fp, cert)
        recomputed = perturbation_bound(fp.leading, old, fp.roots, bounding_radius(K))
        assert abs(recomputed - cert.perturbation_bound_value) <= 1e-12


def test_repair_randomized_soundness():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        K, P, budget = random_repair_case(rng)
        fp, cert = repair_nonvanishing(P, K, budget)
        assert cert.perturbation_bound_value < budget
        assert cert.min_modulus_lower_bound > 0
        repair_round_trip_checks(K, P, budget, fp, cert, rng)


# ---------------------------------------------------------------- pipeline


def test_pipeline_identity_on_segment_through_zero():
    K = Segment(-0.1, 0.1)
    fp, fit, cert = approximate_nonvanishing(K, {"kind": "builtin", "name": "identity"}, 0.1)
    assert fit.sup_error_on_samples <= 1e-12
    assert len(cert.moved_roots) == 1
    total = fit.sup_error_on_samples + cert.perturbation_bound_value
    assert total <= 0.05 and total < 0.1
    assert cert.min_modulus_lower_bound > 0


def test_pipeline_zero_target_yields_small_nonzero_constant():
    K = Segment(-0.1, 0.1)
    fp, fit, cert = approximate_nonvanishing(
        K, {"kind": "builtin", "name": "constant", "value": [0.0, 0.0]}, 0.1
    )
    assert fp.roots == ()
    assert 0 < abs(fp.leading) < 0.1
    assert fit.sup_error_on_samples + cert.perturbation_bound_value < 0.1


def test_pipeline_arc_conj_feasible_eps():
    eps = 0.4
    fp, fit, cert = approximate_nonvanishing(ARC, {"kind": "builtin", "name": "conj"}, eps)
    total = fit.sup_error_on_samples + cert.perturbation_bound_value
    assert total < eps
    assert cert.min_modulus_lower_bound > 0
    audit = discretize(ARC, fit.grid_covering_radius / 10.0)
    values = evaluate_factored(fp, audit.points)
    assert float(np.max(np.abs(values - np.conj(audit.points)))) < eps
    assert float(np.min(np.abs(values))) >= cert.min_modulus_lower_bound


def test_pipeline_arc_conj_tight_eps_is_out_of_reach():
    # the double-precision coefficient representation cannot express a fit
    # below ~7e-2 on this arc, so eps = 1e-2 ends in BudgetNotMet
    with pytest.raises(BudgetNotMet):
        approximate_nonvanishing(ARC, {"kind": "builtin", "name": "conj"}, 1e-2)


def test_pipeline_soundness_when_successful():
    rng = np.random.default_rng(77)
    for name, K, eps in [
        ("identity", Segment(-0.2, 0.3 + 0.1j), 0.05),
        ("conj", Segment(0.6, 0.6 + 0.2j), 0.01),
        ("abs", Arc(0.75, 0.1, 0.0, 1.5 * math.pi), 0.3),
    ]:
        fp, fit, cert = approximate_nonvanishing(K, {"kind": "builtin", "name": name}, eps)
        assert fit.sup_error_on_samples + cert.perturbation_bound_value < eps
        assert cert.min_modulus_lower_bound > 0
        audit = discretize(K, max(fit.grid_covering_radius / 10.0, 1e-5))
        assert float(np.min(np.abs(evaluate_factored(fp, audit.points)))) >= cert.min_modulus_lower_bound
