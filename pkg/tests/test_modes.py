import numpy as np
import pytest

from binormix import (
    Gaussian2D,
    GaussianPair,
    Mixture,
    PairType,
    SearchConfig,
    SearchMethod,
    bounding_box,
    find_modes,
    grid_oracle_modes,
    mixture_grad,
    modality_bound,
    pair_type,
    ridge_points,
    sample_pair,
    verify_bounds,
)
from helpers import (
    fig1_pair,
    polyline_distance,
    random_affine,
    transform_mixture,
    trimodal_witness_pair,
)


def unit_pair(separation):
    return GaussianPair(
        Gaussian2D([0.0, 0.0], np.eye(2)),
        Gaussian2D([separation, 0.0], np.eye(2)),
    )


def test_endpoint_weights_short_circuit():
    p = fig1_pair()
    for c, g in ((1.0, p.f1), (0.0, p.f2)):
        report = find_modes(Mixture(p, c))
        assert report.count == 1
        assert np.array_equal(report.modes[0].location, g.mu)
        np.testing.assert_allclose(report.modes[0].value, g.peak_value, rtol=1e-14)


def test_grid_oracle_refines_single_component():
    p = fig1_pair()
    report = grid_oracle_modes(Mixture(p, 1.0))
    assert report.count == 1
    assert np.linalg.norm(report.modes[0].location - p.f1.mu) < 1e-9


def test_overlapping_equal_pair_is_unimodal():
    m = Mixture(unit_pair(1.0), 0.5)
    for report in (find_modes(m), grid_oracle_modes(m)):
        assert report.count == 1
        np.testing.assert_allclose(report.modes[0].location, [0.5, 0.0], atol=1e-9)


def test_separated_equal_pair_is_bimodal():
    m = Mixture(unit_pair(3.0), 0.5)
    assert find_modes(m).count == grid_oracle_modes(m).count == 2


def test_critical_separation_is_unimodal():
    # separation exactly twice the common sigma: the single mode sits at the
    # midpoint with a vanishing curvature along the axis
    m = Mixture(unit_pair(2.0), 0.5)
    a, b = find_modes(m), grid_oracle_modes(m)
    assert a.count == b.count == 1
    # the midpoint is quartically flat along the axis, so a gradient-based
    # certificate can only pin the location to about cuberoot(gradient tol)
    np.testing.assert_allclose(a.modes[0].location, [1.0, 0.0], atol=1e-3)
    np.testing.assert_allclose(a.modes[0].value, b.modes[0].value, rtol=1e-12)


def test_trimodal_witness_three_modes_and_symmetry():
    """A crossed anisotropic pair whose even mixture has three modes.

    The mode set must agree between methods and be invariant under the
    parameter symmetry (x, y) -> (1 - y, 1 - x), which swaps the components.
    """
    m = Mixture(trimodal_witness_pair(), 0.5)
    newton = find_modes(m)
    grid = grid_oracle_modes(m)
    assert newton.count == grid.count == 3
    for a, b in zip(newton.modes, grid.modes):
        assert np.linalg.norm(a.location - b.location) < 1e-6
    locations = np.array([mode.location for mode in newton.modes])
    mirrored = np.column_stack([1.0 - locations[:, 1], 1.0 - locations[:, 0]])
    for point in mirrored:
        assert np.min(np.linalg.norm(locations - point, axis=1)) < 1e-6
    assert modality_bound(m.pair).n_roots == 4


def test_crossed_pair_with_wider_ridges_is_unimodal():
    # same geometry as the witness but with variances (1, 0.2)/(0.2, 1): the
    # ridges are too wide to carry separate peaks, and the root-free q
    # certifies unimodality for every mixing proportion; see acceptance
    # criterion 1 notes
    m = Mixture(fig1_pair(), 0.5)
    a, b = find_modes(m), grid_oracle_modes(m)
    assert a.count == b.count == 1
    assert modality_bound(m.pair).n_roots == 0
    locations = np.array([mode.location for mode in a.modes])
    mirrored = np.column_stack([1.0 - locations[:, 1], 1.0 - locations[:, 0]])
    assert np.linalg.norm(mirrored[0] - locations[0]) < 1e-9


def test_methods_agree_on_random_pairs():
    # 500 pairs of each type, swept over five mixing proportions; this is the
    # heavyweight cross-validation of the two independent searches
    rng = np.random.default_rng(90)
    cfg = SearchConfig()
    cfg_fine = SearchConfig(grid_resolution=1024)
    skipped = 0
    for i in range(1500):
        p = sample_pair(rng, [None, PairType.TYPE2, PairType.TYPE3][i % 3])
        for c in (0.1, 0.3, 0.5, 0.7, 0.9):
            m = Mixture(p, c)
            newton = find_modes(m, cfg)
            grid = grid_oracle_modes(m, cfg)
            if grid.count != newton.count:
                grid = grid_oracle_modes(m, cfg_fine)  # resolution artifact?
            values = sorted(mode.value for mode in newton.modes)
            if len(values) > 1 and min(np.diff(values)) < 1e-10 * values[-1]:
                skipped += 1  # near-degenerate twin modes: ambiguous by policy
                continue
            assert newton.count == grid.count, (i, c)
            for a, b in zip(newton.modes, grid.modes):
                assert np.linalg.norm(a.location - b.location) < 1e-6
    assert skipped < 40


def test_modes_lie_on_ridgeline():
    rng = np.random.default_rng(91)
    for i in range(60):
        p = sample_pair(rng, [None, PairType.TYPE2, PairType.TYPE3][i % 3])
        poly = ridge_points(p, np.linspace(0.0, 1.0, 10_001))
        lo, hi = bounding_box(p, 5.0)
        diagonal = float(np.hypot(*(hi - lo)))
        for c in (0.2, 0.5, 0.8):
            for mode in find_modes(Mixture(p, c)).modes:
                assert polyline_distance(mode.location, poly) < 1e-6 * diagonal


def test_gradient_certificate_holds():
    rng = np.random.default_rng(92)
    for i in range(40):
        p = sample_pair(rng, [None, PairType.TYPE2, PairType.TYPE3][i % 3])
        prec = max(np.linalg.norm(p.f1.sigma_inv, 2), np.linalg.norm(p.f2.sigma_inv, 2))
        for c in (0.3, 0.7):
            report = find_modes(Mixture(p, c))
            for mode in report.modes:
                assert mode.hessian_negdef
                gnorm = np.linalg.norm(mixture_grad(Mixture(p, c), mode.location))
                assert gnorm <= 1e-9 * mode.value * prec


def test_report_sorted_by_value():
    m = Mixture(trimodal_witness_pair(), 0.5)
    for report in (find_modes(m), grid_oracle_modes(m)):
        values = [mode.value for mode in report.modes]
        assert values == sorted(values, reverse=True)
        assert report.method in (SearchMethod.NEWTON_SEEDED, SearchMethod.GRID_ORACLE)


def test_modes_map_equivariantly_under_affine_maps():
    rng = np.random.default_rng(93)
    for i in range(12):
        p = sample_pair(rng, [None, PairType.TYPE2, PairType.TYPE3][i % 3])
        m = Mixture(p, 0.3)
        base = find_modes(m)
        for _ in range(3):
            t = random_affine(rng)
            mapped = find_modes(transform_mixture(m, t))
            assert mapped.count == base.count
            for a, b in zip(base.modes, mapped.modes):
                expected = t.linear @ a.location + t.shift
                assert np.linalg.norm(expected - b.location) < 1e-8


def test_bound_chain_holds_per_pair():
    rng = np.random.default_rng(94)
    for i in range(30):
        kind = [None, PairType.TYPE2, PairType.TYPE3][i % 3]
        p = sample_pair(rng, kind)
        cap = 3 if pair_type(p) is PairType.TYPE1 else 2
        bound = modality_bound(p)
        assert bound.bound <= cap
        for c in (0.1, 0.5, 0.9):
            assert find_modes(Mixture(p, c)).count <= bound.bound


def test_sample_pair_produces_requested_types():
    rng = np.random.default_rng(95)
    for kind in (PairType.TYPE1, PairType.TYPE2, PairType.TYPE3):
        for _ in range(200):
            drawn = sample_pair(rng, kind if kind is not PairType.TYPE1 else None)
            assert pair_type(drawn) is kind


def test_verify_bounds_smoke_and_reproducibility():
    report = verify_bounds(123, 10)
    again = verify_bounds(123, 10)
    assert report.ok and again.ok
    assert report.max_counts == again.max_counts
    assert set(report.max_counts) == set(PairType)
    assert all(v >= 1 for v in report.max_counts.values())
    assert report.max_counts[PairType.TYPE2] <= 2
    assert report.max_counts[PairType.TYPE3] <= 2
    assert report.c_values == (0.1, 0.3, 0.5, 0.7, 0.9)


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(seeds=0)
    with pytest.raises(ValueError):
        SearchConfig(padding_sigmas=-1.0)
    with pytest.raises(ValueError):
        SearchConfig(dedupe_radius=0.0)
