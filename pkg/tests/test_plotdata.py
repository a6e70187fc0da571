import numpy as np

from binormix import (
    Mixture,
    build_plot_bundle,
    density,
    log_gradient_cross,
    q_of_alpha,
)
from helpers import fig1_pair, trimodal_witness_pair


def test_bundle_shapes_and_cusp():
    m = Mixture(fig1_pair(), 0.5)
    bundle = build_plot_bundle(m, grid_n=96, n_ridge=50, n_singular=120)
    assert bundle.cusp is not None
    assert len(bundle.ridgeline) == 50
    assert bundle.image_points.shape == (96 * 96, 2)
    assert len(bundle.singular_set) == 2  # hyperbola: two branches
    assert len(bundle.singular_value_set) == 2
    assert sum(len(b) for b in bundle.singular_set) == 120
    assert bundle.contours_f1 and bundle.contours_f2


def test_singular_set_vertices_satisfy_conic_residual():
    m = Mixture(trimodal_witness_pair(), 0.5)
    bundle = build_plot_bundle(m, grid_n=64, n_ridge=20, n_singular=200)
    p = m.pair
    for branch in bundle.singular_set:
        g1 = -(branch - p.f1.mu) @ p.f1.sigma_inv
        g2 = -(branch - p.f2.mu) @ p.f2.sigma_inv
        cross = np.abs(g1[:, 0] * g2[:, 1] - g1[:, 1] * g2[:, 0])
        scale = np.hypot(g1[:, 0], g1[:, 1]) * np.hypot(g2[:, 0], g2[:, 1])
        assert np.max(cross / np.maximum(scale, 1e-300)) < 1e-8


def test_image_ridgeline_consistency():
    m = Mixture(fig1_pair(), 0.5)
    bundle = build_plot_bundle(m, grid_n=64, n_ridge=30, n_singular=60)
    for row, sample in zip(bundle.image_ridgeline, bundle.ridgeline):
        assert row[0] == sample.alpha
        np.testing.assert_allclose(
            row[1:], [density(m.pair.f1, sample.x_star), density(m.pair.f2, sample.x_star)],
            rtol=1e-12,
        )
        np.testing.assert_allclose(sample.q_val, q_of_alpha(m.pair, sample.alpha), atol=0)


def test_cusp_in_bundle_is_on_singular_set():
    m = Mixture(fig1_pair(), 0.5)
    bundle = build_plot_bundle(m, grid_n=64, n_ridge=20, n_singular=60)
    assert abs(log_gradient_cross(m.pair, bundle.cusp)) < 1e-6


def test_contour_levels_below_peak():
    m = Mixture(fig1_pair(), 0.5)
    bundle = build_plot_bundle(m, grid_n=96, n_ridge=20, n_singular=60)
    peak = m.pair.f1.peak_value
    for poly in bundle.contours_f1:
        values = density(m.pair.f1, poly)
        assert np.all(values < peak)
        # marching squares interpolates on cell edges: vertices sit near a level
        spread = np.max(values) / np.min(values)
        assert spread < 1.6
