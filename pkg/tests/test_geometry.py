"""Curves, partitions, meshes, and point classification."""

import math

import numpy as np
import pytest

from zaremba.geometry import (
    BoundaryPartition,
    GeometryError,
    SegmentMesh,
    build_meshes,
    curve_frame,
    full_dirichlet_partition,
    half_half_partition,
    kite_default_partition,
    make_disc,
    make_ellipse,
    make_kite,
    point_in_domain,
)


def test_kite_positions():
    kite = make_kite()
    assert np.allclose(kite.position(0.0), [1.0, 0.0], atol=1e-15)
    assert np.allclose(kite.position(math.pi), [-1.0, 0.0], atol=1e-15)
    assert np.allclose(kite.position(math.pi / 2), [-1.3, 1.5], atol=1e-15)


def test_kite_speed_at_zero():
    kite = make_kite()
    _, _, speed, _ = curve_frame(kite, 0.0)
    assert speed == pytest.approx(1.5, abs=1e-14)
    # confirm the closed-form derivative against finite differences
    h = 1e-6
    fd = (kite.position(h) - kite.position(-h)) / (2 * h)
    assert np.allclose(kite.derivative(0.0, 1), fd, atol=1e-9)


def test_disc_frame():
    disc = make_disc(1.0)
    assert np.allclose(disc.position(0.0), [1.0, 0.0], atol=1e-15)
    p, nrm, speed, kappa = curve_frame(disc, math.pi / 2)
    assert np.allclose(nrm, [0.0, 1.0], atol=1e-14)
    assert kappa == pytest.approx(1.0, abs=1e-13)
    _, _, _, kap2 = curve_frame(make_disc(2.0), 1.1)
    assert kap2 == pytest.approx(0.5, abs=1e-13)


def test_disc_normals_outward_everywhere():
    disc = make_disc(1.0)
    t = np.linspace(0, 2 * math.pi, 17)
    _, nrm, _, _ = curve_frame(disc, t)
    assert np.allclose(nrm, np.column_stack([np.cos(t), np.sin(t)]), atol=1e-13)


def test_invalid_geometry():
    with pytest.raises(GeometryError):
        make_disc(-1.0)
    with pytest.raises(GeometryError):
        make_ellipse(1.0, 0.0)


def test_point_in_domain():
    disc = make_disc(1.0)
    assert point_in_domain(disc, [0.0, 0.0])
    assert not point_in_domain(disc, [2.0, 0.0])
    kite = make_kite()
    assert not point_in_domain(kite, [1.0, 2.0])   # exterior observation point
    assert point_in_domain(kite, [0.1, 0.0])       # manufactured source location
    with pytest.raises(GeometryError):
        point_in_domain(disc, [1.0, 0.0])


def test_partition_validation():
    part = kite_default_partition()
    assert len(part.segments) == 2
    assert not part.validation_mode
    total = sum(s.length for s in part.segments)
    assert total == pytest.approx(2 * math.pi, abs=1e-14)
    with pytest.raises(GeometryError):
        BoundaryPartition.from_list([(0, math.pi, "D"), (math.pi, 2 * math.pi, "D")])
    with pytest.raises(GeometryError):
        BoundaryPartition.from_list([(0, 1.0, "D"), (1.5, 2 * math.pi, "N")])
    with pytest.raises(GeometryError):
        BoundaryPartition.from_list([(0, 1.0, "Q"), (1.0, 2 * math.pi, "N")])
    assert full_dirichlet_partition().validation_mode


def test_mesh_nodes_inside_segment():
    kite = make_kite()
    part = kite_default_partition()
    for n in (16, 32):
        for mesh in build_meshes(kite, part, n):
            t0, t1 = mesh.segment.t_start, mesh.segment.t_end
            assert np.all(mesh.t_nodes > t0) and np.all(mesh.t_nodes < t1)
            assert np.all(mesh.cos_weights > 0)
            assert np.all(mesh.node_weights > 0)


def test_mesh_refinement_nesting():
    disc = make_disc(1.0)
    part = half_half_partition()
    m1 = build_meshes(disc, part, 16)[0]
    m2 = build_meshes(disc, part, 32)[0]
    lo, hi = m1.segment.t_start, m1.segment.t_end
    for mesh in (m1, m2):
        assert mesh.t_nodes.min() > lo and mesh.t_nodes.max() < hi


def test_high_order_derivatives_consistent():
    kite = make_kite()
    t = np.array([0.3, 1.7, 4.1])
    h = 1e-4
    for order in (2, 3, 4):
        fd = (kite.derivative(t + h, order - 1) - kite.derivative(t - h, order - 1)) / (2 * h)
        assert np.allclose(kite.derivative(t, order), fd, atol=1e-5)
