"""Lattice construction, masked fields, the discrete Laplacian and solves."""

import math

import numpy as np
import pytest

from degenlog.geometry import DomainSpec, SetShape
from degenlog.grid import (Field, MaskedOperator, SolveFailure, apply_laplacian,
                           build_grid, dilate_mask, mask_connected_components,
                           mask_from_shape, mask_within_distance, write_pgm)

UNIT_SQ = DomainSpec.rectangle((0.0, 0.0), (1.0, 1.0))


class TestBuildGrid:
    def test_square_shape_and_spacing(self):
        g = build_grid(UNIT_SQ, 16)
        assert g.shape == (15, 15)
        assert g.h == pytest.approx(1.0 / 16)
        assert g.mask.all()          # every interior node is inside a rectangle
        x = g.axis_coords(0)
        assert x[0] == pytest.approx(g.h)
        assert x[-1] == pytest.approx(1.0 - g.h)

    def test_anisotropic_rectangle_keeps_uniform_h(self):
        dom = DomainSpec.rectangle((0.0, 0.0), (2.0, 1.0))
        g = build_grid(dom, 32)
        assert g.shape == (31, 15)
        assert g.h == pytest.approx(2.0 / 32)

    def test_incompatible_cell_counts_rejected(self):
        dom = DomainSpec.rectangle((0.0, 0.0), (1.0, 1.0))
        with pytest.raises(ValueError):
            build_grid(dom, (16, 23))

    def test_too_coarse_rejected(self):
        with pytest.raises(ValueError):
            build_grid(UNIT_SQ, 4)

    def test_disc_mask_area(self):
        dom = DomainSpec.disc((0.0, 0.0), 1.0)
        g = build_grid(dom, 64)
        area = g.mask.sum() * g.cell_volume
        assert area == pytest.approx(math.pi, rel=0.02)

    def test_interval_grid(self):
        g = build_grid(DomainSpec.interval(0.0, 1.0), 32)
        assert g.dim == 1
        assert g.shape == (31,)


class TestField:
    def test_norms_of_constant(self):
        g = build_grid(UNIT_SQ, 16)
        f = Field.from_function(g, lambda p: np.ones(len(p)))
        assert f.sup_norm() == 1.0
        # 15^2 interior nodes of a 16^2-cell unit square
        assert f.mass() == pytest.approx((15 / 16) ** 2)
        assert f.l2_norm() == pytest.approx(15 / 16)

    def test_from_function_zero_outside_mask(self):
        dom = DomainSpec.disc((0.0, 0.0), 1.0)
        g = build_grid(dom, 32)
        f = Field.from_function(g, lambda p: np.ones(len(p)))
        assert np.all(f.values[~g.mask] == 0.0)

    def test_copy_is_independent(self):
        g = build_grid(UNIT_SQ, 16)
        f = Field.zeros(g)
        f2 = f.copy()
        f2.values[3, 3] = 1.0
        assert f.values[3, 3] == 0.0


class TestLaplacian:
    def test_eigenfunction_of_unit_square(self):
        g = build_grid(UNIT_SQ, 64)
        f = Field.from_function(
            g, lambda p: np.sin(math.pi * p[:, 0]) * np.sin(math.pi * p[:, 1]))
        lap = apply_laplacian(f)
        # discrete eigenvalue of the 5-point stencil
        lam_h = 4.0 / g.h ** 2 * math.sin(math.pi * g.h / 2.0) ** 2 * 2.0
        assert np.allclose(lap.values, lam_h * f.values, atol=1e-10)

    def test_matches_masked_operator(self):
        g = build_grid(UNIT_SQ, 16)
        rng = np.random.default_rng(0)
        f = Field(g, rng.standard_normal(g.shape))
        op = MaskedOperator(g)
        via_matrix = op.extend(op.matrix @ op.restrict(f.values))
        assert np.allclose(apply_laplacian(f).values, via_matrix)


class TestMasks:
    def test_mask_from_shape_ball_area(self):
        g = build_grid(UNIT_SQ, 64)
        m = mask_from_shape(g, SetShape.ball((0.5, 0.5), 0.3))
        assert m.sum() * g.cell_volume == pytest.approx(math.pi * 0.09, rel=0.03)

    def test_mask_within_distance_grows(self):
        g = build_grid(UNIT_SQ, 64)
        s = SetShape.ball((0.5, 0.5), 0.2)
        m0 = mask_within_distance(g, s, 0.0)
        m1 = mask_within_distance(g, s, 0.1)
        assert np.all(m1[m0])
        assert m1.sum() > m0.sum()

    def test_dilate_mask_matches_exact_dilation_of_ball(self):
        g = build_grid(UNIT_SQ, 64)
        s = SetShape.ball((0.5, 0.5), 0.2)
        m = mask_from_shape(g, s)
        # grid dilation of the nodal mask vs exact dilation of the shape:
        # equal up to one cell of boundary discretization
        approx = dilate_mask(g, m, 0.1)
        exact = mask_within_distance(g, s, 0.1)
        assert np.all(exact[approx & ~_ring(g, s, 0.1)])

    def test_connected_components(self):
        g = build_grid(UNIT_SQ, 32)
        two = (mask_from_shape(g, SetShape.ball((0.25, 0.25), 0.1))
               | mask_from_shape(g, SetShape.ball((0.75, 0.75), 0.1)))
        assert mask_connected_components(two) == 2


def _ring(g, s, delta):
    inner = mask_within_distance(g, s, delta - 1.5 * g.h)
    outer = mask_within_distance(g, s, delta + 1.5 * g.h)
    return outer & ~inner


class TestMaskedOperator:
    def test_matrix_symmetric_and_m_matrix(self):
        g = build_grid(DomainSpec.disc((0.0, 0.0), 1.0), 32)
        op = MaskedOperator(g)
        a = op.matrix
        assert abs(a - a.T).max() == 0.0
        off = a - _diag_of(a)
        assert off.max() <= 0.0                    # nonpositive off-diagonal
        assert a.diagonal().min() > 0.0

    def test_restrict_extend_roundtrip(self):
        g = build_grid(UNIT_SQ, 16)
        op = MaskedOperator(g)
        v = np.arange(op.n, dtype=float)
        assert np.array_equal(op.restrict(op.extend(v)), v)

    def test_solve_spd_accuracy(self):
        g = build_grid(UNIT_SQ, 32)
        op = MaskedOperator(g)
        rng = np.random.default_rng(7)
        x_true = rng.standard_normal(op.n)
        c = rng.uniform(0.0, 2.0, op.n)
        rhs = 1.5 * x_true + 0.25 * (op.matrix @ x_true) + c * x_true
        x = op.solve_spd(rhs, a=1.5, b=0.25, c=c, tol=1e-12)
        assert np.allclose(x, x_true, atol=1e-9)

    def test_negative_reaction_rejected(self):
        g = build_grid(UNIT_SQ, 16)
        op = MaskedOperator(g)
        with pytest.raises(ValueError):
            op.solve_spd(np.ones(op.n), c=-np.ones(op.n))

    def test_solve_failure_reported(self):
        g = build_grid(UNIT_SQ, 16)
        op = MaskedOperator(g)
        with pytest.raises(SolveFailure):
            op.solve_spd(np.ones(op.n), tol=1e-14, maxiter=1)

    def test_empty_mask_rejected(self):
        g = build_grid(UNIT_SQ, 16)
        with pytest.raises(ValueError):
            MaskedOperator(g, np.zeros(g.shape, dtype=bool))


def _diag_of(a):
    import scipy.sparse as sp
    return sp.diags(a.diagonal())


class TestPgm:
    def test_header_payload_and_sidecar(self, tmp_path):
        g = build_grid(UNIT_SQ, 16)
        f = Field.from_function(g, lambda p: p[:, 0])
        path = tmp_path / "snap.pgm"
        write_pgm(f, path, display_max=2.0)
        raw = path.read_bytes()
        assert raw.startswith(b"P5\n15 15\n255\n")
        assert len(raw) == len(b"P5\n15 15\n255\n") + 15 * 15
        sidecar = (tmp_path / "snap.pgm.txt").read_text()
        assert "display_max = 2.0" in sidecar

    def test_values_clipped_to_display_max(self, tmp_path):
        g = build_grid(UNIT_SQ, 16)
        f = Field.from_function(g, lambda p: np.full(len(p), 10.0))
        path = tmp_path / "snap.pgm"
        write_pgm(f, path, display_max=1.0)
        payload = path.read_bytes()[len(b"P5\n15 15\n255\n"):]
        assert max(payload) == 255
