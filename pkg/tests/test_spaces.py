"""Weighted-space norms, grids and the transfer isometry."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conformal_flow import (GridFunction, Order, SpaceDescriptor, distance,
                            inner_product_alpha, inner_product_l2, make_grid,
                            norm_lp, norm_p_alpha, read_grid_function_csv, u_p,
                            u_p_inverse, write_grid_function_csv)
from conformal_flow.errors import ContractError, DomainError, GridMismatchError

from conftest import EPS, compact_bump


class TestDescriptorAndGrid:
    @pytest.mark.parametrize("kwargs", [
        dict(p=0.5, order=Order(0.5), x_max=1.0, n=10),
        dict(p=2.0, order=Order(0.5), x_max=1.0, n=1),
        dict(p=2.0, order=Order(0.5), x_max=0.0, n=10),
    ])
    def test_invalid_descriptors(self, kwargs):
        with pytest.raises(DomainError):
            SpaceDescriptor(**kwargs)

    def test_uniform_grid_at_alpha_one(self):
        desc = SpaceDescriptor(p=1.0, order=Order(1.0), x_max=1.0, n=4)
        assert np.array_equal(make_grid(desc), [0.25, 0.5, 0.75, 1.0])

    def test_square_root_grid(self):
        desc = SpaceDescriptor(p=1.0, order=Order(0.5), x_max=1.0, n=2)
        assert np.array_equal(make_grid(desc), [0.25, 1.0])

    @pytest.mark.parametrize("alpha", [0.1, 0.37, 0.5, 0.99, 1.0])
    def test_endpoint_pinned(self, alpha):
        desc = SpaceDescriptor(p=2.0, order=Order(alpha), x_max=1.0, n=2)
        assert make_grid(desc)[-1] == 1.0
        desc2 = SpaceDescriptor(p=2.0, order=Order(alpha), x_max=7.3, n=57)
        assert make_grid(desc2)[-1] == 7.3

    @given(st.floats(min_value=0.1, max_value=1.0),
           st.integers(min_value=2, max_value=500),
           st.floats(min_value=0.1, max_value=100.0))
    @settings(max_examples=100, deadline=None)
    def test_grid_strictly_increasing(self, alpha, n, x_max):
        desc = SpaceDescriptor(p=2.0, order=Order(alpha), x_max=x_max, n=n)
        grid = make_grid(desc)
        assert grid[0] > 0 and np.all(np.diff(grid) > 0)
        assert grid[-1] == x_max


class TestGridFunction:
    def test_validation(self):
        with pytest.raises(ContractError):
            GridFunction([1.0, 2.0], [1.0])
        with pytest.raises(ContractError):
            GridFunction([2.0, 1.0], [1.0, 1.0])
        with pytest.raises(ContractError):
            GridFunction([0.0, 1.0], [1.0, 1.0])
        with pytest.raises(ContractError):
            GridFunction([1.0, 2.0], [np.nan, 1.0])

    def test_immutable(self):
        f = GridFunction([1.0, 2.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            f.values[0] = 3.0
        with pytest.raises(AttributeError):
            f.values = np.zeros(2)

    def test_arithmetic_requires_same_grid(self):
        f = GridFunction([1.0, 2.0], [1.0, 2.0])
        g = GridFunction([1.0, 3.0], [1.0, 2.0])
        with pytest.raises(GridMismatchError):
            _ = f + g


class TestNorms:
    def test_unit_constant_p1_alpha_half(self):
        # int_0^1 x**(-1/2) dx = 2
        desc = SpaceDescriptor(p=1.0, order=Order(0.5), x_max=1.0, n=500)
        f = GridFunction(make_grid(desc), np.ones(desc.n))
        assert norm_p_alpha(desc, f) == pytest.approx(2.0, rel=1e-13)

    def test_zero_function(self):
        desc = SpaceDescriptor(p=3.0, order=Order(0.4), x_max=2.0, n=64)
        f = GridFunction(make_grid(desc), np.zeros(desc.n))
        assert norm_p_alpha(desc, f) == 0.0

    def test_unit_constant_classical_l2(self):
        desc = SpaceDescriptor(p=2.0, order=Order(1.0), x_max=1.0, n=400)
        f = GridFunction(make_grid(desc), np.ones(desc.n))
        assert norm_p_alpha(desc, f) == pytest.approx(1.0, rel=1e-13)

    def test_mismatched_grid_rejected(self, small_desc):
        other = GridFunction(np.linspace(0.1, 4.0, small_desc.n), np.ones(small_desc.n))
        with pytest.raises(GridMismatchError):
            norm_p_alpha(small_desc, other)

    def test_positivity(self, small_desc):
        f = compact_bump(small_desc)
        assert norm_p_alpha(small_desc, f) > 0

    @given(st.floats(min_value=-1e3, max_value=1e3).filter(lambda c: abs(c) > 1e-3),
           st.floats(min_value=-1e3, max_value=1e3))
    @settings(max_examples=80, deadline=None)
    def test_homogeneity(self, re, im):
        desc = SpaceDescriptor(p=2.0, order=Order(0.5), x_max=4.0, n=128)
        f = compact_bump(desc)
        c = complex(re, im)
        lhs = norm_p_alpha(desc, f * c)
        rhs = abs(c) * norm_p_alpha(desc, f)
        assert abs(lhs - rhs) <= 4 * EPS * rhs

    def test_refinement_second_order(self):
        # norm(n) converges at O(n**-2) for smooth-in-xi data; the profile must
        # have nonvanishing endpoint derivatives or the trapezoid error
        # degenerates past second order and the ratio test is vacuous
        alpha = 0.5
        norms = {}
        for n in (250, 500, 1000, 2000):
            desc = SpaceDescriptor(p=2.0, order=Order(alpha), x_max=4.0, n=n)
            f = GridFunction(make_grid(desc), np.exp(-desc.xi_grid() / 3.0))
            norms[n] = norm_p_alpha(desc, f)
        d1 = abs(norms[500] - norms[250])
        d2 = abs(norms[1000] - norms[500])
        d3 = abs(norms[2000] - norms[1000])
        assert 0.15 <= d2 / d1 <= 0.4
        assert 0.15 <= d3 / d2 <= 0.4


class TestIsometry:
    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0])
    def test_norm_transfer(self, p, alpha):
        desc = SpaceDescriptor(p=p, order=Order(alpha), x_max=4.0, n=2000)
        for f in (compact_bump(desc),
                  GridFunction(make_grid(desc),
                               np.sin(np.pi * desc.xi_grid() / desc.xi_max))):
            base = norm_p_alpha(desc, f)
            assert abs(norm_lp(u_p(desc, f), p) - base) <= 1e-6 * base

    def test_constant_example(self):
        # f = 1, p = 1, alpha = 1/2: u_p f = 2 on (0, 1], both norms equal 2
        desc = SpaceDescriptor(p=1.0, order=Order(0.5), x_max=1.0, n=800)
        f = GridFunction(make_grid(desc), np.ones(desc.n))
        g = u_p(desc, f)
        assert np.allclose(g.values, 2.0, rtol=4 * EPS)
        assert norm_lp(g, 1.0) == pytest.approx(2.0, rel=1e-13)
        assert norm_lp(g, 1.0) == pytest.approx(norm_p_alpha(desc, f), rel=4 * EPS)

    def test_alpha_one_is_identity(self):
        desc = SpaceDescriptor(p=3.0, order=Order(1.0), x_max=2.0, n=64)
        f = compact_bump(desc)
        assert np.array_equal(u_p(desc, f).values, f.values)

    def test_power_alpha_maps_to_scaled_ramp(self):
        # f(x) = x**alpha, p = 2, alpha = 1/2: (u_p f)(xi) = sqrt(2) xi
        desc = SpaceDescriptor(p=2.0, order=Order(0.5), x_max=1.0, n=512)
        f = GridFunction(make_grid(desc), make_grid(desc) ** 0.5)
        g = u_p(desc, f)
        assert np.allclose(g.values, np.sqrt(2.0) * desc.xi_grid(), rtol=1e-14)

    def test_inverse_examples(self):
        desc = SpaceDescriptor(p=1.0, order=Order(0.5), x_max=1.0, n=64)
        g = GridFunction(desc.xi_grid(), 2.0 * np.ones(desc.n))
        f = u_p_inverse(desc, g)
        assert np.allclose(f.values, 1.0, rtol=4 * EPS)

    def test_round_trip_node_exact(self):
        desc = SpaceDescriptor(p=3.0, order=Order(0.7), x_max=4.0, n=512)
        f = compact_bump(desc)
        back = u_p_inverse(desc, u_p(desc, f))
        np.testing.assert_array_max_ulp(back.values.real, f.values.real.copy(), maxulp=1)
        np.testing.assert_array_max_ulp(back.values.imag, f.values.imag.copy(), maxulp=1)

    def test_unitarity_at_p2(self):
        desc = SpaceDescriptor(p=2.0, order=Order(0.25), x_max=4.0, n=2000)
        f = compact_bump(desc)
        g = compact_bump(desc, c_frac=0.5, w_frac=0.2, amplitude=0.7 - 0.2j)
        lhs = inner_product_l2(u_p(desc, f), u_p(desc, g))
        rhs = inner_product_alpha(desc, f, g)
        scale = norm_p_alpha(desc, f) * norm_p_alpha(desc, g)
        assert abs(lhs - rhs) <= 1e-6 * scale


class TestDistance:
    def test_axioms(self, small_desc):
        f = compact_bump(small_desc)
        g = compact_bump(small_desc, c_frac=0.5, w_frac=0.2)
        zero = GridFunction(make_grid(small_desc), np.zeros(small_desc.n))
        assert distance(small_desc, f, f) == 0.0
        assert distance(small_desc, f, zero) == norm_p_alpha(small_desc, f)
        assert distance(small_desc, f, g) == pytest.approx(
            distance(small_desc, g, f), rel=4 * EPS)
        assert (distance(small_desc, f, g)
                <= distance(small_desc, f, zero) + distance(small_desc, zero, g) + 1e-12)

    def test_unit_example(self):
        desc = SpaceDescriptor(p=1.0, order=Order(0.5), x_max=1.0, n=500)
        f = GridFunction(make_grid(desc), np.ones(desc.n))
        zero = GridFunction(make_grid(desc), np.zeros(desc.n))
        assert distance(desc, f, zero) == pytest.approx(2.0, rel=1e-13)


class TestCsv:
    def test_round_trip(self, tmp_path, small_desc):
        f = compact_bump(small_desc)
        path = tmp_path / "f.csv"
        write_grid_function_csv(path, f)
        back = read_grid_function_csv(path)
        assert np.array_equal(back.grid, f.grid)
        assert np.array_equal(back.values, f.values)
        header = path.read_text().splitlines()[0]
        assert header == "x,re,im"
