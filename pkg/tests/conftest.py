import numpy as np
import pytest

from conformal_flow import GridFunction, Order, SpaceDescriptor, make_grid

EPS = np.finfo(float).eps


def ulp_gap(got, want):
    """Error in units of the last place of ``want`` (elementwise max)."""
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    return float(np.max(np.abs(got - want) / np.spacing(np.abs(want))))


def compact_bump(desc, c_frac=0.55, w_frac=0.17, amplitude=1 + 0.5j):
    """Smooth complex bump exactly supported in xi in [c-w, c+w]."""
    xi = desc.xi_grid()
    c, w = c_frac * desc.xi_max, w_frac * desc.xi_max
    u = (xi - c) / w
    vals = np.where(np.abs(u) < 1.0,
                    np.exp(-1.0 / np.maximum(1.0 - u ** 2, 1e-300)), 0.0)
    return GridFunction(make_grid(desc), vals * amplitude)


@pytest.fixture
def small_desc():
    return SpaceDescriptor(p=2.0, order=Order(0.5), x_max=4.0, n=256)


@pytest.fixture
def orbit_desc():
    return SpaceDescriptor(p=2.0, order=Order(0.5), x_max=256.0, n=4000)
