import numpy as np
import pytest

from susylab.errors import ConfigurationError
from susylab.polynomials import hermite
from susylab.potentials import CustomSuperpotential, Oscillator, UnbrokenRadial1
from susylab.winding import RectContour, contour_for_roots, winding_number


def test_hermite_three_counts_its_zeros():
    res = winding_number(Oscillator(2.0), hermite(3), RectContour(-3.0, 3.0, 1.0))
    assert res["rounded"] == 3
    assert abs(res["integral"] - 3.0) <= 1e-6


def test_constant_polynomial_has_no_poles():
    res = winding_number(Oscillator(2.0), hermite(0), RectContour(-3.0, 3.0, 1.0))
    assert res["rounded"] == 0
    assert abs(res["integral"]) <= 1e-9


@pytest.mark.parametrize("n", range(9))
def test_integral_equals_state_index(n):
    p = hermite(n)
    contour = contour_for_roots(p, x_pad=1.5, y_half=1.0)
    res = winding_number(Oscillator(2.0), p, contour)
    assert res["rounded"] == n
    assert abs(res["integral"] - n) <= 1e-6


def test_adjacent_difference_is_one_pole():
    s = Oscillator(2.0)
    contour = contour_for_roots(hermite(3), x_pad=1.5, y_half=1.0)
    d = (winding_number(s, hermite(3), contour)["integral"]
         - winding_number(s, hermite(2), contour)["integral"])
    assert abs(d - 1.0) <= 1e-6


def test_contour_deformation_invariance():
    s = Oscillator(2.0)
    a = winding_number(s, hermite(3), RectContour(-3.0, 3.0, 1.0))["integral"]
    b = winding_number(s, hermite(3), RectContour(-3.0, 3.0, 2.0))["integral"]
    assert abs(a - b) <= 1e-8


def test_partial_enclosure_counts_only_inner_zeros():
    # H3 has zeros 0 and +-sqrt(1.5); a [-1,1] window only encloses 0.
    res = winding_number(Oscillator(2.0), hermite(3), RectContour(-1.0, 1.0, 1.0))
    assert res["rounded"] == 1


def test_zero_on_contour_rejected():
    # H2 = 4x^2 - 2 vanishes at sqrt(0.5); put that on the right edge.
    with pytest.raises(ConfigurationError):
        winding_number(Oscillator(2.0), hermite(2),
                       RectContour(-3.0, np.sqrt(0.5), 1.0))


def test_radial_pole_must_stay_outside():
    s = UnbrokenRadial1(2.0, -2.5)
    with pytest.raises(ConfigurationError):
        winding_number(s, hermite(2), RectContour(-3.0, 3.0, 1.0))
    res = winding_number(s, hermite(0), RectContour(1.0, 3.0, 0.5))
    assert abs(res["integral"]) <= 1e-8


def test_custom_superpotentials():
    entire = CustomSuperpotential("x^3 - x")
    res = winding_number(entire, hermite(1), RectContour(-2.0, 2.0, 1.0))
    assert res["rounded"] == 1
    with pytest.raises(ConfigurationError):
        winding_number(CustomSuperpotential("1/x"), hermite(1),
                       RectContour(-2.0, 2.0, 1.0))


def test_contour_validation():
    with pytest.raises(ConfigurationError):
        RectContour(1.0, -1.0, 1.0)
    with pytest.raises(ConfigurationError):
        RectContour(-1.0, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        RectContour(-1.0, 1.0, 1.0, samples_per_side=32)


def test_sampling_refinement_consistency():
    s = Oscillator(2.0)
    coarse = winding_number(s, hermite(4), RectContour(-4.0, 4.0, 1.0, 4096))["integral"]
    fine = winding_number(s, hermite(4), RectContour(-4.0, 4.0, 1.0, 8192))["integral"]
    assert abs(coarse - fine) <= 1e-7
