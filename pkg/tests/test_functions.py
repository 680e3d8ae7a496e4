import numpy as np
import pytest

from robinhom.errors import ValidationError
from robinhom.functions import AnalyticFunction, constant, sphere_constant


def test_planar_kinds():
    x = np.array([0.0, 0.5, 1.0])
    y = np.array([0.0, 0.25, 1.0])
    assert constant(2.0)(x, y).tolist() == [2.0, 2.0, 2.0]
    assert AnalyticFunction("linear", (1, 2, 3))(x, y).tolist() == [1.0, 2.75, 6.0]
    cp = AnalyticFunction("cosine_product", (2.0, 1.0, 1.0))
    assert cp(x, y) == pytest.approx(2 * np.cos(np.pi * x) * np.cos(np.pi * y))


def test_sphere_kinds():
    m = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    assert sphere_constant(4.0).on_sphere(m).tolist() == [4.0, 4.0, 4.0]
    h = AnalyticFunction("sphere_trace_first_harmonic", (1.0, 2.0, 3.0))
    assert h.on_sphere(m).tolist() == [3.0, 4.0, -1.0]


def test_domain_mismatch_raises():
    with pytest.raises(ValidationError):
        sphere_constant(1.0)(0.0, 0.0)
    with pytest.raises(ValidationError):
        constant(1.0).on_sphere([[1.0, 0.0]])


@pytest.mark.parametrize("kind, params", [("unknown", (1,)), ("constant", (1, 2)),
                                          ("linear", (1,)), ("constant", (float("nan"),))])
def test_invalid_entries(kind, params):
    with pytest.raises(ValidationError):
        AnalyticFunction(kind, params)


def test_dict_round_trip():
    f = AnalyticFunction("cosine_product", (1.5, 2.0, 3.0))
    assert AnalyticFunction.from_dict(f.to_dict()) == f
