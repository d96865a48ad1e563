import pytest
from hypothesis import given, strategies as st

from cwgrass.coeffs import MODEL_NAMES, ConfigurationError, torsion_ring, witt_model


def test_real_model():
    m = witt_model("real")
    assert (m.base_ring, m.fundamental_ideal_generator, m.sign_unit) == ("Integers", 2, -1)
    assert m.modulus == 0


def test_quadratically_closed_model():
    m = witt_model("quadratically-closed")
    assert (m.base_ring, m.fundamental_ideal_generator, m.sign_unit) == ("F2", 0, 1)
    assert m.reduce(5) == 1


def test_unknown_model():
    with pytest.raises(ConfigurationError):
        witt_model("finite-field")


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_torsion_ring_is_f2(name):
    r = torsion_ring(witt_model(name))
    assert (r.name, r.cardinality) == ("F2", 2)


@pytest.mark.parametrize("name", MODEL_NAMES)
@given(a=st.integers(-50, 50), b=st.integers(-50, 50))
def test_reduction_to_torsion_is_ring_map(name, a, b):
    m = witt_model(name)
    x, y = m.reduce(a), m.reduce(b)
    assert m.to_torsion(x + y) == (m.to_torsion(x) + m.to_torsion(y)) % 2
    assert m.to_torsion(x * y) == m.to_torsion(x) * m.to_torsion(y)
    # the ideal is exactly the kernel of the reduction
    assert m.in_ideal(x) == (m.to_torsion(x) == 0)


def test_gw_pairs():
    m = witt_model("real")
    h = m.gw(0, 2)  # hyperbolic form
    one = m.gw(1, 1)
    assert (h * h).w == 0 and (h * h).r == 4
    assert (one + one).r == 2
    with pytest.raises(ValueError):
        m.gw(1, 2)


def test_sign_power():
    m = witt_model("real")
    assert [m.sign_power(e) for e in range(4)] == [1, -1, 1, -1]
    assert witt_model("quadratically-closed").sign_power(1) == 1
