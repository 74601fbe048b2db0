import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legbench.contact import (
    ContactError,
    ContactPoint,
    SplittingData,
    TangentSubspace,
    TangentVector,
    annihilator_in_ker,
    contact_eval,
    dchi_pairing,
    intersect,
    is_legendre_subspace,
    transversal_coordinate_index,
    unit_vector,
)


def origin(ny):
    return ContactPoint(y=np.zeros(ny), tau=0.0, mu=np.zeros(ny))


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vec_strategy(ny):
    arr = st.lists(finite, min_size=ny, max_size=ny)
    return st.builds(
        lambda dy, dtau, dmu: TangentVector(np.array(dy), dtau, np.array(dmu)),
        arr, finite, arr,
    )


@given(vec_strategy(2), vec_strategy(2))
@settings(max_examples=50, deadline=None)
def test_dchi_antisymmetric(v, w):
    assert dchi_pairing(v, w) == pytest.approx(-dchi_pairing(w, v), abs=1e-9)


@given(vec_strategy(3))
@settings(max_examples=50, deadline=None)
def test_dchi_vanishes_on_diagonal(v):
    assert dchi_pairing(v, v) == pytest.approx(0.0, abs=1e-9)


def test_contact_eval():
    q = ContactPoint(y=[1.0, 0.0], tau=0.0, mu=[0.5, 2.0])
    v = TangentVector([1.0, 1.0], 3.0, [0.0, 0.0])
    assert contact_eval(q, v) == pytest.approx(3.0 + 0.5 + 2.0)


def test_is_legendre_basic():
    q = origin(2)
    # span{d y_1, d y_2} at mu = 0 is Legendre (the zero section)
    V = TangentSubspace(q, [unit_vector(2, "dy", 0), unit_vector(2, "dy", 1)])
    assert is_legendre_subspace(V)
    # span{d mu_1, d mu_2} is the conormal fiber, also Legendre
    W = TangentSubspace(q, [unit_vector(2, "dmu", 0), unit_vector(2, "dmu", 1)])
    assert is_legendre_subspace(W)
    # d tau does not lie in ker chi
    B = TangentSubspace(q, [unit_vector(2, "dtau", 0), unit_vector(2, "dy", 0)])
    assert not is_legendre_subspace(B)
    # wrong dimension fails
    assert not is_legendre_subspace(TangentSubspace(q, [unit_vector(2, "dy", 0)]))
    # mixed dy_i / dmu_i pair is not isotropic
    M = TangentSubspace(q, [unit_vector(2, "dy", 0), unit_vector(2, "dmu", 0)])
    assert not is_legendre_subspace(M)


def test_subspace_contains_and_rank():
    q = origin(2)
    V = TangentSubspace(q, [unit_vector(2, "dy", 0)])
    assert V.contains(TangentVector([2.0, 0.0], 0.0, [0.0, 0.0]))
    assert not V.contains(unit_vector(2, "dmu", 0))
    with pytest.raises(ContactError):
        TangentSubspace(q, [unit_vector(2, "dy", 0), unit_vector(2, "dy", 0)])


@given(st.integers(2, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_annihilator_dimension(n, data):
    """W' = {chi = 0, dchi(., W) = 0} has dim (2n-2) - dim W and contains W."""
    ny = n - 1
    q = origin(ny)
    size = data.draw(st.integers(1, ny))
    idx = data.draw(
        st.lists(st.integers(0, ny - 1), min_size=size, max_size=size, unique=True)
    )
    W = TangentSubspace(q, [unit_vector(ny, "dy", i) for i in idx])
    Wp = annihilator_in_ker(W)
    assert Wp.dim == 2 * ny - len(idx)
    for w in W.vectors():
        assert Wp.contains(w)


def test_annihilator_rejects_non_isotropic():
    q = origin(2)
    W = TangentSubspace(q, [unit_vector(2, "dy", 0), unit_vector(2, "dmu", 0)])
    with pytest.raises(ContactError):
        annihilator_in_ker(W)
    B = TangentSubspace(q, [unit_vector(2, "dtau", 0)])
    with pytest.raises(ContactError):
        annihilator_in_ker(B)


def test_intersect():
    q = origin(2)
    V1 = TangentSubspace(q, [unit_vector(2, "dy", 0), unit_vector(2, "dy", 1)])
    V2 = TangentSubspace(q, [unit_vector(2, "dy", 0), unit_vector(2, "dmu", 1)])
    W = intersect(V1, V2)
    assert W.dim == 1
    assert W.contains(unit_vector(2, "dy", 0))


def test_transversal_index_n2():
    # zero section vs conormal of the origin: the only primed coordinate works
    q = origin(1)
    V1 = TangentSubspace(q, [unit_vector(1, "dy", 0)])
    V2 = TangentSubspace(q, [unit_vector(1, "dmu", 0)])
    assert transversal_coordinate_index(V1, V2, SplittingData(k=1, n=2)) == 1


def test_transversal_index_n3():
    q = origin(2)
    V1 = TangentSubspace(q, [unit_vector(2, "dy", 1), unit_vector(2, "dmu", 0)])
    V2 = TangentSubspace(q, [unit_vector(2, "dmu", 0), unit_vector(2, "dmu", 1)])
    assert transversal_coordinate_index(V1, V2, SplittingData(k=2, n=3)) == 2


def test_transversal_index_identical_inputs_error():
    q = origin(1)
    V1 = TangentSubspace(q, [unit_vector(1, "dy", 0)])
    with pytest.raises(ContactError):
        transversal_coordinate_index(V1, V1, SplittingData(k=1, n=2))


def test_transversal_index_non_legendre_error():
    q = origin(1)
    V1 = TangentSubspace(q, [unit_vector(1, "dtau", 0)])
    V2 = TangentSubspace(q, [unit_vector(1, "dmu", 0)])
    with pytest.raises(ContactError):
        transversal_coordinate_index(V1, V2, SplittingData(k=1, n=2))


def test_tangent_vector_array_round_trip():
    v = TangentVector([1.0, 2.0], 3.0, [4.0, 5.0])
    v2 = TangentVector.from_array(v.as_array())
    np.testing.assert_allclose(v2.dy, v.dy)
    assert v2.dtau == v.dtau
    np.testing.assert_allclose(v2.dmu, v.dmu)


def test_dimension_mismatch_errors():
    with pytest.raises(ContactError):
        ContactPoint(y=[0.0, 0.0], tau=0.0, mu=[0.0])
    with pytest.raises(ContactError):
        SplittingData(k=3, n=3)
    q = origin(2)
    with pytest.raises(ContactError):
        contact_eval(q, unit_vector(1, "dy", 0))
