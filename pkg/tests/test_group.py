import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endomon import _arrays as A
from endomon.group import (
    Element,
    GroupParams,
    ParamsMismatch,
    Subgroup,
    all_elements as scalar_elements,
    all_vectors,
    basic_commutator,
    center,
    commutator,
    commute_cases,
    commute_criterion,
    cyclic,
    element_order,
    format_element,
    from_vector,
    generators,
    identity,
    inverse_by_search,
    omega1,
    parse_element,
    power,
    power_formula,
    pth_power_image,
    pth_power_vector,
)

from conftest import P2_10, P2_11, P3_01, P3_10, P3_11

ALL = GroupParams.families(2) + GroupParams.families(3) + GroupParams.families(5)


def elements(params):
    return st.tuples(*[st.integers(0, params.p - 1)] * 8).map(lambda t: Element(t, params))


def E(params, text):
    return parse_element(params, text)


def test_params_validation():
    assert len(GroupParams.families(2)) == 3
    assert len(GroupParams.families(3)) == 4
    with pytest.raises(ValueError):
        GroupParams(3, (1, 2))
    with pytest.raises(ValueError):
        GroupParams(4, (1, 0))
    assert GroupParams(3, (4, 1)).lam == (1, 1)


def test_multiply_examples():
    for P in GroupParams.families(2):
        a1 = generators(P)[0]
        assert a1 * a1 == E(P, "0,0,0,0|1,0,0,0")
    a1, _, b1, _ = generators(P3_01)
    assert b1 * a1 == E(P3_01, "1,0,1,0|2,0,0,0")
    x = E(P3_01, "1,2,0,1|0,2,1,0")
    assert x * identity(P3_01) == x == identity(P3_01) * x


def test_params_mismatch():
    with pytest.raises(ParamsMismatch):
        generators(P3_01)[0] * generators(P3_11)[0]


@pytest.mark.parametrize("P", [P2_10, P2_11, P3_01, P3_10])
def test_inverse_matches_search(P):
    for g in generators(P):
        assert g.inverse() == inverse_by_search(g)
    assert identity(P).inverse() == identity(P)


def test_inverse_all_elements_p3():
    xs = A.all_elements(P3_11)
    assert A.is_identity(A.mul(P3_11, xs, A.inv(P3_11, xs))).all()
    assert A.is_identity(A.mul(P3_11, A.inv(P3_11, xs), xs)).all()


def test_power_examples():
    a1, _, b1, _ = generators(P3_01)
    assert power(a1, 0) == identity(P3_01)
    assert power(a1, 9).is_identity() and not power(a1, 3).is_identity()
    assert power(a1, 3) == commutator(a1, b1)
    assert power(a1 * b1, 2) == E(P3_01, "2,0,2,0|2,0,0,0")
    for n in (0, 2, 3, 9):
        assert power_formula(a1, n) == power(a1, n)
    assert power_formula(a1 * b1, 2) == power(a1 * b1, 2)


def test_power_formula_displayed_pth_power():
    P = P3_11
    x = E(P, "1,1,1,1|0,0,0,0")
    assert power_formula(x, 3) == E(P, "0,0,0,0|2,1,1,2")
    assert power(x, 3) == power_formula(x, 3)


def test_power_formula_central():
    z = E(P3_10, "0,0,0,0|1,2,0,1")
    for n in range(10):
        assert power_formula(z, n) == E(P3_10, "0,0,0,0|" + ",".join(str(n * c % 3) for c in (1, 2, 0, 1)))


@pytest.mark.parametrize("P", ALL, ids=str)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_power_formula_vs_power(P, data):
    x = data.draw(elements(P))
    n = data.draw(st.integers(0, 3 * P.p ** 2))
    assert power_formula(x, n) == power(x, n)


@pytest.mark.parametrize("P", ALL, ids=str)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_scalar_and_vectorised_agree(P, data):
    x, y = data.draw(elements(P)), data.draw(elements(P))
    n = data.draw(st.integers(0, 30))
    xa, ya = np.array(x.exps), np.array(y.exps)
    assert tuple(A.mul(P, xa, ya)) == (x * y).exps
    assert tuple(A.inv(P, xa)) == x.inverse().exps
    assert tuple(A.power(P, xa, n)) == power_formula(x, n).exps
    assert tuple(A.commutator(P, xa, ya)) == commutator(x, y).exps


@pytest.mark.parametrize("P", ALL, ids=str)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_associativity_sampled(P, data):
    x, y, z = (data.draw(elements(P)) for _ in range(3))
    assert (x * y) * z == x * (y * z)


def test_associativity_exhaustive_p2():
    T = A.multiplication_table(P2_11)
    n = len(T)
    for i in range(0, n, 17):
        assert (T[T[i][:, None], np.arange(n)[None, :]] == T[i][T]).all()


def test_encode_decode():
    xs = A.all_elements(P3_10)
    assert (A.encode(P3_10, xs) == np.arange(3 ** 8)).all()
    first = itertools.islice(scalar_elements(P3_10), 5)
    assert [e.exps for e in first] == [tuple(r) for r in xs[:5]]


def test_commutators():
    P = P3_01
    a1, a2, b1, b2 = generators(P)
    assert commutator(a1, a2).is_identity() and commutator(b1, b2).is_identity()
    assert commutator(a1, b1) == E(P, "0,0,0,0|1,0,0,0") == basic_commutator(P, 0, 0)
    assert commutator(a2, b2) == basic_commutator(P, 1, 1)


def test_commutator_closed_form_exhaustive_vectors():
    P = P3_10
    vs = A.all_vectors(3)
    x = np.concatenate([vs, np.zeros_like(vs)], axis=1)
    i, j = np.meshgrid(np.arange(81), np.arange(81), indexing="ij")
    c = A.commutator(P, x[i.ravel()], x[j.ravel()])
    assert not c[:, :4].any()
    assert (c[:, 4:] == A.commutator_central(P, vs[i.ravel()], vs[j.ravel()])).all()


def test_commute_criterion_examples():
    P = P3_01
    assert commute_criterion(P, (1, 2, 0, 1), (1, 2, 0, 1))
    assert not commute_criterion(P, (1, 0, 0, 0), (0, 0, 1, 0))
    assert commute_criterion(P, (1, 1, 0, 0), (2, 2, 0, 0))


def test_commute_criterion_exhaustive_p3():
    P = P3_11
    for v in all_vectors(3):
        x = from_vector(P, v)
        for w in all_vectors(3):
            truth = commutator(x, from_vector(P, w)).is_identity()
            assert commute_criterion(P, v, w) == truth == commute_cases(P, v, w)


def test_pth_power_image():
    assert pth_power_image(P3_11, (1, 1, 1, 1)) == (2, 1, 1, 2)
    assert pth_power_image(P3_11, (0, 0, 0, 0)) == (0, 0, 0, 0)
    assert pth_power_image(P3_10, (1, 2, 0, 0)) == (0, 0, 0, 0)


@pytest.mark.parametrize("P", GroupParams.families(3) + GroupParams.families(5), ids=str)
def test_pth_power_bijective_iff_lambda2(P):
    images = {pth_power_image(P, v) for v in all_vectors(P.p)}
    assert (len(images) == P.p ** 4) == (P.lam[1] != 0)


@pytest.mark.parametrize("P", GroupParams.families(2) + GroupParams.families(3), ids=str)
def test_pth_power_vector_matches_group(P):
    for v in all_vectors(P.p):
        assert power_formula(from_vector(P, v), P.p).central == pth_power_vector(P, v)


@pytest.mark.parametrize("P", [P3_01, P3_11, GroupParams(3, (2, 1))], ids=str)
def test_order_lemma(P):
    xs = A.all_elements(P)
    non_central = xs[xs[:, :4].any(-1)]
    assert len(non_central) == 6480
    cube = A.power_iterated(P, non_central, 3)
    assert not A.is_identity(cube).any()
    assert A.is_identity(A.power_iterated(P, cube, 3)).all()


def test_element_order():
    assert element_order(identity(P3_01)) == 1
    assert element_order(generators(P3_01)[0]) == 9
    a1, a2, _, _ = generators(P3_10)
    assert element_order(a1 * a2.inverse()) == 3


@pytest.mark.parametrize("P", GroupParams.families(2) + GroupParams.families(3), ids=str)
def test_center(P):
    z = center(P)
    assert z.order == P.p ** 4
    assert all(g.is_central() for g in z)
    xs = A.all_elements(P)
    derived = set()
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, len(xs), (2, 5000))
    for c in A.commutator(P, xs[i], xs[j]):
        derived.add(tuple(c))
    assert derived == {g.exps for g in z}
    gens = np.array([g.exps for g in generators(P)])
    # central elements commute with every generator
    zs = np.array([g.exps for g in z])
    assert A.is_identity(A.commutator(P, zs[:, None], gens[None])).all()


def test_omega1_examples():
    assert omega1(P3_01).order == 81
    assert omega1(P3_10).order == 243
    om = omega1(P2_11)
    assert om.order == 32
    a1, a2, _, b2 = generators(P2_11)
    assert set(om) == set(Subgroup.generated(P2_11, list(center(P2_11).generators) + [a1 * a2 * b2]))
    a1, a2, _, _ = generators(P3_10)
    assert set(omega1(P3_10)) == set(Subgroup.generated(P3_10, list(center(P3_10).generators) + [a1 * a2.inverse()]))


def test_subgroup_helpers():
    a1 = generators(P3_01)[0]
    c = cyclic(a1)
    assert c.order == 9 and c.is_closed() and a1 in c
    with pytest.raises(ValueError):
        Subgroup.from_members(P3_01, [identity(P3_01), a1])


def test_text_form():
    x = E(P3_10, "1,2,0,1|0,0,2,1")
    assert format_element(x) == "1,2,0,1|0,0,2,1"
    for bad in ("1,2,0|0,0,0,0", "1,2,0,1", "3,0,0,0|0,0,0,0", "a,b,c,d|0,0,0,0"):
        with pytest.raises(ValueError):
            parse_element(P3_10, bad)
