import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endomon import _arrays as A
from endomon.census import normalized_array, random_endos
from endomon.endo import (
    CentralHom,
    Endo,
    InvalidEndomorphism,
    NotCentral,
    add,
    apply,
    compose,
    elementary_central_homs,
    format_endo,
    identity_endo,
    image_size,
    is_automorphism,
    is_normalized,
    maps_into_center,
    normalize,
    parse_central_hom,
    parse_endo,
    star,
    validate,
    zero_endo,
)
from endomon.fp import FpMat4
from endomon.group import GroupParams, generators, identity, parse_element, power

from conftest import P2_10, P2_11, P3_01, P3_10, P3_11, normalized_endos

FAMILIES = GroupParams.families(2) + GroupParams.families(3)


def u_endo(P):
    a1, a2, _, _ = generators(P)
    u = a1 * a2.inverse()
    return Endo((u,) * 4), u


def hom(P, seed):
    rng = np.random.default_rng(seed)
    return CentralHom(FpMat4(tuple(map(tuple, rng.integers(0, P.p, (4, 4)))), P.p), P)


def test_validate_examples():
    assert validate(generators(P3_01))
    phi, _ = u_endo(P2_10)
    assert validate(phi.images)
    a1, a2, _, _ = generators(P3_01)
    one = identity(P3_01)
    assert not validate((a2, one, one, one))
    with pytest.raises(InvalidEndomorphism):
        Endo((a2, one, one, one))


def test_apply_examples():
    phi, u = u_endo(P2_10)
    a1, _, b1, _ = generators(P2_10)
    assert apply(phi, a1 * b1) == power(u, 2)
    phi3, u3 = u_endo(P3_10)
    a1, _, b1, _ = generators(P3_10)
    assert apply(phi3, a1 * b1) == power(u3, 2)
    x = parse_element(P3_10, "1,2,0,1|0,2,1,1")
    assert apply(identity_endo(P3_10), x) == x
    assert apply(zero_endo(P3_10), x).is_identity()


@pytest.mark.parametrize("P", [P2_10, P2_11, P3_10, P3_01], ids=str)
def test_apply_is_homomorphism(P, rng):
    reps = normalized_array(normalized_endos(P))
    E = random_endos(P, reps, 40, rng)
    xs = A.all_elements(P)
    n = 3000 if P.p == 3 else len(xs)
    i, j = rng.integers(0, len(xs), (2, n))
    x, y = xs[i], xs[j]
    for e in E:
        lhs = A.apply(P, e, A.mul(P, x, y))
        rhs = A.mul(P, A.apply(P, e, x), A.apply(P, e, y))
        assert (lhs == rhs).all()


@pytest.mark.parametrize("P", [P2_11, P3_10], ids=str)
def test_scalar_and_vectorised_compose(P, rng):
    reps = normalized_array(normalized_endos(P))
    X = random_endos(P, reps, 50, rng)
    Y = random_endos(P, reps, 50, rng)
    Z = A.compose(P, X, Y)
    assert A.validate(P, Z).all()
    for x, y, z in zip(X, Y, Z):
        ex, ey = Endo.from_array(P, x), Endo.from_array(P, y)
        assert validate(ex.images) and validate(ey.images)
        assert (compose(ex, ey).to_array() == z).all()


def test_vectorised_validate_agrees(rng):
    P = P2_11
    cand = rng.integers(0, 2, (3000, 4, 8))
    cand[:, :, 4:] = 0
    fast = A.validate(P, cand)
    slow = [validate(Endo.from_array(P, c).images) for c in cand]
    assert list(fast) == slow


def test_compose_and_sum_examples():
    phi, _ = u_endo(P2_10)
    assert compose(identity_endo(P2_10), phi) == phi
    assert add(phi, CentralHom.zero(P2_10)) == phi
    assert compose(phi, phi) == zero_endo(P2_10)
    with pytest.raises(NotCentral):
        add(phi, identity_endo(P2_10))


def test_star_examples():
    P = P3_10
    assert star(CentralHom.zero(P)) == identity_endo(P)
    f = CentralHom(FpMat4.from_columns([(1, 0, 0, 0), (0,) * 4, (0,) * 4, (0,) * 4], 3), P)
    a1 = generators(P)[0]
    assert star(f).images[0] == parse_element(P, "1,0,0,0|1,0,0,0")
    assert star(f)(a1) == a1 * parse_element(P, "0,0,0,0|1,0,0,0")


@pytest.mark.parametrize("P", [P2_11, P3_10, P3_01], ids=str)
def test_star_additive(P):
    homs = elementary_central_homs(P) + [hom(P, s) for s in range(20)]
    for f in homs[::3]:
        for g in homs[1::4]:
            assert compose(star(f), star(g)) == star(f + g)
            assert is_automorphism(star(f))


@pytest.mark.parametrize("P", [P2_10, P3_11], ids=str)
def test_central_values_compose_trivially(P):
    for s in range(10):
        f, g = hom(P, s).as_endo(), hom(P, s + 100).as_endo()
        assert compose(f, g) == zero_endo(P)
        h = hom(P, s + 200)
        assert compose(star(h), f) == f == compose(f, star(h))


def test_star_has_order_dividing_p():
    P = P3_10
    for s in range(10):
        f = hom(P, s)
        e = star(f)
        assert compose(e, compose(e, e)) == identity_endo(P)


def test_aut_count_p2():
    P = P2_11
    from endomon.census import _all_binary_mats

    S = A.star(P, _all_binary_mats())
    assert len(set(A.keys(S))) == 2 ** 16
    assert (np.linalg.matrix_rank(A.vector_matrix(S).astype(float)) == 4).all()


def test_normalize_examples():
    P = P3_10
    f = hom(P, 3)
    norm, cent = normalize(star(f))
    assert norm == identity_endo(P) and cent == f
    norm, cent = normalize(zero_endo(P))
    assert norm == zero_endo(P) and cent.mat.is_zero()


@pytest.mark.parametrize("P", [P2_10, P2_11, P3_10], ids=str)
def test_normalize_round_trip(P, rng):
    reps = normalized_array(normalized_endos(P))
    for row in random_endos(P, reps, 200, rng):
        e = Endo.from_array(P, row)
        norm, cent = normalize(e)
        assert is_normalized(norm) and validate(norm.images)
        assert add(norm, cent) == e


def test_normalize_bijective_p2():
    P = P2_10
    reps = normalized_array(normalized_endos(P))
    from endomon.census import _all_binary_mats

    mats = _all_binary_mats()[::97]
    full = A.pointwise(P, reps[:, None], A.central_endo(mats)[None]).reshape(-1, 4, 8)
    assert A.validate(P, full).all()
    assert len(set(A.keys(full))) == len(full)
    norm, cent = A.normalize(full)
    assert (A.pointwise(P, norm, A.central_endo(cent)) == full).all()


def test_is_automorphism_examples():
    P = P3_10
    assert is_automorphism(identity_endo(P))
    assert is_automorphism(star(hom(P, 1)))
    assert not is_automorphism(zero_endo(P))


@pytest.mark.parametrize("P", [P2_10, P2_11, P3_10], ids=str)
def test_is_automorphism_matches_image_size(P, rng):
    reps = normalized_array(normalized_endos(P))
    for row in random_endos(P, reps, 25, rng):
        e = Endo.from_array(P, row)
        assert is_automorphism(e) == (image_size(e) == P.order)


def test_maps_into_center():
    P = P3_01
    assert maps_into_center(hom(P, 0).as_endo())
    assert not maps_into_center(identity_endo(P))


def test_text_forms():
    P = P2_10
    phi, _ = u_endo(P)
    assert parse_endo(P, format_endo(phi)) == phi
    f = parse_central_hom(P, "1000010000100001")
    assert f.mat == FpMat4.identity(2)
    with pytest.raises(ValueError):
        parse_endo(P, "0,0,0,0|0,0,0,0")


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_class_shift_preserves_validity(seed):
    P = P2_11
    rng = np.random.default_rng(seed)
    reps = normalized_array(normalized_endos(P))
    e = random_endos(P, reps, 1, rng)
    assert A.validate(P, e).all()
