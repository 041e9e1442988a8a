import numpy as np
import pytest

from endomon import _arrays as A
from endomon.census import random_endos, normalized_array
from endomon.endo import CentralHom, Endo, compose, identity_endo, star, zero_endo
from endomon.fp import FpMat4
from endomon.group import generators
from endomon.tsdp import (
    ActionIncompatibility,
    NotInModel,
    Sp1Element,
    alpha,
    alpha_batch,
    alpha_commutative,
    alpha_inverse_batch,
    boolean_monoid,
    build_commutative_model,
    build_exceptional_model,
    make_instance,
    mat_monoid,
    sp1_monoid,
    sp_op,
    sp_semigroup_associativity,
    tsdp_product,
    verify_alpha_isomorphism,
)

from conftest import P2_01, P2_10, P2_11, P3_01, P3_10, normalized_endos


def test_sp_op_examples():
    assert sp_op((2, 1, 0, 0), (1, 1, 1, 1), 3).tolist() == [1, 1, 1, 1]
    assert not sp_op((2, 2, 1, 0), (1, 2, 0, 1), 3).any()


def test_sp1_identity():
    one = Sp1Element.identity(3)
    x = Sp1Element((1, 0, 2, 2), 3)
    assert one * x == x == x * one
    assert (x * x).vector == (1, 0, 2, 2)
    assert one.to_dict() == "1"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_sp_associativity(p):
    assert sp_semigroup_associativity(p, 20_000, seed=3).passed


def test_sp1_axioms_exhaustive_p2():
    check = sp1_monoid(2).check_axioms(exhaustive=True)
    assert check.passed
    assert check.computed["exhaustive"] and check.computed["triples"] == 17 ** 3


def test_small_monoids():
    assert boolean_monoid().check_axioms().passed
    assert mat_monoid(3).check_axioms(5000, seed=1).passed


def _mats(*rows):
    return np.array(rows, dtype=A.DTYPE)


def test_commutative_model_products():
    inst = build_commutative_model(2)
    M = np.eye(4, dtype=A.DTYPE)
    N = np.ones((4, 4), dtype=A.DTYPE)
    m, s = tsdp_product(inst, (M, 1), (N, 0))
    assert (m == N).all() and s == 0
    m, s = tsdp_product(inst, (M, 0), (N, 0))
    assert not m.any() and s == 0
    m, s = tsdp_product(inst, (M, 1), (np.zeros((4, 4), dtype=A.DTYPE), 1))
    assert (m == M).all() and s == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_models_audit(p):
    assert build_commutative_model(p).audit_actions(3000, seed=p).passed
    assert build_exceptional_model(p).audit_actions(3000, seed=p).passed
    assert build_exceptional_model(p).as_monoid().check_axioms(3000, seed=p, exhaustive=False).passed


def test_exceptional_model_identity():
    inst = build_exceptional_model(3)
    rng = np.random.default_rng(0)
    a = inst.sample(rng, 500)
    one = inst.identity(500)
    assert inst.eq(inst.product(a, one), a).all()
    assert inst.eq(inst.product(one, a), a).all()


def test_incompatible_actions_rejected():
    p = 3
    left = lambda s, m: (2 * m) % p          # not unital
    right = lambda m, s: (m * s[:, None, None]) % p
    with pytest.raises(ActionIncompatibility):
        make_instance("bad", mat_monoid(p), boolean_monoid(), left, right)


def test_alpha_examples():
    for P in (P2_10, P3_10):
        m, s = alpha(identity_endo(P))
        assert m.is_zero() and s.is_identity
        f = CentralHom(FpMat4(((1, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0), (0, 0, 0, 0)), P.p), P)
        m, s = alpha(star(f))
        assert m == f.mat and s.is_identity
        a1, a2, _, _ = generators(P)
        u = a1 * a2.inverse()
        m, s = alpha(Endo((u,) * 4))
        assert m.is_zero() and s.vector == (1, 1, 1, 1)
        m, s = alpha(zero_endo(P))
        assert m.is_zero() and s.vector == (0, 0, 0, 0)


def test_alpha_not_in_model():
    with pytest.raises(ValueError):
        alpha_batch(P2_11, identity_endo(P2_11).to_array()[None])
    with pytest.raises(NotInModel):
        alpha_commutative(normalized_endos(P2_10)[5])


def test_alpha_commutative_examples():
    assert alpha_commutative(identity_endo(P3_01)) == (FpMat4.zero(3), 1)
    assert alpha_commutative(zero_endo(P3_01)) == (FpMat4.zero(3), 0)


@pytest.mark.parametrize("P", [P2_10, P3_10], ids=str)
def test_alpha_round_trip_and_hom(P, rng):
    reps = normalized_array(normalized_endos(P))
    X = random_endos(P, reps, 300, rng)
    Y = random_endos(P, reps, 300, rng)
    m, s = alpha_batch(P, X)
    assert (alpha_inverse_batch(P, m, s) == X).all()
    inst = build_exceptional_model(P.p)
    lhs = alpha_batch(P, A.compose(P, X, Y))
    rhs = inst.product(alpha_batch(P, X), alpha_batch(P, Y))
    assert inst.eq(lhs, rhs).all()


def test_alpha_scalar_matches_batch():
    for e in normalized_endos(P3_10)[:20]:
        m, s = alpha(e)
        mb, (fb, vb) = alpha_batch(P3_10, e.to_array()[None])
        assert m.rows == tuple(map(tuple, mb[0]))
        assert s.is_identity == bool(fb[0])


@pytest.mark.parametrize("P", [P2_10, P2_01, P3_01], ids=str)
def test_verify_alpha_small(P):
    assert verify_alpha_isomorphism(P, 2000, seed=7, endos=normalized_endos(P)).passed


def test_composition_order_convention():
    """alpha(x o y) = alpha(x) alpha(y), not the reversed product."""
    P = P2_10
    a1, a2, _, _ = generators(P)
    u = a1 * a2.inverse()
    x = Endo((u,) * 4)
    f = CentralHom(FpMat4(((1, 0, 0, 0),) + ((0, 0, 0, 0),) * 3, 2), P)
    y = star(f)
    inst = build_exceptional_model(2)
    X, Y = x.to_array()[None], y.to_array()[None]
    got = alpha_batch(P, compose(x, y).to_array()[None])
    assert inst.eq(got, inst.product(alpha_batch(P, X), alpha_batch(P, Y))).all()
