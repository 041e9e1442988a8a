import numpy as np
import pytest

from endomon import _arrays as A
from endomon.census import (
    PRINTED_TABLE,
    BudgetExceeded,
    build_exceptional_table,
    census,
    center_shortcut_holds,
    classify,
    enumerate_normalized,
    find_noncommuting_pair,
    no_section_solutions,
    normalized_array,
    published_witness,
    phi_table_endos,
    quotient_is_s3,
    shift_matrices,
    verify_exceptional_theorem,
    verify_no_tsdp_section,
    verify_theorem1,
    verify_theorem2,
    witness_defect,
)
from endomon.endo import compose, elementary_central_homs, identity_endo, maps_into_center, normalize, validate
from endomon.fp import FpMat4
from endomon.group import GroupParams, basic_commutator, generators

from conftest import P2_01, P2_10, P2_11, P3_01, P3_10, P3_11, P3_21, normalized_endos


@pytest.mark.parametrize("P,count", [(P2_01, 2), (P2_10, 17), (P2_11, 23), (P3_10, 82),
                                     (P3_01, 2), (P3_11, 2), (P3_21, 2)], ids=str)
def test_normalized_counts(P, count):
    endos = normalized_endos(P)
    assert len(endos) == count
    assert all(validate(e.images) for e in endos)
    keys = [e.to_array().ravel().tolist() for e in endos]
    assert keys == sorted(keys)


@pytest.mark.parametrize("P", [P2_10, P2_11, P2_01], ids=str)
def test_pruned_matches_unpruned(P):
    assert enumerate_normalized(P, pruned=False) == normalized_endos(P)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        enumerate_normalized(P3_01, budget=10 ** 6, pruned=False)


def test_worker_count_does_not_change_output():
    assert enumerate_normalized(P3_10, workers=3) == normalized_endos(P3_10)


def test_p5_staged_enumeration():
    endos = enumerate_normalized(GroupParams(5, (0, 1)))
    assert len(endos) == 2


@pytest.mark.parametrize("P", [P2_01, P3_01, P3_11, P3_21], ids=str)
def test_end_commutative_classes(P):
    kinds = sorted(classify(e) for e in normalized_endos(P))
    assert kinds == ["central", "identity"]
    for e in normalized_endos(P):
        assert e == identity_endo(P) or maps_into_center(e)


def test_center_shortcut():
    assert center_shortcut_holds(normalized_endos(P3_01))
    assert not center_shortcut_holds(normalized_endos(P2_10))
    assert not center_shortcut_holds(normalized_endos(P2_11))


def test_census_report():
    rep = census(P2_10)
    assert rep.normalized_count == 17 == sum(rep.class_kinds.values())
    assert rep.witnesses is not None
    assert "elapsed" not in rep.to_dict()


def test_theorem1_small():
    check = verify_theorem1(P3_11, seed=5, samples=2000)
    assert check.passed
    with pytest.raises(ValueError):
        verify_theorem1(P2_11, seed=5, samples=10)


@pytest.mark.parametrize("P", [P2_10, P3_10, P2_11], ids=str)
def test_theorem2(P):
    assert verify_theorem2(P, normalized_endos(P)).passed


def test_no_pair_when_commutative():
    assert find_noncommuting_pair(P3_01, normalized_endos(P3_01)) is None


def test_published_witness_defect():
    for P in (P2_10, P3_10):
        left, right, defect = witness_defect(P)
        assert left != right
        assert defect.is_central() and not defect.is_identity()
    phi, fs = published_witness(P2_11)
    a1, a2, _, b2 = generators(P2_11)
    assert phi.images[0] == a1 * a2 * b2
    assert compose(phi, fs) != compose(fs, phi)


def test_exceptional_theorem():
    for P in (P2_10, P3_10):
        assert verify_exceptional_theorem(P, normalized_endos(P)).passed


def test_table_cells():
    table = build_exceptional_table()
    assert table.comp[1][0] == (3, "0")
    assert table.comp[0][3] == (1, "M3")
    assert table.comp[0][0] == (5, "M1")
    assert tuple(map(tuple, table.comp)) == PRINTED_TABLE
    assert all(validate(e.images) for e in phi_table_endos())
    assert quotient_is_s3(table).passed


def test_shift_matrices():
    M = shift_matrices()
    assert M["M3"] == M["M1"] + M["M2"]
    for m in M.values():
        assert all(c in ((0, 0, 0, 0), (1, 1, 0, 1)) for c in m.columns)


def test_phis_are_the_other_classes():
    endos = set(normalized_endos(P2_11))
    phis = set(phi_table_endos())
    assert phis <= endos
    rest = endos - phis
    assert len(rest) == 17
    assert all(e.vector_matrix().rank() <= 1 or e == identity_endo(P2_11) for e in rest)


def test_no_section():
    check = verify_no_tsdp_section()
    assert check.passed
    phi4 = phi_table_endos()[3]
    assert no_section_solutions(FpMat4.zero(2), phi4) > 0
    _, cent = normalize(compose(phi4, phi4))
    assert cent.mat == shift_matrices()["M3"]
    assert no_section_solutions(cent.mat, phi4) == 0


@pytest.mark.parametrize("P", [P2_10, P2_11], ids=str)
def test_class_invariance(P):
    """The class of x o y only depends on the classes of x and y."""
    reps = normalized_array(normalized_endos(P))
    shifts = [np.zeros((4, 4), dtype=np.int64)] + [np.array(f.mat.rows) for f in elementary_central_homs(P)]
    base = A.normalize(A.compose(P, reps[:, None], reps[None]))[0]
    for s in shifts[1:]:
        for t in shifts[::4]:
            X = A.pointwise(P, reps, A.central_endo(s))
            Y = A.pointwise(P, reps, A.central_endo(t))
            got = A.normalize(A.compose(P, X[:, None], Y[None]))[0]
            assert (got == base).all()
