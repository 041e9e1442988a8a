"""Enumeration of normalized endomorphisms and the theorems that rest on it.

A normalized endomorphism sends each generator to an element with trivial
commutator exponents, so it is fixed by four vectors v1..v4 in F_p^4.  The
defining relations only see these vectors:

    [v1, v2] = 0              [v3, v4] = 0
    P(v1) = [v1, v3]          P(v2) = [v1, lam1 v3 + lam2 v4]
    P(v3) = [v2, v3 + v4]     P(v4) = [v2, v4]

where P is the p-th power map into the centre and [.,.] the commutator form.
The pruned search fixes (v1, v3) first, then filters v2 and v4 separately
before checking the coupled relations on the surviving grid.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _arrays as A
from .endo import (
    CentralHom,
    Endo,
    compose,
    constant_endo,
    elementary_central_homs,
    format_endo,
    identity_endo,
    is_automorphism,
    maps_into_center,
    normalize,
    star,
    validate,
)
from .fp import FpMat4
from .group import (
    GroupParams,
    basic_commutator,
    from_vector,
    generators,
    identity,
)
from .report import Check, markdown_table

DEFAULT_BUDGET = 50_000_000


class BudgetExceeded(RuntimeError):
    pass


class TableMismatch(AssertionError):
    pass


def default_workers() -> int:
    env = os.environ.get("ENDOMON_THREADS")
    return max(1, int(env)) if env else 1


def _solve_prefix(params: GroupParams, vecs: np.ndarray, i1: int) -> list[tuple]:
    """All solutions with v1 = vecs[i1]."""
    p = params.p
    l1, l2 = params.lam
    v1 = vecs[i1]
    P = lambda v: A.pth_power_central(params, v)
    C = lambda v, w: A.commutator_central(params, v, w)
    ok3 = (C(v1, vecs) == P(v1)).all(-1)
    v2_all = vecs[~C(v1, vecs).any(-1)]
    P2 = P(v2_all)
    out = []
    for v3 in vecs[ok3]:
        v4s = vecs[~C(v3, vecs).any(-1)]
        # grid over (v2, v4)
        V2 = v2_all[:, None, :]
        V4 = v4s[None, :, :]
        ok = (P2[:, None, :] == C(v1, (l1 * v3 + l2 * V4) % p)).all(-1)
        ok &= (P(v3) == C(V2, (v3 + V4) % p)).all(-1)
        ok &= (P(V4) == C(V2, V4)).all(-1)
        for a, b in zip(*np.nonzero(ok)):
            out.append((tuple(v1), tuple(v2_all[a]), tuple(v3), tuple(v4s[b])))
    return out


def _to_endo(params: GroupParams, vs) -> Endo:
    return Endo._trusted(from_vector(params, v) for v in vs)


def enumerate_normalized(
    params: GroupParams,
    budget: Optional[int] = None,
    *,
    pruned: bool = True,
    workers: Optional[int] = None,
) -> list[Endo]:
    """Every normalized endomorphism, sorted by image tuple.

    ``pruned=False`` validates all p^16 assignments through group operations;
    it refuses to run past ``budget`` candidates.
    """
    p = params.p
    vecs = A.all_vectors(p)
    if not pruned:
        total = p ** 16
        budget = DEFAULT_BUDGET if budget is None else budget
        if total > budget:
            raise BudgetExceeded(f"{total} candidates exceed budget {budget}")
        return _enumerate_unpruned(params, vecs)
    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            chunks = list(ex.map(lambda i: _solve_prefix(params, vecs, i), range(len(vecs))))
    else:
        chunks = [_solve_prefix(params, vecs, i) for i in range(len(vecs))]
    sols = sorted(s for chunk in chunks for s in chunk)
    return [_to_endo(params, s) for s in sols]


def _enumerate_unpruned(params: GroupParams, vecs: np.ndarray) -> list[Endo]:
    n = len(vecs)
    found = []
    idx34 = np.stack(np.meshgrid(np.arange(n), np.arange(n), indexing="ij"), -1).reshape(-1, 2)
    for i1 in range(n):
        for i2 in range(n):
            E = np.zeros((len(idx34), 4, 8), dtype=A.DTYPE)
            E[:, 0, :4] = vecs[i1]
            E[:, 1, :4] = vecs[i2]
            E[:, 2, :4] = vecs[idx34[:, 0]]
            E[:, 3, :4] = vecs[idx34[:, 1]]
            for k in np.nonzero(A.validate(params, E))[0]:
                found.append(tuple(tuple(int(x) for x in E[k, j, :4]) for j in range(4)))
    return [_to_endo(params, s) for s in sorted(found)]


def normalized_array(endos) -> np.ndarray:
    return np.stack([e.to_array() for e in endos])


def classify(e: Endo) -> str:
    if e == identity_endo(e.params):
        return "identity"
    if maps_into_center(e):
        return "central"
    return "exceptional"


def center_shortcut_holds(endos) -> bool:
    """Whether every endo sending one generator into Z(G) sends all of them there."""
    for e in endos:
        flags = [g.is_central() for g in e.images]
        if any(flags) and not all(flags):
            return False
    return True


@dataclass
class CensusReport:
    params: GroupParams
    normalized_count: int
    class_kinds: dict
    witnesses: Optional[tuple] = None
    center_shortcut: Optional[bool] = None
    elapsed: float = 0.0
    endos: list = field(default_factory=list, repr=False)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "p": self.params.p,
            "lambda": list(self.params.lam),
            "normalized_count": self.normalized_count,
            "class_kinds": dict(self.class_kinds),
            "center_shortcut": self.center_shortcut,
            "witnesses": [format_endo(w) for w in self.witnesses] if self.witnesses else None,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def census(params: GroupParams, workers: Optional[int] = None, find_witness: bool = True) -> CensusReport:
    t0 = time.perf_counter()
    endos = enumerate_normalized(params, workers=workers)
    kinds = {"identity": 0, "central": 0, "exceptional": 0}
    for e in endos:
        kinds[classify(e)] += 1
    witnesses = find_noncommuting_pair(params, endos) if find_witness else None
    return CensusReport(
        params, len(endos), kinds, witnesses, center_shortcut_holds(endos),
        time.perf_counter() - t0, endos,
    )


# -- random full endomorphisms ----------------------------------------------

def random_endos(params: GroupParams, reps: np.ndarray, n: int, rng) -> np.ndarray:
    """n endomorphisms uniform over End(G): random class plus random central shift."""
    cls = rng.integers(0, len(reps), n)
    mats = rng.integers(0, params.p, (n, 4, 4))
    return A.pointwise(params, reps[cls], A.central_endo(mats))


def count_noncommuting(params: GroupParams, X: np.ndarray, Y: np.ndarray, chunk: int = 50_000) -> tuple[int, Optional[int]]:
    bad = 0
    first = None
    for s in range(0, len(X), chunk):
        xy = A.compose(params, X[s:s + chunk], Y[s:s + chunk])
        yx = A.compose(params, Y[s:s + chunk], X[s:s + chunk])
        diff = (xy != yx).any(axis=(-1, -2))
        if diff.any() and first is None:
            first = s + int(np.argmax(diff))
        bad += int(diff.sum())
    return bad, first


def verify_theorem1(params: GroupParams, seed: int = 0, samples: int = 1_000_000,
                    endos=None) -> Check:
    """Every normalized endo is id or central, and sampled endos commute."""
    if not params.is_end_commutative_family:
        raise ValueError(f"{params} is not covered by the commutativity theorem")
    endos = enumerate_normalized(params) if endos is None else endos
    kinds = [classify(e) for e in endos]
    structure_ok = all(k in ("identity", "central") for k in kinds)
    reps = normalized_array(endos)
    # class representatives with every elementary shift, exhaustively
    shifted = [reps]
    for f in elementary_central_homs(params):
        shifted.append(A.pointwise(params, reps, A.central_endo(np.array(f.mat.rows))))
    R = np.concatenate(shifted)
    ii, jj = np.meshgrid(np.arange(len(R)), np.arange(len(R)), indexing="ij")
    bad_reps, _ = count_noncommuting(params, R[ii.ravel()], R[jj.ravel()])
    rng = np.random.default_rng(seed)
    X = random_endos(params, reps, samples, rng)
    Y = random_endos(params, reps, samples, rng)
    bad_rand, _ = count_noncommuting(params, X, Y)
    return Check(
        f"commutativity theorem {params}",
        structure_ok and bad_reps == 0 and bad_rand == 0,
        expected={"normalized_count": 2, "noncommuting": 0, "end_order": 2 * params.p ** 16},
        computed={"normalized_count": len(endos), "noncommuting": bad_reps + bad_rand,
                  "end_order": len(endos) * params.p ** 16},
        details={"representative_pairs": int(len(R) ** 2), "random_pairs": samples, "seed": seed},
    )


def find_noncommuting_pair(params: GroupParams, endos=None) -> Optional[tuple[Endo, Endo]]:
    """First (phi, f*) with phi normalized, f elementary, that fail to commute."""
    endos = enumerate_normalized(params) if endos is None else endos
    reps = normalized_array(endos)
    stars = [star(f) for f in elementary_central_homs(params)]
    S = normalized_array(stars)
    X = np.repeat(reps, len(S), axis=0)
    Y = np.tile(S, (len(reps), 1, 1))
    bad, first = count_noncommuting(params, X, Y)
    if not bad:
        return None
    return endos[first // len(S)], stars[first % len(S)]


def published_witness(params: GroupParams) -> tuple[Endo, Endo]:
    """The published non-commuting pair, with f(a1) = [a1,b1].

    The printed value [a1,a2] is trivial in G, which would make the pair
    commute; any nontrivial central value restores the argument.
    """
    a1, a2, b1, b2 = generators(params)
    if params.lam == (1, 0):
        x = a1 * a2.inverse()
    elif params.p == 2 and params.lam == (1, 1):
        x = a1 * a2 * b2
    else:
        raise ValueError(f"no published witness for {params}")
    phi = constant_endo(x)
    cols = [(0, 0, 0, 0)] * 4
    cols[0] = basic_commutator(params, 0, 0).central
    f = CentralHom(FpMat4.from_columns(cols, params.p), params)
    return phi, star(f)


def witness_defect(params: GroupParams):
    """(phi o f*)(a1)^-1 (f* o phi)(a1) for the corrected published pair."""
    phi, fs = published_witness(params)
    a1 = generators(params)[0]
    left = compose(phi, fs).images[0]
    right = compose(fs, phi).images[0]
    return left, right, left.inverse() * right


def verify_theorem2(params: GroupParams, endos=None) -> Check:
    pair = find_noncommuting_pair(params, endos)
    left, right, defect = witness_defect(params)
    ok = pair is not None and defect.is_central() and not defect.is_identity()
    return Check(
        f"non-commutativity {params}",
        ok,
        expected={"pair_found": True, "witness_defect": "[a1,b1]"},
        computed={"pair_found": pair is not None, "witness_defect": str(defect),
                  "search_pair": [format_endo(e) for e in pair] if pair else None},
    )


def verify_exceptional_theorem(params: GroupParams, endos=None) -> Check:
    """Normalized endos of G_(1,0): identity plus the p^4 maps into <a1 a2^-1> Z(G)."""
    if params.lam != (1, 0):
        raise ValueError("only defined for lambda = (1,0)")
    p = params.p
    endos = enumerate_normalized(params) if endos is None else endos
    u = (1, p - 1, 0, 0)
    expected = {identity_endo(params)}
    for xs in np.ndindex(*(p,) * 4):
        expected.add(_to_endo(params, [tuple(x * c % p for c in u) for x in xs]))
    a1, a2, _, _ = generators(params)
    gen = a1 * a2.inverse()
    cyc = [gen ** k for k in range(p)]
    literal_ok = all(validate(tuple(cyc[x] for x in xs)) for xs in np.ndindex(*(p,) * 4))
    ok = set(endos) == expected and len(endos) == p ** 4 + 1 and literal_ok
    return Check(
        f"exceptional-family theorem {params}",
        ok,
        expected={"normalized_count": p ** 4 + 1},
        computed={"normalized_count": len(endos), "matches_cyclic_description": set(endos) == expected,
                  "maps_into_cyclic_subgroup_validate": literal_ok},
    )


# -- the G_(1,1)^(2) tables --------------------------------------------------

TABLE_PARAMS = GroupParams(2, (1, 1))

_NAMED = {"a2b1b2": (0, 1, 1, 1), "a1b2": (1, 0, 0, 1), "a1a2b1": (1, 1, 1, 0), "1": (0, 0, 0, 0)}

# images of a1, a2, b1, b2, as printed
PHI_IMAGES = (
    ("a2b1b2", "a2b1b2", "a1b2", "1"),
    ("a2b1b2", "a2b1b2", "a1a2b1", "1"),
    ("a1b2", "a1b2", "a2b1b2", "1"),
    ("a1b2", "a1b2", "a1a2b1", "1"),
    ("a1a2b1", "a1a2b1", "a2b1b2", "1"),
    ("a1a2b1", "a1a2b1", "a1b2", "1"),
)

# cell (i, j) = phi_i o phi_j as (index, shift), 1-based as printed
PRINTED_TABLE = (
    ((5, "M1"), (6, "M2"), (2, "M3"), (1, "M3"), (4, "M2"), (3, "M1")),
    ((3, "0"), (4, "M3"), (1, "0"), (2, "M3"), (6, "M1"), (5, "M1")),
    ((6, "0"), (5, "M3"), (4, "0"), (3, "M3"), (2, "M1"), (1, "M1")),
    ((1, "M1"), (2, "M2"), (3, "M3"), (4, "M3"), (5, "M2"), (6, "M1")),
    ((4, "M1"), (3, "M2"), (6, "M3"), (5, "M3"), (1, "M2"), (2, "M1")),
    ((2, "0"), (1, "M3"), (5, "0"), (6, "M3"), (3, "M1"), (4, "M1")),
)

SHIFT_COLUMN = (1, 1, 0, 1)


def phi_table_endos() -> list[Endo]:
    P = TABLE_PARAMS
    return [Endo(tuple(from_vector(P, _NAMED[n]) for n in row)) for row in PHI_IMAGES]


def shift_matrices() -> dict[str, FpMat4]:
    c, z = SHIFT_COLUMN, (0, 0, 0, 0)
    m1 = FpMat4.from_columns([c, c, z, z], 2)
    m2 = FpMat4.from_columns([c, c, c, z], 2)
    return {"0": FpMat4.zero(2), "M1": m1, "M2": m2, "M3": m1 + m2}


@dataclass
class ExceptionalTable:
    phis: list
    m1: FpMat4
    m2: FpMat4
    m3: FpMat4
    comp: tuple
    quotient: tuple
    permutations: tuple

    def to_dict(self) -> dict:
        return {
            "phis": [format_endo(e) for e in self.phis],
            "M1": self.m1.to_digits(), "M2": self.m2.to_digits(), "M3": self.m3.to_digits(),
            "composition": [[f"phi{k}+{s}" if s != "0" else f"phi{k}" for k, s in row] for row in self.comp],
            "quotient": [list(r) for r in self.quotient],
        }

    def markdown(self) -> str:
        names = {v: k for k, v in _NAMED.items()}
        rows = [[f"phi{i + 1}"] + [names[g.vector] for g in e.images] for i, e in enumerate(self.phis)]
        first = markdown_table(["endomorphism", "image of a1", "image of a2", "image of b1", "image of b2"], rows)
        rows = [[f"phi{i + 1}"] + [f"phi{k}" + (f"+{s}" if s != "0" else "") for k, s in row]
                for i, row in enumerate(self.comp)]
        second = markdown_table(["o"] + [f"phi{j + 1}" for j in range(6)], rows)
        return first + "\n" + second


def _class_vectors() -> list[tuple]:
    return [_NAMED["a1b2"], _NAMED["a1a2b1"], _NAMED["a2b1b2"]]


def _induced_permutation(e: Endo) -> tuple[int, ...]:
    vs = _class_vectors()
    M = e.vector_matrix()
    return tuple(vs.index(M.apply(v)) for v in vs)


def build_exceptional_table() -> ExceptionalTable:
    """Rebuild the composition table of phi_1..phi_6 and check it against print."""
    phis = phi_table_endos()
    shifts = shift_matrices()
    by_mat = {m: name for name, m in shifts.items()}
    comp = []
    for i, x in enumerate(phis):
        row = []
        for j, y in enumerate(phis):
            norm, cent = normalize(compose(x, y))
            if norm not in phis:
                raise TableMismatch(f"phi{i + 1} o phi{j + 1}: normalized part is not a phi")
            k = phis.index(norm) + 1
            name = by_mat.get(cent.mat)
            if (k, name) != PRINTED_TABLE[i][j]:
                raise TableMismatch(
                    f"cell phi{i + 1} o phi{j + 1}: computed phi{k}+{name or cent.mat.to_digits()}, "
                    f"printed phi{PRINTED_TABLE[i][j][0]}+{PRINTED_TABLE[i][j][1]}"
                )
            row.append((k, name))
        comp.append(tuple(row))
    quotient = tuple(tuple(k - 1 for k, _ in row) for row in comp)
    perms = tuple(_induced_permutation(e) for e in phis)
    return ExceptionalTable(phis, shifts["M1"], shifts["M2"], shifts["M3"], tuple(comp), quotient, perms)


def quotient_is_s3(table: ExceptionalTable) -> Check:
    """The class-level table is a group isomorphic to S3 with phi_4 neutral."""
    q = table.quotient
    n = len(q)
    neutral = [e for e in range(n) if all(q[e][x] == x and q[x][e] == x for x in range(n))]
    latin = all(sorted(r) == list(range(n)) for r in q) and all(
        sorted(q[i][j] for i in range(n)) == list(range(n)) for j in range(n))
    assoc = all(q[q[a][b]][c] == q[a][q[b][c]] for a in range(n) for b in range(n) for c in range(n))
    nonabelian = any(q[a][b] != q[b][a] for a in range(n) for b in range(n))
    perms = table.permutations
    compose_perm = lambda s, t: tuple(s[t[i]] for i in range(3))
    is_hom = all(perms[q[a][b]] == compose_perm(perms[a], perms[b]) for a in range(n) for b in range(n))
    bijective = len(set(perms)) == 6
    ok = neutral == [3] and latin and assoc and nonabelian and is_hom and bijective
    return Check(
        "class quotient is S3",
        ok,
        expected={"neutral": "phi4", "order": 6, "abelian": False},
        computed={"neutral": [f"phi{e + 1}" for e in neutral], "order": n, "abelian": not nonabelian,
                  "permutation_model_isomorphism": is_hom and bijective},
    )


def _all_binary_mats() -> np.ndarray:
    bits = (np.arange(1 << 16)[:, None] >> np.arange(15, -1, -1)) & 1
    return bits.reshape(-1, 4, 4).astype(A.DTYPE)


def no_section_solutions(shift: FpMat4, phi_neutral: Endo) -> int:
    """Number of F with F = shift + F V over all 2^16 matrices F."""
    F = _all_binary_mats()
    V = np.array(phi_neutral.vector_matrix().rows, dtype=A.DTYPE)
    S = np.array(shift.rows, dtype=A.DTYPE)
    ok = ((F - S - F @ V) % 2 == 0).all(axis=(-1, -2))
    return int(ok.sum())


def verify_no_tsdp_section() -> Check:
    phis = phi_table_endos()
    phi4 = phis[3]
    counts = []
    for x in phis:
        _, cent = normalize(compose(x, phi4))
        counts.append(no_section_solutions(cent.mat, phi4))
    control = no_section_solutions(FpMat4.zero(2), phi4)
    ok = all(c == 0 for c in counts) and control > 0
    return Check(
        "no two-sided semidirect section for G_(1,1)^(2)",
        ok,
        expected={"solutions_per_phi": [0] * 6, "control_has_solutions": True},
        computed={"solutions_per_phi": counts, "control_solutions": control, "candidates": 1 << 16},
    )
