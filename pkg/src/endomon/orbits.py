"""Orbits of End(G) under conjugation by the central automorphisms star(f).

With e = e~ + g (e~ normalized, g central),

    star(f) o e o star(-f) = e~ + g + f o e~ - e~ o f,

so the orbit of e is a coset of the image of the linear map
F -> F V - W F, where V is the matrix of e on G/Z(G) and W the matrix of
e on Z(G).  Orbit lengths are therefore p^rank and constant on classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _arrays as A
from .census import enumerate_normalized, normalized_array, random_endos
from .endo import COMM_PAIRS, Endo, is_automorphism, normalize
from .fp import rank_mod_p
from .group import GroupParams, commutator_vector
from .report import Check, histogram_csv, markdown_table

IDENTITY_P3_EXPECTED = 128_608_722


def center_matrix(e: Endo) -> np.ndarray:
    """Matrix of e restricted to Z(G), columns indexed by commutator slots."""
    p = e.params.p
    vecs = [g.vector for g in e.images]
    cols = [commutator_vector(p, vecs[i], vecs[j]) for i, j in COMM_PAIRS]
    return np.array(cols, dtype=A.DTYPE).T % p


def conjugation_map(e: Endo) -> np.ndarray:
    """16x16 matrix of F -> F V - W F on row-major flattened F."""
    p = e.params.p
    V = np.array(normalize(e)[0].vector_matrix().rows, dtype=A.DTYPE)
    W = center_matrix(e)
    cols = []
    for a in range(4):
        for b in range(4):
            F = np.zeros((4, 4), dtype=A.DTYPE)
            F[a, b] = 1
            cols.append(((F @ V - W @ F) % p).ravel())
    return np.array(cols, dtype=A.DTYPE).T


def orbit_size_by_rank(e: Endo) -> int:
    return e.params.p ** rank_mod_p(conjugation_map(e).tolist(), e.params.p)


def abelianization_rank(e: Endo) -> int:
    """Rank of e on G/Z(G)."""
    return e.vector_matrix().rank()


def orbit_size_by_abelianization_rank(e: Endo) -> int:
    """p^(4 r) with r the rank on G/Z(G); 1 for automorphisms.

    Agrees with orbit_size_by_rank whenever e kills Z(G), e.g. for every
    endomorphism of G_(1,0).  Kept for comparison only.
    """
    if is_automorphism(e):
        return 1
    return e.params.p ** (4 * abelianization_rank(e))


def conjugate_batch(params: GroupParams, E, mats) -> np.ndarray:
    """star(F) o E o star(-F) for each matrix F in mats."""
    mats = A.as_array(mats)
    fwd = A.star(params, mats % params.p)
    back = A.star(params, (-mats) % params.p)
    return A.compose(params, fwd, A.compose(params, E, back))


def orbit_of(e: Endo, limit: Optional[int] = None) -> set[bytes]:
    """Orbit as a set of keys, closed under the 16 elementary conjugations.

    The elementary star(f) generate the whole group of central automorphisms,
    so breadth-first closure under them yields the full orbit.
    """
    params = e.params
    elem = np.zeros((16, 4, 4), dtype=A.DTYPE)
    for k in range(16):
        elem[k, k // 4, k % 4] = 1
    start = e.to_array()[None]
    seen = set(A.keys(start))
    frontier = start
    while len(frontier):
        E = np.repeat(frontier, 16, axis=0)
        M = np.tile(elem, (len(frontier), 1, 1))
        out = conjugate_batch(params, E, M)
        fresh = []
        for key, row in zip(A.keys(out), out):
            if key not in seen:
                seen.add(key)
                fresh.append(row)
        if limit is not None and len(seen) > limit:
            raise RuntimeError(f"orbit exceeds limit {limit}")
        frontier = np.array(fresh, dtype=A.DTYPE).reshape(-1, 4, 8)
    return seen


@dataclass(frozen=True)
class OrbitCensus:
    params: GroupParams
    histogram: dict  # orbit length -> number of orbits
    class_lengths: tuple = field(default=())
    method: str = "rank-formula"

    @property
    def total_orbits(self) -> int:
        return sum(self.histogram.values())

    @property
    def mass(self) -> int:
        return sum(k * v for k, v in self.histogram.items())

    def to_dict(self) -> dict:
        return {
            "p": self.params.p, "lambda": list(self.params.lam), "method": self.method,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "total_orbits": self.total_orbits, "end_order": self.mass,
        }

    def to_csv(self) -> str:
        return histogram_csv(self.histogram)

    def to_markdown(self) -> str:
        rows = [[k, v] for k, v in sorted(self.histogram.items())]
        rows.append(["total", self.total_orbits])
        return markdown_table(["orbit length", "orbits"], rows)


def orbit_census(params: GroupParams, endos=None, method: str = "rank-formula") -> OrbitCensus:
    """Orbit-length histogram over all of End(G).

    Lengths are constant on normalization classes, so one representative per
    class suffices; "explicit-closure" measures it by orbit_of instead.
    """
    if method not in ("rank-formula", "explicit-closure"):
        raise ValueError(f"unknown method {method!r}")
    endos = enumerate_normalized(params) if endos is None else endos
    p16 = params.p ** 16
    size = orbit_size_by_rank if method == "rank-formula" else (lambda e: len(orbit_of(e)))
    hist: dict[int, int] = {}
    lengths = []
    for e in endos:
        s = size(e)
        lengths.append(s)
        hist[s] = hist.get(s, 0) + p16 // s
    return OrbitCensus(params, dict(sorted(hist.items())), tuple(lengths), method)


def mass_check(oc: OrbitCensus, n_normalized: int) -> Check:
    expected = n_normalized * oc.params.p ** 16
    return Check(f"orbit mass {oc.params}", oc.mass == expected, expected=expected, computed=oc.mass)


def p3_identity_check() -> Check:
    """2*3^16 + 80*3^12 equals the quoted p = 3 total."""
    value = 2 * 3 ** 16 + 80 * 3 ** 12
    return Check("p=3 orbit total identity", value == IDENTITY_P3_EXPECTED,
                 expected=IDENTITY_P3_EXPECTED, computed=value)


def spot_check(params: GroupParams, n: int, seed: int, endos=None, limit: int = 100_000) -> Check:
    """Explicit orbit closure against the rank formula on random endomorphisms."""
    endos = enumerate_normalized(params) if endos is None else endos
    reps = normalized_array(endos)
    rng = np.random.default_rng(seed)
    X = random_endos(params, reps, n, rng)
    mismatches = []
    for row in X:
        e = Endo.from_array(params, row)
        closed = len(orbit_of(e, limit))
        ranked = orbit_size_by_rank(e)
        if closed != ranked:
            mismatches.append({"endo": str(e), "closure": closed, "rank": ranked})
    return Check(f"orbit closure vs rank formula {params}", not mismatches,
                 expected=0, computed=len(mismatches),
                 details={"samples": n, "seed": seed, "mismatches": mismatches[:5]})
