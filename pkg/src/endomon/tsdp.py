"""Two-sided semidirect products of finite monoids and the two models of End(G).

Monoid values are numpy batches (leading axis = batch) so the same code
checks a single product or a million sampled triples.  For the monoid
``M1 x M2`` with left and right actions of M2 on the additive M1,

    (m1, m2) * (n1, n2) = (m1 n2 + m2 n1, m2 n2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from . import _arrays as A
from .endo import Endo, is_automorphism, normalize
from .fp import FpMat4
from .group import GroupParams, generators
from .report import Check

EXHAUSTIVE_LIMIT = 10 ** 7


class ActionIncompatibility(ValueError):
    pass


class NotInModel(ValueError):
    pass


# -- monoids ---------------------------------------------------------------

@dataclass(frozen=True)
class FiniteMonoid:
    name: str
    op: Callable[[Any, Any], Any]
    identity: Callable[[int], Any]  # batch of n identities
    eq: Callable[[Any, Any], np.ndarray]
    sample: Callable[[Any, int], Any]  # (rng, n) -> batch
    size: int
    elements: Optional[Callable[[], Any]] = None  # full batch, small monoids only

    def check_axioms(self, n: int = 10_000, seed: int = 0, exhaustive: Optional[bool] = None) -> Check:
        """Two-sided identity and associativity, on all triples when small."""
        if exhaustive is None:
            exhaustive = self.elements is not None and self.size ** 3 <= EXHAUSTIVE_LIMIT
        if exhaustive:
            xs = self.elements()
            m = _len(xs)
            i, j, k = (a.ravel() for a in np.meshgrid(*(np.arange(m),) * 3, indexing="ij"))
            x, y, z = _take(xs, i), _take(xs, j), _take(xs, k)
            u = xs
        else:
            rng = np.random.default_rng(seed)
            x, y, z = self.sample(rng, n), self.sample(rng, n), self.sample(rng, n)
            u = x
        one = self.identity(_len(u))
        ident_fail = int((~self.eq(self.op(one, u), u)).sum() + (~self.eq(self.op(u, one), u)).sum())
        lhs = self.op(self.op(x, y), z)
        rhs = self.op(x, self.op(y, z))
        assoc_fail = int((~self.eq(lhs, rhs)).sum())
        return Check(
            f"monoid axioms: {self.name}",
            ident_fail == 0 and assoc_fail == 0,
            expected={"identity_failures": 0, "associativity_failures": 0},
            computed={"identity_failures": ident_fail, "associativity_failures": assoc_fail,
                      "triples": _len(x), "exhaustive": bool(exhaustive)},
        )


def _len(batch) -> int:
    return len(batch[0]) if isinstance(batch, tuple) else len(batch)


def _take(batch, idx):
    if isinstance(batch, tuple):
        return tuple(b[idx] for b in batch)
    return batch[idx]


def mat_monoid(p: int) -> FiniteMonoid:
    """Additive monoid of 4x4 matrices over F_p."""
    return FiniteMonoid(
        name=f"Mat4(F_{p})",
        op=lambda a, b: (a + b) % p,
        identity=lambda n: np.zeros((n, 4, 4), dtype=A.DTYPE),
        eq=lambda a, b: (a == b).all(axis=(-1, -2)),
        sample=lambda rng, n: rng.integers(0, p, (n, 4, 4)),
        size=p ** 16,
    )


def boolean_monoid() -> FiniteMonoid:
    """{0, 1} under multiplication."""
    return FiniteMonoid(
        name="{0,1}",
        op=lambda a, b: a * b,
        identity=lambda n: np.ones(n, dtype=A.DTYPE),
        eq=lambda a, b: a == b,
        sample=lambda rng, n: rng.integers(0, 2, n),
        size=2,
        elements=lambda: np.array([0, 1], dtype=A.DTYPE),
    )


# -- the semigroup S_p and its monoid S_p^1 --------------------------------

def sp_op(x, y, p: int) -> np.ndarray:
    """x . y = (x1 - x2) y."""
    x = np.asarray(x, dtype=A.DTYPE)
    y = np.asarray(y, dtype=A.DTYPE)
    return ((x[..., 0:1] - x[..., 1:2]) * y) % p


@dataclass(frozen=True)
class Sp1Element:
    """An element of S_p^1: the adjoined identity (vector None) or a vector."""

    vector: Optional[tuple[int, int, int, int]]
    p: int

    @classmethod
    def identity(cls, p: int) -> "Sp1Element":
        return cls(None, p)

    @property
    def is_identity(self) -> bool:
        return self.vector is None

    def __mul__(self, other: "Sp1Element") -> "Sp1Element":
        if self.is_identity:
            return other
        if other.is_identity:
            return self
        return Sp1Element(tuple(int(v) for v in sp_op(self.vector, other.vector, self.p)), self.p)

    def to_dict(self):
        return "1" if self.is_identity else list(self.vector)


# batched S_p^1 values: (flag, vec) with flag = 1 marking the adjoined identity
def sp1_op(p: int):
    def op(a, b):
        fa, xa = a
        fb, xb = b
        prod = sp_op(xa, xb, p)
        vec = np.where(fa[:, None] == 1, xb, np.where(fb[:, None] == 1, xa, prod))
        return (fa * fb, vec)
    return op


def _sp1_eq(a, b):
    fa, xa = a
    fb, xb = b
    return (fa == fb) & ((fa == 1) | (xa == xb).all(-1))


def sp1_monoid(p: int) -> FiniteMonoid:
    def elements():
        vs = A.all_vectors(p)
        flags = np.zeros(len(vs) + 1, dtype=A.DTYPE)
        flags[-1] = 1
        return (flags, np.concatenate([vs, np.zeros((1, 4), dtype=A.DTYPE)]))

    def sample(rng, n):
        flags = (rng.integers(0, p ** 4 + 1, n) == 0).astype(A.DTYPE)
        return (flags, rng.integers(0, p, (n, 4)) * (1 - flags[:, None]))

    return FiniteMonoid(
        name=f"S_{p}^1",
        op=sp1_op(p),
        identity=lambda n: (np.ones(n, dtype=A.DTYPE), np.zeros((n, 4), dtype=A.DTYPE)),
        eq=_sp1_eq,
        sample=sample,
        size=p ** 4 + 1,
        elements=elements,
    )


def sp_semigroup_associativity(p: int, n: int = 1_000_000, seed: int = 0) -> Check:
    """Associativity of S_p alone: exhaustive at p = 2, sampled otherwise."""
    if p == 2:
        vs = A.all_vectors(p)
        m = len(vs)
        i, j, k = (a.ravel() for a in np.meshgrid(*(np.arange(m),) * 3, indexing="ij"))
        x, y, z = vs[i], vs[j], vs[k]
    else:
        rng = np.random.default_rng(seed)
        x, y, z = (rng.integers(0, p, (n, 4)) for _ in range(3))
    bad = int((sp_op(sp_op(x, y, p), z, p) != sp_op(x, sp_op(y, z, p), p)).any(-1).sum())
    return Check(f"S_{p} associativity", bad == 0, expected=0,
                 computed=bad, details={"triples": len(x), "exhaustive": p == 2})


# -- two-sided semidirect products ------------------------------------------

@dataclass(frozen=True)
class TsdpInstance:
    name: str
    m1: FiniteMonoid  # additive
    m2: FiniteMonoid
    left: Callable[[Any, Any], Any]   # (m2, m1) -> m1
    right: Callable[[Any, Any], Any]  # (m1, m2) -> m1

    def product(self, a, b):
        m1, m2 = a
        n1, n2 = b
        return (self.m1.op(self.right(m1, n2), self.left(m2, n1)), self.m2.op(m2, n2))

    def identity(self, n: int):
        return (self.m1.identity(n), self.m2.identity(n))

    def eq(self, a, b) -> np.ndarray:
        return self.m1.eq(a[0], b[0]) & self.m2.eq(a[1], b[1])

    def sample(self, rng, n: int):
        return (self.m1.sample(rng, n), self.m2.sample(rng, n))

    @property
    def size(self) -> int:
        return self.m1.size * self.m2.size

    def as_monoid(self) -> FiniteMonoid:
        return FiniteMonoid(self.name, self.product, self.identity, self.eq, self.sample, self.size)

    def audit_actions(self, n: int = 2000, seed: int = 0) -> Check:
        """Both actions are by monoid endomorphisms and they commute."""
        rng = np.random.default_rng(seed)
        eq1, add = self.m1.eq, self.m1.op
        x, y = self.m1.sample(rng, n), self.m1.sample(rng, n)
        s, t = self.m2.sample(rng, n), self.m2.sample(rng, n)
        zero, one = self.m1.identity(n), self.m2.identity(n)
        L, R, mul = self.left, self.right, self.m2.op
        fails = {
            "left_additive": ~eq1(L(s, add(x, y)), add(L(s, x), L(s, y))),
            "left_zero": ~eq1(L(s, zero), zero),
            "left_hom": ~eq1(L(mul(s, t), x), L(s, L(t, x))),
            "left_unit": ~eq1(L(one, x), x),
            "right_additive": ~eq1(R(add(x, y), s), add(R(x, s), R(y, s))),
            "right_zero": ~eq1(R(zero, s), zero),
            "right_antihom": ~eq1(R(x, mul(s, t)), R(R(x, s), t)),
            "right_unit": ~eq1(R(x, one), x),
            "compatibility": ~eq1(R(L(s, x), t), L(s, R(x, t))),
        }
        counts = {k: int(v.sum()) for k, v in fails.items()}
        return Check(f"action axioms: {self.name}", not any(counts.values()),
                     expected=0, computed=counts, details={"samples": n, "seed": seed})


def make_instance(name, m1, m2, left, right, audit_samples: int = 2000) -> TsdpInstance:
    inst = TsdpInstance(name, m1, m2, left, right)
    check = inst.audit_actions(audit_samples)
    if not check.passed:
        raise ActionIncompatibility(f"{name}: {check.computed}")
    return inst


def build_commutative_model(p: int) -> TsdpInstance:
    """Mat4(F_p) with {0,1} acting by scalars on both sides."""
    scalar_left = lambda s, m: (s[:, None, None] * m) % p
    scalar_right = lambda m, s: (m * s[:, None, None]) % p
    return make_instance(f"Mat4(F_{p}) x {{0,1}}", mat_monoid(p), boolean_monoid(), scalar_left, scalar_right)


def sp1_left(p: int):
    """Non-identity elements act as the zero map."""
    def act(s, m):
        flag = s[0]
        return m * flag[:, None, None]
    return act


def sp1_right(p: int):
    """Column j of M.x is x_j (col1(M) - col2(M)); the identity acts trivially."""
    def act(m, s):
        flag, x = s
        diff = m[..., :, 0] - m[..., :, 1]
        moved = (diff[:, :, None] * x[:, None, :]) % p
        return np.where(flag[:, None, None] == 1, m, moved)
    return act


def build_exceptional_model(p: int) -> TsdpInstance:
    return make_instance(f"Mat4(F_{p}) x S_{p}^1", mat_monoid(p), sp1_monoid(p), sp1_left(p), sp1_right(p))


# -- the isomorphism alpha ---------------------------------------------------

def _cyclic_generator(params: GroupParams) -> np.ndarray:
    a1, a2, _, _ = generators(params)
    return np.array((a1 * a2.inverse()).exps, dtype=A.DTYPE)


def alpha_batch(params: GroupParams, E) -> tuple[np.ndarray, tuple]:
    """alpha on a batch of endomorphisms of G_(1,0)^(p).

    The normalized part is taken with images in the cyclic group
    <a1 a2^-1> (or the identity), which is what makes alpha multiplicative.
    """
    if params.lam != (1, 0):
        raise ValueError("alpha is defined for lambda = (1,0)")
    p = params.p
    E = A.as_array(E)
    n = len(E)
    V = A.vector_matrix(E) % p
    ident = (V == np.eye(4, dtype=A.DTYPE)).all(axis=(-1, -2))
    x = V[:, 0, :]
    expected = (np.array([1, p - 1, 0, 0])[None, :, None] * x[:, None, :]) % p
    cyclic = (V == expected).all(axis=(-1, -2))
    if not (ident | cyclic).all():
        bad = int(np.argmin(ident | cyclic))
        raise NotInModel(f"endomorphism {bad} of the batch is neither id-class nor cyclic")
    u = _cyclic_generator(params)
    reps = A.power(params, np.broadcast_to(u, (n, 4, 8)), x)
    reps = np.where(ident[:, None, None], A.identity_endo((n,)), reps)
    cent = A.mul(params, A.inv(params, reps), E)
    flags = ident.astype(A.DTYPE)
    vec = np.where(ident[:, None], 0, x)
    return A.central_matrix(cent) % p, (flags, vec)


def alpha_inverse_batch(params: GroupParams, mats, s) -> np.ndarray:
    p = params.p
    flags, x = s
    n = len(flags)
    u = _cyclic_generator(params)
    reps = A.power(params, np.broadcast_to(u, (n, 4, 8)), x)
    reps = np.where(flags[:, None, None] == 1, A.identity_endo((n,)), reps)
    return A.pointwise(params, reps, A.central_endo(mats))


def alpha(e: Endo) -> tuple[FpMat4, Sp1Element]:
    mats, (flags, vec) = alpha_batch(e.params, e.to_array()[None])
    p = e.params.p
    s = Sp1Element.identity(p) if flags[0] else Sp1Element(tuple(int(v) for v in vec[0]), p)
    return FpMat4(tuple(map(tuple, mats[0])), p), s


def alpha_commutative_batch(params: GroupParams, E) -> tuple[np.ndarray, np.ndarray]:
    """(matrix of the central part, 1 for automorphisms / 0 otherwise)."""
    p = params.p
    E = A.as_array(E)
    V = A.vector_matrix(E) % p
    ident = (V == np.eye(4, dtype=A.DTYPE)).all(axis=(-1, -2))
    zero = ~V.any(axis=(-1, -2))
    if not (ident | zero).all():
        raise NotInModel("endomorphism outside the id and zero classes")
    return A.central_matrix(E) % p, ident.astype(A.DTYPE)


def alpha_commutative(e: Endo) -> tuple[FpMat4, int]:
    norm, cent = normalize(e)
    V = norm.vector_matrix()
    if V == FpMat4.identity(e.params.p):
        return cent.mat, 1
    if V.is_zero():
        return cent.mat, 0
    raise NotInModel(str(e))


def _shifted_reps(params: GroupParams, reps: np.ndarray) -> np.ndarray:
    """Each representative with the zero shift and the 16 elementary ones."""
    p = params.p
    mats = [np.zeros((4, 4), dtype=A.DTYPE)]
    for i in range(4):
        for j in range(4):
            m = np.zeros((4, 4), dtype=A.DTYPE)
            m[i, j] = 1
            mats.append(m)
    mats = np.array(mats)
    out = A.pointwise(params, reps[:, None], A.central_endo(mats)[None])
    return out.reshape(-1, 4, 8)


def verify_alpha_isomorphism(params: GroupParams, sample: int, seed: int = 0,
                             endos=None, chunk: int = 50_000) -> Check:
    """alpha(x o y) = alpha(x) * alpha(y) on structured and random pairs."""
    from .census import enumerate_normalized, normalized_array, random_endos

    p = params.p
    endos = enumerate_normalized(params) if endos is None else endos
    reps = normalized_array(endos)
    if params.lam == (1, 0):
        inst = build_exceptional_model(p)
        fwd = lambda E: alpha_batch(params, E)
    elif params.is_end_commutative_family:
        inst = build_commutative_model(p)
        fwd = lambda E: alpha_commutative_batch(params, E)
    else:
        raise ValueError(f"no monoid model for {params}")

    def count(X, Y):
        bad = 0
        for s in range(0, len(X), chunk):
            x, y = X[s:s + chunk], Y[s:s + chunk]
            lhs = fwd(A.compose(params, x, y))
            rhs = inst.product(fwd(x), fwd(y))
            bad += int((~inst.eq(lhs, rhs)).sum())
        return bad

    structured_pairs = 0
    bad_structured = 0
    if p == 2:
        R = _shifted_reps(params, reps)
        i, j = (a.ravel() for a in np.meshgrid(np.arange(len(R)), np.arange(len(R)), indexing="ij"))
        bad_structured = count(R[i], R[j])
        structured_pairs = len(i)
    rng = np.random.default_rng(seed)
    X = random_endos(params, reps, sample, rng)
    Y = random_endos(params, reps, sample, rng)
    bad_random = count(X, Y)

    # identity, and round trip on the sampled endos
    one = fwd(A.identity_endo((1,)))
    ident_ok = bool(inst.eq(one, inst.identity(1))[0])
    roundtrip_ok = True
    if params.lam == (1, 0):
        m, s = alpha_batch(params, X[:chunk])
        roundtrip_ok = bool((alpha_inverse_batch(params, m, s) == X[:chunk]).all())
        # order count: |End| = |Mat4| * |S_p^1|
        bij = len(endos) * p ** 16 == inst.size
    else:
        bij = len(endos) * p ** 16 == inst.size
    ok = bad_structured == 0 and bad_random == 0 and ident_ok and roundtrip_ok and bij
    return Check(
        f"alpha is a monoid isomorphism onto {inst.name} ({params})",
        ok,
        expected={"failures": 0, "model_order": inst.size},
        computed={"failures": bad_structured + bad_random, "end_order": len(endos) * p ** 16,
                  "identity_preserved": ident_ok, "round_trip": roundtrip_ok},
        details={"structured_pairs": structured_pairs, "random_pairs": sample, "seed": seed},
    )


def tsdp_product(inst: TsdpInstance, a, b):
    """Product of two single elements given as (m1, m2) pairs of unbatched values."""
    wrap = lambda v: tuple(np.asarray(c)[None] for c in v) if isinstance(v, tuple) else np.asarray(v)[None]
    out = inst.product((wrap(a[0]), wrap(a[1])), (wrap(b[0]), wrap(b[1])))
    unwrap = lambda v: tuple(c[0] for c in v) if isinstance(v, tuple) else v[0]
    return unwrap(out[0]), unwrap(out[1])
