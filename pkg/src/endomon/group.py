"""Arithmetic in the class-2 groups G_lambda^(p) of order p^8.

An element is stored as its normal form

    a1^k1 a2^k2 b1^l1 b2^l2 [a1,b1]^r1 [a1,b2]^r2 [a2,b1]^r3 [a2,b2]^r4

with every exponent in ``[0, p)``.  Commutators follow ``[x, y] = x^-1 y^-1 x y``.
The p-th powers of the generators are central:

    a1^p = [a1,b1]
    a2^p = [a1,b1]^lam1 [a1,b2]^lam2
    b1^p = [a2,b1][a2,b2]
    b2^p = [a2,b2]
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .fp import FpMat4, check_prime, inv_mod

# (a-index i, b-index j) -> slot of [a_i, b_j] in the central block
COMM_SLOT = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}


class ParamsMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GroupParams:
    p: int
    lam: tuple[int, int]

    def __post_init__(self):
        check_prime(self.p)
        lam = tuple(int(x) % self.p for x in self.lam)
        if len(lam) != 2:
            raise ValueError("lambda must be a pair")
        object.__setattr__(self, "lam", lam)
        if lam != (1, 0) and lam[1] != 1:
            raise ValueError(
                f"lambda={self.lam} is not admissible; use (1,0) or (x,1) with 0 <= x < p"
            )

    @classmethod
    def families(cls, p: int) -> list["GroupParams"]:
        """All p + 1 admissible parameter pairs, (1,0) first."""
        return [cls(p, (1, 0))] + [cls(p, (x, 1)) for x in range(p)]

    @cached_property
    def pvecs(self) -> tuple[tuple[int, ...], ...]:
        """Central exponent vectors of a1^p, a2^p, b1^p, b2^p."""
        l1, l2 = self.lam
        return ((1, 0, 0, 0), (l1, l2, 0, 0), (0, 0, 1, 1), (0, 0, 0, 1))

    @property
    def order(self) -> int:
        return self.p ** 8

    @property
    def is_end_commutative_family(self) -> bool:
        """True on the families where every endomorphism commutes."""
        if self.lam == (1, 0):
            return False
        return not (self.p == 2 and self.lam == (1, 1))

    def __str__(self) -> str:
        return f"p={self.p}, lambda=({self.lam[0]},{self.lam[1]})"


def _mul(p: int, pv, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    k1, k2, l1, l2, r1, r2, r3, r4 = x
    K1, K2, L1, L2, R1, R2, R3, R4 = y
    # move y's a-part left past x's b-part: b_j a_i = a_i b_j [a_i,b_j]^-1
    c = [r1 + R1 - l1 * K1, r2 + R2 - l2 * K1, r3 + R3 - l1 * K2, r4 + R4 - l2 * K2]
    g = [k1 + K1, k2 + K2, l1 + L1, l2 + L2]
    for i in range(4):
        if g[i] >= p:
            g[i] -= p
            v = pv[i]
            c[0] += v[0]
            c[1] += v[1]
            c[2] += v[2]
            c[3] += v[3]
    return (g[0], g[1], g[2], g[3], c[0] % p, c[1] % p, c[2] % p, c[3] % p)


def _inv(p: int, pv, x: Sequence[int]) -> tuple[int, ...]:
    k1, k2, l1, l2 = x[:4]
    g = [(-e) % p for e in (k1, k2, l1, l2)]
    K1, K2 = g[0], g[1]
    c = [-x[4] + l1 * K1, -x[5] + l2 * K1, -x[6] + l1 * K2, -x[7] + l2 * K2]
    for i, e in enumerate((k1, k2, l1, l2)):
        if e:
            for s in range(4):
                c[s] -= pv[i][s]
    return (g[0], g[1], g[2], g[3]) + tuple(v % p for v in c)


def _power_formula(p: int, pv, x: Sequence[int], n: int) -> tuple[int, ...]:
    if n < 0:
        raise ValueError("exponent must be non-negative")
    k1, k2, l1, l2 = x[:4]
    tri = n * (n - 1) // 2  # triangle number Delta_{n-1}
    c = [n * x[4] - tri * k1 * l1, n * x[5] - tri * k1 * l2,
         n * x[6] - tri * k2 * l1, n * x[7] - tri * k2 * l2]
    g = []
    for i, e in enumerate((k1, k2, l1, l2)):
        q, rem = divmod(n * e, p)
        g.append(rem)
        if q:
            for s in range(4):
                c[s] += q * pv[i][s]
    return tuple(g) + tuple(v % p for v in c)


@dataclass(frozen=True, order=True)
class Element:
    exps: tuple[int, ...]
    params: GroupParams = field(compare=False)

    def __post_init__(self):
        p = self.params.p
        exps = tuple(int(e) % p for e in self.exps)
        if len(exps) != 8:
            raise ValueError("an element needs eight exponents")
        object.__setattr__(self, "exps", exps)

    def __hash__(self):
        return hash((self.exps, self.params))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.exps == other.exps and self.params == other.params

    @classmethod
    def _raw(cls, params: GroupParams, exps: tuple[int, ...]) -> "Element":
        obj = object.__new__(cls)
        object.__setattr__(obj, "exps", exps)
        object.__setattr__(obj, "params", params)
        return obj

    @property
    def vector(self) -> tuple[int, ...]:
        """Exponents (k1, k2, l1, l2): the image in G / Z(G)."""
        return self.exps[:4]

    @property
    def central(self) -> tuple[int, ...]:
        return self.exps[4:]

    def _check(self, other: "Element"):
        if other.params != self.params:
            raise ParamsMismatch(f"{self.params} vs {other.params}")

    def __mul__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        pr = self.params
        return Element._raw(pr, _mul(pr.p, pr.pvecs, self.exps, other.exps))

    def inverse(self) -> "Element":
        pr = self.params
        return Element._raw(pr, _inv(pr.p, pr.pvecs, self.exps))

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            return power_formula(self.inverse(), -n)
        return power_formula(self, n)

    def is_identity(self) -> bool:
        return not any(self.exps)

    def is_central(self) -> bool:
        return not any(self.exps[:4])

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({format_element(self)})"


def identity(params: GroupParams) -> Element:
    return Element._raw(params, (0,) * 8)


def multiply(e: Element, f: Element) -> Element:
    return e * f


def inverse(e: Element) -> Element:
    return e.inverse()


def power(e: Element, n: int) -> Element:
    """e^n by square-and-multiply on the collection rule alone."""
    if n < 0:
        raise ValueError("exponent must be non-negative")
    result = identity(e.params)
    base = e
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def power_formula(e: Element, n: int) -> Element:
    """Closed-form normal form of e^n.

    For e = a^k b^l z the central part is z^n times [a_i,b_j]^(-T k_i l_j)
    with T = n(n-1)/2, plus one p-th-power vector per wrap of each generator
    exponent.
    """
    pr = e.params
    return Element._raw(pr, _power_formula(pr.p, pr.pvecs, e.exps, n))


def commutator(e: Element, f: Element) -> Element:
    return e.inverse() * f.inverse() * e * f


def commutator_vector(p: int, v: Sequence[int], w: Sequence[int]) -> tuple[int, ...]:
    """Central exponents of [x, y] for x, y with vector parts v, w.

    Bilinear since the group has class 2: the [a_i,b_j] exponent is
    v.k_i w.l_j - w.k_i v.l_j.
    """
    return (
        (v[0] * w[2] - w[0] * v[2]) % p,
        (v[0] * w[3] - w[0] * v[3]) % p,
        (v[1] * w[2] - w[1] * v[2]) % p,
        (v[1] * w[3] - w[1] * v[3]) % p,
    )


def is_central(e: Element) -> bool:
    return e.is_central()


def element_order(e: Element) -> int:
    p = e.params.p
    if e.is_identity():
        return 1
    if power_formula(e, p).is_identity():
        return p
    if not power_formula(e, p * p).is_identity():
        raise ArithmeticError(f"{e} has order exceeding p^2")
    return p * p


def pth_power_matrix(params: GroupParams) -> FpMat4:
    """The linear map (k1,k2,l1,l2) -> (k1+lam1 k2, lam2 k2, l1, l1+l2)."""
    l1, l2 = params.lam
    return FpMat4(((1, l1, 0, 0), (0, l2, 0, 0), (0, 0, 1, 0), (0, 0, 1, 1)), params.p)


def pth_power_image(params: GroupParams, v: Sequence[int]) -> tuple[int, ...]:
    return pth_power_matrix(params).apply(tuple(v))


def pth_power_vector(params: GroupParams, v: Sequence[int]) -> tuple[int, ...]:
    """Central exponents of (a^k b^l)^p, valid for every p.

    Equals ``pth_power_image`` for odd p; at p = 2 the triangle term adds
    k_i l_j to each slot.
    """
    p = params.p
    out = list(pth_power_image(params, v))
    if p == 2:
        k1, k2, l1, l2 = v
        out = [(out[0] + k1 * l1) % 2, (out[1] + k1 * l2) % 2,
               (out[2] + k2 * l1) % 2, (out[3] + k2 * l2) % 2]
    return tuple(out)


def commute_criterion(params: GroupParams, v: Sequence[int], w: Sequence[int]) -> bool:
    """Whether a^v b^v and a^w b^w commute, via the four bilinear relations."""
    return not any(commutator_vector(params.p, v, w))


def commute_cases(params: GroupParams, v: Sequence[int], w: Sequence[int]) -> bool:
    """Five-case form of the commuting criterion (odd p only)."""
    p = params.p
    if p == 2:
        raise ValueError("the five-case form needs an odd prime")
    v = [x % p for x in v]
    w = [x % p for x in w]
    if not any(v) or not any(w):
        return True
    if not any(v[2:] + w[2:]) or not any(v[:2] + w[:2]):
        return True
    return any(all((n * a - b) % p == 0 for a, b in zip(v, w)) for n in range(p))


# -- named elements and text form ------------------------------------------

GENERATOR_NAMES = ("a1", "a2", "b1", "b2")


def generator(params: GroupParams, j: int) -> Element:
    exps = [0] * 8
    exps[j] = 1
    return Element._raw(params, tuple(exps))


def generators(params: GroupParams) -> tuple[Element, ...]:
    return tuple(generator(params, j) for j in range(4))


def basic_commutator(params: GroupParams, i: int, j: int) -> Element:
    """[a_i, b_j] as a central element (0-based indices)."""
    exps = [0] * 8
    exps[4 + COMM_SLOT[(i, j)]] = 1
    return Element._raw(params, tuple(exps))


def from_vector(params: GroupParams, v: Sequence[int], central: Sequence[int] = (0, 0, 0, 0)) -> Element:
    return Element(tuple(v) + tuple(central), params)


def central_element(params: GroupParams, r: Sequence[int]) -> Element:
    return Element((0, 0, 0, 0) + tuple(r), params)


def format_element(e: Element) -> str:
    x = e.exps
    return ",".join(map(str, x[:4])) + "|" + ",".join(map(str, x[4:]))


def parse_element(params: GroupParams, text: str) -> Element:
    text = text.strip()
    try:
        left, right = text.split("|")
        a = [int(t) for t in left.split(",")]
        b = [int(t) for t in right.split(",")]
    except ValueError:
        raise ValueError(f"malformed element {text!r}; expected 'k1,k2,l1,l2|r1,r2,r3,r4'") from None
    if len(a) != 4 or len(b) != 4:
        raise ValueError(f"malformed element {text!r}; expected four exponents on each side")
    if any(not 0 <= v < params.p for v in a + b):
        raise ValueError(f"exponents of {text!r} must lie in [0, {params.p})")
    return Element(tuple(a + b), params)


def all_elements(params: GroupParams) -> Iterator[Element]:
    """Every element, in lexicographic order of exponent tuples."""
    for exps in itertools.product(range(params.p), repeat=8):
        yield Element._raw(params, exps)


def all_vectors(p: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(p), repeat=4))


# -- subgroups -------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    params: GroupParams
    members: tuple[Element, ...]
    generators: tuple[Element, ...] = ()

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, e: Element) -> bool:
        return e in self._set

    def __iter__(self):
        return iter(self.members)

    def is_closed(self) -> bool:
        """Closure under products and inverses, checked against the generators."""
        s = self._set
        if identity(self.params) not in s:
            return False
        gens = self.generators or self.members
        return all(x * g in s for x in self.members for g in gens) and all(
            g.inverse() in s for g in gens
        )

    @classmethod
    def generated(cls, params: GroupParams, gens: Iterable[Element]) -> "Subgroup":
        gens = tuple(gens)
        seen = {identity(params)}
        frontier = [identity(params)]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return cls(params, tuple(sorted(seen)), gens)

    @classmethod
    def from_members(cls, params: GroupParams, members: Iterable[Element]) -> "Subgroup":
        """Wrap a member set, recording a greedy generating list."""
        members = sorted(set(members))
        target = set(members)
        gens: list[Element] = []
        span = {identity(params)}
        for m in members:
            if m not in span:
                gens.append(m)
                span = set(Subgroup.generated(params, gens).members)
        if span != target:
            raise ValueError("member set is not a subgroup")
        return cls(params, tuple(members), tuple(gens))


def center(params: GroupParams) -> Subgroup:
    gens = [basic_commutator(params, i, j) for i in range(2) for j in range(2)]
    return Subgroup.generated(params, gens)


def cyclic(e: Element) -> Subgroup:
    return Subgroup.generated(e.params, [e])


def omega1(params: GroupParams) -> Subgroup:
    """The set of elements of order dividing p, checked to be a subgroup."""
    from . import _arrays as A

    xs = A.all_elements(params)
    mask = ~A.power(params, xs, params.p).any(axis=-1)
    members = [Element._raw(params, tuple(int(v) for v in row)) for row in xs[mask]]
    return Subgroup.from_members(params, members)


def inverse_by_search(e: Element) -> Element:
    """Linear search for the x with e * x = 1."""
    for x in all_elements(e.params):
        if (e * x).is_identity():
            return x
    raise ArithmeticError(f"no inverse found for {e}")


__all__ = [
    "GroupParams", "Element", "Subgroup", "ParamsMismatch",
    "identity", "multiply", "inverse", "power", "power_formula", "commutator",
    "commutator_vector", "is_central", "element_order", "pth_power_image",
    "pth_power_matrix", "pth_power_vector", "commute_criterion", "commute_cases",
    "generator", "generators", "basic_commutator", "from_vector", "central_element",
    "format_element", "parse_element", "all_elements", "all_vectors",
    "center", "cyclic", "omega1", "inverse_by_search", "inv_mod",
]
