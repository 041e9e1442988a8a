"""Endomorphisms of G_lambda^(p), given by the images of a1, a2, b1, b2."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _arrays as A
from .fp import FpMat4
from .group import (
    Element,
    GroupParams,
    ParamsMismatch,
    central_element,
    commutator,
    format_element,
    generators,
    identity,
    parse_element,
    power_formula,
)

# generator pairs whose commutators span the centre, in slot order
COMM_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))


class InvalidEndomorphism(ValueError):
    pass


class NotCentral(ValueError):
    pass


def validate(images: Sequence[Element]) -> bool:
    """Whether the generator assignment respects every defining relation."""
    if len(images) != 4:
        raise ValueError("need exactly four images")
    g1, g2, g3, g4 = images
    params = g1.params
    if any(g.params != params for g in images):
        raise ParamsMismatch("images live in different groups")
    p = params.p
    l1, l2 = params.lam
    return (
        commutator(g1, g2).is_identity()
        and commutator(g3, g4).is_identity()
        and power_formula(g1, p) == commutator(g1, g3)
        and power_formula(g2, p) == commutator(g1, power_formula(g3, l1) * power_formula(g4, l2))
        and power_formula(g3, p) == commutator(g2, g3 * g4)
        and power_formula(g4, p) == commutator(g2, g4)
    )


@dataclass(frozen=True)
class Endo:
    images: tuple[Element, Element, Element, Element]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if not validate(images):
            raise InvalidEndomorphism(
                "generator images violate the defining relations: " + format_endo_images(images)
            )

    @classmethod
    def _trusted(cls, images) -> "Endo":
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", tuple(images))
        return obj

    @classmethod
    def from_array(cls, params: GroupParams, arr) -> "Endo":
        return cls._trusted(Element._raw(params, tuple(int(v) for v in row)) for row in arr)

    @property
    def params(self) -> GroupParams:
        return self.images[0].params

    def to_array(self) -> np.ndarray:
        return np.array([g.exps for g in self.images], dtype=A.DTYPE)

    def __call__(self, x: Element) -> Element:
        return apply(self, x)

    def __matmul__(self, other: "Endo") -> "Endo":
        return compose(self, other)

    def vector_matrix(self) -> FpMat4:
        """Induced map on G/Z(G); column j = vector part of the j-th image."""
        return FpMat4.from_columns([g.vector for g in self.images], self.params.p)

    def __str__(self) -> str:
        return format_endo(self)


@dataclass(frozen=True)
class CentralHom:
    """A homomorphism into the centre, stored as its 4x4 matrix.

    Column j holds the coordinates of the image of generator j in the basis
    [a1,b1], [a1,b2], [a2,b1], [a2,b2].
    """

    mat: FpMat4
    params: GroupParams

    def __post_init__(self):
        if self.mat.p != self.params.p:
            raise ParamsMismatch("matrix modulus differs from group prime")

    @classmethod
    def zero(cls, params: GroupParams) -> "CentralHom":
        return cls(FpMat4.zero(params.p), params)

    def as_endo(self) -> Endo:
        return Endo._trusted(central_element(self.params, c) for c in self.mat.columns)

    def __call__(self, x: Element) -> Element:
        return apply(self.as_endo(), x)

    def __add__(self, other: "CentralHom") -> "CentralHom":
        return CentralHom(self.mat + other.mat, self.params)

    def __neg__(self) -> "CentralHom":
        return CentralHom(-self.mat, self.params)

    def __sub__(self, other: "CentralHom") -> "CentralHom":
        return CentralHom(self.mat - other.mat, self.params)


def identity_endo(params: GroupParams) -> Endo:
    return Endo._trusted(generators(params))


def zero_endo(params: GroupParams) -> Endo:
    return Endo._trusted((identity(params),) * 4)


def constant_endo(x: Element) -> Endo:
    """The assignment sending every generator to x (validated)."""
    return Endo((x, x, x, x))


def apply(e: Endo, x: Element) -> Element:
    g = e.images
    k1, k2, l1, l2, r1, r2, r3, r4 = x.exps
    out = (
        power_formula(g[0], k1) * power_formula(g[1], k2)
        * power_formula(g[2], l1) * power_formula(g[3], l2)
    )
    for r, (i, j) in zip((r1, r2, r3, r4), COMM_PAIRS):
        if r:
            out = out * power_formula(commutator(g[i], g[j]), r)
    return out


def compose(e1: Endo, e2: Endo) -> Endo:
    """e1 after e2."""
    if e1.params != e2.params:
        raise ParamsMismatch(f"{e1.params} vs {e2.params}")
    return Endo._trusted(apply(e1, g) for g in e2.images)


def add(e: Endo, c) -> Endo:
    """Pointwise product g -> e(g) c(g); c must map into the centre."""
    if isinstance(c, CentralHom):
        c = c.as_endo()
    if any(not g.is_central() for g in c.images):
        raise NotCentral("second summand must map into the centre")
    return Endo._trusted(x * y for x, y in zip(e.images, c.images))


def star(f: CentralHom) -> Endo:
    """x -> x f(x)."""
    return add(identity_endo(f.params), f)


def normalize(e: Endo) -> tuple[Endo, CentralHom]:
    """Split e into a commutator-free part and a central homomorphism."""
    params = e.params
    norm = Endo._trusted(Element._raw(params, g.vector + (0, 0, 0, 0)) for g in e.images)
    cent = CentralHom(FpMat4.from_columns([g.central for g in e.images], params.p), params)
    return norm, cent


def is_normalized(e: Endo) -> bool:
    return all(not any(g.central) for g in e.images)


def is_automorphism(e: Endo) -> bool:
    # Z(G) is the Frattini subgroup, so surjectivity is decided on G/Z(G).
    return e.vector_matrix().rank() == 4


def maps_into_center(e: Endo) -> bool:
    return all(g.is_central() for g in e.images)


def image_size(e: Endo) -> int:
    xs = A.all_elements(e.params)
    ys = A.apply(e.params, e.to_array(), xs)
    return len(np.unique(A.encode(e.params, ys)))


def format_endo_images(images) -> str:
    return ";".join(format_element(g) for g in images)


def format_endo(e: Endo) -> str:
    return format_endo_images(e.images)


def parse_endo(params: GroupParams, text: str) -> Endo:
    parts = text.split(";")
    if len(parts) != 4:
        raise ValueError(f"expected four ';'-separated images, got {len(parts)}")
    return Endo(tuple(parse_element(params, s) for s in parts))


def parse_central_hom(params: GroupParams, text: str) -> CentralHom:
    return CentralHom(FpMat4.from_digits(text, params.p), params)


def format_central_hom(f: CentralHom) -> str:
    return f.mat.to_digits()


def elementary_central_homs(params: GroupParams) -> list[CentralHom]:
    """The 16 homs with a single 1 in their matrix, row-major order."""
    return [CentralHom(FpMat4.elementary(i, j, params.p), params) for i in range(4) for j in range(4)]
