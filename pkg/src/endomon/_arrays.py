"""Vectorised twins of the group and endomorphism arithmetic.

Elements are integer arrays with a trailing axis of length 8 (normal-form
exponents); endomorphisms are arrays with trailing shape (4, 8) holding the
images of a1, a2, b1, b2.  Leading axes broadcast.  The scalar code in
``group`` and ``endo`` is the reference; these functions are cross-checked
against it in the test suite.
"""

from __future__ import annotations

import numpy as np

from .group import GroupParams

DTYPE = np.int64


def pvec_matrix(params: GroupParams) -> np.ndarray:
    return np.array(params.pvecs, dtype=DTYPE)


def as_array(x) -> np.ndarray:
    return np.asarray(x, dtype=DTYPE)


def identity(shape=()) -> np.ndarray:
    return np.zeros(tuple(shape) + (8,), dtype=DTYPE)


def _bilinear(k: np.ndarray, l: np.ndarray) -> np.ndarray:
    """Slots [a_i,b_j] -> k_i * l_j, flattened in slot order."""
    out = k[..., :, None] * l[..., None, :]
    return out.reshape(out.shape[:-2] + (4,))


def mul(params: GroupParams, x, y) -> np.ndarray:
    p = params.p
    x = as_array(x)
    y = as_array(y)
    x, y = np.broadcast_arrays(x, y)
    g = x[..., :4] + y[..., :4]
    carry = g >= p
    g = g - p * carry
    c = x[..., 4:] + y[..., 4:] - _bilinear(y[..., :2], x[..., 2:4])
    c = c + carry.astype(DTYPE) @ pvec_matrix(params)
    return np.concatenate([g, c % p], axis=-1)


def inv(params: GroupParams, x) -> np.ndarray:
    p = params.p
    x = as_array(x)
    v = x[..., :4]
    g = (-v) % p
    c = -x[..., 4:] + _bilinear(g[..., :2], v[..., 2:4])
    c = c - (v != 0).astype(DTYPE) @ pvec_matrix(params)
    return np.concatenate([g, c % p], axis=-1)


def power(params: GroupParams, x, n) -> np.ndarray:
    """Closed-form x^n for non-negative (broadcastable) n."""
    p = params.p
    x = as_array(x)
    n = as_array(n)[..., None]
    v = x[..., :4]
    tri = n * (n - 1) // 2
    raw = n * v
    q, g = np.divmod(raw, p)
    c = n * x[..., 4:] - tri * _bilinear(v[..., :2], v[..., 2:4]) + q @ pvec_matrix(params)
    g, c = np.broadcast_arrays(g, c)
    return np.concatenate([g, c % p], axis=-1)


def power_iterated(params: GroupParams, x, n: int) -> np.ndarray:
    """x^n by repeated multiplication; n is a plain int."""
    out = np.zeros_like(as_array(x))
    for _ in range(n):
        out = mul(params, out, x)
    return out


def commutator(params: GroupParams, x, y) -> np.ndarray:
    return mul(params, mul(params, inv(params, x), inv(params, y)), mul(params, x, y))


def commutator_central(params: GroupParams, v, w) -> np.ndarray:
    """Central exponents of the commutator of vector parts v, w (closed form)."""
    v = as_array(v)
    w = as_array(w)
    return (_bilinear(v[..., :2], w[..., 2:4]) - _bilinear(w[..., :2], v[..., 2:4])) % params.p


def pth_power_central(params: GroupParams, v) -> np.ndarray:
    """Central exponents of (a^k b^l)^p for vector parts v, any p."""
    p = params.p
    v = as_array(v)
    k1, k2, l1, l2 = (v[..., i] for i in range(4))
    a, b = params.lam
    out = np.stack([k1 + a * k2, b * k2, l1, l1 + l2], axis=-1)
    if p == 2:
        out = out + _bilinear(v[..., :2], v[..., 2:4])
    return out % p


def is_identity(x) -> np.ndarray:
    return ~as_array(x).any(axis=-1)


# -- indexing --------------------------------------------------------------

def encode(params: GroupParams, x) -> np.ndarray:
    """Lexicographic index of each element in [0, p^8)."""
    p = params.p
    x = as_array(x)
    weights = p ** np.arange(7, -1, -1, dtype=DTYPE)
    return x @ weights


def decode(params: GroupParams, idx) -> np.ndarray:
    p = params.p
    idx = as_array(idx)
    out = np.empty(idx.shape + (8,), dtype=DTYPE)
    rest = idx.copy()
    for pos in range(7, -1, -1):
        rest, out[..., pos] = np.divmod(rest, p)
    return out


def all_elements(params: GroupParams) -> np.ndarray:
    return decode(params, np.arange(params.p ** 8, dtype=DTYPE))


def all_vectors(p: int) -> np.ndarray:
    idx = np.arange(p ** 4)
    out = np.empty((p ** 4, 4), dtype=DTYPE)
    rest = idx
    for pos in range(3, -1, -1):
        rest, out[:, pos] = np.divmod(rest, p)
    return out


def multiplication_table(params: GroupParams) -> np.ndarray:
    """Full Cayley table as indices; only sensible at p = 2."""
    xs = all_elements(params)
    prod = mul(params, xs[:, None, :], xs[None, :, :])
    return encode(params, prod)


# -- endomorphisms ---------------------------------------------------------

def identity_endo(shape=()) -> np.ndarray:
    out = np.zeros(tuple(shape) + (4, 8), dtype=DTYPE)
    for j in range(4):
        out[..., j, j] = 1
    return out


_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))


def _images(params: GroupParams, E):
    """Generator images and the central exponents of their basic commutators."""
    g = [E[..., j, :] for j in range(4)]
    comms = np.stack(
        [commutator_central(params, g[i][..., :4], g[j][..., :4]) for i, j in _PAIRS], axis=-2
    )
    return g, comms


def _evaluate(params: GroupParams, images, x) -> np.ndarray:
    g, comms = images
    out = power(params, g[0], x[..., 0])
    for j in range(1, 4):
        out = mul(params, out, power(params, g[j], x[..., j]))
    # commutators are central, so their powers contribute linearly
    extra = np.einsum("...s,...sc->...c", x[..., 4:], comms)
    out[..., 4:] = (out[..., 4:] + extra) % params.p
    return out


def apply(params: GroupParams, E, x) -> np.ndarray:
    """Evaluate endomorphisms E (..., 4, 8) at elements x (..., 8)."""
    return _evaluate(params, _images(params, as_array(E)), as_array(x))


def compose(params: GroupParams, E1, E2) -> np.ndarray:
    """(E1 o E2): images of the generators under E1 after E2."""
    E2 = as_array(E2)
    images = _images(params, as_array(E1))
    return np.stack([_evaluate(params, images, E2[..., j, :]) for j in range(4)], axis=-2)


def pointwise(params: GroupParams, E, C) -> np.ndarray:
    """Pointwise product of generator images (the sum E + C)."""
    return mul(params, as_array(E), as_array(C))


def central_endo(mats) -> np.ndarray:
    """Central-valued endomorphisms from matrices (..., 4, 4); column j = image of gen j."""
    mats = as_array(mats)
    out = np.zeros(mats.shape[:-2] + (4, 8), dtype=DTYPE)
    out[..., :, 4:] = np.swapaxes(mats, -1, -2)
    return out


def star(params: GroupParams, mats) -> np.ndarray:
    return pointwise(params, identity_endo(), central_endo(mats))


def vector_matrix(E) -> np.ndarray:
    """Induced matrix on G/Z(G): column j = vector part of the j-th image."""
    return np.swapaxes(as_array(E)[..., :, :4], -1, -2)


def central_matrix(E) -> np.ndarray:
    """Column j = central exponents of the j-th image."""
    return np.swapaxes(as_array(E)[..., :, 4:], -1, -2)


def normalize(E) -> tuple[np.ndarray, np.ndarray]:
    E = as_array(E)
    norm = E.copy()
    norm[..., :, 4:] = 0
    return norm, central_matrix(E)


def validate(params: GroupParams, E) -> np.ndarray:
    """The six defining relations on the images, through group operations."""
    p = params.p
    E = as_array(E)
    g1, g2, g3, g4 = (E[..., j, :] for j in range(4))
    l1, l2 = params.lam
    ok = is_identity(commutator(params, g1, g2))
    ok &= is_identity(commutator(params, g3, g4))
    ok &= (power(params, g1, p) == commutator(params, g1, g3)).all(-1)
    rhs = commutator(params, g1, mul(params, power(params, g3, l1), power(params, g4, l2)))
    ok &= (power(params, g2, p) == rhs).all(-1)
    ok &= (power(params, g3, p) == commutator(params, g2, mul(params, g3, g4))).all(-1)
    ok &= (power(params, g4, p) == commutator(params, g2, g4)).all(-1)
    return ok


def keys(E) -> list[bytes]:
    E = as_array(E)
    flat = E.reshape(E.shape[0], -1).astype(np.int8)
    return [row.tobytes() for row in flat]
