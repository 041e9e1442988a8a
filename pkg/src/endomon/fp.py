"""Exact arithmetic over small prime fields, in dimension four.

Every value carries its modulus so one process can work at p = 2, 3 and 5
side by side.  Representatives are reduced into ``[0, p)`` on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

SUPPORTED_PRIMES = (2, 3, 5)


class ModulusMismatch(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


def check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"unsupported modulus {p!r}; expected one of {SUPPORTED_PRIMES}")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True, order=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ModulusMismatch(f"mod {self.p} vs mod {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FpScalar(self.value + b, self.p)

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FpScalar(self.value - b, self.p)

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FpScalar(self.value * b, self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FpScalar(b - self.value, self.p)

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inv(self) -> "FpScalar":
        return FpScalar(inv_mod(self.value, self.p), self.p)

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return self * FpScalar(b, self.p).inv()

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class FpVec4:
    entries: tuple[int, int, int, int]
    p: int

    def __post_init__(self):
        check_prime(self.p)
        vals = tuple(int(x) % self.p for x in self.entries)
        if len(vals) != 4:
            raise ValueError("FpVec4 needs exactly four entries")
        object.__setattr__(self, "entries", vals)

    @classmethod
    def zero(cls, p: int) -> "FpVec4":
        return cls((0, 0, 0, 0), p)

    def _check(self, other: "FpVec4"):
        if other.p != self.p:
            raise ModulusMismatch(f"mod {self.p} vs mod {other.p}")

    def __add__(self, other: "FpVec4") -> "FpVec4":
        self._check(other)
        return FpVec4(tuple(a + b for a, b in zip(self.entries, other.entries)), self.p)

    def __sub__(self, other: "FpVec4") -> "FpVec4":
        self._check(other)
        return FpVec4(tuple(a - b for a, b in zip(self.entries, other.entries)), self.p)

    def __neg__(self) -> "FpVec4":
        return FpVec4(tuple(-a for a in self.entries), self.p)

    def scale(self, c: int) -> "FpVec4":
        return FpVec4(tuple(c * a for a in self.entries), self.p)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)


def _reduce_rows(rows: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) % p for x in row) for row in rows)


@dataclass(frozen=True)
class FpMat4:
    """4x4 matrix over F_p.

    When a matrix describes a map on generators, column ``j`` holds the
    coordinates of the image of generator ``j``.
    """

    rows: tuple[tuple[int, ...], ...]
    p: int

    def __post_init__(self):
        check_prime(self.p)
        rows = _reduce_rows(self.rows, self.p)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("FpMat4 must be 4x4")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zero(cls, p: int) -> "FpMat4":
        return cls(((0,) * 4,) * 4, p)

    @classmethod
    def identity(cls, p: int) -> "FpMat4":
        return cls(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)), p)

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], p: int) -> "FpMat4":
        cols = [tuple(c) for c in cols]
        return cls(tuple(tuple(cols[j][i] for j in range(4)) for i in range(4)), p)

    @classmethod
    def elementary(cls, i: int, j: int, p: int) -> "FpMat4":
        return cls(tuple(tuple(int((r, c) == (i, j)) for c in range(4)) for r in range(4)), p)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.rows[i][j] for i in range(4))

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.column(j) for j in range(4))

    def _check(self, other: "FpMat4"):
        if not isinstance(other, FpMat4):
            raise TypeError(f"expected FpMat4, got {type(other).__name__}")
        if other.p != self.p:
            raise ModulusMismatch(f"mod {self.p} vs mod {other.p}")

    def __add__(self, other: "FpMat4") -> "FpMat4":
        self._check(other)
        return FpMat4(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.p
        )

    def __sub__(self, other: "FpMat4") -> "FpMat4":
        self._check(other)
        return FpMat4(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.p
        )

    def __neg__(self) -> "FpMat4":
        return FpMat4(tuple(tuple(-a for a in r) for r in self.rows), self.p)

    def scale(self, c: int) -> "FpMat4":
        return FpMat4(tuple(tuple(c * a for a in r) for r in self.rows), self.p)

    def __matmul__(self, other: "FpMat4") -> "FpMat4":
        self._check(other)
        cols = other.columns
        return FpMat4(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows), self.p
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if isinstance(v, FpVec4):
            if v.p != self.p:
                raise ModulusMismatch(f"mod {self.p} vs mod {v.p}")
            v = v.entries
        return tuple(sum(a * b for a, b in zip(r, v)) % self.p for r in self.rows)

    def transpose(self) -> "FpMat4":
        return FpMat4(self.columns, self.p)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def _echelon(self):
        """Row-reduce a copy; return (rows, rank, det).

        Pivot is the first row (from the current one down) with a nonzero
        entry in the pivot column.
        """
        p = self.p
        m = [list(r) for r in self.rows]
        det = 1
        rank = 0
        for col in range(4):
            piv = next((r for r in range(rank, 4) if m[r][col]), None)
            if piv is None:
                det = 0
                continue
            if piv != rank:
                m[rank], m[piv] = m[piv], m[rank]
                det = -det
            pv = m[rank][col]
            det = det * pv % p
            pinv = inv_mod(pv, p)
            m[rank] = [x * pinv % p for x in m[rank]]
            for r in range(4):
                if r != rank and m[r][col]:
                    f = m[r][col]
                    m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
            rank += 1
        return m, rank, det % p

    def rank(self) -> int:
        return self._echelon()[1]

    def det(self) -> int:
        return self._echelon()[2]

    def inverse(self) -> "FpMat4":
        p = self.p
        aug = [list(r) + [int(i == j) for j in range(4)] for i, r in enumerate(self.rows)]
        for col in range(4):
            piv = next((r for r in range(col, 4) if aug[r][col] % p), None)
            if piv is None:
                raise SingularMatrix("matrix is not invertible over F_%d" % p)
            aug[col], aug[piv] = aug[piv], aug[col]
            pinv = inv_mod(aug[col][col], p)
            aug[col] = [x * pinv % p for x in aug[col]]
            for r in range(4):
                if r != col and aug[r][col] % p:
                    f = aug[r][col]
                    aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
        return FpMat4(tuple(tuple(r[4:]) for r in aug), p)

    def to_digits(self) -> str:
        return "".join(str(x) for r in self.rows for x in r)

    @classmethod
    def from_digits(cls, text: str, p: int) -> "FpMat4":
        digits = [int(c) for c in text if c.isdigit()]
        if len(digits) != 16:
            raise ValueError(f"expected 16 digits, got {len(digits)}")
        return cls(tuple(tuple(digits[4 * i:4 * i + 4]) for i in range(4)), p)


# Scalar-operation helpers used by the CLI and tests.
def scalar_add(a: FpScalar, b: FpScalar) -> FpScalar:
    return a + b


def scalar_sub(a: FpScalar, b: FpScalar) -> FpScalar:
    return a - b


def scalar_mul(a: FpScalar, b: FpScalar) -> FpScalar:
    return a * b


def scalar_inv(a: FpScalar) -> FpScalar:
    return a.inv()


def mat_mul(a: FpMat4, b: FpMat4) -> FpMat4:
    return a @ b


def mat_add(a: FpMat4, b: FpMat4) -> FpMat4:
    return a + b


def mat_rank(a: FpMat4) -> int:
    return a.rank()


def mat_det(a: FpMat4) -> int:
    return a.det()


def mat_inverse(a: FpMat4) -> FpMat4:
    return a.inverse()


def rank_mod_p(rows, p: int) -> int:
    """Rank of an arbitrary integer matrix over F_p (first-nonzero pivot)."""
    m = [[int(x) % p for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pinv = inv_mod(m[rank][col], p)
        m[rank] = [x * pinv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank
