"""Exact scalars and dense matrices over Q or a prime field F_p.

Prime-field elements are plain ints in ``range(p)``; rationals are
:class:`fractions.Fraction`.  Nothing here ever rounds.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

RATIONALS = "Q"
PRIME = "F"

MAX_CHARACTERISTIC = 1 << 16


class SingularMatrixError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals or a prime field F_p with p < 2**16."""

    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == PRIME:
            if not is_prime(self.characteristic):
                raise ValueError("characteristic must be prime")
            if self.characteristic >= MAX_CHARACTERISTIC:
                raise ValueError(f"characteristic must be below {MAX_CHARACTERISTIC}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(PRIME, p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``Q`` or ``F<p>`` (e.g. ``F3``)."""
        text = text.strip()
        if text == "Q":
            return cls.rationals()
        if text[:1] == "F" and text[1:].isdigit():
            return cls.prime(int(text[1:]))
        raise ValueError(f"field must be Q or F<p>, got {text!r}")

    def __str__(self) -> str:
        return "Q" if self.kind == RATIONALS else f"F{self.characteristic}"

    @property
    def is_finite(self) -> bool:
        return self.kind == PRIME

    @property
    def order(self) -> Optional[int]:
        return self.characteristic if self.is_finite else None

    @property
    def zero(self):
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_finite else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.is_finite:
            p = self.characteristic
            if isinstance(value, Fraction):
                if value.denominator % p == 0:
                    raise ZeroDivisionError(f"{value} has no image in F{p}")
                return value.numerator * pow(value.denominator, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def add(self, a, b):
        if self.is_finite:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a, b):
        if self.is_finite:
            return (a - b) % self.characteristic
        return a - b

    def neg(self, a):
        if self.is_finite:
            return -a % self.characteristic
        return -a

    def mul(self, a, b):
        if self.is_finite:
            return a * b % self.characteristic
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("zero has no inverse")
        if self.is_finite:
            return pow(a, -1, self.characteristic)
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        if not self.is_finite:
            raise ValueError("cannot enumerate the elements of Q")
        return range(self.characteristic)

    def random(self, rng: random.Random, height: int = 3):
        """A uniformly random element (F_p) or a bounded-height fraction (Q)."""
        if self.is_finite:
            return rng.randrange(self.characteristic)
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    def format(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix shape must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(field, len(rows), cols, tuple(field(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (field.zero,) * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    @classmethod
    def column_vector(cls, field: FieldSpec, values: Sequence) -> "Matrix":
        return cls(field, len(values), 1, tuple(field(x) for x in values))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def iter_rows(self) -> Iterator[tuple]:
        for i in range(self.rows):
            yield self.row(i)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        out = []
        if f.is_finite:
            p = f.characteristic
            for i in range(n):
                ai = a[i * k:(i + 1) * k]
                for j in range(m):
                    out.append(sum(ai[t] * b[t * m + j] for t in range(k)) % p)
        else:
            for i in range(n):
                ai = a[i * k:(i + 1) * k]
                for j in range(m):
                    out.append(sum((ai[t] * b[t * m + j] for t in range(k)), Fraction(0)))
        return Matrix(f, n, m, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      tuple(add(x, y) for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot subtract {other.shape} from {self.shape}")
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols,
                      tuple(sub(x, y) for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, tuple(self.field.neg(x) for x in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, tuple(mul(c, x) for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.rows, len(idx),
                      tuple(self.entries[i * self.cols + j] for i in range(self.rows) for j in idx))

    def __repr__(self) -> str:
        return f"Matrix[{self.field}]({self.to_rows()})"

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"<{self.rows}x{self.cols}>"
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.iter_rows()) + "]"


def hstack(field: FieldSpec, mats: Sequence[Matrix], rows: Optional[int] = None) -> Matrix:
    if rows is None:
        rows = mats[0].rows if mats else 0
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack needs equal row counts")
    cols = sum(m.cols for m in mats)
    entries = []
    for i in range(rows):
        for m in mats:
            entries.extend(m.row(i))
    return Matrix(field, rows, cols, tuple(entries))


def vstack(field: FieldSpec, mats: Sequence[Matrix], cols: Optional[int] = None) -> Matrix:
    if cols is None:
        cols = mats[0].cols if mats else 0
    if any(m.cols != cols for m in mats):
        raise ValueError("vstack needs equal column counts")
    entries = []
    for m in mats:
        entries.extend(m.entries)
    return Matrix(field, len(entries) // cols if cols else sum(m.rows for m in mats), cols, tuple(entries))


def linear_combination(field: FieldSpec, terms: Iterable[tuple], rows: int, cols: int) -> Matrix:
    """Sum of ``c * M`` over ``(c, M)`` pairs, as a rows x cols matrix."""
    acc = [field.zero] * (rows * cols)
    for c, m in terms:
        if not c:
            continue
        for t, x in enumerate(m.entries):
            if x:
                acc[t] = field.add(acc[t], field.mul(c, x))
    return Matrix(field, rows, cols, tuple(acc))


def _rref_rows(field: FieldSpec, rows: list[list], ncols: int) -> list[int]:
    """In-place reduced row echelon form of a list of row lists; returns pivots."""
    pivots = []
    r = 0
    nrows = len(rows)
    finite = field.is_finite
    p = field.characteristic
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != 1:
            inv = field.inv(lead)
            if finite:
                rows[r] = [x * inv % p for x in rows[r]]
            else:
                rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                if finite:
                    rows[i] = [(x - f * y) % p for x, y in zip(ri, pr)]
                else:
                    rows[i] = [x - f * y for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form of ``m`` and its pivot columns."""
    rows = m.to_rows()
    pivots = _rref_rows(m.field, rows, m.cols)
    return Matrix(m.field, m.rows, m.cols, tuple(x for r in rows for x in r)), tuple(pivots)


def row_space_basis(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """The nonzero rows of ``rref(m)``: the canonical basis of the row space."""
    red, pivots = rref(m)
    k = len(pivots)
    return Matrix(m.field, k, m.cols, red.entries[:k * m.cols]), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Rows spanning the right null space ``{k : m @ k = 0}``."""
    f = m.field
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    out = []
    for fc in free:
        vec = [f.zero] * m.cols
        vec[fc] = f.one
        for r, pc in enumerate(pivots):
            vec[pc] = f.neg(red[r, fc])
        out.extend(vec)
    return Matrix(f, len(free), m.cols, tuple(out))


def solve(a: Matrix, b: Sequence) -> Optional[tuple]:
    """Some ``x`` with ``a @ x = b`` (free variables set to 0), or None."""
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
    f = a.field
    rows = [list(a.row(i)) + [f(b[i])] for i in range(a.rows)]
    pivots = _rref_rows(f, rows, a.cols + 1)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [f.zero] * a.cols
    for r, c in enumerate(pivots):
        x[c] = rows[r][a.cols]
    return tuple(x)


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices have inverses")
    f = m.field
    n = m.rows
    rows = [list(m.row(i)) + [f.one if i == j else f.zero for j in range(n)] for i in range(n)]
    pivots = _rref_rows(f, rows, 2 * n)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix(f, n, n, tuple(x for r in rows for x in r[n:]))


def reduce_vector(field: FieldSpec, basis: Matrix, pivots: Sequence[int], vec: Sequence) -> list:
    """Reduce ``vec`` against an RREF basis; zero result iff ``vec`` lies in the span."""
    out = list(vec)
    for r, c in enumerate(pivots):
        coef = out[c]
        if coef:
            row = basis.row(r)
            out = [field.sub(x, field.mul(coef, y)) for x, y in zip(out, row)]
    return out


def in_row_space(basis: Matrix, pivots: Sequence[int], vec: Sequence) -> bool:
    return not any(reduce_vector(basis.field, basis, pivots, vec))
