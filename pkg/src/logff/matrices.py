"""Dense matrices over RingElem, sized for rank <= 4 module computations."""

from __future__ import annotations

from .logring import RingElem, RingSpec, SpecMismatchError


class Matrix:
    __slots__ = ("spec", "rows")

    def __init__(self, spec: RingSpec, rows):
        rows = tuple(tuple(r) for r in rows)
        width = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged matrix")
            for x in r:
                if x.spec != spec:
                    raise SpecMismatchError("entry in the wrong ring")
        self.spec = spec
        self.rows = rows

    @classmethod
    def zeros(cls, spec: RingSpec, nrows: int, ncols: int) -> "Matrix":
        z = RingElem.zero(spec)
        return cls(spec, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, spec: RingSpec, size: int) -> "Matrix":
        z, one = RingElem.zero(spec), RingElem.one(spec)
        return cls(spec, [[one if i == k else z for k in range(size)] for i in range(size)])

    @classmethod
    def from_ints(cls, spec: RingSpec, rows) -> "Matrix":
        return cls(spec, [[RingElem.const(spec, c) for c in r] for r in rows])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def entry(self, i: int, k: int) -> RingElem:
        return self.rows[i][k]

    def column(self, k: int) -> list[RingElem]:
        return [r[k] for r in self.rows]

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.spec, [[a + b for a, b in zip(r1, r2)]
                                  for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.spec, [[a - b for a, b in zip(r1, r2)]
                                  for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return self.map_entries(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = other.ncols
            out = []
            for i in range(self.nrows):
                row = []
                for k in range(cols):
                    acc = RingElem.zero(self.spec)
                    for m in range(self.ncols):
                        acc = acc + self.rows[i][m] * other.rows[m][k]
                    row.append(acc)
                out.append(row)
            return Matrix(self.spec, out)
        return self.scale(other)

    def scale(self, c) -> "Matrix":
        if isinstance(c, int):
            return self.map_entries(lambda x: x.scale(c))
        return self.map_entries(lambda x: x * c)

    def mul_vec(self, vec: list[RingElem]) -> list[RingElem]:
        out = []
        for i in range(self.nrows):
            acc = RingElem.zero(self.spec)
            for m, v in enumerate(vec):
                acc = acc + self.rows[i][m] * v
            out.append(acc)
        return out

    def map_entries(self, fn) -> "Matrix":
        return Matrix(self.spec, [[fn(x) for x in r] for r in self.rows])

    def log_derive(self, j: int) -> "Matrix":
        return self.map_entries(lambda x: x.log_derive(j))

    def transpose(self) -> "Matrix":
        return Matrix(self.spec, list(zip(*self.rows)))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def det(self) -> RingElem:
        size = self.nrows
        if size != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if size == 0:
            return RingElem.one(self.spec)
        if size == 1:
            return self.rows[0][0]
        acc = RingElem.zero(self.spec)
        for k in range(size):
            if self.rows[0][k].is_zero():
                continue
            minor = Matrix(self.spec, [r[:k] + r[k + 1:] for r in self.rows[1:]])
            term = self.rows[0][k] * minor.det()
            acc = acc + term if k % 2 == 0 else acc - term
        return acc

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.spec == other.spec and self.rows == other.rows

    def eq_mod_rows(self, other: "Matrix", row_mods: list[int]) -> bool:
        """Entrywise equality where row i is compared mod p^row_mods[i]."""
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        for i, m in enumerate(row_mods):
            for a, b in zip(self.rows[i], other.rows[i]):
                if not a.eq_mod(b, m):
                    return False
        return True

    def first_difference(self, other: "Matrix", row_mods: list[int]):
        """(row, col) of the first entry differing mod the row torsion, or None."""
        for i, m in enumerate(row_mods):
            for k, (a, b) in enumerate(zip(self.rows[i], other.rows[i])):
                if not a.eq_mod(b, m):
                    return (i, k)
        return None

    def with_spec(self, spec: RingSpec) -> "Matrix":
        return Matrix(spec, [[x.with_spec(spec) for x in r] for r in self.rows])

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"

    __repr__ = __str__
