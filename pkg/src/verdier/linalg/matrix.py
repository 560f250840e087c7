"""Exact integer matrices in dict-of-rows form.

Entries are Python ints, so arithmetic never overflows.  Only nonzero entries
are stored; a matrix is treated as immutable once built.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence


class Matrix:
    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: dict[int, dict[int, int]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        self._rows = rows if rows is not None else {}

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int, scale: int = 1) -> Matrix:
        if scale == 0:
            return cls(n, n)
        return cls(n, n, {i: {i: scale} for i in range(n)})

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, int]]) -> Matrix:
        rows: dict[int, dict[int, int]] = {}
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            row = rows.setdefault(i, {})
            row[j] = row.get(j, 0) + v
        for i in list(rows):
            row = {j: v for j, v in rows[i].items() if v}
            if row:
                rows[i] = row
            else:
                del rows[i]
        return cls(nrows, ncols, rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
        data = [list(r) for r in data]
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
        rows = {}
        for i, r in enumerate(data):
            row = {j: int(v) for j, v in enumerate(r) if v}
            if row:
                rows[i] = row
        return cls(nrows, ncols, rows)

    # -- access ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self._rows.get(i, {}).get(j, 0)

    def row(self, i: int) -> dict[int, int]:
        return self._rows.get(i, {})

    def entries(self):
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    @property
    def density(self) -> float:
        size = self.nrows * self.ncols
        return self.nnz / size if size else 0.0

    def is_zero(self) -> bool:
        return not self._rows

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self._rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def max_abs(self) -> int:
        return max((abs(v) for r in self._rows.values() for v in r.values()), default=0)

    # -- algebra --------------------------------------------------------
    @property
    def T(self) -> Matrix:
        rows: dict[int, dict[int, int]] = {}
        for i, row in self._rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return Matrix(self.ncols, self.nrows, rows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        rows = {}
        for i, row in self._rows.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                brow = orows.get(k)
                if brow:
                    for j, b in brow.items():
                        acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                rows[i] = acc
        return Matrix(self.nrows, other.ncols, rows)

    def _combine(self, other: Matrix, sign: int) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, row in other._rows.items():
            acc = rows.setdefault(i, {})
            for j, v in row.items():
                nv = acc.get(j, 0) + sign * v
                if nv:
                    acc[j] = nv
                else:
                    acc.pop(j, None)
            if not acc:
                del rows[i]
        return Matrix(self.nrows, self.ncols, rows)

    def __add__(self, other: Matrix) -> Matrix:
        return self._combine(other, 1)

    def __sub__(self, other: Matrix) -> Matrix:
        return self._combine(other, -1)

    def __neg__(self) -> Matrix:
        return self.scaled(-1)

    def scaled(self, c: int) -> Matrix:
        if c == 0:
            return Matrix(self.nrows, self.ncols)
        return Matrix(
            self.nrows, self.ncols, {i: {j: c * v for j, v in r.items()} for i, r in self._rows.items()}
        )

    def reduced(self, modulus: int) -> Matrix:
        """Entries reduced into ``[0, modulus)``; identity when modulus is 0."""
        if not modulus:
            return self
        rows = {}
        for i, r in self._rows.items():
            row = {j: v % modulus for j, v in r.items() if v % modulus}
            if row:
                rows[i] = row
        return Matrix(self.nrows, self.ncols, rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 36:
            return f"Matrix({self.to_dense()})"
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    # -- block assembly -------------------------------------------------
    @staticmethod
    def block(blocks: Sequence[Sequence[Matrix | None]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
        """Assemble a block matrix; ``None`` stands for a zero block."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        rows: dict[int, dict[int, int]] = {}
        for bi, brow in enumerate(blocks):
            for bj, blk in enumerate(brow):
                if blk is None:
                    continue
                if blk.shape != (row_sizes[bi], col_sizes[bj]):
                    raise ValueError(
                        f"block ({bi},{bj}) has shape {blk.shape}, "
                        f"expected {(row_sizes[bi], col_sizes[bj])}"
                    )
                for i, row in blk._rows.items():
                    acc = rows.setdefault(roff[bi] + i, {})
                    for j, v in row.items():
                        acc[coff[bj] + j] = v
        return Matrix(roff[-1], coff[-1], rows)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> Matrix:
        cpos = {c: k for k, c in enumerate(col_idx)}
        rows = {}
        for k, i in enumerate(row_idx):
            row = self._rows.get(i)
            if not row:
                continue
            sub = {cpos[j]: v for j, v in row.items() if j in cpos}
            if sub:
                rows[k] = sub
        return Matrix(len(row_idx), len(col_idx), rows)


def determinant(M: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    a = M.to_dense()
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
