"""Finite-support sequences, sequence-space norms and the backward shift."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .weights import WeightSpec, scale_by_product, weight_at

#: Entries with smaller magnitude are dropped to keep supports finite.
DROP_BELOW = 1e-300


class OutOfWindowError(ValueError):
    """A Köthe norm or check touched an index outside the matrix window."""


class SeqVector:
    """Finitely supported real sequence indexed by the integers.

    Immutable; equality is exact on the stored entries.
    """

    __slots__ = ("_data",)

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[int, float] = {}
        for i, v in items:
            i = int(i)
            if i in data:
                raise ValueError(f"duplicate index {i}")
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"non-finite value at index {i}")
            data[i] = v
        self._data = {i: data[i] for i in sorted(data) if abs(data[i]) >= DROP_BELOW}

    @classmethod
    def zero(cls) -> "SeqVector":
        return cls()

    @classmethod
    def from_dense(cls, lo: int, values: Iterable[float]) -> "SeqVector":
        return cls((lo + i, v) for i, v in enumerate(values))

    def __getitem__(self, i: int) -> float:
        return self._data.get(i, 0.0)

    def items(self):
        return self._data.items()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeqVector):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(tuple(self._data.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v!r}" for i, v in self._data.items())
        return f"SeqVector({{{body}}})"

    def _combine(self, other: "SeqVector", sign: float) -> "SeqVector":
        out = dict(self._data)
        for i, v in other._data.items():
            out[i] = out.get(i, 0.0) + sign * v
        return SeqVector(out)

    def __add__(self, other: "SeqVector") -> "SeqVector":
        return self._combine(other, 1.0)

    def __sub__(self, other: "SeqVector") -> "SeqVector":
        return self._combine(other, -1.0)

    def __neg__(self) -> "SeqVector":
        return SeqVector({i: -v for i, v in self._data.items()})

    def __mul__(self, c: float) -> "SeqVector":
        return SeqVector({i: c * v for i, v in self._data.items()})

    __rmul__ = __mul__

    def restrict(self, indices) -> "SeqVector":
        keep = set(indices)
        return SeqVector({i: v for i, v in self._data.items() if i in keep})

    def max_abs(self) -> float:
        return max((abs(v) for v in self._data.values()), default=0.0)

    def to_list(self) -> list[list]:
        return [[i, v] for i, v in self._data.items()]


def basis(n: int) -> SeqVector:
    return SeqVector({n: 1.0})


@dataclass(frozen=True)
class KoetheMatrix:
    """Köthe matrix ``a[j, k]`` on a finite index window, levels ``1..K``."""

    j_lo: int
    j_hi: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        rows = self.j_hi - self.j_lo + 1
        if table.ndim != 2 or table.shape[0] != rows or table.shape[1] < 1:
            raise ValueError(f"table must have shape ({rows}, K), got {table.shape}")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise ValueError("Köthe entries must be finite and nonnegative")
        if np.any(np.diff(table, axis=1) < 0):
            raise ValueError("Köthe entries must be nondecreasing in the level")
        if np.any(table.max(axis=1) <= 0):
            raise ValueError("every row needs a positive entry at some level")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, j_lo: int, j_hi: int, levels: int, f) -> "KoetheMatrix":
        table = [[f(j, k) for k in range(1, levels + 1)] for j in range(j_lo, j_hi + 1)]
        return cls(j_lo, j_hi, np.array(table, dtype=float))

    @property
    def levels(self) -> int:
        return self.table.shape[1]

    def contains(self, j: int) -> bool:
        return self.j_lo <= j <= self.j_hi

    def a(self, j: int, k: int) -> float:
        if not self.contains(j):
            raise OutOfWindowError(f"index {j} outside Köthe window [{self.j_lo}, {self.j_hi}]")
        if not 1 <= k <= self.levels:
            raise ValueError(f"level {k} outside 1..{self.levels}")
        return float(self.table[j - self.j_lo, k - 1])

    def column(self, k: int) -> np.ndarray:
        return self.table[:, k - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, KoetheMatrix):
            return NotImplemented
        return (self.j_lo, self.j_hi) == (other.j_lo, other.j_hi) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.j_lo, self.j_hi, self.table.tobytes()))


@dataclass(frozen=True)
class SpaceNorm:
    """Norm of the ambient space: ``c0`` (sup), ``lp`` or ``koethe`` at a level.

    For ``koethe``, ``p == 0`` selects the sup-type echelon norm.
    """

    kind: str = "c0"
    p: float | None = None
    matrix: KoetheMatrix | None = None
    level: int | None = None

    def __post_init__(self):
        if self.kind == "c0":
            return
        if self.kind == "lp":
            if self.p is None or self.p < 1:
                raise ValueError(f"lp norm needs p >= 1, got {self.p}")
        elif self.kind == "koethe":
            if self.matrix is None or self.level is None:
                raise ValueError("koethe norm needs a matrix and a level")
            if self.p is None or not (self.p == 0 or self.p >= 1):
                raise ValueError(f"koethe norm needs p in {{0}} U [1, inf), got {self.p}")
            if not 1 <= self.level <= self.matrix.levels:
                raise ValueError(f"level {self.level} outside 1..{self.matrix.levels}")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @classmethod
    def c0(cls) -> "SpaceNorm":
        return cls("c0")

    @classmethod
    def lp(cls, p: float) -> "SpaceNorm":
        return cls("lp", p=float(p))

    @classmethod
    def koethe(cls, matrix: KoetheMatrix, level: int, p: float = 1.0) -> "SpaceNorm":
        return cls("koethe", p=float(p), matrix=matrix, level=int(level))

    @property
    def is_sup(self) -> bool:
        return self.kind == "c0" or (self.kind == "koethe" and self.p == 0)

    def label(self) -> str:
        if self.kind == "c0":
            return "c0"
        if self.kind == "lp":
            return f"lp:{self.p:g}"
        return f"koethe:{self.level}:{self.p:g}"


C0 = SpaceNorm.c0()


def norm(x: SeqVector, s: SpaceNorm = C0) -> float:
    if s.kind == "koethe":
        m = s.matrix
        terms = [abs(v) * m.a(j, s.level) for j, v in x.items()]
    else:
        terms = [abs(v) for _, v in x.items()]
    if not terms:
        return 0.0
    if len(terms) == 1 or s.is_sup:
        return max(terms)
    p = s.p
    if p == 1:
        return math.fsum(terms)
    top = max(terms)
    if top == 0.0:
        return 0.0
    # scale by the largest term so that t**p cannot overflow
    return top * math.fsum((t / top) ** p for t in terms) ** (1.0 / p)


def apply_backward(spec: WeightSpec, x: SeqVector) -> SeqVector:
    """``(B_w x)(n) = w(n+1) x(n+1)``."""
    return SeqVector((j - 1, weight_at(spec, j) * v) for j, v in x.items())


def apply_backward_inverse(spec: WeightSpec, x: SeqVector) -> SeqVector:
    """``(B_w^{-1} x)(n) = x(n-1) / w(n)``."""
    return SeqVector((j + 1, v / weight_at(spec, j + 1)) for j, v in x.items())


def iterate(spec: WeightSpec, x: SeqVector, n: int) -> SeqVector:
    """``B_w^n x`` for any integer ``n`` (negative powers use the inverse)."""
    if n == 0:
        return x
    if n > 0:
        return SeqVector((j - n, scale_by_product(spec, j - n + 1, j, v)) for j, v in x.items())
    k = -n
    return SeqVector((j + k, scale_by_product(spec, j + 1, j + k, v, invert=True)) for j, v in x.items())


def project_residue(x: SeqVector, A: Iterable[int], k: int) -> SeqVector:
    """Keep the entries whose index lies in ``A + kZ``."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    residues = {a % k for a in A}
    return SeqVector({i: v for i, v in x.items() if i % k in residues})
