"""Finite and cylinder-symbolic dynamical systems."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, root_validator, validator

from src.common.errors import (
    InvalidWordError,
    MetricAxiomError,
    NotEquivariantError,
    SurjectivityError,
)

AXIOM_TOLERANCE = 1e-12
Word = Tuple[int, ...]
CylinderKind = Literal["full-shift", "odometer"]


class PointMetric(ABC):
    """Distance on the point indices ``0..size-1`` of a finite space."""

    size: int

    @abstractmethod
    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Distances between ``rows`` and ``cols`` as a ``len(rows) x len(cols)`` array."""

    @abstractmethod
    def diameter(self) -> float:
        ...

    def distance(self, i: int, j: int) -> float:
        return float(self.submatrix([i], [j])[0, 0])

    def matrix(self) -> np.ndarray:
        indices = list(range(self.size))
        return self.submatrix(indices, indices)


@dataclass(frozen=True, slots=True, eq=False)
class MatrixMetric(PointMetric):
    data: np.ndarray

    @property
    def size(self) -> int:  # type: ignore[override]
        return int(self.data.shape[0])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        return self.data[np.ix_(np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))]

    def diameter(self) -> float:
        return float(self.data.max()) if self.data.size else 0.0

    def validate(self) -> None:
        """Raise MetricAxiomError naming the first offending entry."""
        data = self.data
        n = data.shape[0]
        if data.shape != (n, n):
            raise MetricAxiomError(f"metric matrix must be square, got shape {data.shape}")
        if np.any(data < 0) or not np.all(np.isfinite(data)):
            i, j = np.argwhere((data < 0) | ~np.isfinite(data))[0]
            raise MetricAxiomError(f"rho({i},{j}) must be a nonnegative real, got {data[i, j]}")
        diagonal = np.flatnonzero(np.diag(data) != 0)
        if diagonal.size:
            i = int(diagonal[0])
            raise MetricAxiomError(f"rho({i},{i}) must be 0, got {data[i, i]}")
        asymmetric = np.argwhere(data != data.T)
        if asymmetric.size:
            i, j = asymmetric[0]
            raise MetricAxiomError(f"rho({i},{j})={data[i, j]} differs from rho({j},{i})={data[j, i]}")
        degenerate = np.argwhere((data == 0) & ~np.eye(n, dtype=bool))
        if degenerate.size:
            i, j = degenerate[0]
            raise MetricAxiomError(f"rho({i},{j})=0 for distinct points {i} and {j}")
        for k in range(n):
            through_k = data[:, k, None] + data[None, k, :]
            broken = np.argwhere(data > through_k + AXIOM_TOLERANCE)
            if broken.size:
                i, j = broken[0]
                raise MetricAxiomError(
                    f"triangle inequality fails: rho({i},{j})={data[i, j]} > rho({i},{k})+rho({k},{j})={through_k[i, j]}"
                )


@dataclass(frozen=True, slots=True, eq=False)
class LineMetric(PointMetric):
    """Points on the real line, ``rho(i, j) = |x_i - x_j|``."""

    coords: np.ndarray

    @property
    def size(self) -> int:  # type: ignore[override]
        return int(self.coords.shape[0])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        left = self.coords[np.asarray(rows, dtype=int)]
        right = self.coords[np.asarray(cols, dtype=int)]
        return np.abs(left[:, None] - right[None, :])

    def diameter(self) -> float:
        return float(np.ptp(self.coords)) if self.coords.size else 0.0

    def validate(self) -> None:
        order = np.argsort(self.coords, kind="stable")
        repeated = np.flatnonzero(np.diff(self.coords[order]) == 0)
        if repeated.size:
            i, j = sorted((int(order[repeated[0]]), int(order[repeated[0] + 1])))
            raise MetricAxiomError(f"rho({i},{j})=0 for distinct points {i} and {j} (equal coordinates)")


@dataclass(frozen=True, slots=True, eq=False)
class WordMetric(PointMetric):
    """Words of fixed length encoded LSB-first in base ``alphabet``.

    ``rho(x, y) = 2^-(j-1)`` where ``j`` is the first coordinate where the words differ.
    """

    depth: int
    alphabet: int

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.alphabet**self.depth

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        left = np.asarray(rows, dtype=np.int64)[:, None]
        right = np.asarray(cols, dtype=np.int64)[None, :]
        result = np.zeros((left.shape[0], right.shape[1]))
        settled = np.zeros(result.shape, dtype=bool)
        for position in range(self.depth):
            scale = self.alphabet**position
            differs = ((left // scale) % self.alphabet) != ((right // scale) % self.alphabet)
            fresh = differs & ~settled
            result[fresh] = 2.0**-position
            settled |= differs
        return result

    def diameter(self) -> float:
        return 1.0 if self.depth > 0 and self.alphabet > 1 else 0.0


@dataclass(frozen=True, slots=True, eq=False)
class ProductMetric(PointMetric):
    """Max of the coordinate distances; point ``(i, j)`` has index ``i * right.size + j``."""

    left: PointMetric
    right: PointMetric

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.left.size * self.right.size

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        width = self.right.size
        rows_arr = np.asarray(rows, dtype=int)
        cols_arr = np.asarray(cols, dtype=int)
        left = self.left.submatrix(rows_arr // width, cols_arr // width)
        right = self.right.submatrix(rows_arr % width, cols_arr % width)
        return np.maximum(left, right)

    def diameter(self) -> float:
        return max(self.left.diameter(), self.right.diameter())


@dataclass(frozen=True, slots=True, eq=False)
class UnionMetric(PointMetric):
    """Disjoint union; points of ``left`` come first, cross distance is constant."""

    left: PointMetric
    right: PointMetric
    cross: float

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.left.size + self.right.size

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        offset = self.left.size
        rows_arr = np.asarray(rows, dtype=int)
        cols_arr = np.asarray(cols, dtype=int)
        result = np.full((rows_arr.size, cols_arr.size), self.cross)
        row_left, col_left = rows_arr < offset, cols_arr < offset
        if row_left.any() and col_left.any():
            result[np.ix_(row_left, col_left)] = self.left.submatrix(rows_arr[row_left], cols_arr[col_left])
        if (~row_left).any() and (~col_left).any():
            result[np.ix_(~row_left, ~col_left)] = self.right.submatrix(rows_arr[~row_left] - offset, cols_arr[~col_left] - offset)
        return result

    def diameter(self) -> float:
        return max(self.left.diameter(), self.right.diameter(), self.cross)


@dataclass(frozen=True, slots=True)
class FiniteSystem:
    """A finite metric space with a self-map, the ambient (X, T) at desk scale."""

    name: str
    mapping: Tuple[int, ...]
    metric: PointMetric = field(compare=False, repr=False)
    labels: Tuple[str, ...] = ()
    tds: bool = True

    def __post_init__(self) -> None:
        size = len(self.mapping)
        if size == 0:
            raise SurjectivityError(f"{self.name}: a system needs at least one point")
        if self.metric.size != size:
            raise MetricAxiomError(f"{self.name}: metric covers {self.metric.size} points, map has {size}")
        for index, image in enumerate(self.mapping):
            if not 0 <= image < size:
                raise SurjectivityError(f"{self.name}: map[{index}]={image} is outside 0..{size - 1}")
        if self.labels and len(self.labels) != size:
            raise MetricAxiomError(f"{self.name}: {len(self.labels)} labels for {size} points")
        if self.tds:
            hit = set(self.mapping)
            if len(hit) != size:
                missed = min(set(range(size)) - hit)
                raise SurjectivityError(f"{self.name}: map is not onto, point {missed} has no preimage")

    @property
    def size(self) -> int:
        return len(self.mapping)

    def step(self, index: int) -> int:
        return self.mapping[self.check_index(index)]

    def power(self, index: int, steps: int) -> int:
        current = self.check_index(index)
        for _ in range(steps):
            current = self.mapping[current]
        return current

    def distance(self, i: int, j: int) -> float:
        return self.metric.distance(self.check_index(i), self.check_index(j))

    def label(self, index: int) -> str:
        return self.labels[index] if self.labels else str(index)

    def check_index(self, index: int) -> int:
        if not 0 <= index < self.size:
            raise IndexError(f"{self.name}: point index {index} is outside 0..{self.size - 1}")
        return index


@dataclass(frozen=True, slots=True)
class CylinderSystem:
    """Exact symbolic system: the full shift over ``alphabet`` symbols or the dyadic odometer.

    Words are tuples read left to right as ``(x_1, x_2, ...)``; for the odometer
    ``x_1`` is the least significant binary digit.
    """

    kind: CylinderKind
    alphabet: int = 2

    def __post_init__(self) -> None:
        if self.kind == "odometer" and self.alphabet != 2:
            raise InvalidWordError("the dyadic odometer uses the alphabet {0, 1}")
        if self.alphabet < 2:
            raise InvalidWordError(f"alphabet size must be at least 2, got {self.alphabet}")

    @property
    def name(self) -> str:
        return "odometer" if self.kind == "odometer" else f"full-shift({self.alphabet})"

    def validate_word(self, word: Sequence[int], *, allow_empty: bool = False) -> Word:
        normalized = tuple(int(symbol) for symbol in word)
        if not normalized and not allow_empty:
            raise InvalidWordError(f"{self.name}: cylinder word must be nonempty")
        for position, symbol in enumerate(normalized):
            if not 0 <= symbol < self.alphabet:
                raise InvalidWordError(f"{self.name}: symbol {symbol} at position {position + 1} is outside 0..{self.alphabet - 1}")
        return normalized

    def word_value(self, word: Sequence[int]) -> int:
        """Integer value of a word read LSB-first."""
        value = 0
        for position, symbol in enumerate(self.validate_word(word, allow_empty=True)):
            value += symbol * self.alphabet**position
        return value

    def value_word(self, value: int, length: int) -> Word:
        return tuple((value // self.alphabet**position) % self.alphabet for position in range(length))

    def words(self, length: int) -> List[Word]:
        """All words of ``length`` in lexicographic order."""
        if length == 0:
            return [()]
        shorter = self.words(length - 1)
        return [prefix + (symbol,) for prefix in shorter for symbol in range(self.alphabet)]

    def cylinder_indices(self, depth: int, word: Sequence[int]) -> Tuple[int, ...]:
        """Points of ``truncate(depth)`` lying in the cylinder ``[word]``."""
        checked = self.validate_word(word)
        if len(checked) > depth:
            raise InvalidWordError(f"{self.name}: word of length {len(checked)} does not fit depth {depth}")
        modulus = self.alphabet ** len(checked)
        base = self.word_value(checked)
        return tuple(range(base, self.alphabet**depth, modulus))


@dataclass(frozen=True, slots=True)
class FactorMap:
    """Candidate factor map ``pi: source -> target`` between finite systems."""

    source: FiniteSystem
    target: FiniteSystem
    mapping: Tuple[int, ...]

    def validate(self) -> "FactorMap":
        if len(self.mapping) != self.source.size:
            raise NotEquivariantError(f"factor map has {len(self.mapping)} entries for {self.source.size} points")
        for point, image in enumerate(self.mapping):
            self.target.check_index(image)
            if self.mapping[self.source.step(point)] != self.target.step(image):
                raise NotEquivariantError(f"pi(T({point})) != S(pi({point})) for {self.source.name} -> {self.target.name}")
        hit = set(self.mapping)
        if len(hit) != self.target.size:
            missed = min(set(range(self.target.size)) - hit)
            raise SurjectivityError(f"factor map misses point {missed} of {self.target.name}")
        return self

    def preimage(self, points: Sequence[int]) -> Tuple[int, ...]:
        wanted = set(points)
        return tuple(index for index, image in enumerate(self.mapping) if image in wanted)


class MetricSpec(BaseModel):
    """Metric section of a system-description file."""

    kind: Literal["matrix", "coords1d"]
    data: List = Field(..., description="n x n matrix or n coordinates")


class SystemFile(BaseModel):
    """System-description file payload."""

    points: int = Field(..., ge=1)
    labels: Optional[List[str]] = None
    metric: MetricSpec
    map: List[int]
    tds: bool = True

    @validator("map", each_item=True)
    def _validate_map_entry(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"map entries must be nonnegative, got {value}")
        return value

    @root_validator(skip_on_failure=True)
    def _validate_lengths(cls, values: dict) -> dict:
        points = values["points"]
        if len(values["map"]) != points:
            raise ValueError(f"map has {len(values['map'])} entries, expected points={points}")
        labels = values.get("labels")
        if labels is not None and len(labels) != points:
            raise ValueError(f"labels has {len(labels)} entries, expected points={points}")
        metric: MetricSpec = values["metric"]
        if metric.kind == "matrix":
            if len(metric.data) != points or any(not isinstance(row, list) or len(row) != points for row in metric.data):
                raise ValueError(f"metric.data must be a {points}x{points} matrix")
        elif len(metric.data) != points:
            raise ValueError(f"metric.data has {len(metric.data)} coordinates, expected points={points}")
        return values


__all__ = [
    "PointMetric",
    "MatrixMetric",
    "LineMetric",
    "WordMetric",
    "ProductMetric",
    "UnionMetric",
    "FiniteSystem",
    "CylinderSystem",
    "FactorMap",
    "MetricSpec",
    "SystemFile",
    "Word",
]
