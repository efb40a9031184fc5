"""Integer-vector primitives: L1 distance, unit steps, inc(x, y) and S-regions.

Points are plain tuples of ints. Coordinates are 0-based internally; the
string form of a step (``+χ1``) and all file I/O use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

Point = tuple[int, ...]

COORD_LIMIT = 10**9


class DimensionError(ValueError):
    """Two points (or a point and a system) disagree on dimension."""


def as_point(coords: Sequence[int]) -> Point:
    pt = tuple(int(c) for c in coords)
    for c in pt:
        if abs(c) > COORD_LIMIT:
            raise ValueError(f"coordinate {c} exceeds |x(i)| <= {COORD_LIMIT}")
    return pt


def _check_dims(x: Sequence[int], y: Sequence[int]) -> None:
    if len(x) != len(y):
        raise DimensionError(f"dimension mismatch: {len(x)} vs {len(y)}")


@dataclass(frozen=True, order=True)
class UnitStep:
    """An element of U ∪ {0}.

    ``sign`` is 0 for the zero step (``index`` is then -1), otherwise +1 or -1
    on the 0-based coordinate ``index``.
    """

    index: int = -1
    sign: int = 0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"bad sign {self.sign}")
        if (self.sign == 0) != (self.index == -1):
            raise ValueError("zero step must have index -1 and nonzero steps index >= 0")

    @classmethod
    def plus(cls, index: int) -> "UnitStep":
        return cls(index, 1)

    @classmethod
    def minus(cls, index: int) -> "UnitStep":
        return cls(index, -1)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def norm(self) -> int:
        return abs(self.sign)

    def __neg__(self) -> "UnitStep":
        return UnitStep(self.index, -self.sign) if self.sign else self

    def sort_key(self) -> tuple[int, int]:
        # zero first, then by coordinate, + before -
        if self.sign == 0:
            return (-1, 0)
        return (self.index, 0 if self.sign > 0 else 1)

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        return f"{'+' if self.sign > 0 else '-'}χ{self.index + 1}"

    def to_token(self) -> str:
        """Serialized form: ``"0"``, ``"+3"``, ``"-1"`` (1-based)."""
        if self.sign == 0:
            return "0"
        return f"{'+' if self.sign > 0 else '-'}{self.index + 1}"

    @classmethod
    def from_token(cls, token: str) -> "UnitStep":
        token = token.strip()
        if token == "0":
            return ZERO
        if len(token) < 2 or token[0] not in "+-" or not token[1:].isdigit():
            raise ValueError(f"bad unit step token {token!r}")
        index = int(token[1:]) - 1
        if index < 0:
            raise ValueError(f"unit step index must be >= 1, got {token!r}")
        return cls(index, 1 if token[0] == "+" else -1)


ZERO = UnitStep()


@lru_cache(maxsize=None)
def unit_steps(n: int) -> tuple[UnitStep, ...]:
    """U in canonical order: +χ1, -χ1, +χ2, -χ2, ..."""
    return tuple(UnitStep(i, sign) for i in range(n) for sign in (1, -1))


@lru_cache(maxsize=None)
def steps_with_zero(n: int) -> tuple[UnitStep, ...]:
    return (ZERO,) + unit_steps(n)


def add_step(x: Point, s: UnitStep) -> Point:
    if s.sign == 0:
        return x
    if s.index >= len(x):
        raise DimensionError(f"step {s} outside dimension {len(x)}")
    lst = list(x)
    lst[s.index] += s.sign
    return tuple(lst)


def add_steps(x: Point, *steps: UnitStep) -> Point:
    for s in steps:
        x = add_step(x, s)
    return x


def combined_norm(s: UnitStep, t: UnitStep) -> int:
    """‖s + t‖₁."""
    if s.sign == 0 or t.sign == 0:
        return s.norm() + t.norm()
    if s.index == t.index:
        return 2 if s.sign == t.sign else 0
    return 2


def l1_distance(x: Sequence[int], y: Sequence[int]) -> int:
    _check_dims(x, y)
    return sum(abs(a - b) for a, b in zip(x, y))


def inc(x: Sequence[int], y: Sequence[int]) -> list[UnitStep]:
    """Unit steps from x that strictly reduce the L1 distance to y, in canonical order."""
    _check_dims(x, y)
    out = []
    for i, (a, b) in enumerate(zip(x, y)):
        if b > a:
            out.append(UnitStep(i, 1))
        elif b < a:
            out.append(UnitStep(i, -1))
    return out


def step_between(x: Sequence[int], y: Sequence[int]) -> tuple[UnitStep, UnitStep]:
    """Decompose y - x (with ‖y - x‖₁ <= 2) into (s, t), s first in canonical order."""
    _check_dims(x, y)
    parts: list[UnitStep] = []
    for i, (a, b) in enumerate(zip(x, y)):
        d = b - a
        if abs(d) > 2:
            raise ValueError("points are more than two unit steps apart")
        parts.extend([UnitStep(i, 1 if d > 0 else -1)] * abs(d))
    if len(parts) > 2:
        raise ValueError("points are more than two unit steps apart")
    parts += [ZERO] * (2 - len(parts))
    if parts[0].is_zero:
        return ZERO, ZERO
    return parts[0], parts[1]


def in_s_region(y: Sequence[int], x: Sequence[int], s: UnitStep, t: UnitStep) -> bool:
    """Membership of y in S(x; s, t) via the closed-form case table."""
    _check_dims(x, y)
    if combined_norm(s, t) == 0:
        raise ValueError("S(x; s, t) is undefined for s + t = 0")
    if s.is_zero:
        s, t = t, s
    i = s.index
    if t.is_zero:
        return y[i] <= x[i] - 1 if s.sign < 0 else y[i] >= x[i] + 1
    if t.index == i:
        return y[i] <= x[i] - 2 if s.sign < 0 else y[i] >= x[i] + 2
    j = t.index
    ok_i = y[i] <= x[i] - 1 if s.sign < 0 else y[i] >= x[i] + 1
    ok_j = y[j] <= x[j] - 1 if t.sign < 0 else y[j] >= x[j] + 1
    return ok_i and ok_j


def in_s_region_direct(y: Sequence[int], x: Sequence[int], s: UnitStep, t: UnitStep) -> bool:
    """Membership of y in S(x; s, t) by evaluating the defining distance identity."""
    norm = combined_norm(s, t)
    if norm == 0:
        raise ValueError("S(x; s, t) is undefined for s + t = 0")
    target = add_steps(tuple(x), s, t)
    return l1_distance(y, target) == l1_distance(y, x) - norm


def box_points(lo: Sequence[int], hi: Sequence[int]) -> Iterator[Point]:
    """All integer points of the box [lo, hi] in lexicographic order."""
    from itertools import product

    _check_dims(lo, hi)
    return (tuple(p) for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def format_point(x: Sequence[int]) -> str:
    return "(" + ",".join(str(c) for c in x) + ")"
