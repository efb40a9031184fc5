"""Separable convex objectives f(x) = constant + Σ f_i(x(i)).

Coefficients are kept exact: ints stay ints, decimal or ratio strings become
Fractions. Floats are only accepted when the objective is built with
``numeric="float"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence, Union

from jumpgreedy.core import DimensionError, UnitStep, add_step, add_steps, inc

Number = Union[int, Fraction, float]


class ObjectiveError(ValueError):
    pass


def to_number(value, numeric: str = "exact") -> Number:
    """Parse an int, exact decimal/ratio string, or (float mode only) a float."""
    if numeric == "float":
        return float(Fraction(value)) if isinstance(value, str) else float(value)
    if isinstance(value, bool):
        raise ObjectiveError(f"not a number: {value!r}")
    if isinstance(value, float):
        raise ObjectiveError(f"float {value!r} given for an exact objective; use a decimal string")
    if isinstance(value, (int, Rational)):
        q = Fraction(value)
    elif isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except ValueError as exc:
            raise ObjectiveError(f"not an exact number: {value!r}") from exc
    else:
        raise ObjectiveError(f"not a number: {value!r}")
    return q.numerator if q.denominator == 1 else q


def number_to_json(v: Number):
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    if isinstance(v, float) and v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


@dataclass(frozen=True)
class Linear:
    slope: Number
    intercept: Number = 0

    def __call__(self, k: int) -> Number:
        return self.slope * k + self.intercept

    def domain(self) -> tuple[Optional[int], Optional[int]]:
        return None, None

    def convexity_violation(self) -> Optional[int]:
        return None


@dataclass(frozen=True)
class Quadratic:
    """weight * (k - center)^2 + offset."""

    weight: Number
    center: Number = 0
    offset: Number = 0

    def __call__(self, k: int) -> Number:
        d = k - self.center
        return self.weight * d * d + self.offset

    def domain(self) -> tuple[Optional[int], Optional[int]]:
        return None, None

    def convexity_violation(self) -> Optional[int]:
        if self.weight < 0:
            c = self.center
            return int(c) if not isinstance(c, Fraction) else c.numerator // c.denominator
        return None


@dataclass(frozen=True)
class Table:
    """Dense values over [lo, lo + len(values))."""

    lo: int
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ObjectiveError("table needs at least one value")
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def __call__(self, k: int) -> Number:
        if not self.lo <= k <= self.hi:
            raise ObjectiveError(f"argument {k} outside table domain [{self.lo}, {self.hi}]")
        return self.values[k - self.lo]

    def domain(self) -> tuple[Optional[int], Optional[int]]:
        return self.lo, self.hi

    def convexity_violation(self) -> Optional[int]:
        v = self.values
        for k in range(1, len(v) - 1):
            if v[k - 1] + v[k + 1] < 2 * v[k]:
                return self.lo + k
        return None


UnivariateConvex = Union[Linear, Quadratic, Table]


class SeparableObjective:
    """f(x) = constant + Σ_i terms[i](x(i))."""

    def __init__(self, terms: Sequence[UnivariateConvex], constant: Number = 0, numeric: str = "exact"):
        if not terms:
            raise ObjectiveError("objective needs at least one coordinate")
        self.terms = tuple(terms)
        self.constant = constant
        self.numeric = numeric

    @property
    def dimension(self) -> int:
        return len(self.terms)

    def __call__(self, x: Sequence[int]) -> Number:
        if len(x) != len(self.terms):
            raise DimensionError(f"point has dimension {len(x)}, objective has {len(self.terms)}")
        total = self.constant
        for term, k in zip(self.terms, x):
            total += term(k)
        return total

    eval = __call__

    def __repr__(self) -> str:
        return f"SeparableObjective({list(self.terms)!r}, constant={self.constant!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SeparableObjective)
            and self.terms == other.terms
            and self.constant == other.constant
            and self.numeric == other.numeric
        )

    def covers(self, lo: Sequence[int], hi: Sequence[int], margin: int = 1) -> Optional[int]:
        """Return the first coordinate whose domain misses [lo - margin, hi + margin], else None."""
        for i, (term, a, b) in enumerate(zip(self.terms, lo, hi)):
            dlo, dhi = term.domain()
            if (dlo is not None and dlo > a - margin) or (dhi is not None and dhi < b + margin):
                return i
        return None

    @classmethod
    def linear(cls, slopes: Sequence[Number], constant: Number = 0) -> "SeparableObjective":
        return cls([Linear(c) for c in slopes], constant)


def verify_convexity(f: SeparableObjective) -> Optional[tuple[int, int]]:
    """None if every term is discretely convex, else (0-based coordinate, breakpoint)."""
    for i, term in enumerate(f.terms):
        k = term.convexity_violation()
        if k is not None:
            return i, k
    return None


def check_prop1_exchange(f: SeparableObjective, x, y, s: UnitStep) -> bool:
    """f(x) + f(y) >= f(x + s) + f(y - s) for s in inc(x, y)."""
    if s not in inc(x, y):
        raise ValueError(f"{s} is not in inc(x, y)")
    return f(x) + f(y) >= f(add_step(tuple(x), s)) + f(add_step(tuple(y), -s))


def check_prop1_additive(f: SeparableObjective, x, s: UnitStep, t: UnitStep) -> bool:
    """f(x+s+t) - f(x) == (f(x+s) - f(x)) + (f(x+t) - f(x)) for steps on distinct coordinates."""
    if s.is_zero or t.is_zero or s.index == t.index:
        raise ValueError("steps must be nonzero with distinct supports")
    x = tuple(x)
    fx = f(x)
    return f(add_steps(x, s, t)) - fx == (f(add_step(x, s)) - fx) + (f(add_step(x, t)) - fx)


def check_prop1(f: SeparableObjective, *args) -> bool:
    """Dispatch on arity: (x, y, s) for the exchange inequality, (x, s, t) for additivity."""
    if len(args) != 3:
        raise TypeError("check_prop1 takes (x, y, s) or (x, s, t)")
    if isinstance(args[1], UnitStep):
        return check_prop1_additive(f, *args)
    return check_prop1_exchange(f, *args)


def random_objective(kind: str, lo: Sequence[int], hi: Sequence[int], rng, constant: Number = 0) -> SeparableObjective:
    """A random integral convex objective covering [lo - 1, hi + 1].

    ``kind`` is ``linear``, ``quadratic`` or ``table``. Coefficients are
    small so that f-value ties are common.
    """
    terms: list = []
    for a, b in zip(lo, hi):
        if kind == "linear":
            terms.append(Linear(int(rng.integers(-3, 4))))
        elif kind == "quadratic":
            terms.append(Quadratic(int(rng.integers(0, 3)), int(rng.integers(a - 1, b + 2))))
        elif kind == "table":
            width = b - a + 3
            slopes = sorted(int(v) for v in rng.integers(-4, 5, size=width - 1))
            values = [int(rng.integers(0, 5))]
            for d in slopes:
                values.append(values[-1] + d)
            terms.append(Table(a - 1, tuple(values)))
        else:
            raise ObjectiveError(f"unknown objective kind {kind!r}")
    return SeparableObjective(terms, constant)
