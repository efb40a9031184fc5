"""Delta-matroids on bitmask families and greedy linear optimization over them.

Element i (0-based) is bit ``1 << i``; element labels in I/O are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import groupby, permutations, product
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from jumpgreedy import kernels
from jumpgreedy.jump_systems import ExplicitJumpSystem

MAX_GROUND = 16
MAX_ENUM_GROUND = 4


class DeltaMatroidError(ValueError):
    pass


def mask_of(elements: Iterable[int]) -> int:
    """Bitmask of a set of 0-based elements."""
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def format_set(mask: int) -> str:
    return "{" + ",".join(str(e + 1) for e in elements_of(mask)) + "}"


@dataclass(frozen=True)
class DeltaMatroid:
    """A set family over {0..n-1}. Not necessarily a delta-matroid until verified."""

    ground_size: int
    family: tuple[int, ...]
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.ground_size <= MAX_GROUND:
            raise DeltaMatroidError(f"ground size must be in [1, {MAX_GROUND}]")
        fam = tuple(sorted(set(int(m) for m in self.family)))
        if not fam:
            raise DeltaMatroidError("the family must be nonempty")
        if fam[0] < 0 or fam[-1] >= 1 << self.ground_size:
            raise DeltaMatroidError("family member outside the ground set")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "_members", frozenset(fam))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "DeltaMatroid":
        """Build from 0-based element sets."""
        return cls(n, tuple(mask_of(s) for s in sets))

    def __contains__(self, mask: int) -> bool:
        return mask in self._members

    def __len__(self) -> int:
        return len(self.family)


@dataclass(frozen=True)
class DmCounterexample:
    X: int
    Y: int
    i: int

    def __str__(self) -> str:
        return f"X={format_set(self.X)} Y={format_set(self.Y)} i={self.i + 1}"


def verify_symmetric_exchange(D: DeltaMatroid, backend=None) -> Optional[DmCounterexample]:
    """Exhaustive check over X, Y in the family and i in X Δ Y; first failure or None."""
    member = np.zeros(1 << D.ground_size, dtype=np.uint8)
    fam = np.array(D.family, dtype=np.int64)
    member[fam] = 1
    hit = (backend or kernels).exchange_scan(member, fam, D.ground_size)
    if hit is None:
        return None
    return DmCounterexample(int(hit[0]), int(hit[1]), int(hit[2]))


def to_jump_system(D: DeltaMatroid) -> ExplicitJumpSystem:
    n = D.ground_size
    return ExplicitJumpSystem(
        (tuple((m >> i) & 1 for i in range(n)) for m in D.family), dimension=n
    )


def from_point(x: Sequence[int]) -> int:
    return mask_of(i for i, v in enumerate(x) if v)


def to_point(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def cost(c: Sequence, mask: int):
    total = 0
    for i in elements_of(mask):
        total += c[i]
    return total


def dm_optimum(D: DeltaMatroid, c: Sequence) -> tuple:
    """(optimal cost, optimal masks) by brute force."""
    costs = {m: cost(c, m) for m in D.family}
    best = min(costs.values())
    return best, tuple(m for m in D.family if costs[m] == best)


def mu_dm(D: DeltaMatroid, c: Sequence, F: int, opts=None) -> int:
    """min |F Δ F*| over optimal F*. ``opts`` may pass precomputed optimal masks."""
    if opts is None:
        _, opts = dm_optimum(D, c)
    return min(bin(F ^ G).count("1") for G in opts)


def m_star_dm(D: DeltaMatroid, c: Sequence, F: int, opts=None) -> frozenset:
    if opts is None:
        _, opts = dm_optimum(D, c)
    d = {G: bin(F ^ G).count("1") for G in opts}
    best = min(d.values())
    return frozenset(G for G, v in d.items() if v == best)


def greedy_order(c: Sequence) -> list[int]:
    """Elements by non-increasing |c(i)|, smaller index first on ties."""
    return sorted(range(len(c)), key=lambda i: (-abs(c[i]), i))


def greedy_orders(c: Sequence) -> Iterator[list[int]]:
    """Every ordering consistent with non-increasing |c(i)|."""
    groups = [list(g) for _, g in groupby(greedy_order(c), key=lambda i: abs(c[i]))]
    for combo in product(*(permutations(g) for g in groups)):
        yield [i for part in combo for i in part]


def dm_greedy(D: DeltaMatroid, c: Sequence, order: Optional[Sequence[int]] = None) -> int:
    """Scan elements by |c| and fix membership one element at a time.

    The extension test "some Y among the later elements completes the chosen
    prefix" is a family scan: a member whose trace on the scanned elements
    equals the candidate.
    """
    if len(c) != D.ground_size:
        raise DeltaMatroidError("weight vector length differs from ground size")
    order = list(order) if order is not None else greedy_order(c)
    F = 0
    scanned = 0
    for i in order:
        bit = 1 << i
        scanned |= bit
        if c[i] < 0:
            want = F | bit
            if any(G & scanned == want for G in D.family):
                F = want
        else:
            if not any(G & scanned == F for G in D.family):
                F |= bit
    return F


@dataclass(frozen=True)
class DmStep:
    F: int
    i: int
    j: int
    cost_before: object
    cost_after: object

    @property
    def G(self) -> int:
        return self.F ^ (1 << self.i) ^ (0 if self.i == self.j else 1 << self.j)


@dataclass
class DmTrace:
    start: int
    steps: list[DmStep] = field(default_factory=list)

    @property
    def final(self) -> int:
        return self.steps[-1].G if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)


def _delta(F: int, i: int, j: int) -> int:
    return F ^ (1 << i) if i == j else F ^ (1 << i) ^ (1 << j)


def dm_is_locally_optimal(D: DeltaMatroid, c: Sequence, F: int) -> bool:
    cF = cost(c, F)
    n = D.ground_size
    for i in range(n):
        for j in range(i, n):
            G = _delta(F, i, j)
            if G in D and cost(c, G) < cF:
                return False
    return True


def dm_refined_choices(D: DeltaMatroid, c: Sequence, F: int, tie: str = "all") -> list[tuple[int, int]]:
    """Every (i*, j*) the refined algorithm may take at F; empty iff F is locally optimal."""
    n = D.ground_size
    cF = cost(c, F)
    admissible = [
        i for i in range(n)
        if any((G := _delta(F, i, j)) in D and cost(c, G) < cF for j in range(n))
    ]
    if not admissible:
        return []
    best = min(cost(c, F ^ (1 << i)) for i in admissible)
    i_cands = [i for i in admissible if cost(c, F ^ (1 << i)) == best]
    if tie != "all":
        i_cands = i_cands[:1]
    out = []
    for i in i_cands:
        if F ^ (1 << i) in D:
            out.append((i, i))
            continue
        partners = [j for j in range(n) if j != i and _delta(F, i, j) in D]
        low = min(cost(c, _delta(F, i, j)) for j in partners)
        js = [j for j in partners if cost(c, _delta(F, i, j)) == low]
        if tie != "all":
            js = js[:1]
        out.extend((i, j) for j in js)
    return out


def dm_refined_greedy(D: DeltaMatroid, c: Sequence, F0: int) -> DmTrace:
    """Refined greedy on the family with smallest-index tie-breaking."""
    if len(c) != D.ground_size:
        raise DeltaMatroidError("weight vector length differs from ground size")
    if F0 not in D:
        raise DeltaMatroidError(f"start set {format_set(F0)} is not feasible")
    trace = DmTrace(F0)
    F = F0
    while True:
        choices = dm_refined_choices(D, c, F, tie="lex")
        if not choices:
            return trace
        i, j = choices[0]
        G = _delta(F, i, j)
        trace.steps.append(DmStep(F, i, j, cost(c, F), cost(c, G)))
        F = G


def check_corollary3_step(D: DeltaMatroid, c: Sequence, F: int, i: int, j: int, opts=None) -> Optional[str]:
    """µ_DM drop and the nearest-optimum membership rule for one refined step."""
    if opts is None:
        _, opts = dm_optimum(D, c)
    G = _delta(F, i, j)
    expected_drop = 1 if i == j else 2
    before, after = mu_dm(D, c, F, opts), mu_dm(D, c, G, opts)
    if before - after != expected_drop:
        return f"mu_DM {before}->{after}, expected drop {expected_drop}"
    near_before = m_star_dm(D, c, F, opts)
    near_after = m_star_dm(D, c, G, opts)
    for Fs in near_before:
        ok = True
        for e in {i, j}:
            bit = 1 << e
            if F & bit and Fs & bit:
                ok = False
            if not F & bit and not Fs & bit:
                ok = False
        if ok != (Fs in near_after):
            return f"membership rule fails for F*={format_set(Fs)}"
    if not near_after <= near_before:
        return "M*_DM after the step is not contained in M*_DM before it"
    return None


def enumerate_delta_matroids(n: int, backend=None) -> Iterator[DeltaMatroid]:
    """All nonempty families over {0..n-1} satisfying the symmetric exchange axiom.

    Families are indexed by a 2**n-bit code (bit m set iff mask m is a member)
    and emitted in increasing code order.
    """
    if not 1 <= n <= MAX_ENUM_GROUND:
        raise DeltaMatroidError(f"enumeration supports 1 <= n <= {MAX_ENUM_GROUND}")
    for D in enumerate_families(n):
        if verify_symmetric_exchange(D, backend) is None:
            yield D


def enumerate_families(n: int) -> Iterator[DeltaMatroid]:
    size = 1 << n
    for code in range(1, 1 << size):
        yield DeltaMatroid(n, tuple(m for m in range(size) if code >> m & 1))
