"""Apportionment methods over exact vote shares.

All methods break ties by party index. This module is the exact reference;
:mod:`fregevote.kernels` holds integer batch versions of the same rules used
for large experiments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import Profile
from .modified import iter_modified

Solution = tuple  # tuple[int, ...], non-negative, sums to k


@dataclass(frozen=True)
class ApportionmentProblem:
    p: tuple[Fraction, ...]
    k: int

    def __post_init__(self):
        p = tuple(Fraction(x) for x in self.p)
        if not p:
            raise ValueError("no parties")
        if any(x < 0 for x in p):
            raise ValueError("negative vote share")
        if sum(p) != 1:
            raise ValueError(f"vote shares sum to {sum(p)}, not 1")
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ValueError("house size must be a positive integer")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def from_votes(cls, votes: Sequence[int], k: int) -> ApportionmentProblem:
        if any(v < 0 for v in votes):
            raise ValueError("negative vote count")
        total = sum(votes)
        if total == 0:
            raise ValueError("no votes")
        return cls(tuple(Fraction(v, total) for v in votes), k)

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def quotas(self) -> tuple[Fraction, ...]:
        return tuple(self.k * x for x in self.p)

    def votes(self) -> tuple[int, ...]:
        """Smallest integer vote vector proportional to ``p``."""
        den = 1
        for x in self.p:
            den = math.lcm(den, x.denominator)
        return tuple(x.numerator * (den // x.denominator) for x in self.p)

    def with_house(self, k: int) -> ApportionmentProblem:
        return ApportionmentProblem(self.p, k)


class Divisor(enum.Enum):
    DHONDT = "dhondt"
    ADAMS = "adams"
    SAINTE_LAGUE = "sainte-lague"
    HUNTINGTON_HILL = "huntington-hill"

    def squared(self, a: int) -> Fraction:
        """d(a)**2; squares keep Huntington-Hill rational."""
        if a < 0:
            return Fraction(0)
        if self is Divisor.DHONDT:
            return Fraction((a + 1) ** 2)
        if self is Divisor.ADAMS:
            return Fraction(a * a)
        if self is Divisor.SAINTE_LAGUE:
            return Fraction(2 * a + 1, 2) ** 2
        return Fraction(a * (a + 1))

    def __call__(self, a: int) -> float:
        return math.sqrt(self.squared(a))


def largest_remainder(problem: ApportionmentProblem) -> Solution:
    quotas = problem.quotas
    seats = [math.floor(q) for q in quotas]
    left = problem.k - sum(seats)
    order = sorted(range(problem.m), key=lambda i: (-(quotas[i] - seats[i]), i))
    for i in order[:left]:
        seats[i] += 1
    return tuple(seats)


def _divisor_key(p: Fraction, d2: Fraction) -> tuple:
    # (1, p) for infinite priority, larger shares first among those
    if d2 == 0:
        return (1, p)
    return (0, p * p / d2)


def divisor_method(criterion: Divisor | str, problem: ApportionmentProblem) -> Solution:
    """Highest averages: each seat goes to the party maximizing p_i / d(a_i).

    A party with d(a_i) = 0 and p_i > 0 has infinite priority; several such
    parties are served in order of decreasing share. Zero-share parties never
    receive a seat.
    """
    criterion = Divisor(criterion)
    seats = [0] * problem.m
    live = [i for i in range(problem.m) if problem.p[i] > 0]
    for _ in range(problem.k):
        best = max(live, key=lambda i: (_divisor_key(problem.p[i], criterion.squared(seats[i])), -i))
        seats[best] += 1
    return tuple(seats)


def dhondt(problem: ApportionmentProblem) -> Solution:
    return divisor_method(Divisor.DHONDT, problem)


def adams(problem: ApportionmentProblem) -> Solution:
    return divisor_method(Divisor.ADAMS, problem)


def sainte_lague(problem: ApportionmentProblem) -> Solution:
    return divisor_method(Divisor.SAINTE_LAGUE, problem)


def huntington_hill(problem: ApportionmentProblem) -> Solution:
    return divisor_method(Divisor.HUNTINGTON_HILL, problem)


def quota_method(problem: ApportionmentProblem) -> Solution:
    """Seat ``l`` goes to the party maximizing p_i/(a_i+1) among those with a_i < p_i * l."""
    seats = [0] * problem.m
    for ell in range(1, problem.k + 1):
        eligible = [i for i in range(problem.m) if seats[i] < problem.p[i] * ell]
        if not eligible:
            raise AssertionError(f"no party eligible for seat {ell}")
        best = max(eligible, key=lambda i: (problem.p[i] / (seats[i] + 1), -i))
        seats[best] += 1
    return tuple(seats)


def frege_apportionment(problem: ApportionmentProblem) -> Solution:
    """Win counts after ``k`` rounds of the modified method on the fixed electorate ``p``."""
    if problem.m == 1:
        return (problem.k,)
    profile = Profile.fixed(problem.votes())
    for state, winner in iter_modified(profile, problem.k):
        pass
    wins = list(state.wins)
    wins[winner] += 1
    return tuple(wins)


METHODS: dict[str, Callable[[ApportionmentProblem], Solution]] = {
    "largest-remainder": largest_remainder,
    "dhondt": dhondt,
    "adams": adams,
    "sainte-lague": sainte_lague,
    "huntington-hill": huntington_hill,
    "quota": quota_method,
    "frege": frege_apportionment,
}

METHOD_TITLES = {
    "largest-remainder": "Largest Remainder",
    "dhondt": "D'Hondt (Jefferson)",
    "adams": "Adams",
    "sainte-lague": "Sainte-Laguë (Webster)",
    "huntington-hill": "Huntington-Hill",
    "quota": "Quota method",
    "frege": "Frege's apportionment method",
}


def get_method(name: str) -> Callable[[ApportionmentProblem], Solution]:
    try:
        return METHODS[name]
    except KeyError:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}") from None


def apportion(method: str, problem: ApportionmentProblem) -> Solution:
    return get_method(method)(problem)


def compare_all(problem: ApportionmentProblem) -> dict[str, Solution]:
    return {name: fn(problem) for name, fn in METHODS.items()}


def is_d_admissible(criterion: Divisor | str, problem: ApportionmentProblem, seats: Sequence[int]) -> bool:
    """Whether some x > 0 has seats[i] in [p_i / x]_d for every party.

    Works with y = (1/x)**2: each party constrains y to an interval
    [d(a-1)^2 / p^2, d(a)^2 / p^2]; the solution is admissible iff the
    intersection contains a positive point.
    """
    criterion = Divisor(criterion)
    if sum(seats) != problem.k or any(a < 0 for a in seats):
        return False
    lo, hi = Fraction(0), None
    for p, a in zip(problem.p, seats):
        d_lo = criterion.squared(a - 1)
        d_hi = criterion.squared(a)
        if p == 0:
            # p/x = 0 must lie in [d(a-1), d(a)]
            if a > 0 and d_lo > 0:
                return False
            continue
        lo = max(lo, d_lo / (p * p))
        bound = d_hi / (p * p)
        hi = bound if hi is None else min(hi, bound)
    if hi is None:
        return True
    return lo <= hi and hi > 0
