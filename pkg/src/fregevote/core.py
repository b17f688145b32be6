"""Exact rationals, rounds and voting profiles.

Candidates are identified by 0-based index; index order is also the
tie-breaking order used by every method in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

Rational = Fraction
Round = tuple  # tuple[int, ...] of plurality scores


class ProfileError(ValueError):
    """Invalid round or profile data."""


class InvariantError(AssertionError):
    """A proven property of a method failed at runtime (always a bug)."""


def rat(num: int, den: int = 1) -> Fraction:
    if den == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return Fraction(num, den)


def floor(x: Fraction) -> int:
    return math.floor(x)


def ceil(x: Fraction) -> int:
    return math.ceil(x)


def validate_round(scores: Sequence[int], m: int | None = None, index: int | None = None) -> Round:
    where = f"round {index}" if index is not None else "round"
    if len(scores) == 0:
        raise ProfileError(f"empty {where}")
    if m is not None and len(scores) != m:
        raise ProfileError(f"{where} has {len(scores)} scores, expected {m}")
    out = []
    for j, v in enumerate(scores, start=1):
        if isinstance(v, bool) or int(v) != v:
            raise ProfileError(f"non-integer score, {where}, candidate {j}")
        if v < 0:
            raise ProfileError(f"negative score, {where}, candidate {j}")
        out.append(int(v))
    if sum(out) == 0:
        raise ProfileError(f"{where} has no voters")
    return tuple(out)


def normalize(scores: Sequence[int]) -> tuple[Fraction, ...]:
    """Plurality scores divided by the number of voters; sums to exactly 1."""
    scores = validate_round(scores)
    n = sum(scores)
    return tuple(Fraction(v, n) for v in scores)


def default_labels(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(chr(ord("a") + j) for j in range(m))
    return tuple(str(j + 1) for j in range(m))


@dataclass(frozen=True)
class Profile:
    """Per-round plurality scores for ``m`` candidates.

    With ``repeat=True`` the listed rounds are cycled forever; a single
    repeated round is a fixed electorate. Otherwise the profile ends after
    its last round.
    """

    rounds: tuple[Round, ...]
    repeat: bool = False
    candidates: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.rounds:
            raise ProfileError("profile has no rounds")
        m = len(self.rounds[0])
        if m < 2:
            raise ProfileError("at least two candidates are required")
        rounds = tuple(validate_round(r, m, i) for i, r in enumerate(self.rounds, start=1))
        object.__setattr__(self, "rounds", rounds)
        labels = tuple(self.candidates) or default_labels(m)
        if len(labels) != m:
            raise ProfileError(f"{len(labels)} candidate names for {m} candidates")
        object.__setattr__(self, "candidates", labels)

    @classmethod
    def fixed(cls, scores: Sequence[int], candidates: Sequence[str] = ()) -> Profile:
        return cls((tuple(scores),), repeat=True, candidates=tuple(candidates))

    @classmethod
    def varying(cls, rounds: Sequence[Sequence[int]], candidates: Sequence[str] = ()) -> Profile:
        return cls(tuple(tuple(r) for r in rounds), repeat=False, candidates=tuple(candidates))

    @property
    def m(self) -> int:
        return len(self.rounds[0])

    @property
    def is_fixed(self) -> bool:
        return self.repeat and all(r == self.rounds[0] for r in self.rounds)

    @property
    def horizon(self) -> int | None:
        """Number of available rounds, or None if unbounded."""
        return None if self.repeat else len(self.rounds)

    def round(self, t: int) -> Round:
        """Plurality scores at time ``t`` (1-based)."""
        if t < 1:
            raise IndexError("rounds start at t=1")
        if self.repeat:
            return self.rounds[(t - 1) % len(self.rounds)]
        if t > len(self.rounds):
            raise IndexError(f"profile has only {len(self.rounds)} rounds, asked for t={t}")
        return self.rounds[t - 1]

    def shares(self, t: int) -> tuple[Fraction, ...]:
        return normalize(self.round(t))

    def voters(self, t: int) -> int:
        return sum(self.round(t))

    def iter_rounds(self, horizon: int | None = None) -> Iterator[Round]:
        if horizon is None:
            horizon = self.horizon
        if horizon is not None and self.horizon is not None and horizon > self.horizon:
            raise ProfileError(f"profile has {self.horizon} rounds, horizon {horizon} requested")
        t = 1
        while horizon is None or t <= horizon:
            yield self.round(t)
            t += 1

    def scaled(self, factor: int) -> Profile:
        return Profile(tuple(tuple(factor * v for v in r) for r in self.rounds), self.repeat, self.candidates)
