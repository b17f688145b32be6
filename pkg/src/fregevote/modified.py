"""Modified Frege method: normalized scores and a constant cost of winning 1.

Scores are exact. Internally every state keeps integer numerators over one
common denominator (the lcm of the electorate sizes seen so far), which keeps
long runs on fixed electorates in plain integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import InvariantError, Profile, ProfileError, normalize
from .original import argmax_first
from .trace import Trace


def _common(shares: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    den = 1
    for x in shares:
        den = math.lcm(den, x.denominator)
    return tuple(x.numerator * (den // x.denominator) for x in shares), den


def _check_shares(shares: Sequence[Fraction], m: int | None) -> tuple[Fraction, ...]:
    shares = tuple(Fraction(x) for x in shares)
    if m is not None and len(shares) != m:
        raise ProfileError(f"got {len(shares)} shares, expected {m}")
    if any(x < 0 for x in shares):
        raise ProfileError("negative share")
    if sum(shares) != 1:
        raise ProfileError(f"shares sum to {sum(shares)}, not 1")
    return shares


@dataclass(frozen=True)
class ModifiedState:
    """State at round ``t``.

    ``num[j] / den`` is the aggregate score s_j(t), ``cum[j] / den`` the
    cumulative share sum_{s<=t} p_j(s), and ``wins`` holds r_j(t-1).
    """

    t: int
    num: tuple[int, ...]
    cum: tuple[int, ...]
    den: int
    wins: tuple[int, ...]

    @classmethod
    def start(cls, shares: Sequence[Fraction]) -> ModifiedState:
        shares = _check_shares(shares, None)
        num, den = _common(shares)
        return cls(1, num, num, den, (0,) * len(num))

    @property
    def m(self) -> int:
        return len(self.num)

    @property
    def s(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    @property
    def cumulative(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.cum)

    @property
    def winner(self) -> int:
        return argmax_first(self.num)

    def check_identity(self) -> None:
        """s_j(t) = sum_{s<=t} p_j(s) - r_j(t-1)."""
        for x, c, r in zip(self.num, self.cum, self.wins):
            if x != c - r * self.den:
                raise InvariantError(f"score identity broken at t={self.t}")


def _advance(state: ModifiedState, pnum: Sequence[int], pden: int) -> tuple[ModifiedState, int]:
    winner = state.winner
    den = math.lcm(state.den, pden)
    f, g = den // state.den, den // pden
    num = [x * f + p * g for x, p in zip(state.num, pnum)]
    num[winner] -= den
    cum = tuple(c * f + p * g for c, p in zip(state.cum, pnum))
    wins = list(state.wins)
    wins[winner] += 1
    return ModifiedState(state.t + 1, tuple(num), cum, den, tuple(wins)), winner


def step_modified(state: ModifiedState, shares: Sequence[Fraction]) -> tuple[ModifiedState, int]:
    """Elect the round-``t`` winner (cost 1) and add the next round's shares."""
    shares = _check_shares(shares, state.m)
    return _advance(state, *_common(shares))


def _check_score_bounds(state: ModifiedState, pnum: Sequence[int]) -> None:
    if sum(state.num) != state.den:
        raise InvariantError(f"aggregate scores do not sum to 1 at t={state.t}")
    for x, p in zip(state.num, pnum):
        if x - p <= -state.den:
            raise InvariantError(f"s - p <= -1 at t={state.t}")


def iter_modified(profile: Profile, horizon: int | None = None, debug: bool = False) -> Iterator[tuple[ModifiedState, int]]:
    """Yield ``(state_t, winner_t)`` for t = 1, 2, ...

    Shares of a round are computed once and reused on repeating profiles.
    With ``debug`` the cumulative-share identity is asserted every round.
    """
    if horizon is None:
        horizon = profile.horizon
    if horizon is not None and profile.horizon is not None and horizon > profile.horizon:
        raise ProfileError(f"profile has {profile.horizon} rounds, horizon {horizon} requested")
    cache: dict[tuple, tuple[tuple[int, ...], int]] = {}

    def shares_at(t: int) -> tuple[tuple[int, ...], int]:
        r = profile.round(t)
        if r not in cache:
            cache[r] = _common(normalize(r))
        return cache[r]

    state = ModifiedState.start(normalize(profile.round(1)))
    t = 1
    pnum, pden = shares_at(1)
    while True:
        g = state.den // pden
        _check_score_bounds(state, [p * g for p in pnum])
        if debug:
            state.check_identity()
        winner = state.winner
        yield state, winner
        if horizon is not None and t >= horizon:
            return
        pnum, pden = shares_at(t + 1)
        state, _ = _advance(state, pnum, pden)
        t += 1


def run_modified(profile: Profile, horizon: int, debug: bool = False) -> Trace:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    rows, dens, winners = [], [], []
    for state, winner in iter_modified(profile, horizon, debug=debug):
        rows.append(state.num)
        dens.append(state.den)
        winners.append(winner)
    return Trace(
        method="modified",
        candidates=profile.candidates,
        scores=tuple(profile.round(t) for t in range(1, horizon + 1)),
        scaled=tuple(rows),
        denominators=tuple(dens),
        winners=tuple(winners),
        costs=(1,) * horizon,
    )


def lower_quota_cap(m: int) -> int:
    """Largest possible lower-quota deficit of the modified method: ceil((m-3)/2), 0 for m<=3."""
    return max(0, -((3 - m) // 2))


@dataclass(frozen=True)
class QuotaReport:
    """Variable quota audit of a trace.

    ``upper_slack[t-1][j] = r_j(t) - ceil(Q_j(t))`` and
    ``lower_deficit[t-1][j] = floor(Q_j(t)) - r_j(t)`` where Q_j(t) is the
    cumulative share of candidate j after t rounds. Positive entries are
    violations.
    """

    m: int
    upper_slack: tuple[tuple[int, ...], ...]
    lower_deficit: tuple[tuple[int, ...], ...]
    cap: int

    @property
    def upper_violations(self) -> list[tuple[int, int, int]]:
        return [
            (t, j, v)
            for t, row in enumerate(self.upper_slack, start=1)
            for j, v in enumerate(row)
            if v > 0
        ]

    @property
    def lower_violations(self) -> list[tuple[int, int, int]]:
        return [
            (t, j, v)
            for t, row in enumerate(self.lower_deficit, start=1)
            for j, v in enumerate(row)
            if v > 0
        ]

    @property
    def max_deficit(self) -> int:
        return max((max(row) for row in self.lower_deficit), default=0)

    @property
    def cap_breaches(self) -> list[tuple[int, int, int]]:
        """Deficits above ceil((m-3)/2); impossible for modified-method traces."""
        return [v for v in self.lower_violations if v[2] > self.cap]


def audit_variable_quota(trace: Trace) -> QuotaReport:
    m = trace.m
    den = 1
    for r in trace.scores:
        den = math.lcm(den, sum(r))
    cum = [0] * m
    wins = [0] * m
    upper, lower = [], []
    for r, w in zip(trace.scores, trace.winners):
        g = den // sum(r)
        for j in range(m):
            cum[j] += r[j] * g
        wins[w] += 1
        upper.append(tuple(wins[j] - (-(-cum[j] // den)) for j in range(m)))
        lower.append(tuple(cum[j] // den - wins[j] for j in range(m)))
    return QuotaReport(m, tuple(upper), tuple(lower), lower_quota_cap(m))


def harmonic_profile(m: int) -> Profile:
    """Shrinking electorate: at round t the t-1 first candidates get no votes, the rest one each."""
    return Profile.varying(
        [[0] * (t - 1) + [1] * (m - t + 1) for t in range(1, m + 1)],
        candidates=[str(j) for j in range(1, m + 1)],
    )
