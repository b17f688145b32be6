"""Frege's original method: integer aggregate scores, floor-average cost of winning.

Each round the candidate with the largest aggregate score wins (lowest index
on ties). When moving to the next round every candidate adds the new round's
plurality score, and the winner additionally pays ``floor(a(t) / m)`` where
``a(t)`` is the sum of all aggregate scores. Scores are Python ints, so
exponentially growing electorates do not overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import InvariantError, Profile, ProfileError, Round, validate_round
from .trace import Trace


def argmax_first(values: Sequence) -> int:
    best = 0
    for j in range(1, len(values)):
        if values[j] > values[best]:
            best = j
    return best


@dataclass(frozen=True)
class OriginalState:
    t: int
    sigma: tuple[int, ...]
    wins: tuple[int, ...]

    @classmethod
    def start(cls, first_round: Sequence[int]) -> OriginalState:
        first_round = validate_round(first_round, index=1)
        return cls(1, first_round, (0,) * len(first_round))

    @property
    def m(self) -> int:
        return len(self.sigma)

    @property
    def total(self) -> int:
        return sum(self.sigma)

    @property
    def cost(self) -> int:
        return self.total // self.m

    @property
    def winner(self) -> int:
        return argmax_first(self.sigma)


def step_original(state: OriginalState, next_round: Sequence[int]) -> tuple[OriginalState, int, int]:
    """Elect the round-``t`` winner and move to round ``t+1``.

    Returns the new state, the winner of round ``t`` and the cost it paid.
    """
    return _advance(state, validate_round(next_round, state.m, state.t + 1))


def _advance(state: OriginalState, next_round: Round) -> tuple[OriginalState, int, int]:
    winner = state.winner
    cost = state.cost
    sigma = [s + p for s, p in zip(state.sigma, next_round)]
    sigma[winner] -= cost
    if sigma[winner] < 0:
        raise InvariantError(f"negative aggregate score at t={state.t + 1}")
    wins = list(state.wins)
    wins[winner] += 1
    return OriginalState(state.t + 1, tuple(sigma), tuple(wins)), winner, cost


def iter_original(profile: Profile, horizon: int | None = None) -> Iterator[tuple[OriginalState, int, int]]:
    """Yield ``(state_t, winner_t, cost_t)`` for t = 1, 2, ...

    Runs forever on repeating profiles when ``horizon`` is None.
    """
    if horizon is None:
        horizon = profile.horizon
    if horizon is not None and profile.horizon is not None and horizon > profile.horizon:
        raise ProfileError(f"profile has {profile.horizon} rounds, horizon {horizon} requested")
    state = OriginalState.start(profile.round(1))
    fixed_n = profile.is_fixed
    nm = sum(profile.round(1)) * profile.m
    t = 1
    while True:
        winner, cost = state.winner, state.cost
        yield state, winner, cost
        if horizon is not None and t >= horizon:
            return
        prev_total = state.total
        state, _, _ = _advance(state, profile.round(t + 1))
        if fixed_n and not prev_total <= state.total <= nm:
            raise InvariantError(f"total aggregate score not monotone/bounded at t={t + 1}")
        t += 1


def run_original(profile: Profile, horizon: int) -> Trace:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    rows, winners, costs = [], [], []
    for state, winner, cost in iter_original(profile, horizon):
        rows.append(state.sigma)
        winners.append(winner)
        costs.append(cost)
    return Trace(
        method="original",
        candidates=profile.candidates,
        scores=tuple(profile.round(t) for t in range(1, horizon + 1)),
        scaled=tuple(rows),
        denominators=(1,) * horizon,
        winners=tuple(winners),
        costs=tuple(costs),
    )


def total_score_sequence(n: int, m: int, horizon: int) -> list[int]:
    """a(1..horizon) for a fixed electorate of ``n`` voters; independent of the profile."""
    a, out = n, []
    for _ in range(horizon):
        out.append(a)
        a = a + n - a // m
    return out


def cost_stabilization_time(n: int, m: int) -> int:
    """Smallest t with a(t) = n*m, i.e. from which the cost of winning is n."""
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    a, t = n, 1
    while a != n * m:
        a = a + n - a // m
        t += 1
    return t


@dataclass(frozen=True)
class Cycle:
    t_star: int
    period: int
    wins_per_period: tuple[int, ...]


def detect_cycle(profile: Profile, max_states: int = 5_000_000) -> Cycle:
    """First recurrence of the aggregate-score vector of a fixed electorate.

    ``t_star`` is the first round whose state reappears, ``period`` the
    distance to its reappearance. Raises RuntimeError if more than
    ``max_states`` distinct states are visited.
    """
    if not profile.is_fixed:
        raise ProfileError("cycle detection needs a fixed electorate")
    seen: dict[tuple[int, ...], int] = {}
    winners: list[int] = []
    for state, winner, _ in iter_original(profile):
        first = seen.get(state.sigma)
        if first is not None:
            counts = [0] * profile.m
            for w in winners[first - 1:]:
                counts[w] += 1
            return Cycle(first, state.t - first, tuple(counts))
        if len(seen) >= max_states:
            raise RuntimeError(f"no recurrence within {max_states} states (t={state.t})")
        seen[state.sigma] = state.t
        winners.append(winner)
    raise AssertionError("unreachable")


def closed_form_check(trace: Trace, t0: int | None = None, c: Sequence[int] | None = None) -> bool:
    """Check sigma_j(t+1) = sum_{s<=t+1} pi_j(s) - c_j - n*(rho_j(t) - rho_j(t0)) for t >= t0.

    ``c_j`` is the total cost candidate j paid before round t0+1; it is read off
    the trace when not given. Requires a constant number of voters. Traces
    that end before round t0+1 pass vacuously.
    """
    voters = {sum(r) for r in trace.scores}
    if len(voters) != 1:
        raise ValueError("closed form needs a constant number of voters")
    n = voters.pop()
    m = trace.m
    if t0 is None:
        t0 = cost_stabilization_time(n, m)
    if trace.horizon < t0 + 1:
        return True
    cum = [0] * m
    cums = []  # cums[t-1] = sum_{s<=t} pi(s)
    for r in trace.scores:
        cum = [a + b for a, b in zip(cum, r)]
        cums.append(cum)
    rho = [0] * m
    rhos = [tuple(rho)]  # rhos[t] = rho(t)
    for w in trace.winners:
        rho[w] += 1
        rhos.append(tuple(rho))
    if c is None:
        c = [cums[t0][j] - trace.scaled[t0][j] for j in range(m)]
    for t in range(t0, trace.horizon):
        for j in range(m):
            expected = cums[t][j] - c[j] - n * (rhos[t][j] - rhos[t0][j])
            if trace.scaled[t][j] != expected:
                return False
    return True
