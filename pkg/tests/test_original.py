import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fregevote.core import InvariantError, Profile, ProfileError
from fregevote.original import (
    OriginalState,
    closed_form_check,
    cost_stabilization_time,
    detect_cycle,
    iter_original,
    run_original,
    step_original,
    total_score_sequence,
)

FIVE_THREE_TWO_SIGMA = [
    (5, 3, 2), (7, 6, 4), (7, 9, 6), (12, 5, 8), (9, 8, 10),
    (14, 11, 3), (10, 14, 5), (15, 8, 7), (10, 11, 9), (15, 4, 11),
]
FIVE_THREE_TWO_COSTS = [3, 5, 7, 8, 9, 9, 9, 10, 10, 10]

SKEWED_SIX_SIGMA = [
    (1, 1, 1, 1, 1, 5), (2, 2, 2, 2, 2, 9), (3, 3, 3, 3, 3, 11), (4, 4, 4, 4, 4, 12),
    (5, 5, 5, 5, 5, 12), (6, 6, 6, 6, 6, 11), (7, 7, 7, 7, 7, 10), (8, 8, 8, 8, 8, 8),
    (1, 9, 9, 9, 9, 13), (2, 10, 10, 10, 10, 10),
]
SKEWED_SIX_COSTS = [1, 3, 4, 5, 6, 6, 7, 8, 8, 8]


def naive_original(rounds, horizon):
    """Direct transcription of the recurrence, used as an oracle."""
    m = len(rounds[0])
    sigma = list(rounds[0])
    out = []
    for t in range(1, horizon + 1):
        w = max(range(m), key=lambda j: (sigma[j], -j))
        cost = sum(sigma) // m
        out.append((tuple(sigma), w, cost))
        if t == horizon:
            break
        nxt = rounds[t % len(rounds)]
        sigma = [s + p - (cost if j == w else 0) for j, (s, p) in enumerate(zip(sigma, nxt))]
    return out


def test_five_three_two_trace():
    tr = run_original(Profile.fixed((5, 3, 2)), 10)
    assert list(tr.scaled) == FIVE_THREE_TWO_SIGMA
    assert "".join(tr.winner_labels) == "aabacababa"
    assert list(tr.costs) == FIVE_THREE_TWO_COSTS
    assert tr.wins == (6, 3, 1)


def test_skewed_six_trace():
    tr = run_original(Profile.fixed((1, 1, 1, 1, 1, 5)), 10)
    assert list(tr.scaled) == SKEWED_SIX_SIGMA
    assert "".join(tr.winner_labels) == "fffffffafb"
    assert list(tr.costs) == SKEWED_SIX_COSTS
    assert tr.wins[5] == 8


def test_step_examples():
    s = OriginalState(2, (7, 6, 4), (2, 0, 0))
    s3, w, cost = step_original(s, (5, 3, 2))
    assert (w, cost) == (0, 5)
    assert s3.sigma == (7, 9, 6)
    assert s3.winner == 1 and s3.cost == 7

    s8 = OriginalState(8, (8,) * 6, (0, 0, 0, 0, 0, 7))
    s9, w, cost = step_original(s8, (1, 1, 1, 1, 1, 5))
    assert (w, cost) == (0, 8)
    assert s9.sigma[0] == 1

    s, w, cost = step_original(OriginalState.start((1, 1)), (1, 1))
    assert (w, cost) == (0, 1)
    assert s.sigma == (1, 2)


def test_step_dimension_mismatch():
    with pytest.raises(ProfileError):
        step_original(OriginalState.start((5, 3, 2)), (1, 1))


def test_horizon_beyond_varying_profile():
    with pytest.raises(ProfileError):
        run_original(Profile.varying([(1, 2), (2, 1)]), 3)
    with pytest.raises(ValueError):
        run_original(Profile.fixed((1, 2)), 0)


def test_doubling_electorate_bigints():
    T = 50
    prof = Profile.varying([(2**t, 2 ** (t - 1)) for t in range(1, T + 1)])
    tr = run_original(prof, T)
    assert set(tr.winners) == {0}
    assert tr.wins == (T, 0)


def test_doubling_electorate_past_int64():
    T = 80
    tr = run_original(Profile.varying([(2**t, 2 ** (t - 1)) for t in range(1, T + 1)]), T)
    assert tr.wins == (T, 0)
    assert tr.scaled[-1][1] == 2**T - 1


def test_stabilization_times():
    assert cost_stabilization_time(10, 3) == 8
    assert cost_stabilization_time(10, 6) == 17
    assert cost_stabilization_time(1000, 25) == 184
    with pytest.raises(ValueError):
        cost_stabilization_time(0, 3)


@pytest.mark.parametrize("pi", [(5, 3, 2), (1, 1, 1, 1, 1, 5), (3, 0, 4, 2)])
def test_stabilization_matches_simulation(pi):
    n, m = sum(pi), len(pi)
    t0 = cost_stabilization_time(n, m)
    tr = run_original(Profile.fixed(pi), t0 + 20)
    totals = [sum(r) for r in tr.scaled]
    assert totals == total_score_sequence(n, m, t0 + 20)
    assert totals[t0 - 1] == n * m and totals[t0 - 2] < n * m
    assert all(c == n for c in tr.costs[t0 - 1:])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10_000), st.integers(2, 100))
def test_total_score_monotone_and_stabilizes(n, m):
    t0 = cost_stabilization_time(n, m)
    seq = total_score_sequence(n, m, t0 + 5)
    assert all(a <= b for a, b in zip(seq, seq[1:]))
    assert all(a <= n * m for a in seq)
    assert seq[t0 - 1:] == [n * m] * 6


def test_cycle_examples():
    c = detect_cycle(Profile.fixed((5, 3, 2)))
    assert c.period % 10 == 0
    assert [Fraction(w, c.period) for w in c.wins_per_period] == [Fraction(5, 10), Fraction(3, 10), Fraction(2, 10)]

    c = detect_cycle(Profile.fixed((1, 1)))
    assert c.period == 2 and c.wins_per_period == (1, 1)

    c = detect_cycle(Profile.fixed((1, 1, 1, 1, 1, 5)))
    assert c.t_star >= 1
    assert [Fraction(w, c.period) for w in c.wins_per_period] == [Fraction(p, 10) for p in (1, 1, 1, 1, 1, 5)]


def test_cycle_needs_fixed_profile():
    with pytest.raises(ProfileError):
        detect_cycle(Profile.varying([(1, 2), (2, 1)]))


def test_cycle_state_cap():
    with pytest.raises(RuntimeError):
        detect_cycle(Profile.fixed((5, 3, 2)), max_states=3)


def test_cycle_recurrence_is_real():
    prof = Profile.fixed((4, 1, 2, 2))
    c = detect_cycle(prof)
    tr = run_original(prof, c.t_star + 2 * c.period)
    assert tr.scaled[c.t_star - 1] == tr.scaled[c.t_star - 1 + c.period]
    assert tr.winners[c.t_star - 1:c.t_star - 1 + c.period] == tr.winners[c.t_star - 1 + c.period:c.t_star - 1 + 2 * c.period]


def test_closed_form():
    assert closed_form_check(run_original(Profile.fixed((5, 3, 2)), 10))
    assert closed_form_check(run_original(Profile.fixed((1, 1, 1, 1, 1, 5)), 30))
    # truncated before t0 + 1: nothing to check
    assert closed_form_check(run_original(Profile.fixed((1, 1, 1, 1, 1, 5)), 5))


def test_closed_form_detects_tampering():
    tr = run_original(Profile.fixed((5, 3, 2)), 15)
    rows = list(tr.scaled)
    rows[12] = (rows[12][0] + 1, rows[12][1] - 1, rows[12][2])
    bad = type(tr)(tr.method, tr.candidates, tr.scores, tuple(rows), tr.denominators, tr.winners, tr.costs)
    assert not closed_form_check(bad)


def test_closed_form_rejects_varying_voters():
    tr = run_original(Profile.varying([(1, 2), (2, 2)]), 2)
    with pytest.raises(ValueError):
        closed_form_check(tr)


def test_integral_quota_violated_skewed_six():
    tr = run_original(Profile.fixed((1, 1, 1, 1, 1, 5)), 10)
    # quota of f after 10 rounds is exactly 5, but f won 8 times
    assert tr.wins[5] == 8 != 10 * 5 // 10


def random_fixed(rng, m_max=6, n_max=40):
    m = rng.randint(2, m_max)
    pi = [rng.randint(0, n_max) for _ in range(m)]
    if sum(pi) == 0:
        pi[rng.randrange(m)] = 1
    return tuple(pi)


def test_matches_naive_oracle_random():
    rng = random.Random(7)
    for _ in range(200):
        if rng.random() < 0.5:
            rounds = [random_fixed(rng)]
            prof = Profile.fixed(rounds[0])
        else:
            m = rng.randint(2, 6)
            rounds = [tuple(rng.randint(0, 30) for _ in range(m)) for _ in range(20)]
            rounds = [r if sum(r) else (1,) + r[1:] for r in rounds]
            prof = Profile.varying(rounds)
        T = 20 if not prof.repeat else rng.randint(1, 80)
        tr = run_original(prof, T)
        oracle = naive_original(rounds, T)
        assert list(tr.scaled) == [o[0] for o in oracle]
        assert list(tr.winners) == [o[1] for o in oracle]
        assert list(tr.costs) == [o[2] for o in oracle]
        assert all(x >= 0 for row in tr.scaled for x in row)


def test_scaling_counterexample():
    # floor(k*a/m) and k*floor(a/m) differ, so scaled electorates can diverge
    a = run_original(Profile.fixed((0, 1, 1)), 3)
    b = run_original(Profile.fixed((0, 2, 2)), 3)
    assert a.costs[0] == 0 and b.costs[0] == 1
    assert a.winners[:2] == (1, 1)
    assert b.winners[:2] == (1, 2)


def test_scaling_invariance_until_floors_disagree():
    rng = random.Random(11)
    diverged = 0
    for _ in range(100):
        pi = random_fixed(rng)
        m, k = len(pi), rng.randint(2, 9)
        a = run_original(Profile.fixed(pi), 60)
        b = run_original(Profile.fixed(tuple(k * x for x in pi)), 60)
        for t in range(60):
            assert b.scaled[t] == tuple(k * x for x in a.scaled[t])
            assert b.winners[t] == a.winners[t]
            if (k * sum(a.scaled[t])) // m != k * (sum(a.scaled[t]) // m):
                diverged += 1
                break
        else:
            assert a.winners == b.winners
    assert diverged > 0


def test_long_run_rate_bound():
    rng = random.Random(3)
    for _ in range(40):
        pi = random_fixed(rng)
        n, m = sum(pi), len(pi)
        t0 = cost_stabilization_time(n, m)
        rho = [0] * m
        rho_t0 = None
        for state, w, _ in iter_original(Profile.fixed(pi), t0 + 400):
            rho[w] += 1
            t = state.t
            if t == t0:
                rho_t0 = list(rho)
            if t >= t0:
                for j in range(m):
                    K = Fraction(pi[j], n) + rho_t0[j] + t0 + m
                    assert abs(Fraction(rho[j], t) - Fraction(pi[j], n)) <= K / t


def test_winner_never_goes_negative():
    # the winner holds the maximum, which is at least the floored mean it pays
    rng = random.Random(5)
    for _ in range(300):
        sigma = tuple(rng.randint(0, 50) for _ in range(rng.randint(2, 7)))
        if not any(sigma):
            continue
        state = OriginalState(3, sigma, (0,) * len(sigma))
        nxt, _, _ = step_original(state, (0,) * (len(sigma) - 1) + (1,))
        assert min(nxt.sigma) >= 0
