"""Apportionment axiom checks, counterexample witnesses and the property table.

Universally quantified axioms cannot be proven by testing. A cell of the
table therefore has one of two verdicts: ``violated`` (a replayable
counterexample exists) or ``holds-on-tested-instances`` (nothing was found on
the scanned corpus).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

import numpy as np

from . import kernels
from .apportionment import METHOD_TITLES, METHODS, ApportionmentProblem, get_method

AXIOMS = ("house-monotonicity", "population-monotonicity", "lower-quota", "upper-quota", "quota-m3")
AXIOM_TITLES = {
    "house-monotonicity": "house monot.",
    "population-monotonicity": "popul. monot.",
    "lower-quota": "lower quota",
    "upper-quota": "upper quota",
    "quota-m3": "quota for m=3",
}

HOLDS = "holds-on-tested-instances"
VIOLATED = "violated"

_T, _F = True, False
EXPECTED_PROPERTIES = {
    "largest-remainder": dict(zip(AXIOMS, (_F, _F, _T, _T, _T))),
    "dhondt": dict(zip(AXIOMS, (_T, _T, _T, _F, _F))),
    "adams": dict(zip(AXIOMS, (_T, _T, _F, _T, _F))),
    "sainte-lague": dict(zip(AXIOMS, (_T, _T, _F, _F, _T))),
    "huntington-hill": dict(zip(AXIOMS, (_T, _T, _F, _F, _F))),
    "quota": dict(zip(AXIOMS, (_T, _F, _T, _T, _T))),
    "frege": dict(zip(AXIOMS, (_T, _F, _F, _T, _T))),
}


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_shares(items: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in items)


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    method: str
    verdict: str
    instances_tested: int = 0
    witness: dict | None = None
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "method": self.method,
            "verdict": self.verdict,
            "instances_tested": self.instances_tested,
            "witness": self.witness,
            "notes": list(self.notes),
        }


# -- exact checks ------------------------------------------------------------

@dataclass(frozen=True)
class QuotaCheck:
    upper_ok: bool
    lower_ok: bool
    upper_slack: tuple[int, ...]  # ceil(k p_i) - a_i
    lower_slack: tuple[int, ...]  # a_i - floor(k p_i)

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.lower_ok


def check_quota(solution: Sequence[int], problem: ApportionmentProblem) -> QuotaCheck:
    if len(solution) != problem.m:
        raise ValueError("solution and problem have different numbers of parties")
    up = tuple(math.ceil(q) - a for q, a in zip(problem.quotas, solution))
    low = tuple(a - math.floor(q) for q, a in zip(problem.quotas, solution))
    return QuotaCheck(min(up) >= 0, min(low) >= 0, up, low)


def quota_report(method: str, problem: ApportionmentProblem, which: str = "quota") -> AxiomReport:
    """Check lower, upper or both quotas of ``method`` on one problem."""
    axiom = {"lower": "lower-quota", "upper": "upper-quota", "quota": "quota-m3"}[which]
    solution = get_method(method)(problem)
    chk = check_quota(solution, problem)
    for i in range(problem.m):
        q = problem.quotas[i]
        if which in ("upper", "quota") and chk.upper_slack[i] < 0:
            return AxiomReport(axiom, method, VIOLATED, 1, {
                "kind": "upper-quota", "p": [_fs(x) for x in problem.p], "k": problem.k,
                "solution": list(solution), "party": i,
                "inequality": f"a_{i} = {solution[i]} > ceil(k*p_{i}) = ceil({_fs(q)}) = {math.ceil(q)}",
            })
        if which in ("lower", "quota") and chk.lower_slack[i] < 0:
            return AxiomReport(axiom, method, VIOLATED, 1, {
                "kind": "lower-quota", "p": [_fs(x) for x in problem.p], "k": problem.k,
                "solution": list(solution), "party": i,
                "inequality": f"a_{i} = {solution[i]} < floor(k*p_{i}) = floor({_fs(q)}) = {math.floor(q)}",
            })
    return AxiomReport(axiom, method, HOLDS, 1)


def check_weak_proportionality(method: str, problem: ApportionmentProblem) -> bool:
    """True unless all quotas k*p_i are integers and the method returns something else."""
    quotas = problem.quotas
    if any(q.denominator != 1 for q in quotas):
        return True
    return get_method(method)(problem) == tuple(int(q) for q in quotas)


def check_house_monotonicity(method: str, p, k_max: int, k_min: int = 1) -> AxiomReport:
    """Solutions for k and k+1 seats must differ by one extra seat for one party."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    shares = p.p if isinstance(p, ApportionmentProblem) else _parse_shares(p)
    fn = get_method(method)
    prev = fn(ApportionmentProblem(shares, k_min))
    for k in range(k_min, k_max):
        cur = fn(ApportionmentProblem(shares, k + 1))
        lost = [i for i in range(len(shares)) if cur[i] < prev[i]]
        if lost:
            i = lost[0]
            return AxiomReport("house-monotonicity", method, VIOLATED, k - k_min + 1, {
                "kind": "house-monotonicity", "p": [_fs(x) for x in shares], "k": k,
                "solution": list(prev), "solution_next": list(cur), "party": i,
                "inequality": f"party {i} has {prev[i]} seats with k={k} but {cur[i]} with k={k + 1}",
            })
        prev = cur
    return AxiomReport("house-monotonicity", method, HOLDS, k_max - k_min)


def check_population_paradox(method: str, p, p_prime, k: int) -> AxiomReport:
    """Scan ordered pairs (i, j) with p'_i/p'_j >= p_i/p_j for a'_i < a_i and a'_j > a_j.

    Pairs involving a zero share in a denominator are skipped and listed in
    the report notes.
    """
    shares = p.p if isinstance(p, ApportionmentProblem) else _parse_shares(p)
    shares2 = p_prime.p if isinstance(p_prime, ApportionmentProblem) else _parse_shares(p_prime)
    if len(shares) != len(shares2):
        raise ValueError("distributions have different numbers of parties")
    fn = get_method(method)
    a = fn(ApportionmentProblem(shares, k))
    b = fn(ApportionmentProblem(shares2, k))
    skipped = []
    for i in range(len(shares)):
        for j in range(len(shares)):
            if i == j:
                continue
            if shares[j] == 0 or shares2[j] == 0:
                skipped.append(f"({i},{j})")
                continue
            if shares2[i] / shares2[j] >= shares[i] / shares[j] and b[i] < a[i] and b[j] > a[j]:
                return AxiomReport("population-monotonicity", method, VIOLATED, 1, {
                    "kind": "population-monotonicity",
                    "p": [_fs(x) for x in shares], "p_prime": [_fs(x) for x in shares2], "k": k,
                    "solution": list(a), "solution_prime": list(b), "pair": [i, j],
                    "inequality": (
                        f"p'_{i}/p'_{j} = {_fs(shares2[i] / shares2[j])} >= p_{i}/p_{j} = {_fs(shares[i] / shares[j])}"
                        f" but a'_{i} = {b[i]} < {a[i]} and a'_{j} = {b[j]} > {a[j]}"
                    ),
                }, tuple(f"skipped pair {s}" for s in skipped))
    return AxiomReport("population-monotonicity", method, HOLDS, 1, None, tuple(f"skipped pair {s}" for s in skipped))


def replay(witness: dict, method: str) -> AxiomReport:
    """Re-run the check a witness came from; the result must be identical."""
    kind = witness["kind"]
    if kind == "house-monotonicity":
        return check_house_monotonicity(method, witness["p"], witness["k"] + 1, witness["k"])
    if kind == "population-monotonicity":
        return check_population_paradox(method, witness["p"], witness["p_prime"], witness["k"])
    problem = ApportionmentProblem(_parse_shares(witness["p"]), witness["k"])
    return quota_report(method, problem, "upper" if kind == "upper-quota" else "lower")


def bundled_witnesses() -> dict[tuple[str, str], dict]:
    """Counterexamples shipped with the package, keyed by (method, axiom)."""
    text = resources.files("fregevote").joinpath("witnesses.json").read_text()
    return {(w["method"], w["axiom"]): w["witness"] for w in json.loads(text)}


# -- corpus scanning on the integer kernels -----------------------------------

@dataclass(frozen=True)
class Corpus:
    """Random instances grouped by party count.

    ``votes[m]`` and ``votes2[m]`` are (S_m x m) positive vote arrays,
    ``ks[m]`` house sizes. ``votes2`` is the second distribution used for the
    population-paradox scan.
    """

    votes: dict[int, np.ndarray]
    votes2: dict[int, np.ndarray]
    ks: dict[int, np.ndarray]
    seed: int

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.votes.values())


def random_corpus(size: int, seed: int = 0, parties: Sequence[int] = range(2, 9),
                  max_house: int = 150, max_votes: int = 1000) -> Corpus:
    """Uniform party counts, votes in 1..max_votes and houses in 1..max_house.

    Half of the second distributions are independent draws, half are small
    perturbations of the first one (where population paradoxes live).
    """
    rng = np.random.default_rng(seed)
    parties = np.asarray(list(parties))
    ms = rng.choice(parties, size=size)
    votes, votes2, ks = {}, {}, {}
    for m in parties:
        n = int((ms == m).sum())
        if n == 0:
            continue
        m = int(m)
        v = rng.integers(1, max_votes, endpoint=True, size=(n, m))
        fresh = rng.integers(1, max_votes, endpoint=True, size=(n, m))
        jitter = rng.integers(-max_votes // 20, max_votes // 20, endpoint=True, size=(n, m))
        near = np.clip(v + jitter, 1, None)
        use_fresh = rng.random(n) < 0.5
        votes[m] = v
        votes2[m] = np.where(use_fresh[:, None], fresh, near)
        ks[m] = rng.integers(1, max_house, endpoint=True, size=n)
    return Corpus(votes, votes2, ks, seed)


def _witness_problem(v) -> list[str]:
    total = int(sum(int(x) for x in v))
    return [_fs(Fraction(int(x), total)) for x in v]


def scan_quota(method: str, corpus: Corpus, which: str, backend: str | None = None) -> AxiomReport:
    axiom = {"lower": "lower-quota", "upper": "upper-quota", "quota": "quota-m3"}[which]
    tested = 0
    for m in sorted(corpus.votes):
        V, ks = corpus.votes[m], corpus.ks[m]
        A = kernels.allocate_batch(method, V, ks, backend)
        N = V.sum(axis=1)[:, None]
        Q = ks[:, None] * V
        bad = np.zeros(len(V), bool)
        if which in ("upper", "quota"):
            bad |= (A * N >= Q + N).any(axis=1)  # a > ceil(kp)
        if which in ("lower", "quota"):
            bad |= ((A + 1) * N <= Q).any(axis=1)  # a < floor(kp)
        if bad.any():
            r = int(np.argmax(bad))
            problem = ApportionmentProblem.from_votes([int(x) for x in V[r]], int(ks[r]))
            found = quota_report(method, problem, which)
            return AxiomReport(axiom, method, VIOLATED, tested + r + 1, found.witness)
        tested += len(V)
    return AxiomReport(axiom, method, HOLDS, tested)


def scan_house_monotonicity(method: str, corpus: Corpus, backend: str | None = None) -> AxiomReport:
    tested = 0
    for m in sorted(corpus.votes):
        V, ks = corpus.votes[m], corpus.ks[m]
        A = kernels.allocate_batch(method, V, ks, backend)
        B = kernels.allocate_batch(method, V, ks + 1, backend)
        bad = (B < A).any(axis=1)
        if bad.any():
            r = int(np.argmax(bad))
            k = int(ks[r])
            found = check_house_monotonicity(method, _witness_problem(V[r]), k + 1, k)
            return AxiomReport("house-monotonicity", method, VIOLATED, tested + r + 1, found.witness)
        tested += len(V)
    return AxiomReport("house-monotonicity", method, HOLDS, tested)


def scan_population_monotonicity(method: str, corpus: Corpus, backend: str | None = None) -> AxiomReport:
    tested = 0
    for m in sorted(corpus.votes):
        V, W, ks = corpus.votes[m], corpus.votes2[m], corpus.ks[m]
        A = kernels.allocate_batch(method, V, ks, backend)
        B = kernels.allocate_batch(method, W, ks, backend)
        bad = np.zeros(len(V), bool)
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                # p'_i/p'_j >= p_i/p_j  <=>  W_i V_j >= V_i W_j
                bad |= (W[:, i] * V[:, j] >= V[:, i] * W[:, j]) & (B[:, i] < A[:, i]) & (B[:, j] > A[:, j])
        if bad.any():
            r = int(np.argmax(bad))
            found = check_population_paradox(method, _witness_problem(V[r]), _witness_problem(W[r]), int(ks[r]))
            return AxiomReport("population-monotonicity", method, VIOLATED, tested + r + 1, found.witness)
        tested += len(V)
    return AxiomReport("population-monotonicity", method, HOLDS, tested)


def scan(method: str, axiom: str, corpus: Corpus, corpus_m3: Corpus | None = None,
         backend: str | None = None) -> AxiomReport:
    if axiom == "house-monotonicity":
        return scan_house_monotonicity(method, corpus, backend)
    if axiom == "population-monotonicity":
        return scan_population_monotonicity(method, corpus, backend)
    if axiom == "lower-quota":
        return scan_quota(method, corpus, "lower", backend)
    if axiom == "upper-quota":
        return scan_quota(method, corpus, "upper", backend)
    if axiom == "quota-m3":
        if corpus_m3 is None:
            raise ValueError("quota-m3 needs a three-party corpus")
        return scan_quota(method, corpus_m3, "quota", backend)
    raise ValueError(f"unknown axiom {axiom!r}")


def search_witness(method: str, axiom: str, seed: int = 0, rounds: int = 50, batch: int = 2000,
                   parties: Sequence[int] = range(3, 9), max_house: int = 40, max_votes: int = 100,
                   backend: str | None = None) -> AxiomReport:
    """Seeded random search for a counterexample, smallest instances first."""
    if axiom == "quota-m3":
        parties = (3,)
    tested = 0
    for r in range(rounds):
        scale = 1 + r // 10
        corpus = random_corpus(batch, seed=seed * 100_003 + r, parties=parties,
                               max_house=max_house * scale, max_votes=max_votes * scale)
        report = scan(method, axiom, corpus, corpus, backend)
        if not report.holds:
            return AxiomReport(axiom, method, VIOLATED, tested + report.instances_tested, report.witness)
        tested += corpus.size
    return AxiomReport(axiom, method, HOLDS, tested)


# -- the property table ---------------------------------------------------------

@dataclass(frozen=True)
class AxiomTable:
    reports: dict[tuple[str, str], AxiomReport]
    corpus_size: int
    seed: int
    methods: tuple[str, ...] = tuple(METHODS)
    extra: dict = field(default_factory=dict, compare=False)

    def verdict(self, method: str, axiom: str) -> bool:
        return self.reports[(method, axiom)].holds

    def mismatches(self) -> list[tuple[str, str]]:
        """Cells disagreeing with EXPECTED_PROPERTIES."""
        return [
            (m, a) for m in self.methods for a in AXIOMS
            if self.verdict(m, a) != EXPECTED_PROPERTIES[m][a]
        ]

    def to_text(self) -> str:
        width = max(len(METHOD_TITLES[m]) for m in self.methods)
        head = f"{'':<{width}}" + "".join(f"  {AXIOM_TITLES[a]:>14}" for a in AXIOMS)
        lines = [head]
        for m in self.methods:
            cells = "".join(f"  {'+' if self.verdict(m, a) else '-':>14}" for a in AXIOMS)
            lines.append(f"{METHOD_TITLES[m]:<{width}}{cells}")
        lines.append(f"corpus={self.corpus_size} seed={self.seed}; '+' = no counterexample found, '-' = witness")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "corpus_size": self.corpus_size,
                "seed": self.seed,
                "reports": [self.reports[(m, a)].to_dict() for m in self.methods for a in AXIOMS],
            },
            indent=2,
        )


def regenerate_axiom_table(size: int = 10_000, seed: int = 0, methods: Sequence[str] = tuple(METHODS),
                           backend: str | None = None) -> AxiomTable:
    """Scan a seeded random corpus for every method and axiom.

    Cells without a counterexample in the corpus fall back to the bundled
    witness, which is replayed exactly before it is accepted.
    """
    corpus = random_corpus(size, seed)
    corpus_m3 = random_corpus(size, seed + 1, parties=(3,))
    bundled = bundled_witnesses()
    reports = {}
    for method in methods:
        for axiom in AXIOMS:
            report = scan(method, axiom, corpus, corpus_m3, backend)
            if report.holds and (method, axiom) in bundled:
                witness = bundled[(method, axiom)]
                replayed = replay(witness, method)
                if replayed.holds or replayed.witness != witness:
                    raise AssertionError(f"bundled witness for {method}/{axiom} does not replay")
                report = AxiomReport(axiom, method, VIOLATED, report.instances_tested, witness,
                                     ("bundled witness",))
            reports[(method, axiom)] = report
    return AxiomTable(reports, size, seed, tuple(methods))
