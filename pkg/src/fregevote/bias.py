"""Monte-Carlo estimate of how often a method favors the smallest party.

An instance draws ``parties`` vote counts uniformly from 1..max_votes and
apportions ``house`` seats. The smallest party (fewest votes, lowest index on
ties) is favored over the largest (most votes, lowest index on ties) when it
needs strictly fewer votes per seat; a smallest party without seats is never
favored.

Random numbers come from Philox streams keyed by ``(seed, block)`` with a
fixed block size, so instance ``i`` depends only on the seed and ``i``, never
on chunking, backend or thread count.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .apportionment import METHOD_TITLES, ApportionmentProblem

BLOCK = 4096
CHUNK_BLOCKS = 16
Z95 = 1.96

REFERENCE_BIAS = {
    "largest-remainder": 48.5,
    "dhondt": 11.9,
    "adams": 87.6,
    "sainte-lague": 48.5,
    "huntington-hill": 55.7,
    "quota": 12.7,
    "frege": 54.5,
}


@dataclass(frozen=True)
class BiasConfig:
    parties: int = 5
    max_votes: int = 1000
    house: int = 100
    samples: int = 1_000_000
    seed: int = 0
    methods: tuple[str, ...] = kernels.METHOD_ORDER

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.parties < 2:
            raise ValueError("need at least two parties")
        if self.max_votes < 1 or self.house < 1:
            raise ValueError("max_votes and house must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        unknown = set(self.methods) - set(kernels.METHOD_ORDER)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        object.__setattr__(self, "methods", tuple(self.methods))


def sample_block(config: BiasConfig, block: int) -> np.ndarray:
    seq = np.random.SeedSequence(config.seed, spawn_key=(block,))
    rng = np.random.Generator(np.random.Philox(seq))
    return rng.integers(1, config.max_votes, endpoint=True, size=(BLOCK, config.parties), dtype=np.int64)


def sample_votes(config: BiasConfig, start: int, stop: int) -> np.ndarray:
    """Vote counts of instances ``start .. stop-1``."""
    parts = []
    for block in range(start // BLOCK, (stop - 1) // BLOCK + 1):
        lo = max(start, block * BLOCK) - block * BLOCK
        hi = min(stop, (block + 1) * BLOCK) - block * BLOCK
        parts.append(sample_block(config, block)[lo:hi])
    return np.concatenate(parts)


def sample_instance(seed: int, index: int, config: BiasConfig | None = None) -> ApportionmentProblem:
    config = BiasConfig(seed=seed) if config is None else BiasConfig(**{**asdict(config), "seed": seed})
    votes = sample_votes(config, index, index + 1)[0]
    return ApportionmentProblem.from_votes([int(v) for v in votes], config.house)


class Favor(enum.Enum):
    FAVORED = "favored"
    NOT_FAVORED = "not-favored"
    SKIP = "skip"


def smallest_largest(p: Sequence) -> tuple[int, int]:
    small = min(range(len(p)), key=lambda i: (p[i], i))
    large = min(range(len(p)), key=lambda i: (-p[i], i))
    return small, large


def smaller_party_favored(problem: ApportionmentProblem, solution: Sequence[int]) -> Favor:
    s, l = smallest_largest(problem.p)
    if solution[l] == 0:
        return Favor.SKIP
    if solution[s] == 0:
        return Favor.NOT_FAVORED
    # p_s / a_s < p_l / a_l
    if problem.p[s] * solution[l] < problem.p[l] * solution[s]:
        return Favor.FAVORED
    return Favor.NOT_FAVORED


def favored_counts(votes: np.ndarray, seats: np.ndarray) -> tuple[int, int, int]:
    """(favored, smallest-party-without-seats, skipped) over a batch."""
    rows = np.arange(votes.shape[0])
    s = np.argmin(votes, axis=1)
    l = np.argmax(votes, axis=1)
    vs, vl = votes[rows, s], votes[rows, l]
    a_s, a_l = seats[rows, s], seats[rows, l]
    skip = a_l == 0
    zero = (a_s == 0) & ~skip
    favored = ~skip & ~zero & (vs * a_l < vl * a_s)
    return int(favored.sum()), int(zero.sum()), int(skip.sum())


@dataclass(frozen=True)
class MethodBias:
    method: str
    favored: int
    evaluated: int
    smallest_without_seat: int
    skipped: int

    @property
    def fraction(self) -> float:
        return self.favored / self.evaluated if self.evaluated else 0.0

    @property
    def half_width(self) -> float:
        f = self.fraction
        return Z95 * math.sqrt(f * (1 - f) / self.evaluated) if self.evaluated else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        return self.fraction - self.half_width, self.fraction + self.half_width

    @property
    def exact_fraction(self) -> Fraction:
        return Fraction(self.favored, self.evaluated) if self.evaluated else Fraction(0)


@dataclass(frozen=True)
class BiasReport:
    config: BiasConfig
    results: tuple[MethodBias, ...]
    smallest_ties: int = 0
    largest_ties: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, method: str) -> MethodBias:
        for r in self.results:
            if r.method == method:
                return r
        raise KeyError(method)

    def to_dict(self) -> dict:
        return {
            "config": {**asdict(self.config), "methods": list(self.config.methods)},
            "smallest_ties": self.smallest_ties,
            "largest_ties": self.largest_ties,
            "results": [
                {
                    "method": r.method,
                    "favored": r.favored,
                    "evaluated": r.evaluated,
                    "fraction": f"{r.exact_fraction.numerator}/{r.exact_fraction.denominator}",
                    "percent": round(100 * r.fraction, 4),
                    "ci95": [round(100 * x, 4) for x in r.interval],
                    "smallest_without_seat": r.smallest_without_seat,
                    "skipped": r.skipped,
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        width = max(len(METHOD_TITLES[r.method]) for r in self.results)
        lines = [f"{'':<{width}}  {'bias':>7}  95% confidence interval"]
        for r in self.results:
            lo, hi = r.interval
            lines.append(
                f"{METHOD_TITLES[r.method]:<{width}}  {100 * r.fraction:6.2f}%  ({100 * lo:.2f}%, {100 * hi:.2f}%)"
            )
        c = self.config
        lines.append(
            f"samples={c.samples} seed={c.seed} parties={c.parties} max_votes={c.max_votes} seats={c.house}"
        )
        return "\n".join(lines) + "\n"


def _chunk_counts(config: BiasConfig, start: int, backend: str | None, parallel: bool) -> tuple:
    votes = sample_votes(config, start, min(config.samples, start + BLOCK * CHUNK_BLOCKS))
    small_ties = int(((votes == votes.min(axis=1, keepdims=True)).sum(axis=1) > 1).sum())
    large_ties = int(((votes == votes.max(axis=1, keepdims=True)).sum(axis=1) > 1).sum())
    per_method = []
    for method in config.methods:
        seats = kernels.allocate_batch(method, votes, config.house, backend, parallel=parallel)
        per_method.append(favored_counts(votes, seats))
    return small_ties, large_ties, per_method


def run_bias_experiment(config: BiasConfig, backend: str | None = None, threads: int | None = None) -> BiasReport:
    """Count favored-small instances for each configured method.

    With ``threads`` the sample chunks are spread over a thread pool;
    otherwise chunks run in order and the numba kernel parallelizes rows.
    Counts are integers merged per chunk, so the report never depends on
    the thread count.
    """
    if threads is not None and threads < 1:
        raise ValueError("threads must be positive")
    starts = range(0, config.samples, BLOCK * CHUNK_BLOCKS)
    if threads is None:
        chunks = [_chunk_counts(config, s, backend, True) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda s: _chunk_counts(config, s, backend, False), starts))
    counts = {m: [0, 0, 0] for m in config.methods}
    small_ties = large_ties = 0
    for st, lt, per_method in chunks:
        small_ties += st
        large_ties += lt
        for method, (fav, zero, skip) in zip(config.methods, per_method):
            c = counts[method]
            c[0] += fav
            c[1] += zero
            c[2] += skip
    results = tuple(
        MethodBias(m, counts[m][0], config.samples - counts[m][2], counts[m][1], counts[m][2])
        for m in config.methods
    )
    return BiasReport(config, results, small_ties, large_ties)
