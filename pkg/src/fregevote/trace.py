from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Round


@dataclass(frozen=True)
class Trace:
    """Round-by-round record of a temporal election.

    Aggregate scores are stored as integer numerators with a per-round
    denominator (1 for the original method, the common denominator of the
    normalized shares for the modified one). Row ``t-1`` holds the scores on
    which the winner of round ``t`` was chosen, before that round's cost.
    """

    method: str
    candidates: tuple[str, ...]
    scores: tuple[Round, ...]
    scaled: tuple[tuple[int, ...], ...]
    denominators: tuple[int, ...]
    winners: tuple[int, ...]
    costs: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def horizon(self) -> int:
        return len(self.winners)

    @property
    def aggregates(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(
            tuple(Fraction(x, d) for x in row) for row, d in zip(self.scaled, self.denominators)
        )

    @property
    def wins(self) -> tuple[int, ...]:
        counts = [0] * self.m
        for w in self.winners:
            counts[w] += 1
        return tuple(counts)

    def wins_at(self, t: int) -> tuple[int, ...]:
        """Win counts after the first ``t`` rounds."""
        counts = [0] * self.m
        for w in self.winners[:t]:
            counts[w] += 1
        return tuple(counts)

    @property
    def winner_labels(self) -> tuple[str, ...]:
        return tuple(self.candidates[w] for w in self.winners)
