"""Reading profiles and problems, rendering traces."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .apportionment import ApportionmentProblem, get_method
from .core import Profile, ProfileError
from .trace import Trace


def _text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ProfileError(f"input is not UTF-8: {e}") from None
    return data


def _is_int_cell(cell) -> bool:
    return isinstance(cell, int) and not isinstance(cell, bool)


def parse_profile(data: bytes | str) -> Profile:
    """Parse a JSON profile object or CSV rows of integer scores.

    JSON: ``{"candidates": [...], "rounds": [[...], ...], "repeat": bool}``;
    ``candidates`` and ``repeat`` are optional. CSV: one round per line, with
    an optional header line of candidate names (no numeric cells); CSV profiles do not repeat.
    """
    text = _text(data).strip()
    if not text:
        raise ProfileError("empty input")
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ProfileError(f"invalid JSON: {e}") from None
        rounds = obj.get("rounds")
        if not isinstance(rounds, list) or not rounds:
            raise ProfileError("'rounds' must be a non-empty list")
        for t, row in enumerate(rounds, start=1):
            if not isinstance(row, list):
                raise ProfileError(f"round {t} is not a list")
            for j, cell in enumerate(row, start=1):
                if not _is_int_cell(cell):
                    raise ProfileError(f"non-integer score, round {t}, candidate {j}")
        repeat = obj.get("repeat", False)
        if not isinstance(repeat, bool):
            raise ProfileError("'repeat' must be true or false")
        return Profile(tuple(tuple(r) for r in rounds), repeat, tuple(obj.get("candidates", ())))
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    header: tuple[str, ...] = ()
    # a header has no numeric cells; mixed rows are reported as bad scores
    if rows and not any(c.strip().lstrip("-").isdigit() for c in rows[0]):
        header = tuple(c.strip() for c in rows[0])
        rows = rows[1:]
    if not rows:
        raise ProfileError("no rounds")
    rounds = []
    for t, row in enumerate(rows, start=1):
        parsed = []
        for j, cell in enumerate(row, start=1):
            try:
                parsed.append(int(cell.strip()))
            except ValueError:
                raise ProfileError(f"non-integer score {cell!r}, round {t}, candidate {j}") from None
        rounds.append(tuple(parsed))
    return Profile(tuple(rounds), False, header)


def profile_to_json(profile: Profile) -> str:
    return json.dumps(
        {"candidates": list(profile.candidates), "rounds": [list(r) for r in profile.rounds], "repeat": profile.repeat}
    )


def parse_problem(data: bytes | str) -> tuple[ApportionmentProblem, str | None]:
    """``{"votes": [...], "seats": k, "method": name}``; method is optional."""
    try:
        obj = json.loads(_text(data))
    except json.JSONDecodeError as e:
        raise ValueError(f"invalid JSON: {e}") from None
    votes, seats = obj.get("votes"), obj.get("seats")
    if not isinstance(votes, list) or not all(_is_int_cell(v) for v in votes):
        raise ValueError("'votes' must be a list of integers")
    if not _is_int_cell(seats):
        raise ValueError("'seats' must be an integer")
    method = obj.get("method")
    if method is not None:
        get_method(method)
    return ApportionmentProblem.from_votes(votes, seats), method


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_trace(trace: Trace, fmt: str = "text") -> str:
    if fmt == "text":
        return _render_text(trace)
    if fmt == "csv":
        return _render_csv(trace)
    if fmt == "json":
        return _render_json(trace)
    raise ValueError(f"unknown format {fmt!r}")


def _cells(trace: Trace, t: int) -> list[str]:
    row, den = trace.scaled[t], trace.denominators[t]
    if trace.method == "original":
        return [str(x) for x in row]
    return [f"{x / den:.4f}".rstrip("0").rstrip(".") if x % den else str(x // den) for x in row]


def _render_text(trace: Trace) -> str:
    cells = [_cells(trace, t) for t in range(trace.horizon)]
    w = max([len(c) for c in trace.candidates] + [len(c) + 1 for row in cells for c in row] + [4])
    head = f"{'t':>4}" + "".join(f"  {c:>{w}}" for c in trace.candidates) + f"  {'repr':>4}"
    if trace.method == "original":
        head += f"  {'cost':>5}"
    lines = [head]
    for t in range(trace.horizon):
        win = trace.winners[t]
        top = max(trace.scaled[t])
        out = f"{t + 1:>4}"
        for j, c in enumerate(cells[t]):
            out += f"  {c + ('*' if trace.scaled[t][j] == top else ' '):>{w}}"
        out += f"  {trace.candidates[win]:>4}"
        if trace.method == "original":
            out += f"  {trace.costs[t]:>5}"
        lines.append(out)
    return "\n".join(lines) + "\n"


def _render_csv(trace: Trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(trace.candidates)
    if trace.method == "original":
        w.writerow(["t", *names, "winner", "cost"])
        for t in range(trace.horizon):
            w.writerow([t + 1, *trace.scaled[t], trace.candidates[trace.winners[t]], trace.costs[t]])
        return buf.getvalue()
    w.writerow(
        ["t", *names, "scale", *(f"{c}_scaled" for c in names), *(f"{c}_decimal" for c in names), "winner", "cost"]
    )
    for t, row in enumerate(trace.aggregates):
        den = trace.denominators[t]
        w.writerow([
            t + 1,
            *(_frac(x) for x in row),
            den,
            *trace.scaled[t],
            *(f"{float(x):.6f}" for x in row),
            trace.candidates[trace.winners[t]],
            trace.costs[t],
        ])
    return buf.getvalue()


def _render_json(trace: Trace) -> str:
    return json.dumps(
        {
            "method": trace.method,
            "candidates": list(trace.candidates),
            "rounds": [list(r) for r in trace.scores],
            "repeat": False,
            "aggregates": [[_frac(x) for x in row] for row in trace.aggregates],
            "winners": list(trace.winner_labels),
            "costs": list(trace.costs),
            "wins": list(trace.wins),
        },
        indent=1,
    ) + "\n"
