"""Line-oriented text format for promise graphs.

Grammar, one record per line ('#' starts a comment, blank lines are
ignored):

    agent <id> <alpha>
    promise <giver> <receiver> <type> <+|-> <chi-csv> [| <cond-csv>]

Tokens (ids, types, constraint and condition entries) may not contain
whitespace, ',', '|' or '#'. <chi-csv> is the comma-separated body
constraint set; '*' is the conventional catch-all body token. The
optional '| <cond-csv>' suffix lists the behaviour types the giver must
be supplied with before the promise takes effect.

Canonical form: agents first, sorted by id, alpha in shortest
round-tripping decimal; then promises sorted by (giver, receiver, type,
polarity), constraint and condition entries sorted, single spaces,
trailing newline. parse_graph and emit_graph are mutually inverse on
canonical text, byte for byte.

Calibration is not part of the wire format; pass it to parse_graph (or
the CLI --calibration flag) when values matter.
"""

from __future__ import annotations

import re

from .errors import GraphFormatError
from .promisegraph import Agent, Calibration, Polarity, Promise, PromiseGraph

__all__ = ["parse_graph", "emit_graph"]

_TOKEN = re.compile(r"[^\s,|#]+\Z")


def _check_token(token: str, what: str, lineno: int | None = None) -> str:
    if not _TOKEN.match(token):
        where = f"line {lineno}: " if lineno is not None else ""
        raise GraphFormatError(f"{where}invalid {what} {token!r} (whitespace, ',', '|' and '#' are reserved)")
    return token


def _split_csv(text: str, what: str, lineno: int) -> list[str]:
    parts = text.split(",")
    if any(not p for p in parts):
        raise GraphFormatError(f"line {lineno}: empty entry in {what} {text!r}")
    return [_check_token(p, f"{what} entry", lineno) for p in parts]


def parse_graph(text: str, calibration: Calibration = 1.0) -> PromiseGraph:
    """Parse the text format into a PromiseGraph.

    Agents and promises may appear in any order; every error names the
    offending line.
    """
    agents: dict[str, Agent] = {}
    agent_lines: dict[str, int] = {}
    promises: list[tuple[int, Promise]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "agent":
            if len(fields) != 3:
                raise GraphFormatError(f"line {lineno}: agent records take exactly 2 fields, got {len(fields) - 1}")
            agent_id = _check_token(fields[1], "agent id", lineno)
            if agent_id in agents:
                raise GraphFormatError(
                    f"line {lineno}: duplicate agent {agent_id!r} (first declared on line {agent_lines[agent_id]})"
                )
            try:
                alpha = float(fields[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: assessment {fields[2]!r} is not a number") from None
            if not 0 <= alpha <= 1:
                raise GraphFormatError(f"line {lineno}: assessment must be in [0, 1], got {alpha}")
            agents[agent_id] = Agent(agent_id, alpha)
            agent_lines[agent_id] = lineno
        elif kind == "promise":
            if len(fields) == 8 and fields[6] == "|":
                condition = tuple(_split_csv(fields[7], "condition", lineno))
            elif len(fields) == 6:
                condition = ()
            else:
                raise GraphFormatError(
                    f"line {lineno}: promise records take 5 fields plus an optional '| <cond-csv>', got {line!r}"
                )
            giver = _check_token(fields[1], "agent id", lineno)
            receiver = _check_token(fields[2], "agent id", lineno)
            type_tag = _check_token(fields[3], "promise type", lineno)
            if fields[4] == "+":
                polarity = Polarity.OFFER
            elif fields[4] == "-":
                polarity = Polarity.ACCEPT
            else:
                raise GraphFormatError(f"line {lineno}: polarity must be '+' or '-', got {fields[4]!r}")
            constraint = frozenset(_split_csv(fields[5], "constraint", lineno))
            promises.append((lineno, Promise(giver, receiver, type_tag, polarity, constraint, condition)))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {kind!r} (expected 'agent' or 'promise')")

    for lineno, p in promises:
        for endpoint in (p.giver, p.receiver):
            if endpoint not in agents:
                raise GraphFormatError(f"line {lineno}: promise references undeclared agent {endpoint!r}")
    return PromiseGraph(agents.values(), (p for _, p in promises), calibration)


def emit_graph(graph: PromiseGraph) -> str:
    """Emit the canonical text form of a graph."""
    lines = []
    for agent_id in graph.agent_ids():
        _check_token(agent_id, "agent id")
        lines.append(f"agent {agent_id} {graph.agent(agent_id).assessment!r}")
    for p in graph.promises:
        for token in (p.giver, p.receiver):
            _check_token(token, "agent id")
        _check_token(p.type_tag, "promise type")
        chi = ",".join(_check_token(t, "constraint entry") for t in sorted(p.constraint))
        record = f"promise {p.giver} {p.receiver} {p.type_tag} {p.polarity.value} {chi}"
        if p.condition:
            record += " | " + ",".join(_check_token(t, "condition entry") for t in p.condition)
        lines.append(record)
    return "\n".join(lines) + "\n" if lines else ""
