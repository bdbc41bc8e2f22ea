"""Plain-text readers and writers for instances, graphs, channels and results.

Blank lines are ignored. Decimals are written with 12 significant digits.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import Clustering, Graph, Instance
from .errors import DomainError, ParseError


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _lines(text: str):
    """Yield (line_number, tokens) for each non-blank line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if toks:
            yield no, toks


def _numbers(toks, conv, no, path, expect=None):
    if expect is not None and len(toks) != expect:
        raise ParseError(f"expected {expect} values, found {len(toks)}", no, path)
    try:
        return [conv(t) for t in toks]
    except ValueError as exc:
        raise ParseError(f"bad number: {exc}", no, path) from None


def _take(it, what, path):
    try:
        return next(it)
    except StopIteration:
        raise ParseError(f"unexpected end of input, expected {what}", None, path) from None


def _no_trailing(it, path):
    for no, _ in it:
        raise ParseError("unexpected trailing content", no, path)


def parse_instance(text: str, path: str | None = None) -> Instance:
    it = _lines(text)
    no, toks = _take(it, "header 'd n'", path)
    d, n = _numbers(toks, int, no, path, expect=2)
    if d < 1 or n < 1:
        raise ParseError("d and n must be positive", no, path)
    rows = []
    for _ in range(n):
        no, toks = _take(it, "vector row", path)
        row = _numbers(toks, float, no, path, expect=d)
        if any(x < 0 or not np.isfinite(x) for x in row):
            raise ParseError("components must be finite and nonnegative", no, path)
        rows.append(row)
    _no_trailing(it, path)
    return Instance(np.array(rows))


def format_instance(inst: Instance) -> str:
    out = [f"{inst.d} {inst.n}"]
    out += [" ".join(fmt(x) for x in row) for row in inst.vectors]
    return "\n".join(out) + "\n"


def parse_graph(text: str, path: str | None = None) -> Graph:
    it = _lines(text)
    no, toks = _take(it, "header 'n m'", path)
    n, m = _numbers(toks, int, no, path, expect=2)
    if n < 0 or m < 0:
        raise ParseError("n and m must be nonnegative", no, path)
    edges = []
    seen = set()
    for _ in range(m):
        no, toks = _take(it, "edge 'u v'", path)
        u, v = _numbers(toks, int, no, path, expect=2)
        if not (0 <= u < v < n):
            raise ParseError(f"edge must satisfy 0 <= u < v < {n}", no, path)
        if (u, v) in seen:
            raise ParseError("duplicate edge", no, path)
        seen.add((u, v))
        edges.append((u, v))
    _no_trailing(it, path)
    return Graph(n, tuple(edges))


def format_graph(g: Graph) -> str:
    out = [f"{g.n_vertices} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(out) + "\n"


def parse_channel(text: str, path: str | None = None):
    from .channel import Channel

    it = _lines(text)
    no, toks = _take(it, "header 'd n'", path)
    d, n = _numbers(toks, int, no, path, expect=2)
    if d < 1 or n < 1:
        raise ParseError("d and n must be positive", no, path)
    no, toks = _take(it, "prior line", path)
    prior = _numbers(toks, float, no, path, expect=d)
    rows = []
    for _ in range(d):
        no, toks = _take(it, "transition row", path)
        rows.append(_numbers(toks, float, no, path, expect=n))
    _no_trailing(it, path)
    try:
        return Channel(np.array(prior), np.array(rows))
    except DomainError as exc:
        raise ParseError(str(exc), None, path) from None


def format_channel(ch) -> str:
    d, n = ch.transition.shape
    out = [f"{d} {n}", " ".join(fmt(p) for p in ch.prior)]
    out += [" ".join(fmt(x) for x in row) for row in ch.transition]
    return "\n".join(out) + "\n"


def parse_labels(text: str, path: str | None = None) -> list[int]:
    """One line of integer labels (or vertex ids)."""
    it = _lines(text)
    try:
        no, toks = next(it)
    except StopIteration:
        return []
    labels = _numbers(toks, int, no, path)
    if any(x < 0 for x in labels):
        raise ParseError("labels must be nonnegative", no, path)
    _no_trailing(it, path)
    return labels


def format_labels(labels) -> str:
    return " ".join(str(int(a)) for a in labels) + "\n"


def format_solve_result(objective: float, clustering: Clustering) -> str:
    return (
        f"objective {fmt(objective)}\n"
        f"k {clustering.k}\n"
        + format_labels(clustering.assignment)
    )


def parse_solve_result(text: str, path: str | None = None) -> tuple[float, Clustering]:
    it = _lines(text)
    no, toks = _take(it, "'objective <x>'", path)
    if len(toks) != 2 or toks[0] != "objective":
        raise ParseError("expected 'objective <decimal>'", no, path)
    objective = _numbers(toks[1:], float, no, path)[0]
    no, toks = _take(it, "'k <int>'", path)
    if len(toks) != 2 or toks[0] != "k":
        raise ParseError("expected 'k <int>'", no, path)
    k = _numbers(toks[1:], int, no, path)[0]
    no, toks = _take(it, "assignment line", path)
    labels = _numbers(toks, int, no, path)
    _no_trailing(it, path)
    try:
        return objective, Clustering(tuple(labels), k)
    except DomainError as exc:
        raise ParseError(str(exc), no, path) from None


def parse_assignment(text: str, path: str | None = None) -> Clustering:
    """Accept either a bare label line or a full solve-result file."""
    first = next(_lines(text), (None, []))[1]
    if first and first[0] == "objective":
        return parse_solve_result(text, path)[1]
    return Clustering.from_labels(parse_labels(text, path))


def _reader(parse):
    def read(path):
        path = Path(path)
        return parse(path.read_text(), str(path))

    read.__name__ = parse.__name__.replace("parse_", "read_")
    read.__doc__ = f"Read a file with :func:`{parse.__name__}`."
    return read


read_instance = _reader(parse_instance)
read_graph = _reader(parse_graph)
read_channel = _reader(parse_channel)
read_labels = _reader(parse_labels)
read_solve_result = _reader(parse_solve_result)
read_assignment = _reader(parse_assignment)
