"""Core vocabulary: light graphs, movement models, scheduler classes, exact 1-D geometry.

All geometry lives on the line through the two robots and is represented with
exact rationals (`fractions.Fraction`); no floating point is used anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Rational = Fraction

RIGID = "rigid"
NON_RIGID = "non-rigid"

FSYNC = "fsync"
SSYNC = "ssync"
ASYNC = "async"


def rational(value) -> Fraction:
    """Parse an exact rational from an int, Fraction, or a 'p/q' string.

    Decimal strings are rejected on purpose: every quantity in the model is
    an exact rational and silent precision loss is not acceptable.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal notation not accepted: {value!r}; use p/q")
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    """Render a rational as 'p/q', always including the denominator."""
    return f"{q.numerator}/{q.denominator}"


class GraphError(ValueError):
    """A light graph violates its structural invariants."""


class MissingEdge(GraphError):
    def __init__(self, color: str):
        self.color = color
        super().__init__(f"color {color} has no outgoing edge")


class DanglingTarget(GraphError):
    def __init__(self, color: str):
        self.color = color
        super().__init__(f"edge target {color} is not a member color")


class UnknownSource(GraphError):
    def __init__(self, color: str):
        self.color = color
        super().__init__(f"edge source {color} is not a member color")


@dataclass(frozen=True)
class Edge:
    """One transition: on observing the source color, adopt `target` and move
    to the point (1-lam)*me + lam*other."""

    target: str
    lam: Fraction


@dataclass(frozen=True)
class LightGraph:
    """An algorithm as an edge-labeled functional graph over colors.

    Every color has exactly one outgoing edge; the edge label is the exact
    rational movement coefficient.
    """

    colors: tuple[str, ...]
    edges: Mapping[str, Edge]

    @staticmethod
    def build(colors: Iterable[str], edges: Mapping[str, tuple[str, object]]) -> "LightGraph":
        built = {
            src: Edge(target, rational(lam)) for src, (target, lam) in edges.items()
        }
        g = LightGraph(tuple(colors), built)
        validate_graph(g)
        return g

    def validate(self) -> None:
        validate_graph(self)

    def to_json_dict(self) -> dict:
        return {
            "colors": list(self.colors),
            "edges": {
                c: {"next": e.target, "lambda": format_rational(e.lam)}
                for c, e in sorted(self.edges.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json_dict(data: dict) -> "LightGraph":
        edges = {
            src: (entry["next"], rational(entry["lambda"]))
            for src, entry in data["edges"].items()
        }
        return LightGraph.build(data["colors"], edges)

    @staticmethod
    def from_json(text: str) -> "LightGraph":
        return LightGraph.from_json_dict(json.loads(text))

    def labels(self) -> set[Fraction]:
        return {e.lam for e in self.edges.values()}


def validate_graph(g: LightGraph) -> None:
    """Check out-degree exactly one per color and edge targets inside the color set."""
    member = set(g.colors)
    for src in g.edges:
        if src not in member:
            raise UnknownSource(src)
    for color in g.colors:
        if color not in g.edges:
            raise MissingEdge(color)
        if g.edges[color].target not in member:
            raise DanglingTarget(g.edges[color].target)


def transition(g: LightGraph, observed: str) -> tuple[str, Fraction]:
    """The unique out-edge of the observed color: (next color, coefficient)."""
    edge = g.edges[observed]
    return edge.target, edge.lam


@dataclass(frozen=True)
class MovementModel:
    kind: str
    delta: Fraction | None = None

    def __post_init__(self):
        if self.kind == NON_RIGID:
            if self.delta is None or self.delta <= 0:
                raise ValueError("non-rigid movement requires delta > 0")
        elif self.kind == RIGID:
            if self.delta is not None:
                raise ValueError("rigid movement takes no delta")
        else:
            raise ValueError(f"unknown movement kind {self.kind!r}")

    @staticmethod
    def rigid() -> "MovementModel":
        return MovementModel(RIGID)

    @staticmethod
    def non_rigid(delta) -> "MovementModel":
        return MovementModel(NON_RIGID, rational(delta))


@dataclass(frozen=True)
class SchedulerClass:
    """Scheduler family plus atomicity restrictions.

    FSYNC and SSYNC execute whole Look-Compute-Move cycles as instantaneous
    rounds, so they are always both LC-atomic and Move-atomic.
    """

    kind: str
    lc_atomic: bool = False
    move_atomic: bool = False

    def __post_init__(self):
        if self.kind not in (FSYNC, SSYNC, ASYNC):
            raise ValueError(f"unknown scheduler kind {self.kind!r}")
        if self.kind in (FSYNC, SSYNC) and not (self.lc_atomic and self.move_atomic):
            raise ValueError(f"{self.kind} implies LC-atomic and Move-atomic")

    @staticmethod
    def fsync() -> "SchedulerClass":
        return SchedulerClass(FSYNC, True, True)

    @staticmethod
    def ssync() -> "SchedulerClass":
        return SchedulerClass(SSYNC, True, True)

    @staticmethod
    def asynchronous(lc_atomic: bool = False, move_atomic: bool = False) -> "SchedulerClass":
        return SchedulerClass(ASYNC, lc_atomic, move_atomic)


def scheduler_to_dict(cls: SchedulerClass) -> dict:
    return {"kind": cls.kind, "lc_atomic": cls.lc_atomic, "move_atomic": cls.move_atomic}


def scheduler_from_dict(data: dict) -> SchedulerClass:
    return SchedulerClass(data["kind"], data["lc_atomic"], data["move_atomic"])


def movement_to_dict(model: MovementModel) -> dict:
    out: dict = {"kind": model.kind}
    if model.delta is not None:
        out["delta"] = format_rational(model.delta)
    return out


def movement_from_dict(data: dict) -> MovementModel:
    if data["kind"] == RIGID:
        return MovementModel.rigid()
    return MovementModel.non_rigid(rational(data["delta"]))


def destination(me: Fraction, other: Fraction, lam: Fraction) -> Fraction:
    """Destination point (1-lam)*me + lam*other, exactly."""
    return (1 - lam) * me + lam * other


def truncate_move(
    me: Fraction,
    dest: Fraction,
    model: MovementModel,
    adversary_fraction: Fraction = Fraction(1),
) -> Fraction:
    """Where a move from `me` toward `dest` actually stops.

    Rigid movement always reaches the destination.  Non-rigid movement may be
    cut short by the adversary, but covers at least min(delta, |dest-me|);
    the adversary's fraction picks a stop point in [delta, |dest-me|] and the
    robot never overshoots the destination.
    """
    if not 0 <= adversary_fraction <= 1:
        raise ValueError("adversary fraction must lie in [0, 1]")
    if model.kind == RIGID:
        return dest
    length = abs(dest - me)
    if length <= model.delta:
        return dest
    travelled = max(model.delta, adversary_fraction * length)
    direction = 1 if dest > me else -1
    return me + direction * travelled
