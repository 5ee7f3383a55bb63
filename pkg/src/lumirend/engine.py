"""Event-timeline execution: integer-time Look/Comp/Move operations with stale
snapshots, delayed color visibility, and move interpolation.

Timing rules, all on the integer timeline:

* A Look at time t reads the other robot's color and position as of t.
* A Compute (or the LC composite) at time t sets the robot's new color and
  pending destination; both become observable from t+1 on.  A Look that lands
  exactly at the Compute time still sees the former color.
* A move spans [t_B, t_E]; an observer inside the window sees the position
  interpolated linearly, with the endpoints giving the pre- and post-move
  positions.  An atomic M at t is MB at t with the ME implied at t+1.
* When several operations share one time instant, every Look reads the state
  before any of that instant's writes apply.

A cycle whose computed destination equals the current position needs no Move:
the robot may take its next Look directly, and an explicitly scheduled M is a
no-op.  Executions are deterministic: one (graph, schedule, initial, fraction)
tuple yields exactly one trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    LightGraph,
    MovementModel,
    SchedulerClass,
    destination,
    format_rational,
    transition,
    truncate_move,
)
from . import schedules as sched
from .schedules import (
    OP_COMP,
    OP_LC,
    OP_LOOK,
    OP_M,
    OP_MB,
    OP_ME,
    OP_NONE,
    ROBOTS,
    Schedule,
    Slot,
)

IDLE = "idle"
LOOKED = "looked"
COMPUTED = "computed"
MOVING = "moving"


class EngineError(RuntimeError):
    pass


class IllegalOp(EngineError):
    def __init__(self, robot: int, op: str, phase: str, time: int):
        self.robot, self.op, self.phase, self.time = robot, op, phase, time
        super().__init__(f"robot {robot}: op {op} at t={time} illegal in phase {phase}")


class AtomicityViolation(EngineError):
    pass


class IllegalSchedule(EngineError):
    def __init__(self, violations):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


@dataclass(frozen=True)
class ConfigurationView:
    """The (c_r, c_s; d) abstraction: both colors plus exact distance."""

    c_r: str
    c_s: str
    d: Fraction

    @property
    def pair(self) -> tuple[str, str]:
        return (self.c_r, self.c_s)

    @property
    def unordered(self) -> frozenset:
        return frozenset((self.c_r, self.c_s))


@dataclass
class _Cycle:
    look_t: int | None = None
    comp_t: int | None = None
    wrote: str | None = None
    changed: bool = False
    dest: Fraction | None = None
    start: Fraction | None = None
    mb_t: int | None = None
    me_t: int | None = None
    land: Fraction | None = None
    moved: bool = False


@dataclass
class _Robot:
    light_writes: list  # [(write_time, color)]; visible from write_time+1
    moves: list  # [(tb, te, start, land, auto)]
    initial_pos: Fraction
    phase: str = IDLE
    snapshot: tuple[str, Fraction] | None = None
    pending: tuple[str, Fraction] | None = None
    cycles: list = field(default_factory=list)

    def light_at(self, t) -> str:
        color = self.light_writes[0][1]
        for wt, c in self.light_writes:
            if wt < t:
                color = c
            else:
                break
        return color

    def position_at(self, t) -> Fraction:
        pos = self.initial_pos
        for tb, te, start, land, _auto in self.moves:
            if t <= tb:
                return pos
            if t >= te:
                pos = land
            else:
                return start + (land - start) * Fraction(t - tb, te - tb)
        return pos


@dataclass(frozen=True)
class RobotState:
    """Externally visible robot state at one time instant."""

    light: str
    position: Fraction
    phase: str
    snapshot: tuple[str, Fraction] | None
    pending: tuple[str, Fraction] | None


@dataclass(frozen=True)
class TraceStep:
    time: int
    ops: tuple[str, str]
    fractions: tuple[Fraction | None, Fraction | None]
    lights_after: tuple[str, str]
    positions_after: tuple[Fraction, Fraction]
    distance_after: Fraction


class Trace:
    """A completed execution: timestamped steps plus exact state queries."""

    def __init__(self, graph, scheduler, movement, robots, steps, rendezvous_time, t0=0):
        self.graph = graph
        self.scheduler = scheduler
        self.movement = movement
        self._robots = robots
        self.steps: list[TraceStep] = steps
        self.rendezvous_time = rendezvous_time
        self.t0 = t0
        self.initial = (
            tuple(r.light_writes[0][1] for r in robots),
            tuple(r.initial_pos for r in robots),
        )
        self.end_time = steps[-1].time + 1 if steps else t0

    # -- state queries -------------------------------------------------

    def light_at(self, robot: int, t: int) -> str:
        return self._robots[robot].light_at(t)

    def position_at(self, robot: int, t) -> Fraction:
        return self._robots[robot].position_at(t)

    def distance_at(self, t) -> Fraction:
        return abs(self.position_at(0, t) - self.position_at(1, t))

    def configuration_at(self, t) -> ConfigurationView:
        return ConfigurationView(self.light_at(0, t), self.light_at(1, t), self.distance_at(t))

    # -- operation queries ----------------------------------------------

    def _occurrences(self, robot: int, op: str) -> list[int]:
        """Times `robot` performs `op`.  A query for LOOK or COMP also matches
        the LC composite; a query for ME matches the implied end of an atomic
        M; a query for MB matches an atomic M's begin."""
        times = [s.time for s in self.steps if s.ops[robot] == op]
        if op in (OP_LOOK, OP_COMP):
            times += [s.time for s in self.steps if s.ops[robot] == OP_LC]
        if op == OP_MB:
            times += [s.time for s in self.steps if s.ops[robot] == OP_M]
        if op == OP_ME:
            times += [s.time + 1 for s in self.steps if s.ops[robot] == OP_M]
        return sorted(set(times))

    def next_op(self, robot: int, op: str, t: int) -> int | None:
        """First time >= t at which `robot` performs `op`, if any."""
        for when in self._occurrences(robot, op):
            if when >= t:
                return when
        return None

    def prev_op(self, robot: int, op: str, t: int) -> int:
        """Last time <= t at which `robot` performs `op`; the trace start time
        when there is none."""
        best = self.t0
        for when in self._occurrences(robot, op):
            if when <= t:
                best = when
        return best

    # -- cycle start times ----------------------------------------------

    def _pending_displacement(self, robot: int, t) -> bool:
        """True if at time t the robot is inside, or committed to, a move it
        has not yet finished and that actually displaces it."""
        r = self._robots[robot]
        for tb, te, start, land, _auto in r.moves:
            if tb < t < te and r.position_at(t) != land:
                return True
        return False

    def is_cs(self, t: int) -> bool:
        for robot in ROBOTS:
            if self._pending_displacement(robot, t):
                return False
            r = self._robots[robot]
            saw_look = False
            for step in self.steps:
                if step.time < t or step.ops[robot] == OP_NONE:
                    continue
                op = step.ops[robot]
                if op in (OP_LOOK, OP_LC):
                    saw_look = True
                    break
                cycle = self._cycle_containing(robot, step.time)
                if cycle is None:
                    return False
                if op == OP_COMP and (cycle.changed or cycle.moved):
                    return False
                if op in (OP_MB, OP_M, OP_ME) and cycle.moved:
                    return False
            if not saw_look:
                # trace ends before this robot looks again: it must be quiescent
                last = r.cycles[-1] if r.cycles else None
                if last is not None and last.comp_t is not None and last.me_t is None:
                    if last.mb_t is None and last.dest is not None and last.dest != last.start:
                        return False
                if last is not None and last.comp_t is None and last.look_t is not None:
                    col, pos = r.snapshot if r.snapshot else (None, None)
                    if col is not None:
                        _nl, lam = transition(self.graph, col)
                        if destination(r.position_at(t), pos, lam) != r.position_at(t):
                            return False
        return True

    def _cycle_containing(self, robot: int, t: int) -> _Cycle | None:
        for cycle in self._robots[robot].cycles:
            times = [x for x in (cycle.look_t, cycle.comp_t, cycle.mb_t, cycle.me_t) if x is not None]
            if times and min(times) <= t <= max(times):
                return cycle
        return None

    def cs_times(self) -> list[int]:
        """All cycle start times: instants where both robots' next performed
        operations are Looks, after normalizing away operations that neither
        change a color nor move a robot."""
        candidates = {self.t0, self.end_time}
        candidates.update(s.time for s in self.steps)
        return [t for t in sorted(candidates) if self.is_cs(t)]

    # -- export ----------------------------------------------------------

    def to_jsonl(self) -> str:
        lines = []
        for s in self.steps:
            lines.append(
                json.dumps(
                    {
                        "t": s.time,
                        "ops": list(s.ops),
                        "lights": list(s.lights_after),
                        "positions": [format_rational(p) for p in s.positions_after],
                        "distance": format_rational(s.distance_after),
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")

    def to_csv(self) -> str:
        rows = ["t,op_r,op_s,light_r,light_s,position_r,position_s,distance"]
        for s in self.steps:
            rows.append(
                ",".join(
                    [
                        str(s.time),
                        s.ops[0],
                        s.ops[1],
                        s.lights_after[0],
                        s.lights_after[1],
                        format_rational(s.positions_after[0]),
                        format_rational(s.positions_after[1]),
                        format_rational(s.distance_after),
                    ]
                )
            )
        return "\n".join(rows) + "\n"


class Simulation:
    """Mutable execution state driven one timed operation pair at a time."""

    def __init__(
        self,
        g: LightGraph,
        scheduler: SchedulerClass,
        movement: MovementModel,
        lights: Sequence[str],
        positions: Sequence[Fraction],
    ):
        g.validate()
        for c in lights:
            if c not in g.colors:
                raise ValueError(f"initial light {c} not in the color set")
        self.g = g
        self.scheduler = scheduler
        self.movement = movement
        self.robots = [
            _Robot(light_writes=[(-1, lights[i])], moves=[], initial_pos=Fraction(positions[i]))
            for i in ROBOTS
        ]
        self.now = 0

    # -- observation helpers ----------------------------------------------

    def light_at(self, robot: int, t) -> str:
        return self.robots[robot].light_at(t)

    def position_at(self, robot: int, t) -> Fraction:
        return self.robots[robot].position_at(t)

    def distance_at(self, t) -> Fraction:
        return abs(self.position_at(0, t) - self.position_at(1, t))

    def robot_state(self, robot: int, t) -> RobotState:
        r = self.robots[robot]
        return RobotState(r.light_at(t), r.position_at(t), r.phase, r.snapshot, r.pending)

    # -- the step relation -------------------------------------------------

    def _flush(self, t: int) -> None:
        for r in self.robots:
            if r.phase == MOVING and r.moves and r.moves[-1][4] and r.moves[-1][1] <= t:
                r.phase = IDLE
                r.pending = None
                r.snapshot = None

    def _normalize_no_move(self, robot: int, t: int) -> None:
        r = self.robots[robot]
        if r.phase == COMPUTED and r.pending is not None:
            if r.pending[1] == r.position_at(t):
                r.phase = IDLE
                r.pending = None
                r.snapshot = None

    def step(
        self,
        t: int,
        ops: tuple[str, str],
        fractions: tuple[Fraction | None, Fraction | None] = (None, None),
        move_ends: tuple[int | None, int | None] = (None, None),
    ) -> None:
        """Apply one time instant's operation pair.

        `move_ends` supplies, for an MB op, the time its ME will occur, which
        fixes how the robot is observed mid-flight.
        """
        if t < self.now:
            raise EngineError("times must be non-decreasing")
        self._flush(t)
        # all Looks read the state before any of this instant's writes
        observed = {}
        for i in ROBOTS:
            if ops[i] in (OP_LOOK, OP_LC):
                other = 1 - i
                observed[i] = (self.light_at(other, t), self.position_at(other, t))
        for i in ROBOTS:
            op = ops[i]
            if op == OP_NONE:
                continue
            r = self.robots[i]
            if op in (OP_LOOK, OP_LC):
                self._normalize_no_move(i, t)
                if r.phase != IDLE:
                    raise IllegalOp(i, op, r.phase, t)
                r.snapshot = observed[i]
                r.cycles.append(_Cycle(look_t=t, start=r.position_at(t)))
                r.phase = LOOKED
                if op == OP_LC:
                    if not self.scheduler.lc_atomic:
                        raise AtomicityViolation(f"LC op at t={t} needs an LC-atomic class")
                    self._do_comp(i, t)
            elif op == OP_COMP:
                if r.phase != LOOKED:
                    raise IllegalOp(i, op, r.phase, t)
                self._do_comp(i, t)
            elif op in (OP_MB, OP_M):
                if r.phase != COMPUTED:
                    raise IllegalOp(i, op, r.phase, t)
                if op == OP_M:
                    te, auto = t + 1, True
                else:
                    te, auto = move_ends[i], False
                    if te is None or te <= t:
                        raise EngineError(f"robot {i}: MB at t={t} without a later ME")
                frac = fractions[i] if fractions[i] is not None else Fraction(1)
                pos = r.position_at(t)
                land = truncate_move(pos, r.pending[1], self.movement, frac)
                r.moves.append((t, te, pos, land, auto))
                cycle = r.cycles[-1]
                cycle.mb_t, cycle.land, cycle.moved = t, land, land != pos
                if auto:
                    cycle.me_t = te
                r.phase = MOVING
            elif op == OP_ME:
                if r.phase != MOVING or r.moves[-1][4] or r.moves[-1][1] != t:
                    raise IllegalOp(i, op, r.phase, t)
                r.cycles[-1].me_t = t
                r.phase = IDLE
                r.pending = None
                r.snapshot = None
            else:
                raise EngineError(f"unknown op {op!r}")
        self.now = t

    def _do_comp(self, i: int, t: int) -> None:
        r = self.robots[i]
        seen_color, seen_pos = r.snapshot
        next_light, lam = transition(self.g, seen_color)
        dest = destination(r.position_at(t), seen_pos, lam)
        changed = next_light != r.light_at(t)
        r.light_writes.append((t, next_light))
        r.pending = (next_light, dest)
        r.phase = COMPUTED
        cycle = r.cycles[-1]
        cycle.comp_t, cycle.wrote, cycle.changed, cycle.dest = t, next_light, changed, dest

    # -- rendezvous ----------------------------------------------------------

    def quiescent_zero(self, t) -> bool:
        """Distance zero with no robot committed to a displacing move."""
        if self.distance_at(t) != 0:
            return False
        for i in ROBOTS:
            r = self.robots[i]
            if r.phase == MOVING and r.moves[-1][3] != r.position_at(t):
                return False
            if r.phase == COMPUTED and r.pending[1] != r.position_at(t):
                return False
            if r.phase == LOOKED:
                _nl, lam = transition(self.g, r.snapshot[0])
                if destination(r.position_at(t), r.snapshot[1], lam) != r.position_at(t):
                    return False
        return True


def _me_times(slots: list[Slot]) -> dict[tuple[int, int], int]:
    """Map (robot, MB time) -> ME time, for split moves."""
    out = {}
    open_mb: dict[int, int] = {}
    for slot in slots:
        for robot in ROBOTS:
            op = slot.op_of(robot)
            if op == OP_MB:
                open_mb[robot] = slot.time
            elif op == OP_ME and robot in open_mb:
                out[(robot, open_mb.pop(robot))] = slot.time
    return out


def run(
    g: LightGraph,
    schedule: Schedule,
    initial_colors: tuple[str, str],
    initial_distance,
    scheduler: SchedulerClass,
    movement: MovementModel,
    positions: tuple[Fraction, Fraction] | None = None,
    horizon: int | None = None,
    check: bool = True,
    stop_at_rendezvous: bool = True,
) -> Trace:
    """Execute a schedule deterministically and return the full trace.

    The robots start at positions 0 and `initial_distance` unless explicit
    positions are given.  The run stops at the end of the schedule, at the
    horizon, or as soon as the robots share a point with no pending movement.
    """
    if check:
        violations = sched.check_legal(schedule, scheduler)
        if violations:
            raise IllegalSchedule(violations)
    if positions is None:
        d = Fraction(initial_distance)
        if d < 0:
            raise ValueError("initial distance must be non-negative")
        positions = (Fraction(0), d)
    simstate = Simulation(g, scheduler, movement, list(initial_colors), positions)
    slots = list(schedule.unroll(horizon))
    ends = _me_times(slots)
    steps: list[TraceStep] = []
    rendezvous_time = None
    if stop_at_rendezvous and simstate.quiescent_zero(0):
        rendezvous_time = 0
        slots = []
    for slot in slots:
        t = slot.time
        simstate.step(
            t,
            slot.ops,
            slot.fractions,
            tuple(ends.get((robot, t)) for robot in ROBOTS),
        )
        lights = tuple(simstate.light_at(i, t + 1) for i in ROBOTS)
        poss = tuple(simstate.position_at(i, t + 1) for i in ROBOTS)
        steps.append(TraceStep(t, slot.ops, slot.fractions, lights, poss, abs(poss[0] - poss[1])))
        if stop_at_rendezvous and simstate.quiescent_zero(t + 1):
            rendezvous_time = t + 1
            break
    return Trace(g, scheduler, movement, simstate.robots, steps, rendezvous_time)
