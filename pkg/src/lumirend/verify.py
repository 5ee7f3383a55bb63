"""Verdicts, divergence certificates, counterexample replays, bounded
adversary-game search, and structural lower-bound checks.

A Diverges verdict is never bare: it carries a scaling-loop certificate, a
replayable schedule block under which a color pair recurs (possibly with the
robots' roles swapped) while the distance is multiplied by a fixed rational
ratio.  Certificates are re-validated by replay before being returned.

The adversary search explores the capped game fragment: at each integer time
the adversary activates one robot, the other, or both, and picks a move
fraction from a small set; moves are atomic events.  The reachable state
graph is explored to a depth bound, and the verdict comes from a fairness
analysis of its strongly connected components: a cycle in which both robots
complete cycles is a fair non-terminating execution, while a closed graph
without such a cycle sends every fair execution to rendezvous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .algorithms import builtin, orbit_labels
from .core import (
    ASYNC,
    FSYNC,
    NON_RIGID,
    RIGID,
    SSYNC,
    LightGraph,
    MovementModel,
    SchedulerClass,
    destination,
    format_rational,
    movement_from_dict,
    movement_to_dict,
    rational,
    scheduler_from_dict,
    scheduler_to_dict,
    transition,
    truncate_move,
)
from .engine import ConfigurationView, Trace, run
from .schedules import (
    OP_LC,
    OP_LOOK,
    OP_M,
    OP_NONE,
    ROBOTS,
    LoopBlock,
    Schedule,
    Slot,
    block,
    mirror,
)

# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Rendezvous:
    time: int
    kind: str = "rendezvous"


@dataclass(frozen=True)
class Diverges:
    certificate: "ScalingLoopCertificate"
    kind: str = "diverges"


@dataclass(frozen=True)
class Inconclusive:
    horizon: int
    reason: str = ""
    kind: str = "inconclusive"


Verdict = Rendezvous | Diverges | Inconclusive


# ---------------------------------------------------------------------------
# Certificates


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class ScalingLoopCertificate:
    """Witness of non-termination: replaying `schedule_block` from the entry
    configuration reproduces the entry color pair (swapped when `swap` is
    set) with the distance multiplied by `ratio`."""

    graph: LightGraph
    scheduler: SchedulerClass
    movement: MovementModel
    entry_colors: tuple[str, str]
    entry_distance: Fraction
    schedule_block: tuple[Slot, ...]
    ratio: Fraction
    swap: bool

    def block_schedule(self) -> Schedule:
        return Schedule(prefix=self.schedule_block)

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.graph.to_json_dict(),
            "scheduler": scheduler_to_dict(self.scheduler),
            "movement": movement_to_dict(self.movement),
            "entry": {
                "colors": list(self.entry_colors),
                "distance": format_rational(self.entry_distance),
            },
            "block": self.block_schedule().to_json_dict(),
            "ratio": format_rational(self.ratio),
            "swap": self.swap,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @staticmethod
    def from_json_dict(data: dict) -> "ScalingLoopCertificate":
        return ScalingLoopCertificate(
            graph=LightGraph.from_json_dict(data["algorithm"]),
            scheduler=scheduler_from_dict(data["scheduler"]),
            movement=movement_from_dict(data["movement"]),
            entry_colors=tuple(data["entry"]["colors"]),
            entry_distance=rational(data["entry"]["distance"]),
            schedule_block=Schedule.from_json_dict(data["block"]).prefix,
            ratio=rational(data["ratio"]),
            swap=data["swap"],
        )

    @staticmethod
    def from_json(text: str) -> "ScalingLoopCertificate":
        return ScalingLoopCertificate.from_json_dict(json.loads(text))

    def validate(self) -> None:
        """Re-run the block and check the recurrence it claims; raises
        CertificateError if any obligation fails."""
        validate_certificate(self)


def _block_fair(slots: Sequence[Slot]) -> bool:
    return all(any(s.op_of(r) in (OP_LOOK, OP_LC) for s in slots) for r in ROBOTS)


def _replay_block(cert: ScalingLoopCertificate, colors, distance, swapped: bool) -> ConfigurationView:
    slots = cert.schedule_block
    if swapped:
        slots = mirror(Schedule(prefix=slots)).prefix
    trace = run(
        cert.graph,
        Schedule(prefix=slots),
        colors,
        distance,
        cert.scheduler,
        cert.movement,
        stop_at_rendezvous=True,
    )
    if trace.rendezvous_time is not None:
        raise CertificateError("block reaches rendezvous; not a divergence witness")
    if not trace.is_cs(trace.end_time):
        raise CertificateError("block does not end at a clean cycle start")
    return trace.configuration_at(trace.end_time)


def validate_certificate(cert: ScalingLoopCertificate) -> None:
    if not (0 < cert.ratio <= 1):
        raise CertificateError(f"ratio {cert.ratio} outside (0, 1]")
    if cert.entry_distance <= 0:
        raise CertificateError("entry distance must be positive")
    if not _block_fair(cert.schedule_block):
        raise CertificateError("block is unfair: a robot completes no cycle")
    c_r, c_s = cert.entry_colors
    d0 = cert.entry_distance
    # first traversal from the entry configuration
    end1 = _replay_block(cert, (c_r, c_s), d0, swapped=False)
    want1 = (c_s, c_r) if cert.swap else (c_r, c_s)
    if end1.pair != want1 or end1.d != cert.ratio * d0:
        raise CertificateError(
            f"first replay gave {end1.pair} at {end1.d}, expected {want1} at {cert.ratio * d0}"
        )
    # second traversal closes the loop: mirrored block for a swap recurrence
    end2 = _replay_block(cert, end1.pair, end1.d, swapped=cert.swap)
    if end2.pair != (c_r, c_s):
        raise CertificateError("second replay does not restore the entry pair")
    if end2.d != cert.ratio * end1.d:
        raise CertificateError(
            f"second replay gave distance {end2.d}, expected {cert.ratio * end1.d}"
        )


# ---------------------------------------------------------------------------
# Rendezvous check and scaling-loop detection on traces


def check_rendezvous(trace: Trace, certificate: ScalingLoopCertificate | None = None) -> Verdict:
    """Rendezvous at the first distance-zero cycle start time; otherwise
    Diverges when a validated certificate is attached, else inconclusive."""
    for t in trace.cs_times():
        if trace.distance_at(t) == 0:
            return Rendezvous(t)
    if certificate is not None:
        validate_certificate(certificate)
        return Diverges(certificate)
    return Inconclusive(trace.end_time)


def _sanitize_block(slots: list[Slot]) -> tuple[Slot, ...]:
    """Strip each robot's leading no-effect ops (they precede its first Look
    and can be normalized out), then drop empty slots and rebase times."""
    first_look = {}
    for r in ROBOTS:
        for s in slots:
            if s.op_of(r) in (OP_LOOK, OP_LC):
                first_look[r] = s.time
                break
    cleaned = []
    for s in slots:
        ops = list(s.ops)
        fracs = list(s.fractions)
        for r in ROBOTS:
            if r in first_look and s.time < first_look[r] and ops[r] != OP_NONE:
                ops[r] = OP_NONE
                fracs[r] = None
            if r not in first_look and ops[r] != OP_NONE:
                ops[r] = OP_NONE
                fracs[r] = None
        if ops != [OP_NONE, OP_NONE]:
            cleaned.append(Slot(s.time, tuple(ops), tuple(fracs)))
    if not cleaned:
        return ()
    shift = cleaned[0].time - 1
    return tuple(Slot(s.time - shift, s.ops, s.fractions) for s in cleaned)


def detect_scaling_loop(trace: Trace) -> ScalingLoopCertificate | None:
    """Find a replay-validated scaling loop among the trace's cycle-start
    configurations: a color-pair recurrence (up to robot swap) with the
    distance scaled by a constant rational ratio in (0, 1]."""
    cs = trace.cs_times()
    configs = [(t, trace.configuration_at(t)) for t in cs]

    for i, (ti, ci) in enumerate(configs):
        if ci.d <= 0:
            continue
        for tj, cj in configs[i + 1 :]:
            if cj.d <= 0 or cj.d > ci.d:
                continue
            swap = cj.pair == (ci.c_s, ci.c_r) and ci.c_r != ci.c_s
            if not (swap or cj.pair == ci.pair):
                continue
            raw = [
                Slot(s.time, s.ops, s.fractions)
                for s in trace.steps
                if ti <= s.time < tj
            ]
            blk = _sanitize_block(raw)
            if not blk or not _block_fair(blk):
                continue
            ratio = cj.d / ci.d
            cert = ScalingLoopCertificate(
                graph=trace.graph,
                scheduler=trace.scheduler,
                movement=trace.movement,
                entry_colors=ci.pair,
                entry_distance=ci.d,
                schedule_block=blk,
                ratio=ratio,
                swap=swap,
            )
            try:
                validate_certificate(cert)
                return cert
            except CertificateError:
                continue
    return None


# ---------------------------------------------------------------------------
# Replays of the published counterexample schedules

_ALT = [("LC", "-"), ("-", "LC"), ("M", "-"), ("-", "M")]
_SIM = [("LC", "LC"), ("M", "M")]
# one robot slips in an extra no-move cycle against the other's stale snapshot
_EXT5 = [("-", "LC"), ("LC", "-"), ("-", "LC"), ("M", "-"), ("-", "M")]
# the second robot completes a full extra cycle mid-block
_EXT6 = [("-", "LC"), ("LC", "-"), ("-", "M"), ("-", "LC"), ("M", "-"), ("-", "M")]


def _mirror_rows(rows):
    return [(b, a) for a, b in rows]


@dataclass(frozen=True)
class ReplayResult:
    graph: LightGraph
    schedule: Schedule
    initial: tuple[tuple[str, str], Fraction]
    verdict: Verdict
    trace: Trace


_COUNTEREXAMPLES = ("lemma6_alg_a", "lemma7_alg_b") + tuple(f"lemma9_{i}" for i in range(1, 7))


def counterexample_names() -> tuple[str, ...]:
    return _COUNTEREXAMPLES


def replay_paper_counterexample(name: str, lam=None, distance=1) -> ReplayResult:
    """Reconstruct a published counterexample's initial configuration and
    schedule, run it, and return a Diverges verdict with a validated
    scaling-loop certificate."""
    d = rational(distance)
    scheduler = SchedulerClass.asynchronous(lc_atomic=True, move_atomic=True)
    movement = MovementModel.rigid()

    if name == "lemma6_alg_a":
        g, init = builtin("alg_a"), ("B", "C")
        rows = _ALT + _SIM
        rows = rows + _mirror_rows(rows)
    elif name == "lemma7_alg_b":
        g, init = builtin("alg_b"), ("B", "C")
        rows = _ALT + _SIM
        rows = rows + _mirror_rows(rows)
    elif name == "lemma9_1":
        lam = rational(lam if lam is not None else 0)
        g = builtin("alg1", lam)
        if lam == 0:
            init, rows = ("A", "C"), _SIM + _SIM
        else:
            init, rows = ("D", "A"), _ALT + _ALT
    elif name == "lemma9_2":
        lam = rational(lam if lam is not None else 1)
        g = builtin("alg2", lam)
        if lam == 1:
            init, rows = ("A", "B"), _SIM + _EXT5
        else:
            init, rows = ("B", "C"), _ALT + _ALT
    elif name in ("lemma9_3", "lemma9_4", "lemma9_5", "lemma9_6"):
        if lam is None:
            raise ValueError(f"{name} requires a coefficient")
        lam = rational(lam)
        g = builtin("alg" + name[-1], lam)
        init = ("A", "B")
        rows = _ALT + _EXT6 if name == "lemma9_3" else _ALT + _ALT
    else:
        raise KeyError(f"unknown counterexample {name!r}")

    period = len(rows)
    horizon = 2 * period
    schedule = Schedule(loop=LoopBlock(period, block(rows)), horizon=horizon)
    trace = run(g, schedule, init, d, scheduler, movement)
    cert = detect_scaling_loop(trace)
    if cert is None:
        raise CertificateError(f"{name}: no scaling loop found (unexpected)")
    return ReplayResult(g, schedule, (init, d), Diverges(cert), trace)


# ---------------------------------------------------------------------------
# Bounded adversary-game search


@dataclass(frozen=True)
class SearchConfig:
    horizon: int
    scheduler: SchedulerClass
    movement: MovementModel
    fraction_choices: tuple[Fraction, ...] = (Fraction(0), Fraction(1))
    max_states: int = 200_000

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.scheduler.kind == ASYNC and not self.scheduler.lc_atomic:
            raise ValueError("the game search explores the LC-atomic fragment only")


# an abstract search state: visible lights, per-robot pending destination
# (None when idle), absolute positions
_State = tuple[tuple[str, str], tuple[Fraction | None, Fraction | None], tuple[Fraction, Fraction]]


def _is_rendezvous_state(state: _State) -> bool:
    lights, pendings, positions = state
    if positions[0] != positions[1]:
        return False
    return all(p is None or p == positions[i] for i, p in enumerate(pendings))


def _canonical_key(state: _State, movement: MovementModel):
    lights, pendings, positions = state
    base = positions[0]
    pos1 = positions[1] - base
    pend = [None if p is None else p - base for p in pendings]
    coords = [pos1] + [p for p in pend if p is not None]
    sign = 1
    for c in coords:
        if c != 0:
            sign = 1 if c > 0 else -1
            break
    pos1 *= sign
    pend = [None if p is None else p * sign for p in pend]
    everything = [Fraction(0), pos1] + [p for p in pend if p is not None]
    span = max(everything) - min(everything)
    scale = Fraction(1)
    if movement.kind == RIGID:
        if pos1 > 0:
            scale = 1 / pos1
        elif span > 0:
            scale = 1 / span
    else:
        if 0 < span <= movement.delta:
            scale = movement.delta / span
    pos1 *= scale
    pend = [None if p is None else p * scale for p in pend]

    def enc(q):
        return None if q is None else (q.numerator, q.denominator)

    return (lights, enc(pend[0]), enc(pend[1]), enc(pos1))


def _search_children(state: _State, g: LightGraph, cfg: SearchConfig):
    """Yield (slots, completions, child_state) for every adversary choice at
    the next time instant."""
    lights, pendings, positions = state
    rounds = cfg.scheduler.kind in (FSYNC, SSYNC)
    if cfg.scheduler.kind == FSYNC:
        actor_sets: list[tuple[int, ...]] = [(0, 1)]
    else:
        actor_sets = [(0,), (1,), (0, 1)]

    for actors in actor_sets:
        # per-actor fraction choices for any move this instant
        per_actor_fracs = []
        for i in actors:
            if rounds:
                other = 1 - i
                _nl, lam = transition(g, lights[other])
                dest = destination(positions[i], positions[other], lam)
                moving = dest != positions[i]
            else:
                moving = pendings[i] is not None
            if not moving or cfg.movement.kind == RIGID:
                per_actor_fracs.append((Fraction(1),))
            else:
                target = dest if rounds else pendings[i]
                if abs(target - positions[i]) <= cfg.movement.delta:
                    per_actor_fracs.append((Fraction(1),))
                else:
                    per_actor_fracs.append(tuple(cfg.fraction_choices))
        for fracs in product(*per_actor_fracs):
            frac_of = dict(zip(actors, fracs))
            new_lights = list(lights)
            new_pend = list(pendings)
            new_pos = list(positions)
            completions = set()
            ops = [OP_NONE, OP_NONE]
            move_row = [OP_NONE, OP_NONE]
            move_fracs: list[Fraction | None] = [None, None]
            for i in actors:
                other = 1 - i
                if rounds or pendings[i] is None:
                    seen_c, seen_p = lights[other], positions[other]
                    nl, lam = transition(g, seen_c)
                    dest = destination(positions[i], seen_p, lam)
                    new_lights[i] = nl
                    ops[i] = OP_LC
                    if rounds:
                        if dest != positions[i]:
                            new_pos[i] = truncate_move(
                                positions[i], dest, cfg.movement, frac_of[i]
                            )
                            move_row[i] = OP_M
                            move_fracs[i] = frac_of[i]
                        completions.add(i)
                    elif dest == positions[i]:
                        completions.add(i)
                    else:
                        new_pend[i] = dest
                else:
                    land = truncate_move(positions[i], pendings[i], cfg.movement, frac_of[i])
                    new_pos[i] = land
                    new_pend[i] = None
                    ops[i] = OP_M
                    move_fracs[i] = frac_of[i]
                    completions.add(i)
            if rounds:
                slots = [(tuple(ops), (None, None))]
                if move_row != [OP_NONE, OP_NONE]:
                    slots.append((tuple(move_row), tuple(move_fracs)))
            else:
                frow = tuple(move_fracs[i] if ops[i] == OP_M else None for i in ROBOTS)
                slots = [(tuple(ops), frow)]
            child = (tuple(new_lights), tuple(new_pend), tuple(new_pos))
            yield slots, frozenset(completions), child


@dataclass
class _Node:
    index: int
    rep: _State
    depth: int
    rendezvous: bool
    expanded: bool = False
    edges: list = field(default_factory=list)  # (slots, completions, child_key)


class SearchGraph:
    """Depth-bounded reachable state graph for one initial configuration."""

    def __init__(self, g: LightGraph, cfg: SearchConfig, initial: _State):
        self.g = g
        self.cfg = cfg
        self.nodes: dict = {}
        self.root = _canonical_key(initial, cfg.movement)
        self._explore(initial)

    def _explore(self, initial: _State) -> None:
        cfg = self.cfg
        root_key = _canonical_key(initial, cfg.movement)
        self.nodes[root_key] = _Node(0, initial, 0, _is_rendezvous_state(initial))
        frontier = [root_key]
        while frontier:
            next_frontier = []
            for key in frontier:
                node = self.nodes[key]
                if node.rendezvous or node.depth >= cfg.horizon:
                    continue
                if len(self.nodes) > cfg.max_states:
                    return
                node.expanded = True
                for slots, completions, child in _search_children(node.rep, self.g, cfg):
                    ckey = _canonical_key(child, cfg.movement)
                    if ckey not in self.nodes:
                        self.nodes[ckey] = _Node(
                            len(self.nodes), child, node.depth + 1, _is_rendezvous_state(child)
                        )
                        next_frontier.append(ckey)
                    node.edges.append((slots, completions, ckey))
            frontier = next_frontier

    # -- strongly connected components over non-rendezvous nodes ------------

    def _sccs(self) -> list[list]:
        index: dict = {}
        low: dict = {}
        on_stack: set = set()
        stack: list = []
        sccs: list[list] = []
        counter = [0]
        for start in self.nodes:
            if start in index or self.nodes[start].rendezvous:
                continue
            work = [(start, iter(self._succ(start)))]
            index[start] = low[start] = counter[0]
            counter[0] += 1
            stack.append(start)
            on_stack.add(start)
            while work:
                v, it = work[-1]
                advanced = False
                for w in it:
                    if w not in index:
                        index[w] = low[w] = counter[0]
                        counter[0] += 1
                        stack.append(w)
                        on_stack.add(w)
                        work.append((w, iter(self._succ(w))))
                        advanced = True
                        break
                    if w in on_stack:
                        low[v] = min(low[v], index[w])
                if advanced:
                    continue
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    sccs.append(comp)
        return sccs

    def _succ(self, key):
        return [c for _slots, _comp, c in self.nodes[key].edges if not self.nodes[c].rendezvous]

    def fair_scc(self) -> list | None:
        """A strongly connected set of non-rendezvous states whose internal
        edges include a cycle completion for each robot, if one exists."""
        for comp in self._sccs():
            members = set(comp)
            if len(comp) == 1:
                k = comp[0]
                if not any(c == k for _s, _cmp, c in self.nodes[k].edges):
                    continue
            seen: set[int] = set()
            for k in comp:
                for _slots, completions, child in self.nodes[k].edges:
                    if child in members:
                        seen |= completions
            if seen == {0, 1}:
                return sorted(members, key=lambda k: self.nodes[k].index)
        return None

    def open_frontier(self) -> bool:
        return any(not n.expanded and not n.rendezvous for n in self.nodes.values())

    # -- certificate extraction ---------------------------------------------

    def certificate_from_scc(self, comp: list) -> ScalingLoopCertificate | None:
        members = set(comp)
        clean = [
            k
            for k in comp
            if all(p is None for p in self.nodes[k].rep[1])
            and self.nodes[k].rep[2][0] != self.nodes[k].rep[2][1]
        ]
        if not clean:
            return None
        n0 = min(clean, key=lambda k: self.nodes[k].index)
        # shortest closed walk from n0 back to n0 collecting both completions
        start = (n0, frozenset())
        parents: dict = {start: None}
        queue = [start]
        goal = None
        while queue and goal is None:
            nxt = []
            for cur in queue:
                key, flags = cur
                for slots, completions, child in self.nodes[key].edges:
                    if child not in members:
                        continue
                    new = (child, flags | completions)
                    if new == (n0, frozenset({0, 1})):
                        parents[new] = (cur, slots)
                        goal = new
                        break
                    if new not in parents:
                        parents[new] = (cur, slots)
                        nxt.append(new)
                if goal:
                    break
            queue = nxt
        if goal is None:
            return None
        rows = []
        node = goal
        while parents[node] is not None:
            prev, slots = parents[node]
            rows = list(slots) + rows
            node = prev
        slot_objs = []
        t = 1
        for ops, fracs in rows:
            slot_objs.append(Slot(t, ops, fracs))
            t += 1
        rep = self.nodes[n0].rep
        entry = (rep[0][0], rep[0][1])
        d0 = abs(rep[2][1] - rep[2][0])
        blk = tuple(slot_objs)
        trace = run(
            self.g,
            Schedule(prefix=blk),
            entry,
            d0,
            self.cfg.scheduler,
            self.cfg.movement,
            stop_at_rendezvous=True,
        )
        if trace.rendezvous_time is not None:
            return None
        end = trace.configuration_at(trace.end_time)
        if end.pair != entry or end.d > d0 or end.d == 0:
            return None
        cert = ScalingLoopCertificate(
            graph=self.g,
            scheduler=self.cfg.scheduler,
            movement=self.cfg.movement,
            entry_colors=entry,
            entry_distance=d0,
            schedule_block=blk,
            ratio=end.d / d0,
            swap=False,
        )
        try:
            validate_certificate(cert)
        except CertificateError:
            return None
        return cert


def _search_core(g: LightGraph, cfg: SearchConfig, colors: tuple[str, str], distance) -> Verdict:
    d = rational(distance)
    initial: _State = ((colors[0], colors[1]), (None, None), (Fraction(0), d))
    graph = SearchGraph(g, cfg, initial)
    comp = graph.fair_scc()
    if comp is not None:
        cert = graph.certificate_from_scc(comp)
        if cert is not None:
            return Diverges(cert)
        return Inconclusive(cfg.horizon, "fair loop found but no clean certificate entry")
    if graph.open_frontier():
        return Inconclusive(cfg.horizon, "open branches remain; horizon too small")
    return Rendezvous(cfg.horizon)


def search_one(
    g: LightGraph, cfg: SearchConfig, colors: tuple[str, str], distance, prepass: bool = True
) -> Verdict:
    """Explore the adversary game from one initial configuration.

    For asynchronous classes a synchronous-rounds pre-pass runs first: round
    schedules form a subclass of any LC-atomic asynchronous class, so a
    divergence certificate found there is already a witness for the larger
    class, and it is far cheaper to find.  A rendezvous answer from the
    pre-pass proves nothing and falls through to the full search.
    """
    if prepass and cfg.scheduler.kind == ASYNC:
        pre_cfg = SearchConfig(
            cfg.horizon,
            SchedulerClass.ssync(),
            cfg.movement,
            cfg.fraction_choices,
            cfg.max_states,
        )
        pre = _search_core(g, pre_cfg, colors, distance)
        if isinstance(pre, Diverges):
            return pre
    return _search_core(g, cfg, colors, distance)


def adversary_search(
    g: LightGraph, cfg: SearchConfig, initials: Iterable[tuple[tuple[str, str], object]]
) -> dict:
    """Verdict per initial configuration ((c_r, c_s), distance)."""
    return {
        (colors, rational(dist)): search_one(g, cfg, colors, dist)
        for colors, dist in initials
    }


def reachable_cs_color_pairs(
    g: LightGraph, starts: Iterable[str], cfg: SearchConfig, distance=1
) -> set[frozenset]:
    """All unordered color pairs visible at clean cycle-start states across
    the bounded adversary tree from the given same-color starts."""
    pairs: set[frozenset] = set()
    for c in starts:
        initial: _State = ((c, c), (None, None), (Fraction(0), rational(distance)))
        graph = SearchGraph(g, cfg, initial)
        for node in graph.nodes.values():
            lights, pendings, _positions = node.rep
            if all(p is None for p in pendings):
                pairs.add(frozenset(lights))
    return pairs


# ---------------------------------------------------------------------------
# Stabilization classification


@dataclass(frozen=True)
class StabilizationReport:
    classification: str
    same_color: dict
    mixed: dict
    horizon: int
    empirical: bool = True


SELF_STABILIZING = "self-stabilizing"
QUASI_SELF_STABILIZING = "quasi-self-stabilizing"
NON_QUASI_SELF_STABILIZING = "non-quasi-self-stabilizing"
NOT_SOLVING = "not-solving"


def classify_stabilization(
    g: LightGraph, scheduler: SchedulerClass, movement: MovementModel, cfg: SearchConfig, distance=1
) -> StabilizationReport:
    """Empirical, horizon-bounded classification from search verdicts over all
    ordered color-pair starts."""
    cfg = SearchConfig(cfg.horizon, scheduler, movement, cfg.fraction_choices, cfg.max_states)
    same = {c: search_one(g, cfg, (c, c), distance) for c in g.colors}
    mixed = {
        (a, b): search_one(g, cfg, (a, b), distance)
        for a in g.colors
        for b in g.colors
        if a != b
    }
    all_same_ok = all(isinstance(v, Rendezvous) for v in same.values())
    all_mixed_ok = all(isinstance(v, Rendezvous) for v in mixed.values())
    if all_same_ok and all_mixed_ok:
        cls = SELF_STABILIZING
    elif all_same_ok and any(isinstance(v, Diverges) for v in mixed.values()):
        cls = QUASI_SELF_STABILIZING
    elif any(isinstance(v, Diverges) for v in same.values()) and any(
        isinstance(v, Rendezvous) for v in same.values()
    ):
        cls = NON_QUASI_SELF_STABILIZING
    else:
        cls = NOT_SOLVING
    return StabilizationReport(cls, same, mixed, cfg.horizon)


# ---------------------------------------------------------------------------
# Structural (label) necessities and the matching adversaries


@dataclass(frozen=True)
class StructuralReport:
    """Presence of the three structurally necessary labels, per same-color
    start orbit, with the adversary family that defeats each absence."""

    labels_present: frozenset
    per_start_missing: dict  # start color -> tuple of missing labels

    def missing_anywhere(self) -> bool:
        return any(self.per_start_missing.values())


_REQUIRED = (Fraction(1, 2), Fraction(1), Fraction(0))


def structural_check(g: LightGraph) -> StructuralReport:
    g.validate()
    per_start = {}
    for c in g.colors:
        labels = orbit_labels(g, c)
        per_start[c] = tuple(x for x in _REQUIRED if x not in labels)
    return StructuralReport(frozenset(g.labels()), per_start)


def _ssync_round_rows(movers_ops: tuple[str, str], move_ops: tuple[str, str]):
    rows = [movers_ops]
    if move_ops != (OP_NONE, OP_NONE):
        rows.append(move_ops)
    return rows


def missing_label_adversary(
    g: LightGraph, start: str, missing: Fraction, horizon: int = 40, distance=1
) -> tuple[Schedule, Trace, ScalingLoopCertificate | None]:
    """Build and run the defeating SSYNC schedule for a missing label.

    Missing 1/2 on the start's orbit: keep both robots synchronous; their
    colors stay equal and no round can close the gap.  Missing 1: alternate
    single activations; no robot can ever land on the other.  Missing 0:
    alternate, but activate both robots in any round whose mover would follow
    a full-jump edge, so the jump is always answered by a departure.
    """
    scheduler = SchedulerClass.ssync()
    movement = MovementModel.rigid()
    lights = [start, start]
    positions = [Fraction(0), rational(distance)]
    rows: list[tuple] = []
    fracs: list[tuple] = []
    parity = 0
    for _round in range(horizon):
        if missing == Fraction(1, 2):
            actors = (0, 1)
        else:
            i = parity
            _nl, lam = transition(g, lights[1 - i])
            if missing == Fraction(0) and lam == 1:
                actors = (0, 1)
            else:
                actors = (i,)
            parity = 1 - parity
        ops = tuple(OP_LC if i in actors else OP_NONE for i in ROBOTS)
        new_lights = list(lights)
        new_pos = list(positions)
        moves = [OP_NONE, OP_NONE]
        for i in actors:
            nl, lam = transition(g, lights[1 - i])
            dest = destination(positions[i], positions[1 - i], lam)
            new_lights[i] = nl
            if dest != positions[i]:
                new_pos[i] = dest
                moves[i] = OP_M
        for row in _ssync_round_rows(ops, tuple(moves)):
            rows.append(row)
            fracs.append((None, None))
        lights, positions = new_lights, new_pos
        if abs(positions[0] - positions[1]) == 0:
            break
    schedule = Schedule(prefix=block(rows, fracs))
    trace = run(g, schedule, (start, start), distance, scheduler, movement)
    cert = detect_scaling_loop(trace)
    return schedule, trace, cert


# ---------------------------------------------------------------------------
# Structural trace properties


def stationary_pairs(g: LightGraph) -> set[tuple[str, str]]:
    """Ordered pairs (alpha, beta) such that a robot showing beta freezes
    while its partner shows alpha: observing alpha rewrites beta to itself
    with no movement."""
    out = set()
    for alpha in g.colors:
        target, lam = transition(g, alpha)
        if lam == 0:
            out.add((alpha, target))
    return out


def check_stationary_partner(trace: Trace) -> list[tuple]:
    """Violations of the frozen-partner property: at any cycle start with an
    ordered pair (alpha, beta) from `stationary_pairs`, the beta robot must
    keep its color and position until the alpha robot's next Look."""
    g = trace.graph
    frozen = stationary_pairs(g)
    bad = []
    for t in trace.cs_times():
        for mover, holder in ((0, 1), (1, 0)):
            pair = (trace.light_at(mover, t), trace.light_at(holder, t))
            if pair not in frozen:
                continue
            until = trace.next_op(mover, OP_LOOK, t)
            if until is None:
                until = trace.end_time
            for u in range(t, until + 1):
                if (
                    trace.light_at(holder, u) != pair[1]
                    or trace.position_at(holder, u) != trace.position_at(holder, t)
                ):
                    bad.append((t, u, holder))
                    break
    return bad


def check_contraction_pattern(trace: Trace) -> tuple[bool, tuple]:
    """From the first cycle start showing the unordered pair {B, C}: some
    later cycle start must reach distance zero, or shrink the distance by at
    least delta while showing one of the two successor pairs."""
    g = trace.graph
    delta = trace.movement.delta if trace.movement.kind == NON_RIGID else Fraction(0)
    rho, _lam = transition(g, "C")
    allowed = {frozenset((rho, "C")), frozenset((rho, transition(g, rho)[0]))}
    cs = trace.cs_times()
    entry = None
    for t in cs:
        if frozenset((trace.light_at(0, t), trace.light_at(1, t))) == frozenset(("B", "C")):
            entry = t
            break
    if entry is None:
        return True, ()
    d0 = trace.distance_at(entry)
    for t in cs:
        if t <= entry:
            continue
        d = trace.distance_at(t)
        pair = frozenset((trace.light_at(0, t), trace.light_at(1, t)))
        if d == 0:
            return True, (entry, t)
        if d <= d0 - delta and pair in allowed:
            return True, (entry, t)
    return False, (entry,)


def check_synchronous_contraction(trace: Trace) -> list[tuple]:
    """Under simultaneous rounds, every round in which both robots observe the
    halving label must shrink the distance: to zero under rigid movement, by
    at least two delta (or to zero) otherwise.  Rounds are the slots where
    both robots perform LC at once; their effects land two ticks later."""
    g = trace.graph
    bad = []
    for step in trace.steps:
        if step.ops != (OP_LC, OP_LC):
            continue
        t = step.time
        pair = (trace.light_at(0, t), trace.light_at(1, t))
        if pair[0] != pair[1]:
            continue
        _next, lam = transition(g, pair[0])
        if lam != Fraction(1, 2):
            continue
        d0, d1 = trace.distance_at(t), trace.distance_at(t + 2)
        if trace.movement.kind == RIGID:
            if d1 != 0:
                bad.append((t, d0, d1))
        else:
            delta = trace.movement.delta
            if d1 != 0 and d1 > d0 - 2 * delta:
                bad.append((t, d0, d1))
    return bad
