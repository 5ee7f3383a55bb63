import random
from fractions import Fraction

import pytest

from lumirend.core import SchedulerClass
from lumirend.schedules import (
    OP_LC,
    OP_M,
    OP_NONE,
    Schedule,
    Slot,
    alt,
    block,
    check_fair,
    check_legal,
    mirror,
    random_lc_atomic_schedule,
    sim,
)


def test_alt_structure():
    slots = list(alt(horizon=4).unroll())
    assert [s.ops for s in slots] == [("LC", "-"), ("-", "LC"), ("M", "-"), ("-", "M")]


def test_alt_unrolls_twice():
    slots = list(alt(horizon=8).unroll())
    assert len(slots) == 8
    assert [s.time for s in slots] == list(range(1, 9))
    assert slots[4].ops == ("LC", "-")


def test_sim_structure():
    slots = list(sim(horizon=2).unroll())
    assert slots[0].ops == ("LC", "LC")
    assert slots[1].ops == ("M", "M")


def test_sim_legal_fsync():
    assert check_legal(sim(), SchedulerClass.fsync()) == []


def test_alt_legal_lc_move_atomic_async():
    cls = SchedulerClass.asynchronous(lc_atomic=True, move_atomic=True)
    assert check_legal(alt(), cls) == []


def test_alt_legal_under_weaker_atomicity():
    # legality is monotone: dropping Move-atomicity never rejects more
    assert check_legal(alt(), SchedulerClass.asynchronous(lc_atomic=True)) == []


def test_alt_not_ssync():
    assert check_legal(alt(), SchedulerClass.ssync())


def test_lc_op_needs_lc_atomic_class():
    violations = check_legal(alt(), SchedulerClass.asynchronous())
    assert any(v.kind == "atomicity" for v in violations)


def test_foreign_look_inside_look_comp_window():
    rows = Schedule(
        prefix=(
            Slot(1, ("LOOK", "-")),
            Slot(2, ("-", "LOOK")),
            Slot(3, ("COMP", "-")),
            Slot(5, ("-", "COMP")),
        )
    )
    violations = check_legal(rows, SchedulerClass.asynchronous(lc_atomic=True))
    assert any(v.kind == "lc-window" and v.times == (1, 2, 3) for v in violations)
    # the same schedule is fine when Look..Compute need not be atomic
    assert check_legal(rows, SchedulerClass.asynchronous()) == []


def test_foreign_look_inside_move_window():
    rows = Schedule(
        prefix=(
            Slot(1, ("LOOK", "-")),
            Slot(2, ("COMP", "-")),
            Slot(3, ("MB", "-")),
            Slot(4, ("-", "LOOK")),
            Slot(5, ("ME", "-")),
            Slot(6, ("-", "COMP")),
        )
    )
    violations = check_legal(rows, SchedulerClass.asynchronous(move_atomic=True))
    assert any(v.kind == "move-window" and v.times == (3, 4, 5) for v in violations)
    assert check_legal(rows, SchedulerClass.asynchronous()) == []


def test_cycle_order_violation():
    rows = Schedule(prefix=(Slot(1, ("COMP", "-")),))
    violations = check_legal(rows, SchedulerClass.asynchronous())
    assert any(v.kind == "cycle-order" for v in violations)


def test_fairness():
    assert check_fair(alt()) is None
    assert check_fair(sim()) is None
    from lumirend.schedules import LoopBlock

    starved = Schedule(
        loop=LoopBlock(2, (Slot(1, (OP_LC, OP_NONE)), Slot(2, (OP_M, OP_NONE)))),
        horizon=8,
    )
    assert check_fair(starved) == 1
    with pytest.raises(ValueError):
        check_fair(Schedule(prefix=block([(OP_LC, OP_NONE)])))


def test_mirror_swaps_roles():
    m = mirror(alt(horizon=4))
    assert [s.ops for s in m.unroll()] == [("-", "LC"), ("LC", "-"), ("-", "M"), ("M", "-")]


def test_schedule_json_roundtrip():
    s = alt(horizon=12)
    assert Schedule.from_json(s.to_json()) == s
    prefix = Schedule(
        prefix=(Slot(1, ("LC", "-"), (None, Fraction(1, 2))), Slot(3, ("M", "-")))
    )
    assert Schedule.from_json(prefix.to_json()) == prefix


def test_random_schedules_are_legal():
    cls = SchedulerClass.asynchronous(lc_atomic=True)
    for seed in range(25):
        s = random_lc_atomic_schedule(random.Random(seed), horizon=64)
        assert check_legal(s, cls) == []


def test_prefix_times_must_increase():
    with pytest.raises(ValueError):
        Schedule(prefix=(Slot(2, ("LC", "-")), Slot(2, ("-", "LC"))))
