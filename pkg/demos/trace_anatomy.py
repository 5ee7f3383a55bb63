"""A guided tour of the execution timeline.

Runs a handful of small schedules against the three-color cyclic algorithm
and prints what each robot saw and when, illustrating the three timing rules
that drive everything else:

  1. a color written by a Compute at time t is observable from t+1 on,
  2. a pending destination is computed from the robot's own stale snapshot,
  3. a robot observed mid-move appears at the interpolated position.
"""

from fractions import Fraction

from lumirend import LightGraph, MovementModel, SchedulerClass, alt, run, sim
from lumirend.schedules import Schedule, Slot

RIGID = MovementModel.rigid()
LCMV = SchedulerClass.asynchronous(lc_atomic=True, move_atomic=True)
ss3 = LightGraph.build("ABC", {"A": ("B", "1/2"), "B": ("C", "0"), "C": ("A", "1")})


def show(trace, label):
    print(f"\n== {label}")
    print(trace.to_csv().rstrip())
    print("cycle starts:", ", ".join(str(t) for t in trace.cs_times()))
    for t in trace.cs_times():
        c = trace.configuration_at(t)
        print(f"  t={t}: ({c.c_r},{c.c_s}; {c.d})")


def main():
    print("alternate schedule from equal colors: one robot halves the gap,")
    print("the other sees the fresh color and freezes")
    show(run(ss3, alt(horizon=4), ("A", "A"), 1, LCMV, RIGID), "alt from (A,A;1)")

    print("\nsimultaneous rounds from the jump color: the robots swap places")
    show(run(ss3, sim(horizon=2), ("C", "C"), 1, LCMV, RIGID), "sim from (C,C;1)")

    print("\ndelayed visibility: a Look at the exact Compute instant still sees")
    print("the former color; one tick later it sees the new one")
    rows = Schedule(prefix=(Slot(1, ("LOOK", "-")), Slot(3, ("COMP", "LOOK")), Slot(5, ("-", "COMP"))))
    tr = run(ss3, rows, ("A", "A"), 1, SchedulerClass.asynchronous(), RIGID)
    print(f"  observer's color after computing on what it saw: {tr.light_at(1, 6)}"
          "  (B: it saw the stale A)")

    print("\nmid-move observation: a Look inside another robot's move window")
    print("sees the linear interpolant")
    rows = Schedule(
        prefix=(
            Slot(1, ("LC", "-")),
            Slot(2, ("MB", "-")),
            Slot(4, ("-", "LC")),
            Slot(6, ("ME", "-")),
        )
    )
    tr = run(ss3, rows, ("A", "A"), 1, SchedulerClass.asynchronous(lc_atomic=True), RIGID)
    for t in (2, 3, 4, 5, 6):
        print(f"  mover's position seen at t={t}: {tr.position_at(0, t)}")
    assert tr.position_at(0, 4) == Fraction(1, 4)


if __name__ == "__main__":
    main()
