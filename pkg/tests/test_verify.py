from fractions import Fraction

import pytest

from lumirend.algorithms import BadParameter, builtin
from lumirend.core import LightGraph, MovementModel, SchedulerClass
from lumirend.engine import run
from lumirend.schedules import Schedule, block, sim
from lumirend.verify import (
    CertificateError,
    Diverges,
    Inconclusive,
    Rendezvous,
    ScalingLoopCertificate,
    SearchConfig,
    check_contraction_pattern,
    check_rendezvous,
    check_stationary_partner,
    check_synchronous_contraction,
    classify_stabilization,
    detect_scaling_loop,
    missing_label_adversary,
    reachable_cs_color_pairs,
    replay_paper_counterexample,
    search_one,
    stationary_pairs,
    structural_check,
    validate_certificate,
)

F = Fraction
LCMV = SchedulerClass.asynchronous(lc_atomic=True, move_atomic=True)
LC = SchedulerClass.asynchronous(lc_atomic=True)
RIGID = MovementModel.rigid()
NR4 = MovementModel.non_rigid(F(1, 4))


# -- check_rendezvous ----------------------------------------------------------


def test_rendezvous_simultaneous_case():
    tr = run(builtin("nonqss3"), sim(horizon=4), ("A", "A"), 1, LCMV, RIGID)
    verdict = check_rendezvous(tr)
    assert isinstance(verdict, Rendezvous)
    assert tr.position_at(0, verdict.time) == tr.position_at(1, verdict.time) == F(1, 2)
    assert {tr.light_at(0, verdict.time), tr.light_at(1, verdict.time)} == {"B"}


def test_rendezvous_at_start_for_zero_distance():
    tr = run(builtin("ss3"), sim(horizon=4), ("A", "A"), 0, SchedulerClass.fsync(), RIGID)
    assert check_rendezvous(tr) == Rendezvous(0)


def test_diverging_trace_is_inconclusive_without_certificate():
    res = replay_paper_counterexample("lemma6_alg_a")
    verdict = check_rendezvous(res.trace)
    assert isinstance(verdict, Inconclusive)
    attached = check_rendezvous(res.trace, certificate=res.verdict.certificate)
    assert isinstance(attached, Diverges)


# -- scaling loop detection -----------------------------------------------------


def test_detect_swap_loop_three_colors():
    res = replay_paper_counterexample("lemma6_alg_a")
    cert = detect_scaling_loop(res.trace)
    assert cert is not None
    assert cert.swap and cert.ratio == F(1, 4)
    assert set(cert.entry_colors) == {"B", "C"}


def test_detect_fixed_point_free_sim_loop():
    res = replay_paper_counterexample("lemma9_1", 0)
    cert = res.verdict.certificate
    assert cert.swap and cert.ratio == F(1, 2)
    assert cert.entry_colors == ("A", "C")


def test_no_certificate_on_converging_trace():
    tr = run(builtin("nonqss3"), sim(horizon=8), ("A", "A"), 1, LCMV, RIGID)
    assert detect_scaling_loop(tr) is None


# -- certificates ---------------------------------------------------------------


def test_certificate_roundtrip_and_tampering():
    cert = replay_paper_counterexample("lemma7_alg_b").verdict.certificate
    again = ScalingLoopCertificate.from_json(cert.to_json())
    validate_certificate(again)
    tampered = ScalingLoopCertificate(
        graph=cert.graph,
        scheduler=cert.scheduler,
        movement=cert.movement,
        entry_colors=cert.entry_colors,
        entry_distance=cert.entry_distance,
        schedule_block=cert.schedule_block,
        ratio=F(1, 3),
        swap=cert.swap,
    )
    with pytest.raises(CertificateError):
        validate_certificate(tampered)


def test_certificate_rejects_bad_ratio():
    cert = replay_paper_counterexample("lemma6_alg_a").verdict.certificate
    bad = ScalingLoopCertificate(
        cert.graph, cert.scheduler, cert.movement, cert.entry_colors,
        cert.entry_distance, cert.schedule_block, F(3, 2), cert.swap,
    )
    with pytest.raises(CertificateError):
        validate_certificate(bad)


# -- published counterexamples ----------------------------------------------------


@pytest.mark.parametrize(
    "name, lam, entry, ratio",
    [
        ("lemma6_alg_a", None, ("B", "C"), F(1, 4)),
        ("lemma7_alg_b", None, ("B", "C"), F(1, 4)),
        ("lemma9_1", F(1, 2), ("D", "A"), F(1, 4)),
        ("lemma9_2", F(1), ("A", "B"), F(1, 4)),
        ("lemma9_2", F(1, 2), ("B", "C"), F(1, 4)),
        ("lemma9_3", F(1, 2), ("A", "B"), F(3, 8)),
        ("lemma9_4", F(1, 2), ("A", "B"), F(1, 4)),
        ("lemma9_5", F(1, 2), ("A", "B"), F(1, 4)),
        ("lemma9_6", F(1, 2), ("A", "B"), F(1, 4)),
    ],
)
def test_replay_counterexamples(name, lam, entry, ratio):
    res = replay_paper_counterexample(name, lam)
    cert = res.verdict.certificate
    assert cert.entry_colors == entry
    assert cert.ratio == ratio
    validate_certificate(cert)


def test_replay_side_conditions():
    with pytest.raises(BadParameter):
        replay_paper_counterexample("lemma9_3", 1)
    with pytest.raises(BadParameter):
        replay_paper_counterexample("lemma9_6", 0)


# -- adversary search -------------------------------------------------------------


def test_search_three_color_cycle_diverges():
    cfg = SearchConfig(horizon=40, scheduler=LCMV, movement=RIGID)
    for colors in (("A", "A"), ("B", "B"), ("C", "C")):
        verdict = search_one(builtin("ss3"), cfg, colors, 1)
        assert isinstance(verdict, Diverges)


def test_search_nonqss3_profile():
    cfg = SearchConfig(horizon=40, scheduler=LC, movement=RIGID)
    assert isinstance(search_one(builtin("nonqss3"), cfg, ("A", "A"), 1), Rendezvous)
    swap = search_one(builtin("nonqss3"), cfg, ("B", "B"), 1)
    assert isinstance(swap, Diverges)
    assert swap.certificate.ratio == 1


def test_search_qss4_mixed_start_diverges():
    cfg = SearchConfig(horizon=40, scheduler=LCMV, movement=RIGID)
    verdict = search_one(builtin("qss4"), cfg, ("A", "C"), 1)
    assert isinstance(verdict, Diverges)


def test_search_qss4_same_color_succeeds_nonrigid():
    cfg = SearchConfig(horizon=60, scheduler=LC, movement=NR4)
    for c in "ABCD":
        assert isinstance(search_one(builtin("qss4"), cfg, (c, c), 1), Rendezvous)


def test_search_fsync_full_moves_halve_from_pivot():
    cfg = SearchConfig(
        horizon=16,
        scheduler=SchedulerClass.fsync(),
        movement=RIGID,
        fraction_choices=(F(1),),
    )
    verdict = search_one(builtin("ss3"), cfg, ("A", "A"), 1)
    assert isinstance(verdict, Rendezvous)


def test_search_requires_lc_atomicity():
    with pytest.raises(ValueError):
        SearchConfig(horizon=10, scheduler=SchedulerClass.asynchronous(), movement=RIGID)


def test_adversary_search_maps_initials_to_verdicts():
    from lumirend.verify import adversary_search

    cfg = SearchConfig(horizon=40, scheduler=LC, movement=RIGID)
    verdicts = adversary_search(
        builtin("nonqss3"), cfg, [(("A", "A"), 1), (("B", "B"), "1/2")]
    )
    assert isinstance(verdicts[(("A", "A"), F(1))], Rendezvous)
    assert isinstance(verdicts[(("B", "B"), F(1, 2))], Diverges)


# -- structural necessities ---------------------------------------------------------


def test_structural_check_ss3_and_ss5_complete():
    for name in ("ss3", "ss5"):
        report = structural_check(builtin(name))
        assert not report.missing_anywhere()


def test_structural_check_missing_labels():
    g = LightGraph.build("AB", {"A": ("B", "1/2"), "B": ("A", "1/2")})
    report = structural_check(g)
    assert report.per_start_missing["A"] == (F(1), F(0))


@pytest.mark.parametrize(
    "edges, start, missing",
    [
        ({"A": ("B", 0), "B": ("A", 0)}, "A", F(1, 2)),
        ({"A": ("B", "1/2"), "B": ("A", "1/2")}, "A", F(1)),
        ({"A": ("B", "1/2"), "B": ("A", 1)}, "A", F(0)),
    ],
)
def test_missing_label_adversary_defeats_missing_label(edges, start, missing):
    g = LightGraph.build("AB", edges)
    _schedule, _trace, cert = missing_label_adversary(g, start, missing)
    assert cert is not None
    validate_certificate(cert)


# -- reachable pairs ------------------------------------------------------------------


def test_reachable_pairs_qss4():
    cfg = SearchConfig(horizon=60, scheduler=LC, movement=NR4)
    pairs = reachable_cs_color_pairs(builtin("qss4"), "ABCD", cfg)
    assert frozenset("AC") not in pairs
    assert frozenset("BD") not in pairs
    assert all(frozenset((c,)) in pairs for c in "ABCD")  # the starts themselves


def test_reachable_pairs_ss5_exclusions():
    cfg = SearchConfig(horizon=80, scheduler=LC, movement=NR4)
    pairs = reachable_cs_color_pairs(builtin("ss5"), "ABCDE", cfg)
    for two_step in ("AC", "BD", "CE", "DA", "EB"):
        assert frozenset(two_step) not in pairs


# -- stabilization classification -------------------------------------------------------


def test_classify_nonqss3():
    cfg = SearchConfig(horizon=40, scheduler=LC, movement=RIGID)
    report = classify_stabilization(builtin("nonqss3"), LC, RIGID, cfg)
    assert report.classification == "non-quasi-self-stabilizing"
    assert isinstance(report.same_color["A"], Rendezvous)
    assert isinstance(report.same_color["B"], Diverges)


def test_classify_qss4():
    cfg = SearchConfig(horizon=60, scheduler=LC, movement=NR4)
    report = classify_stabilization(builtin("qss4"), LC, NR4, cfg)
    assert report.classification == "quasi-self-stabilizing"


def test_classify_ss5():
    cfg = SearchConfig(horizon=80, scheduler=LC, movement=NR4)
    report = classify_stabilization(builtin("ss5"), LC, NR4, cfg)
    assert report.classification == "self-stabilizing"


# -- structural trace properties ----------------------------------------------------------


def test_stationary_pairs_of_builtins():
    assert stationary_pairs(builtin("qss4")) == {("B", "C"), ("D", "A")}
    assert stationary_pairs(builtin("ss5")) == {("B", "C"), ("D", "E"), ("E", "A")}


def test_stationary_partner_holds_on_qss4_traces():
    import random

    from lumirend.schedules import random_lc_atomic_schedule

    for seed in range(8):
        s = random_lc_atomic_schedule(random.Random(seed), horizon=48, fractions=(F(0), F(1)))
        tr = run(builtin("qss4"), s, ("B", "C"), 1, LC, NR4)
        assert check_stationary_partner(tr) == []


def test_stationary_partner_flags_corrupted_trace():
    # a graph whose B-observer moves, passed off as one whose B-observer must
    # freeze: the checker must object
    mover = LightGraph.build(
        "ABCD", {"A": ("B", "1/2"), "B": ("C", "1/2"), "C": ("D", 1), "D": ("A", 0)}
    )
    rows = Schedule(prefix=block([("-", "LC"), ("-", "M"), ("LC", "-"), ("M", "-")]))
    tr = run(mover, rows, ("B", "C"), 1, LCMV, RIGID)
    tr.graph = builtin("qss4")
    assert check_stationary_partner(tr) != []


def test_contraction_pattern_qss4():
    import random

    from lumirend.schedules import random_lc_atomic_schedule

    for seed in range(8):
        s = random_lc_atomic_schedule(random.Random(100 + seed), horizon=60, fractions=(F(0), F(1)))
        tr = run(builtin("qss4"), s, ("B", "C"), 1, LC, NR4)
        ok, _times = check_contraction_pattern(tr)
        assert ok


def test_contraction_pattern_short_distance_reaches_zero():
    tr = run(builtin("qss4"), sim(horizon=16), ("B", "C"), F(1, 8), LCMV, NR4)
    ok, times = check_contraction_pattern(tr)
    assert ok
    assert tr.distance_at(times[1]) == 0


def test_synchronous_contraction():
    rigid_tr = run(builtin("qss4"), sim(horizon=16), ("A", "A"), 1, LCMV, RIGID)
    assert check_synchronous_contraction(rigid_tr) == []
    nr_tr = run(builtin("qss4"), sim(horizon=32), ("A", "A"), 1, LCMV, NR4)
    assert check_synchronous_contraction(nr_tr) == []
