import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sidewalk_access.analysis import (
    analysis_report,
    cross_group_mean_ranks,
    derive_confidence,
    kemeny_young,
    kendall_tau,
    mean_ranks,
    q_scores,
    rank_by_q,
    schedule_comparisons,
    tally_passability,
)
from sidewalk_access.errors import AnalysisError, RankingSizeError
from sidewalk_access.model import (
    DuelChoice,
    DuelRecord,
    MobilityAid,
    RankingRecord,
    Vote,
)


# ---------------------------------------------------------------- tallies


def test_tally_conservation(dataset):
    tally = tally_passability(dataset, "label_type")
    total = sum(c.total for c in tally.cells.values())
    canonical_votes = sum(
        1
        for rec in dataset.passability
        if dataset.respondents[rec.respondent_id] is not MobilityAid.OTHER
    )
    assert total == canonical_votes


def test_tally_include_other(dataset):
    tally = tally_passability(dataset, "label_type", include_other=True)
    total = sum(c.total for c in tally.cells.values())
    assert total == len(dataset.passability)


def test_image_tally_matches_type_tally(dataset):
    by_type = tally_passability(dataset, "label_type")
    by_image = tally_passability(dataset, "image")
    idx = dataset.image_index()
    for (group, lt), cell in by_type.cells.items():
        parts = [
            c
            for (g, image_id), c in by_image.cells.items()
            if g is group and idx[image_id].label_type is lt
        ]
        assert sum(p.yes for p in parts) == cell.yes
        assert sum(p.no for p in parts) == cell.no
        assert sum(p.unsure for p in parts) == cell.unsure


# ------------------------------------------------------------- confidence


def test_confidence_pinned_cells(dataset):
    table = derive_confidence(tally_passability(dataset, "label_type"))
    by_val = {(g.value, lt.value): c for (g, lt), c in table.cells.items()}
    assert by_val[("walking_cane", "surface_problem")] == 0.54
    assert by_val[("motorized_wheelchair", "missing_curb_ramp")] == 0.8
    assert by_val[("walking_cane", "curb_ramp")] == 0.2


def test_confidence_complement_is_exact(dataset):
    table = derive_confidence(tally_passability(dataset, "label_type"))
    for key in table.cells:
        assert table.c(*key) + table.yes_r(*key) == 1.0


def test_confidence_rejects_empty_cell(dataset):
    tally = tally_passability(dataset, "label_type")
    emptied = {k: v for k, v in tally.cells.items()}
    victim = next(iter(emptied))
    emptied[victim] = type(tally.cells[victim])(yes=0, no=0, unsure=0)
    broken = type(tally)(grouping="label_type", groups=tally.groups, cells=emptied)
    with pytest.raises(AnalysisError) as ei:
        derive_confidence(broken)
    assert victim[0].value in str(ei.value)


def test_confidence_single_division():
    # 48 impassable of 60 must give the literal double 0.8; splitting
    # into no/total + unsure/total drifts by an ulp for this tally
    assert 4 / 60 + 44 / 60 != 0.8
    from sidewalk_access.analysis import PassabilityTally, TallyCell
    from sidewalk_access.model import BarrierLabelType

    group = MobilityAid.MOTORIZED_WHEELCHAIR
    cells = {
        (group, lt): TallyCell(yes=12, no=4, unsure=44)
        for lt in BarrierLabelType
    }
    tally = PassabilityTally(grouping="label_type", groups=(group,), cells=cells)
    table = derive_confidence(tally)
    for lt in BarrierLabelType:
        assert table.c(group, lt) == 0.8


# -------------------------------------------------------------- scheduler


def count_pairs(votes):
    return len(schedule_comparisons(votes))


def test_schedule_known_counts():
    imgs = ["a", "b", "c", "d", "e", "f"]
    assert count_pairs({i: Vote.YES for i in imgs}) == 15
    assert count_pairs({i: Vote.UNSURE for i in imgs}) == 15
    votes = {i: (Vote.YES if k < 3 else Vote.NO) for k, i in enumerate(imgs)}
    assert count_pairs(votes) == 6
    votes = {
        i: (Vote.YES, Vote.NO, Vote.UNSURE)[k % 3] for k, i in enumerate(imgs)
    }
    assert count_pairs(votes) == 11


def test_schedule_full_enumeration_bounds():
    imgs = ["a", "b", "c", "d", "e", "f"]
    seen = set()
    for combo in itertools.product((Vote.YES, Vote.NO, Vote.UNSURE), repeat=6):
        n = count_pairs(dict(zip(imgs, combo)))
        assert 6 <= n <= 15
        seen.add(n)
    assert 6 in seen and 15 in seen


def test_schedule_four_image_bounds():
    imgs = ["a", "b", "c", "d"]
    lo, hi = 99, -1
    for combo in itertools.product((Vote.YES, Vote.NO, Vote.UNSURE), repeat=4):
        n = count_pairs(dict(zip(imgs, combo)))
        lo, hi = min(lo, n), max(hi, n)
    assert (lo, hi) == (2, 6)


def test_schedule_pairs_are_canonical():
    votes = {"d": Vote.UNSURE, "a": Vote.UNSURE, "c": Vote.YES, "b": Vote.NO}
    pairs = schedule_comparisons(votes)
    assert pairs == sorted(pairs)
    assert all(a < b for a, b in pairs)
    assert len(set(pairs)) == len(pairs)


def test_schedule_size_limits():
    with pytest.raises(AnalysisError):
        schedule_comparisons({"a": Vote.YES})
    seven = {f"i{k}": Vote.YES for k in range(7)}
    with pytest.raises(AnalysisError):
        schedule_comparisons(seven)


# --------------------------------------------------------------- q scores


def duel(left, right, choice, rid="r1"):
    return DuelRecord(rid, left, right, DuelChoice(choice))


def test_q_two_images_clean_sweep():
    # A beats B three times: W_A = 1, B beaten avg = 0, A has no
    # beaters, so Q_A = 10/3 * 2 = 20/3.  B loses everything: its win
    # ratio is 0 and its beater A has loss ratio 0, so Q_B = 10/3.
    duels = [duel("A", "B", "left") for _ in range(3)]
    q = q_scores(duels)
    assert q["A"].q_exact == Fraction(20, 3)
    assert q["B"].q_exact == Fraction(10, 3)
    assert q["A"].wins == 3 and q["B"].losses == 3


def test_q_three_cycle_is_five():
    duels = [
        duel("A", "B", "left"),
        duel("B", "C", "left"),
        duel("C", "A", "left"),
    ]
    q = q_scores(duels)
    for img in "ABC":
        assert q[img].q == 5.0
        assert q[img].q_exact == Fraction(5)


def test_q_all_ties():
    duels = [duel("A", "B", "same"), duel("A", "B", "same")]
    q = q_scores(duels)
    assert q["A"].q_exact == q["B"].q_exact == Fraction(10, 3)
    assert q["A"].ties == 2


def test_q_zero_duel_image_warns():
    duels = [duel("A", "B", "left")]
    with pytest.warns(UserWarning, match="C"):
        q_scores(duels, expected_images=["A", "B", "C"])


def random_duelsets():
    ids = st.sampled_from(["A", "B", "C", "D", "E"])
    pair = st.tuples(ids, ids).filter(lambda t: t[0] != t[1])
    one = st.tuples(pair, st.sampled_from(["left", "right", "same"]))
    return st.lists(one, min_size=1, max_size=40)


@settings(max_examples=300, deadline=None)
@given(random_duelsets())
def test_q_bounds_property(raw):
    duels = [duel(a, b, c) for (a, b), c in raw]
    q = q_scores(duels)
    for r in q.values():
        assert Fraction(0) <= r.q_exact <= Fraction(10)
        assert 0.0 <= r.q <= 10.0


@settings(max_examples=300, deadline=None)
@given(random_duelsets())
def test_q_reversal_property(raw):
    # the reversal identity is stated for tie-free duel sets
    raw = [((a, b), c) for (a, b), c in raw if c != "same"]
    if not raw:
        return
    duels = [duel(a, b, c) for (a, b), c in raw]
    flipped = [
        duel(a, b, "right" if c == "left" else "left") for (a, b), c in raw
    ]
    q = q_scores(duels)
    qf = q_scores(flipped)
    for img, r in q.items():
        assert qf[img].q_exact == Fraction(10) - r.q_exact


def test_rank_by_q_orders_and_ties():
    duels = [
        duel("A", "B", "left"),
        duel("B", "C", "left"),
        duel("C", "A", "left"),
        duel("D", "E", "left"),
    ]
    pool_abc = q_scores(duels[:3])
    r = rank_by_q(pool_abc)
    assert r.order == ("A", "B", "C")
    assert r.ties == (("A", "B", "C"),)


# -------------------------------------------------------------- rankings


def rr(rid, ordering):
    return RankingRecord(rid, tuple(ordering))


def test_mean_ranks_simple():
    recs = [rr("r1", "abc"), rr("r2", "bca")]
    means = mean_ranks(recs)
    assert means == {"a": 2.0, "b": 1.5, "c": 2.5}


def test_mean_ranks_conservation_property():
    import random

    rng = random.Random(5)
    for _ in range(50):
        m = rng.randrange(2, 10)
        items = [chr(97 + i) for i in range(m)]
        recs = []
        for r in range(rng.randrange(1, 8)):
            o = items[:]
            rng.shuffle(o)
            recs.append(rr(f"r{r}", o))
        means = mean_ranks(recs)
        assert math.isclose(sum(means.values()) / m, (m + 1) / 2, rel_tol=1e-12)


def test_cross_group_published_row():
    per_group = {
        aid: {"missing_curb_ramp": val}
        for aid, val in zip(
            (
                MobilityAid.WALKING_CANE,
                MobilityAid.WALKER,
                MobilityAid.MOBILITY_SCOOTER,
                MobilityAid.MANUAL_WHEELCHAIR,
                MobilityAid.MOTORIZED_WHEELCHAIR,
            ),
            (4.4, 1.6, 1.7, 2.5, 1.8),
        )
    }
    cross = cross_group_mean_ranks(per_group)
    assert abs(cross["missing_curb_ramp"] - 2.4) < 0.05


# ---------------------------------------------------------------- kemeny


def test_kemeny_identity():
    rec = rr("r1", "abcde")
    c = kemeny_young([rec])
    assert c.ordering == tuple("abcde")
    assert c.total_tau == 0


def test_kemeny_three_cycle():
    # a>b, b>c, c>a: every order pays 1 against two voters and loses
    # both pairs to the third: best achievable total is 4
    recs = [rr("r1", "abc"), rr("r2", "bca"), rr("r3", "cab")]
    c = kemeny_young(recs)
    assert c.total_tau == 4
    assert c.ordering == ("a", "b", "c")  # lexicographic among optima


def test_kemeny_matches_brute_force():
    import random

    rng = random.Random(11)
    for _ in range(100):
        m = rng.randrange(2, 7)
        items = [chr(97 + i) for i in range(m)]
        recs = []
        for r in range(rng.randrange(1, 6)):
            o = items[:]
            rng.shuffle(o)
            recs.append(rr(f"r{r}", o))
        c = kemeny_young(recs)
        best = None
        for perm in itertools.permutations(items):
            tau = sum(kendall_tau(perm, rec.ordering) for rec in recs)
            cand = (tau, perm)
            if best is None or cand < best:
                best = cand
        assert c.total_tau == best[0]
        assert c.ordering == best[1]


def test_kemeny_size_errors():
    with pytest.raises(RankingSizeError):
        kemeny_young([rr("r1", "a")])
    big = [chr(97 + i) for i in range(17)]
    with pytest.raises(RankingSizeError):
        kemeny_young([rr("r1", big)])


def test_kemeny_mismatched_items():
    with pytest.raises(AnalysisError):
        kemeny_young([rr("r1", "abc"), rr("r2", "abd")])


def test_kendall_tau_basics():
    assert kendall_tau("abc", "abc") == 0
    assert kendall_tau("abc", "cba") == 3
    assert kendall_tau("acb", "abc") == 1


# ----------------------------------------------------------------- report


def test_report_shape(dataset):
    report = analysis_report(dataset)
    assert set(report["tallies"]) == {"image", "label_type", "label_type_x_severity"}
    conf = report["confidence"]
    assert conf["walking_cane"]["surface_problem"]["C"] == 0.54
    assert conf["motorized_wheelchair"]["missing_curb_ramp"]["C"] == 0.8
    for group, cells in conf.items():
        for cell in cells.values():
            assert cell["C"] + cell["yes_r"] == 1.0
    q = report["q_scores"]
    assert "missing_curb_ramp" in q["walking_cane"]
    consensus = report["consensus"]
    assert len(consensus["overall"]["ordering"]) == 9
    assert "other" not in report["tallies"]["label_type"]


def test_report_include_other(dataset):
    report = analysis_report(dataset, include_other=True)
    assert "other" in report["tallies"]["label_type"]
