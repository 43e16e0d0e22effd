"""Survey aggregation: tallies, confidence, duels, ranks, consensus.

Everything here is a pure function over a parsed SurveyDataset.  Q
scores are evaluated in exact rational arithmetic and rounded to float
once at the end; this is what makes the reversal identity
Q -> 10 - Q hold exactly instead of drifting by an ulp per term.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping

from sidewalk_access import _kernels
from sidewalk_access.errors import AnalysisError, RankingSizeError
from sidewalk_access.model import (
    CANONICAL_GROUPS,
    BarrierLabelType,
    DuelChoice,
    DuelRecord,
    MobilityAid,
    RankingRecord,
    Severity,
    Subcategory,
    SurveyDataset,
    Vote,
)

Grouping = Literal["image", "label_type", "label_type_x_severity"]


@dataclass(frozen=True)
class TallyCell:
    yes: int
    no: int
    unsure: int

    @property
    def total(self) -> int:
        return self.yes + self.no + self.unsure

    # Ratios are None on empty cells: we never fabricate a 0 for a
    # group that cast no votes.
    @property
    def yes_r(self) -> float | None:
        return self.yes / self.total if self.total else None

    @property
    def no_r(self) -> float | None:
        return self.no / self.total if self.total else None

    @property
    def unsure_r(self) -> float | None:
        return self.unsure / self.total if self.total else None


@dataclass(frozen=True)
class PassabilityTally:
    grouping: Grouping
    groups: tuple[MobilityAid, ...]
    cells: Mapping[tuple, TallyCell]


@dataclass(frozen=True)
class ConfidenceTable:
    """C per (group, label type): the share of No + Unsure votes."""

    cells: Mapping[tuple[MobilityAid, BarrierLabelType], float]

    def c(self, group: MobilityAid, label_type: BarrierLabelType) -> float:
        return self.cells[(group, label_type)]

    def yes_r(self, group: MobilityAid, label_type: BarrierLabelType) -> float:
        # 1 - C is exact for C in [0, 1], so C + yes_r == 1 holds
        # bitwise; summing the two vote-count divisions would not.
        return 1.0 - self.cells[(group, label_type)]


def tally_passability(
    dataset: SurveyDataset,
    grouping: Grouping,
    include_other: bool = False,
) -> PassabilityTally:
    """Count yes/no/unsure votes per mobility-aid group.

    ``grouping`` picks the key: individual image, barrier label type,
    or (label type, severity).  Cells exist for every group x key
    combination; empty ones carry zero counts.
    """
    if grouping not in ("image", "label_type", "label_type_x_severity"):
        raise AnalysisError(f"unknown grouping {grouping!r}")
    groups = CANONICAL_GROUPS + ((MobilityAid.OTHER,) if include_other else ())
    by_id = dataset.image_index()
    if grouping == "image":
        keys = [im.image_id for im in dataset.images]
    elif grouping == "label_type":
        keys = list(BarrierLabelType)
    else:
        keys = [(t, s) for t in BarrierLabelType for s in Severity]

    counts: dict[tuple, list[int]] = {(g, k): [0, 0, 0] for g in groups for k in keys}
    slot = {Vote.YES: 0, Vote.NO: 1, Vote.UNSURE: 2}
    for rec in dataset.passability:
        group = dataset.respondents[rec.respondent_id]
        im = by_id[rec.image_id]
        if grouping == "image":
            key = rec.image_id
        elif grouping == "label_type":
            key = im.label_type
        else:
            key = (im.label_type, im.severity)
        cell = counts.get((group, key))
        if cell is None:
            continue  # excluded group ("other" by default)
        cell[slot[rec.vote]] += 1

    cells = {k: TallyCell(v[0], v[1], v[2]) for k, v in counts.items()}
    return PassabilityTally(grouping=grouping, groups=groups, cells=cells)


def derive_confidence(tally: PassabilityTally) -> ConfidenceTable:
    """C = fraction of No + Unsure votes per (group, label type).

    Requires a label_type tally with votes in every cell; an empty cell
    is an error rather than a silent zero.
    """
    if tally.grouping != "label_type":
        raise AnalysisError(
            f"confidence needs a label_type tally, got {tally.grouping!r}"
        )
    cells: dict[tuple[MobilityAid, BarrierLabelType], float] = {}
    for group in tally.groups:
        for lt in BarrierLabelType:
            cell = tally.cells.get((group, lt))
            if cell is None or cell.total == 0:
                raise AnalysisError(
                    f"no votes for ({group.value}, {lt.value}); cannot derive "
                    "confidence for an unrepresented cell"
                )
            # single division keeps published ratios like 54/100 exact
            cells[(group, lt)] = (cell.no + cell.unsure) / cell.total
    return ConfidenceTable(cells=cells)


def schedule_comparisons(votes: Mapping[str, Vote]) -> list[tuple[str, str]]:
    """Pairwise comparisons to ask for one image set.

    Images voted yes or unsure form one pool, no or unsure the other;
    the schedule is every within-pool pair, deduplicated (unsure images
    sit in both pools).  Pairs come back canonicalized and sorted.
    """
    n = len(votes)
    if not 2 <= n <= 6:
        raise AnalysisError(f"image set size must be 2..6, got {n}")
    for image_id, vote in votes.items():
        if not isinstance(vote, Vote):
            raise AnalysisError(f"image {image_id!r} has no vote")
    pool_a = sorted(i for i, v in votes.items() if v in (Vote.YES, Vote.UNSURE))
    pool_b = sorted(i for i, v in votes.items() if v in (Vote.NO, Vote.UNSURE))
    pairs = set()
    for pool in (pool_a, pool_b):
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                pairs.add((pool[i], pool[j]))
    return sorted(pairs)


@dataclass(frozen=True)
class QScoreResult:
    image_id: str
    wins: int
    losses: int
    ties: int
    win_ratio: float
    loss_ratio: float
    q: float
    q_exact: Fraction

    @property
    def duel_count(self) -> int:
        return self.wins + self.losses + self.ties


def q_scores(
    duels: Iterable[DuelRecord],
    expected_images: Iterable[str] | None = None,
) -> dict[str, QScoreResult]:
    """Q score per image from one group's duels within one subcategory.

    Q = (10/3) * (W + avgW(beaten) - avgL(beaters) + 1) where W and L
    are win and loss ratios (ties count in the denominator), "beaten"
    holds opponents the image beat on net wins, "beaters" the reverse,
    and an empty set averages to 0.  Q lies in [0, 10].
    """
    wins: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    ties: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    images: set[str] = set()
    for duel in duels:
        images.add(duel.left)
        images.add(duel.right)
        if duel.choice is DuelChoice.LEFT:
            wins[duel.left][duel.right] += 1
        elif duel.choice is DuelChoice.RIGHT:
            wins[duel.right][duel.left] += 1
        else:
            ties[duel.left][duel.right] += 1
            ties[duel.right][duel.left] += 1

    if expected_images is not None:
        missing = sorted(set(expected_images) - images)
        if missing:
            warnings.warn(
                f"images with zero duels omitted from Q scores: {', '.join(missing)}",
                stacklevel=2,
            )

    order = sorted(images)
    w_tot: dict[str, int] = {}
    l_tot: dict[str, int] = {}
    t_tot: dict[str, int] = {}
    w_ratio: dict[str, Fraction] = {}
    l_ratio: dict[str, Fraction] = {}
    beaten: dict[str, list[str]] = {}
    beaters: dict[str, list[str]] = {}
    for i in order:
        w = sum(wins[i].values())
        l = sum(wins[j][i] for j in order if j != i)
        t = sum(ties[i].values())
        total = w + l + t
        w_tot[i], l_tot[i], t_tot[i] = w, l, t
        w_ratio[i] = Fraction(w, total) if total else Fraction(0)
        l_ratio[i] = Fraction(l, total) if total else Fraction(0)
        beaten[i] = [j for j in order if j != i and wins[i][j] > wins[j][i]]
        beaters[i] = [j for j in order if j != i and wins[j][i] > wins[i][j]]

    out: dict[str, QScoreResult] = {}
    scale = Fraction(10, 3)
    for i in order:
        avg_w = (
            sum((w_ratio[j] for j in beaten[i]), Fraction(0)) / len(beaten[i])
            if beaten[i]
            else Fraction(0)
        )
        avg_l = (
            sum((l_ratio[j] for j in beaters[i]), Fraction(0)) / len(beaters[i])
            if beaters[i]
            else Fraction(0)
        )
        q = scale * (w_ratio[i] + avg_w - avg_l + 1)
        out[i] = QScoreResult(
            image_id=i,
            wins=w_tot[i],
            losses=l_tot[i],
            ties=t_tot[i],
            win_ratio=float(w_ratio[i]),
            loss_ratio=float(l_ratio[i]),
            q=float(q),
            q_exact=q,
        )
    return out


@dataclass(frozen=True)
class QRanking:
    order: tuple[str, ...]  # most passable first
    ties: tuple[tuple[str, ...], ...]  # id groups sharing a Q value


def rank_by_q(qmap: Mapping[str, QScoreResult]) -> QRanking:
    """Order images by descending Q; ties sort by id and are flagged."""
    if not qmap:
        raise AnalysisError("cannot rank an empty Q map")
    ranked = sorted(qmap.values(), key=lambda r: (-r.q_exact, r.image_id))
    tie_groups = []
    i = 0
    while i < len(ranked):
        j = i
        while j + 1 < len(ranked) and ranked[j + 1].q_exact == ranked[i].q_exact:
            j += 1
        if j > i:
            tie_groups.append(tuple(r.image_id for r in ranked[i : j + 1]))
        i = j + 1
    return QRanking(
        order=tuple(r.image_id for r in ranked),
        ties=tuple(tie_groups),
    )


def mean_ranks(rankings: Iterable[RankingRecord]) -> dict[str, float]:
    """Mean 1-based position per item over complete rankings."""
    sums: dict[str, int] = defaultdict(int)
    count = 0
    for rec in rankings:
        count += 1
        for pos, item in enumerate(rec.ordering, start=1):
            sums[item] += pos
    if count == 0:
        raise AnalysisError("mean ranks need at least one ranking")
    return {item: sums[item] / count for item in sorted(sums)}


def cross_group_mean_ranks(
    per_group: Mapping[MobilityAid, Mapping[str, float]],
) -> dict[str, float]:
    """Unweighted mean of the per-group mean ranks, per item.

    Groups count equally regardless of size, matching the convention of
    averaging a results table's group columns.
    """
    if not per_group:
        raise AnalysisError("no groups to average")
    items = sorted({item for means in per_group.values() for item in means})
    out = {}
    for item in items:
        vals = [means[item] for means in per_group.values() if item in means]
        out[item] = sum(vals) / len(vals)
    return out


@dataclass(frozen=True)
class ConsensusRanking:
    ordering: tuple[str, ...]  # most difficult first, like the inputs
    total_tau: int


def kemeny_young(rankings: Iterable[RankingRecord]) -> ConsensusRanking:
    """Exact Kemeny consensus of complete rankings over one item set.

    Minimizes the summed Kendall tau distance by subset dynamic
    programming; ties between optimal permutations break to the
    lexicographically smallest ordering.  Limited to 2..16 items so the
    exactness guarantee stands.
    """
    rankings = list(rankings)
    if not rankings:
        raise AnalysisError("consensus needs at least one ranking")
    items = sorted(rankings[0].ordering)
    m = len(items)
    if not 2 <= m <= 16:
        raise RankingSizeError(f"consensus supports 2..16 items, got {m}")
    index = {item: i for i, item in enumerate(items)}
    if len(index) != m:
        raise AnalysisError("ranking contains repeated items")
    P = [[0] * m for _ in range(m)]
    for rec in rankings:
        if sorted(rec.ordering) != items:
            raise AnalysisError(
                "all rankings must cover the same items; "
                f"respondent {rec.respondent_id!r} differs"
            )
        seq = [index[item] for item in rec.ordering]
        for a in range(m):
            for b in range(a + 1, m):
                P[seq[a]][seq[b]] += 1
    order, total = _kernels.kemeny(P)
    return ConsensusRanking(
        ordering=tuple(items[k] for k in order),
        total_tau=int(total),
    )


def kendall_tau(a: Iterable[str], b: Iterable[str]) -> int:
    """Number of discordant pairs between two permutations."""
    a = list(a)
    pos = {item: i for i, item in enumerate(list(b))}
    seq = [pos[x] for x in a]
    n = len(seq)
    return sum(1 for i in range(n) for j in range(i + 1, n) if seq[i] > seq[j])


def _cell_json(cell: TallyCell) -> dict:
    out: dict = {"yes": cell.yes, "no": cell.no, "unsure": cell.unsure,
                 "total": cell.total}
    if cell.total:
        out["yes_r"] = cell.yes_r
        out["no_r"] = cell.no_r
        out["unsure_r"] = cell.unsure_r
    return out


def analysis_report(dataset: SurveyDataset, include_other: bool = False) -> dict:
    """Full aggregation document: tallies, confidence, Q tables, ranks,
    and consensus, keyed by plain strings for serialization."""
    by_id = dataset.image_index()
    groups = CANONICAL_GROUPS + ((MobilityAid.OTHER,) if include_other else ())

    tallies: dict = {}
    for grouping in ("image", "label_type", "label_type_x_severity"):
        tally = tally_passability(dataset, grouping, include_other)
        section: dict = {}
        for group in tally.groups:
            gsec = {}
            for key, cell in tally.cells.items():
                if key[0] is not group:
                    continue
                if grouping == "image":
                    name = key[1]
                elif grouping == "label_type":
                    name = key[1].value
                else:
                    name = f"{key[1][0].value}:{key[1][1].value}"
                gsec[name] = _cell_json(cell)
            section[group.value] = gsec
        tallies[grouping] = section

    # lenient here: the report shows whatever cells have votes; the
    # strict all-cells contract lives in derive_confidence, which the
    # profile pipeline calls
    type_tally = tally_passability(dataset, "label_type", include_other)
    confidence: dict = {}
    for group in type_tally.groups:
        gsec = {}
        for lt in BarrierLabelType:
            cell = type_tally.cells[(group, lt)]
            if cell.total == 0:
                continue
            c = (cell.no + cell.unsure) / cell.total
            gsec[lt.value] = {"C": c, "yes_r": 1.0 - c}
        confidence[group.value] = gsec

    # severity-resolved C is reported wherever votes exist, but type-level
    # C above is what profiles and routing consume
    sev_tally = tally_passability(dataset, "label_type_x_severity", include_other)
    confidence_by_severity: dict = {}
    for group in sev_tally.groups:
        gsec = {}
        for (g, key), cell in sev_tally.cells.items():
            if g is not group or cell.total == 0:
                continue
            gsec[f"{key[0].value}:{key[1].value}"] = (cell.no + cell.unsure) / cell.total
        confidence_by_severity[group.value] = gsec

    duel_pool: dict[tuple[MobilityAid, Subcategory], list[DuelRecord]] = defaultdict(list)
    for duel in dataset.duels:
        group = dataset.respondents[duel.respondent_id]
        if group not in groups:
            continue
        duel_pool[(group, by_id[duel.left].subcategory)].append(duel)
    q_section: dict = {}
    for group in groups:
        gsec = {}
        for sc in Subcategory:
            pool = duel_pool.get((group, sc))
            if not pool:
                continue
            qmap = q_scores(pool)
            ranking = rank_by_q(qmap)
            gsec[sc.value] = {
                "images": {
                    i: {
                        "w": r.wins,
                        "l": r.losses,
                        "t": r.ties,
                        "W": r.win_ratio,
                        "L": r.loss_ratio,
                        "Q": r.q,
                    }
                    for i, r in qmap.items()
                },
                "ranking": list(ranking.order),
                "ties": [list(t) for t in ranking.ties],
            }
        if gsec:
            q_section[group.value] = gsec

    rank_pool: dict[MobilityAid, list[RankingRecord]] = defaultdict(list)
    for rec in dataset.rankings:
        group = dataset.respondents[rec.respondent_id]
        if group in groups:
            rank_pool[group].append(rec)
    per_group_means = {
        group: mean_ranks(recs) for group, recs in rank_pool.items()
    }
    mean_section: dict = {
        "per_group": {g.value: means for g, means in per_group_means.items()}
    }
    if per_group_means:
        mean_section["cross_group"] = cross_group_mean_ranks(per_group_means)

    consensus_section: dict = {"per_group": {}}
    for group, recs in rank_pool.items():
        consensus = kemeny_young(recs)
        consensus_section["per_group"][group.value] = {
            "ordering": list(consensus.ordering),
            "total_tau": consensus.total_tau,
        }
    pooled = [rec for recs in rank_pool.values() for rec in recs]
    if pooled:
        consensus = kemeny_young(pooled)
        consensus_section["overall"] = {
            "ordering": list(consensus.ordering),
            "total_tau": consensus.total_tau,
        }

    aid_counts: dict[str, int] = defaultdict(int)
    for aid in dataset.respondents.values():
        aid_counts[aid.value] += 1

    return {
        "respondents": dict(sorted(aid_counts.items())),
        "images": len(dataset.images),
        "votes": len(dataset.passability),
        "tallies": tallies,
        "confidence": confidence,
        "confidence_by_severity": confidence_by_severity,
        "q_scores": q_section,
        "mean_ranks": mean_section,
        "consensus": consensus_section,
    }
