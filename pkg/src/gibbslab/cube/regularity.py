"""Regularity, index, and the homogeneity decomposition on Omega^n.

The deviation driving everything is, for subsets S of a window U,

    dev(S) = < tv(SIGMA[.|S], SIGMA[.|U]) >_mu ,

the mu-average total-variation distance between the empirical distribution
of a sample on S and on U.  mu is eps-regular on U when every S with
|S| >= eps |U| has dev(S) < eps.

The decomposition loop keeps a coordinate partition V and the state
partition induced by a fixed mesh of the simplex P(Omega) (axis-aligned
boxes of pitch eps/|Omega|, so any two distributions in one box are at
total-variation distance < eps).  Whenever a (conditional) measure fails
regularity, each failing class is split along its worst witness subset,
which provably decreases the index by at least eps^4 / (4 |Omega|^3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded, InvalidArgument, InvalidState
from .measure import DenseMeasure
from .partitions import CoordinatePartition, StatePartition

#: largest window size for which exact subset enumeration is permitted
EXACT_ENUMERATION_CAP = 18

_CELL_GUARD = 1e-12  # protects mesh-cell assignment of exact boundary rationals


# ---------------------------------------------------------------------------
# deviation of subsets inside a window
# ---------------------------------------------------------------------------


def _symbol_counts(mu: DenseMeasure, coords) -> np.ndarray:
    """(k^n, k) array of per-assignment symbol counts on `coords`."""
    d = mu.digits[:, list(coords)]
    counts = np.empty((mu.size, mu.k))
    for w in range(mu.k):
        counts[:, w] = (d == w).sum(axis=1)
    return counts


def _deviation_from_counts(mu, counts_s, s, freq_u) -> float:
    # mean over mu of (1/2) sum_w |c_w/s - f_w(U)|
    diff = np.abs(counts_s / s - freq_u)
    return 0.5 * float(mu.mass @ diff.sum(axis=1))


@dataclass(frozen=True)
class RegularityVerdict:
    status: str  # "regular" | "irregular" | "unknown"
    eps: float
    window: tuple
    witness: tuple | None = None  # subset achieving deviation >= eps
    deviation: float = 0.0  # largest deviation seen

    @property
    def regular(self) -> bool:
        return self.status == "regular"


def min_subset_size(eps: float, window_size: int) -> int:
    return max(1, math.ceil(eps * window_size - 1e-12))


def is_regular_on(
    mu: DenseMeasure,
    window,
    eps: float,
    strategy: str = "exact",
    *,
    cap: int = EXACT_ENUMERATION_CAP,
) -> RegularityVerdict:
    """Check eps-regularity of mu on the coordinate window U.

    `exact` enumerates all subsets S of U with |S| >= eps |U| (refused above
    `cap`); `witness-search` only tries one-sided candidate families built
    from per-symbol marginal orderings and high-mass assignments, so it can
    return "irregular" with a witness or "unknown", never "regular".
    """
    members = tuple(sorted(set(int(x) for x in window)))
    if not members:
        raise InvalidArgument("window is empty")
    u = len(members)
    smin = min_subset_size(eps, u)
    ucounts = _symbol_counts(mu, members)
    freq_u = ucounts / u

    if strategy == "exact":
        if u > cap:
            raise BudgetExceeded(
                f"exact regularity enumeration needs 2^{u} subsets; window cap is {cap}",
                required=2**u,
                allowed=2**cap,
            )
        return _exact_scan(mu, members, eps, smin, freq_u)
    if strategy == "witness-search":
        return _witness_search(mu, members, eps, smin, freq_u)
    raise InvalidArgument(f"unknown strategy {strategy!r}")


def _exact_scan(mu, members, eps, smin, freq_u) -> RegularityVerdict:
    u = len(members)
    columns = [_symbol_counts(mu, [x]) for x in members]  # one-coordinate counts
    counts = np.zeros((mu.size, mu.k))
    in_set = [False] * u
    size = 0
    best_dev, best_set = -1.0, None

    # Gray-code walk over all subsets; one column update per step.
    for g in range(1, 2**u):
        flip = (g & -g).bit_length() - 1
        if in_set[flip]:
            counts -= columns[flip]
            in_set[flip] = False
            size -= 1
        else:
            counts += columns[flip]
            in_set[flip] = True
            size += 1
        if size < smin:
            continue
        dev = _deviation_from_counts(mu, counts, size, freq_u)
        if dev < best_dev - 1e-15:
            continue
        subset = tuple(m for m, inside in zip(members, in_set) if inside)
        if dev > best_dev + 1e-15 or (abs(dev - best_dev) <= 1e-15 and (best_set is None or subset < best_set)):
            best_dev, best_set = dev, subset
    if best_dev >= eps:
        return RegularityVerdict("irregular", eps, members, best_set, best_dev)
    return RegularityVerdict("regular", eps, members, None, max(best_dev, 0.0))


def _witness_search(mu, members, eps, smin, freq_u) -> RegularityVerdict:
    u = len(members)
    marginals = np.array([mu.mass @ _symbol_counts(mu, [x]) for x in members])  # (u, k)
    candidates = []
    for w in range(mu.k):
        for order in (np.argsort(marginals[:, w], kind="stable"), np.argsort(-marginals[:, w], kind="stable")):
            for size in range(smin, u + 1):
                candidates.append(tuple(sorted(members[i] for i in order[:size])))
    # level sets of the few most probable assignments
    for idx in np.argsort(-mu.mass, kind="stable")[:4]:
        row = mu.digits[idx]
        for w in range(mu.k):
            level = tuple(x for x in members if row[x] == w)
            if len(level) >= smin:
                candidates.append(level)
    best_dev, best_set = -1.0, None
    for subset in sorted(set(candidates)):
        counts = _symbol_counts(mu, subset)
        dev = _deviation_from_counts(mu, counts, len(subset), freq_u)
        if dev > best_dev + 1e-15:
            best_dev, best_set = dev, subset
    if best_dev >= eps:
        return RegularityVerdict("irregular", eps, members, best_set, best_dev)
    return RegularityVerdict("unknown", eps, members, None, max(best_dev, 0.0))


@dataclass(frozen=True)
class PartitionRegularity:
    """Per-class regularity verdicts of mu with respect to a partition."""

    eps: float
    partition: CoordinatePartition
    class_verdicts: tuple

    @property
    def irregular_classes(self) -> list:
        return [j for j, v in enumerate(self.class_verdicts) if v.status == "irregular"]

    @property
    def irregular_weight(self) -> int:
        return sum(len(self.partition.classes[j]) for j in self.irregular_classes)

    @property
    def regular(self) -> bool:
        # eps-regular w.r.t. V: classes that fail carry < eps n coordinates
        return self.irregular_weight < self.eps * self.partition.n - 1e-12


def regular_with_respect_to(
    mu: DenseMeasure,
    part: CoordinatePartition,
    eps: float,
    strategy: str = "exact",
) -> PartitionRegularity:
    verdicts = tuple(is_regular_on(mu, cls, eps, strategy) for cls in part.classes)
    return PartitionRegularity(eps, part, verdicts)


# ---------------------------------------------------------------------------
# index and refinement
# ---------------------------------------------------------------------------


def index(mu: DenseMeasure, part: CoordinatePartition) -> float:
    """Mean conditional variance of per-coordinate empiricals given V."""
    if part.n != mu.n:
        raise InvalidArgument("partition size does not match the measure")
    total = 0.0
    for cls in part.classes:
        counts = _symbol_counts(mu, cls)
        freq = counts / len(cls)
        # sum over x in class of (1{sigma_x = w} - f_w)^2, via the counts
        per_sigma = counts * (1.0 - freq) ** 2 + (len(cls) - counts) * freq**2
        total += float(mu.mass @ per_sigma.sum(axis=1))
    return total / (mu.k * mu.n)


def refine_irregular(
    mu: DenseMeasure,
    part: CoordinatePartition,
    eps: float,
    check: PartitionRegularity | None = None,
) -> CoordinatePartition:
    """Split every witnessed irregular class into (S_j, V_j \\ S_j).

    Aborts when the supplied (or freshly computed) check carries no
    irregularity witnesses, since the split then has no certified basis.
    """
    if check is None:
        check = regular_with_respect_to(mu, part, eps)
    splits = {}
    for j in check.irregular_classes:
        witness = check.class_verdicts[j].witness
        if witness and set(witness) < set(part.classes[j]):
            splits[j] = witness
    if not splits:
        raise InvalidState("no irregularity witnesses available; nothing to refine")
    return part.split(splits)


def guaranteed_index_drop(eps: float, k: int) -> float:
    return eps**4 / (4.0 * k**3)


# ---------------------------------------------------------------------------
# mesh states and homogeneity
# ---------------------------------------------------------------------------


def mesh_cells(mu: DenseMeasure, part: CoordinatePartition, eps: float) -> np.ndarray:
    """Per-assignment mesh-cell labels: one integer row per coordinate class."""
    pitch = eps / mu.k
    top = int(math.ceil(1.0 / pitch)) - 1  # frequency 1.0 belongs to the last box
    labels = np.empty((mu.size, part.size), dtype=np.int64)
    for j, cls in enumerate(part.classes):
        freq = _symbol_counts(mu, cls) / len(cls)
        cells = np.minimum(np.floor((freq + _CELL_GUARD) / pitch), top).astype(np.int64)
        base = int(cells.max()) + 1 if cells.size else 1
        code = np.zeros(mu.size, dtype=np.int64)
        for w in range(mu.k):
            code = code * base + cells[:, w]
        labels[:, j] = code
    return labels


def state_partition_from_mesh(mu: DenseMeasure, part: CoordinatePartition, eps: float) -> StatePartition:
    labels = mesh_cells(mu, part, eps)
    _, inverse = np.unique(labels, axis=0, return_inverse=True)
    classes = [np.flatnonzero(inverse == c).tolist() for c in range(inverse.max() + 1)]
    return StatePartition.of(mu.size, classes)


@dataclass(frozen=True)
class ConditionReport:
    passed: bool
    measured: float
    witness: object = None


@dataclass(frozen=True)
class HomogeneityReport:
    eps: float
    good_state_indices: tuple
    hm1: ConditionReport
    hm2: ConditionReport
    hm3: ConditionReport
    hm4: ConditionReport
    iterations: int = 0
    index_history: tuple = ()

    @property
    def verdict(self) -> bool:
        return self.hm1.passed and self.hm2.passed and self.hm3.passed and self.hm4.passed

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "verdict": self.verdict,
            "good_state_indices": list(self.good_state_indices),
            "iterations": self.iterations,
            "conditions": {
                name: {"passed": c.passed, "measured": c.measured, "witness": c.witness}
                for name, c in (("hm1", self.hm1), ("hm2", self.hm2), ("hm3", self.hm3), ("hm4", self.hm4))
            },
        }


def _max_pairwise_tv(mu, state_indices, cls) -> float:
    counts = _symbol_counts(mu, cls)[list(state_indices)]
    distinct = np.unique(counts, axis=0) / len(cls)
    if distinct.shape[0] <= 1:
        return 0.0
    best = 0.0
    for a in range(distinct.shape[0]):
        diffs = 0.5 * np.abs(distinct[a + 1 :] - distinct[a]).sum(axis=1)
        if diffs.size:
            best = max(best, float(diffs.max()))
    return best


def check_homogeneous(
    mu: DenseMeasure,
    part: CoordinatePartition,
    states: StatePartition,
    eps: float,
    good: tuple | None = None,
) -> HomogeneityReport:
    """Evaluate HM1-HM4 for (V, S), choosing I as the positive-mass states whose
    conditional measure is eps-regular with respect to V unless `good` is given."""
    masses = states.masses(mu)
    conditional_regular = {}
    for i, cls in enumerate(states.classes):
        if masses[i] <= 0.0:
            continue
        cond = mu.conditioned(cls)
        conditional_regular[i] = regular_with_respect_to(cond, part, eps).regular
    if good is None:
        good = tuple(i for i, ok in conditional_regular.items() if ok)

    excluded_mass = float(masses.sum() - sum(masses[i] for i in good))
    hm1 = ConditionReport(
        all(masses[i] > 0.0 for i in good) and excluded_mass < eps,
        excluded_mass,
    )

    hm2_val, hm2_wit = 0.0, None
    for i, cls_states in enumerate(states.classes):
        for j, cls in enumerate(part.classes):
            val = _max_pairwise_tv(mu, cls_states, cls)
            if val > hm2_val:
                hm2_val, hm2_wit = val, (i, j)
    hm2 = ConditionReport(hm2_val < eps, hm2_val, hm2_wit)

    bad3 = [i for i in good if not conditional_regular.get(i, False)]
    hm3 = ConditionReport(not bad3, float(len(bad3)), bad3 or None)

    overall = regular_with_respect_to(mu, part, eps)
    hm4 = ConditionReport(overall.regular, float(overall.irregular_weight) / mu.n)

    return HomogeneityReport(eps, tuple(good), hm1, hm2, hm3, hm4)


# ---------------------------------------------------------------------------
# the decomposition loop
# ---------------------------------------------------------------------------


@dataclass
class SplitEvent:
    scope: str  # "global" or "state:<i>"
    index_before: float
    index_after: float

    @property
    def drop(self) -> float:
        return self.index_before - self.index_after


def decompose(
    mu: DenseMeasure,
    part0: CoordinatePartition | None,
    eps: float,
    *,
    record: list | None = None,
) -> tuple:
    """Refine part0 until mu is eps-homogeneous w.r.t. (V, S(V)).

    Returns (V, S, HomogeneityReport).  Each fired split is appended to
    `record` (if given) as a SplitEvent whose drop is guaranteed to be at
    least eps^4 / (4 |Omega|^3) for the measure it was applied to.
    """
    if part0 is None:
        part0 = CoordinatePartition.trivial(mu.n)
    if part0.size > 1.0 / eps + 1e-12:
        raise InvalidArgument(f"initial partition size {part0.size} exceeds 1/eps")

    part = part0
    bound = guaranteed_index_drop(eps, mu.k)
    max_rounds = int(math.ceil(4.0 * mu.k**3 / eps**5)) + 1
    events = record if record is not None else []

    for _ in range(max_rounds):
        overall = regular_with_respect_to(mu, part, eps)
        if not overall.regular:
            before = index(mu, part)
            part = refine_irregular(mu, part, eps, overall)
            after = index(mu, part)
            events.append(SplitEvent("global", before, after))
            if before - after < bound - 1e-12:
                raise InvalidState(
                    f"index drop {before - after} fell below the guaranteed {bound}; "
                    "this indicates a witness bug"
                )
            continue

        states = state_partition_from_mesh(mu, part, eps)
        masses = states.masses(mu)
        failing = []
        for i, cls in enumerate(states.classes):
            if masses[i] <= 0.0:
                continue
            cond = mu.conditioned(cls)
            verdict = regular_with_respect_to(cond, part, eps)
            if not verdict.regular:
                failing.append((i, cond, verdict))
        failing_mass = sum(masses[i] for i, _, _ in failing)
        if failing_mass < eps:
            good = tuple(
                i
                for i in range(states.size)
                if masses[i] > 0.0 and i not in {f[0] for f in failing}
            )
            report = check_homogeneous(mu, part, states, eps, good)
            report = HomogeneityReport(
                eps,
                report.good_state_indices,
                report.hm1,
                report.hm2,
                report.hm3,
                report.hm4,
                iterations=len(events),
                index_history=tuple((e.scope, e.index_before, e.index_after) for e in events),
            )
            if not report.verdict:
                raise InvalidState("loop terminated but HM1-HM4 re-check failed")
            return part, states, report

        refined = part
        for i, cond, verdict in failing:
            before = index(cond, part)
            split = refine_irregular(cond, part, eps, verdict)
            after = index(cond, split)
            events.append(SplitEvent(f"state:{i}", before, after))
            if before - after < bound - 1e-12:
                raise InvalidState(
                    f"conditional index drop {before - after} fell below {bound}"
                )
            refined = refined.common_refinement(split)
        part = refined

    raise InvalidState(
        "decomposition did not terminate within the index-decrement bound; "
        "this indicates a bug, since the index argument guarantees termination"
    )
