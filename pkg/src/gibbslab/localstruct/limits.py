"""Limiting local tree distributions theta_ell for the built-in families.

For the d-regular families (Ising, Potts) the depth-ell distribution is
carried by one variable-rooted and one constraint-rooted tree, with weights
|V|/(|V|+|F|) and |F|/(|V|+|F|).  For regular k-SAT the distribution is an
exact finite enumeration over clause sign patterns (independent uniform by
default) and parent-slot choices, bucketed by canonical key.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import BudgetExceeded, InvalidArgument
from ..models.builders import ising, ksat, potts
from ..models.spec import ModelSpec
from .localdist import LocalDistribution, LocalEntry
from .template import Template

#: cap on enumerated (tree, probability) items per family call
ENUMERATION_CAP = 500_000


class _Builder:
    def __init__(self):
        self.kinds, self.degrees, self.types, self.weights, self.slots = [], [], [], [], []

    def add(self, kind: str, types: tuple, wid: str | None = None) -> int:
        self.kinds.append(kind)
        self.degrees.append(len(types))
        self.types.append(tuple(types))
        self.weights.append(wid)
        self.slots.append([None] * len(types))
        return len(self.kinds) - 1

    def connect(self, u: int, i: int, v: int, j: int):
        self.slots[u][i] = (v, j)
        self.slots[v][j] = (u, i)

    def build(self, root: int = 0) -> Template:
        return Template(
            tuple(self.kinds),
            tuple(self.degrees),
            tuple(self.types),
            tuple(self.weights),
            tuple(tuple(s) for s in self.slots),
            root=root,
        )


@dataclass(frozen=True)
class FamilySpec:
    """A named model family with parameters, used by bethe and experiments."""

    name: str  # "ising" | "potts" | "ksat"
    params: dict = field(default_factory=dict)

    def model(self, n: int) -> ModelSpec:
        p = self.params
        if self.name == "ising":
            return ising(n, p["d"], p["beta"])
        if self.name == "potts":
            return potts(n, p["d"], p["k"], p["beta"])
        if self.name == "ksat":
            return ksat(n, p["k"], p["beta"], p.get("d_plus", 1), p.get("d_minus", 1))
        raise InvalidArgument(f"unsupported family {self.name!r}")

    def limit(self, depth: int) -> LocalDistribution:
        return limit_tree(self, depth)

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"


# ---------------------------------------------------------------------------
# d-regular pairwise families
# ---------------------------------------------------------------------------


def _regular_var_tree(b: _Builder, node: int, used_slot: int | None, bip_depth: int, radius: int, d: int, wid: str):
    for i in range(d):
        if i == used_slot or bip_depth + 1 > radius:
            continue
        fac = b.add("fac", (0, 0), wid)
        b.connect(node, i, fac, 0)
        if bip_depth + 2 <= radius:
            child = b.add("var", (0,) * d)
            b.connect(fac, 1, child, 0)
            _regular_var_tree(b, child, 0, bip_depth + 2, radius, d, wid)


def _regular_limit(model_probe: ModelSpec, d: int, depth: int) -> LocalDistribution:
    wid = model_probe.fac_weights[0]
    wf = model_probe.weight_functions[wid]

    b = _Builder()
    root = b.add("var", (0,) * d)
    _regular_var_tree(b, root, None, 0, 2 * depth, d, wid)
    var_tree = b.build(root)

    b = _Builder()
    root = b.add("fac", (0, 0), wid)
    for j in range(2):
        child = b.add("var", (0,) * d)
        b.connect(root, j, child, 0)
        _regular_var_tree(b, child, 0, 1, 2 * depth + 1, d, wid)
    fac_tree = b.build(root)

    share_v = 1.0 / (1.0 + d / 2.0)
    entries = {
        var_tree.key: LocalEntry(share_v, var_tree),
        fac_tree.key: LocalEntry(1.0 - share_v, fac_tree),
    }
    return LocalDistribution(
        depth,
        entries,
        mode="limit-exact",
        meta={"weight_functions": {wid: wf}},
    )


# ---------------------------------------------------------------------------
# regular k-SAT
# ---------------------------------------------------------------------------


def _ksat_limit(spec: FamilySpec, depth: int) -> LocalDistribution:
    p = spec.params
    k, beta = p["k"], p["beta"]
    dp, dm = p.get("d_plus", 1), p.get("d_minus", 1)
    pattern_weights = p.get("pattern_weights")  # optional dict pattern -> prob
    probe = ksat(max(2 * k, 2 * (dp + dm)) * k, k, beta, dp, dm)
    wf_by_pattern = {}
    for a, pattern in enumerate(probe.fac_types):
        wf_by_pattern[pattern] = probe.weight_functions[probe.fac_weights[a]]

    patterns = list(itertools.product((1, -1), repeat=k))
    if pattern_weights is None:
        pattern_weights = {s: 1.0 / len(patterns) for s in patterns}
    for s in patterns:
        if s not in wf_by_pattern:
            # pattern absent from the probe model's deal; synthesize its weight
            import numpy as np

            from ..models.builders import SPIN_ALPHABET
            from ..models.weights import WeightFunction

            table = np.zeros((2,) * k)
            table[tuple(0 if t < 0 else 1 for t in s)] = 1.0
            table = np.exp(-beta * table)
            wid = "ksat:s=" + "".join("+" if t > 0 else "-" for t in s) + f":beta={beta!r}"
            wf_by_pattern[s] = WeightFunction(wid, SPIN_ALPHABET, table)

    var_types = (1,) * dp + (-1,) * dm
    slot_norm = {
        s: sum(pattern_weights[pat] * sum(1 for t in pat if t == s) for pat in patterns)
        for s in (1, -1)
    }

    def clause_options(my_sign: int):
        out = []
        for pat in patterns:
            w = pattern_weights[pat]
            if w <= 0.0:
                continue
            for j in range(k):
                if pat[j] == my_sign:
                    out.append((pat, j, w / slot_norm[my_sign]))
        return out

    # spec-tree enumeration (pure data), converted to Templates at the end
    def enum_var(parent_sign: int | None, bip: int, radius: int):
        slot_opts = []
        if parent_sign is None:
            parents = [None]
            parent_prob = 1.0
        else:
            parents = [i for i, t in enumerate(var_types) if t == parent_sign]
            parent_prob = 1.0 / len(parents)
        out = []
        for parent_slot in parents:
            per_slot = []
            for i, sign in enumerate(var_types):
                if i == parent_slot:
                    per_slot.append([("parent", 1.0)])
                elif bip + 1 <= radius:
                    per_slot.append(
                        [(("clause", c), pr) for c, pr in _enum_clause_memo(sign, bip + 1, radius)]
                    )
                else:
                    per_slot.append([("open", 1.0)])
            for combo in itertools.product(*per_slot):
                prob = parent_prob
                for _, pr in combo:
                    prob *= pr
                out.append((("var", parent_slot, tuple(c for c, _ in combo)), prob))
                if len(out) > ENUMERATION_CAP:
                    raise BudgetExceeded(
                        f"k-SAT limit enumeration exceeded {ENUMERATION_CAP} at depth {depth}",
                        required=len(out),
                        allowed=ENUMERATION_CAP,
                    )
        return out

    clause_memo: dict = {}

    def _enum_clause_memo(my_sign: int, bip: int, radius: int):
        key = (my_sign, bip)
        if key in clause_memo:
            return clause_memo[key]
        out = []
        for pat, j_star, pr0 in clause_options(my_sign):
            per_slot = []
            for j in range(k):
                if j == j_star:
                    per_slot.append([("parent", 1.0)])
                elif bip + 1 <= radius:
                    per_slot.append(
                        [(("var", v), pr) for v, pr in enum_var(pat[j], bip + 1, radius)]
                    )
                else:
                    per_slot.append([("open", 1.0)])
            for combo in itertools.product(*per_slot):
                prob = pr0
                for _, pr in combo:
                    prob *= pr
                out.append(((pat, j_star, tuple(c for c, _ in combo)), prob))
                if len(out) > ENUMERATION_CAP:
                    raise BudgetExceeded(
                        f"k-SAT limit enumeration exceeded {ENUMERATION_CAP} at depth {depth}",
                        required=len(out),
                        allowed=ENUMERATION_CAP,
                    )
        clause_memo[key] = out
        return out

    def build_var(b: _Builder, spec) -> int:
        _, _parent_slot, children = spec
        node = b.add("var", var_types)
        for i, child in enumerate(children):
            if child in ("parent", "open"):
                continue
            tag, payload = child
            if tag == "clause":
                fac = build_clause(b, payload)
                pat, j_star, _ = payload
                b.connect(node, i, fac, j_star)
        return node

    def build_clause(b: _Builder, spec) -> int:
        pat, j_star, children = spec
        fac = b.add("fac", pat, wf_by_pattern[pat].wid)
        for j, child in enumerate(children):
            if child in ("parent", "open"):
                continue
            tag, payload = child
            if tag == "var":
                _, parent_slot, _ = payload
                var = build_var(b, payload)
                b.connect(fac, j, var, parent_slot)
        return fac

    share_v = k / (k + dp + dm)
    entries: dict = {}

    def bucket(template: Template, prob: float):
        cur = entries.get(template.key)
        entries[template.key] = LocalEntry((cur.weight if cur else 0.0) + prob, template)

    for spec_tree, prob in enum_var(None, 0, 2 * depth):
        b = _Builder()
        root = build_var(b, spec_tree)
        bucket(b.build(root), share_v * prob)

    clause_memo.clear()
    for pat in patterns:
        w = pattern_weights[pat]
        if w <= 0.0:
            continue
        per_slot = []
        for j in range(k):
            per_slot.append([(("var", v), pr) for v, pr in enum_var(pat[j], 1, 2 * depth + 1)])
        for combo in itertools.product(*per_slot):
            prob = w
            for _, pr in combo:
                prob *= pr
            b = _Builder()
            fac = b.add("fac", pat, wf_by_pattern[pat].wid)
            for j, (child, _) in enumerate(combo):
                _, payload = child
                _, parent_slot, _ = payload
                var = build_var(b, payload)
                b.connect(fac, j, var, parent_slot)
            bucket(b.build(fac), (1.0 - share_v) * prob)

    return LocalDistribution(
        depth,
        entries,
        mode="limit-exact",
        meta={"weight_functions": {wf.wid: wf for wf in wf_by_pattern.values()}},
    )


def limit_tree(spec: FamilySpec, depth: int) -> LocalDistribution:
    """theta_depth for a built-in family (exact enumeration)."""
    if depth < 0:
        raise InvalidArgument("depth must be >= 0")
    if spec.name == "ising":
        d = spec.params["d"]
        return _regular_limit(ising(2 * d, d, spec.params["beta"]), d, depth)
    if spec.name == "potts":
        d = spec.params["d"]
        probe = potts(2 * d, d, spec.params["k"], spec.params["beta"])
        return _regular_limit(probe, d, depth)
    if spec.name == "ksat":
        return _ksat_limit(spec, depth)
    raise InvalidArgument(f"unsupported family {spec.name!r}")
