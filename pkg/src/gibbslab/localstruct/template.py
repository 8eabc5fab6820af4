"""Rooted templates: truncated neighborhoods with canonical isomorphism keys.

A template is a rooted connected piece of a factor graph.  Every node keeps
its declared degree and full clone-type vector even when truncation leaves
some slots unmatched, so the boundary of a ball is faithfully represented.

Depth convention: the public depth parameter counts variable layers.  A
variable-rooted depth-L ball keeps everything within 2L bipartite hops
(whose frontier consists of variables, so all interior constraints are
complete); a constraint-rooted ball uses 2L+1 hops for the same reason.

Isomorphism follows the root/kind/degree/type/weight/adjacency-preserving
notion, with one deliberate relaxation: slots of equal type on the same
node are interchangeable.  Weight tables are required (at model validation)
to be symmetric under same-type slot swaps, so the relaxation never changes
a Gibbs weight, and it is what makes the d-regular families have a single
variable-rooted class per depth.  Slots of distinct types stay rigidly
positional: k-SAT sign patterns (+,+,-) and (+,-,+) get different keys.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..errors import InvalidArgument

KEY_VERSION = "v1"


@dataclass(frozen=True)
class Template:
    kinds: tuple  # "var" | "fac" per node
    degrees: tuple  # declared degree per node
    types: tuple  # declared clone-type vector per node
    weights: tuple  # weight id per node (None for variables)
    slots: tuple  # slots[v][i] = (u, j) or None when unmatched
    root: int = 0

    # -- structural helpers ------------------------------------------------------
    @property
    def num_nodes(self) -> int:
        return len(self.kinds)

    @property
    def root_kind(self) -> str:
        return self.kinds[self.root]

    @property
    def root_degree(self) -> int:
        return self.degrees[self.root]

    @cached_property
    def num_edges(self) -> int:
        return sum(1 for v in range(self.num_nodes) for s in self.slots[v] if s is not None) // 2

    @cached_property
    def is_tree(self) -> bool:
        return self.num_edges == self.num_nodes - 1

    @cached_property
    def bip_depths(self) -> tuple:
        depth = {self.root: 0}
        queue = [self.root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for entry in self.slots[u]:
                if entry is None:
                    continue
                v = entry[0]
                if v not in depth:
                    depth[v] = depth[u] + 1
                    queue.append(v)
        if len(depth) != self.num_nodes:
            raise InvalidArgument("template is not connected")
        return tuple(depth[v] for v in range(self.num_nodes))

    def variables_at_var_distance(self, ell: int) -> list:
        """Variable nodes at exactly `ell` variable layers from a variable root."""
        want = 2 * ell
        return [v for v in range(self.num_nodes) if self.kinds[v] == "var" and self.bip_depths[v] == want]

    def variables_within(self, ell: int) -> list:
        return [
            v
            for v in range(self.num_nodes)
            if self.kinds[v] == "var" and self.bip_depths[v] < 2 * ell
        ]

    # -- canonical form ------------------------------------------------------------
    def _node_header(self, v: int) -> str:
        kind = "V" if self.kinds[v] == "var" else "F"
        types = ",".join(repr(t) for t in self.types[v])
        wid = self.weights[v] or ""
        return f"{kind}:{self.degrees[v]}:{types}:{wid}"

    def _tree_form(self, v: int, parent_slot: int | None) -> str:
        groups: dict = {}
        for i in range(self.degrees[v]):
            groups.setdefault(repr(self.types[v][i]), []).append(i)
        parts = []
        for tkey in sorted(groups):
            entries = []
            for i in groups[tkey]:
                if i == parent_slot:
                    entries.append("^")
                elif self.slots[v][i] is None:
                    entries.append(".")
                else:
                    u, j = self.slots[v][i]
                    entries.append(self._tree_form(u, j))
            entries.sort()
            parts.append(f"[{tkey}|{';'.join(entries)}]")
        return "(" + self._node_header(v) + "".join(parts) + ")"

    def _rigid_form(self) -> str:
        # BFS numbering with slot-ordered discovery; relabeling-invariant but
        # slot-rigid, used only for cyclic neighborhoods
        order = {self.root: 0}
        queue = [self.root]
        head = 0
        tokens = []
        while head < len(queue):
            u = queue[head]
            head += 1
            tokens.append(self._node_header(u))
            for i in range(self.degrees[u]):
                entry = self.slots[u][i]
                if entry is None:
                    tokens.append(f"{i}:.")
                    continue
                v, j = entry
                if v not in order:
                    order[v] = len(order)
                    queue.append(v)
                tokens.append(f"{i}:{order[v]}@{j}")
        return "|".join(tokens)

    @cached_property
    def key(self) -> str:
        if self.is_tree:
            return f"{KEY_VERSION}|tree|" + self._tree_form(self.root, None)
        return f"{KEY_VERSION}|cyc|" + self._rigid_form()

    @cached_property
    def canonical_root_order(self) -> tuple:
        """Actual root-slot indices in canonical position order.

        Within each type group (groups ordered by type repr) the slots are
        ordered by their serialized subtree, ties by original index.
        """
        groups: dict = {}
        for i in range(self.root_degree):
            groups.setdefault(repr(self.types[self.root][i]), []).append(i)
        order = []
        for tkey in sorted(groups):
            entries = []
            for i in groups[tkey]:
                entry = self.slots[self.root][i]
                if entry is None:
                    label = "."
                elif self.is_tree:
                    label = self._tree_form(entry[0], entry[1])
                else:
                    label = f"cyc{i}"
                entries.append((label, i))
            entries.sort()
            order.extend(i for _, i in entries)
        return tuple(order)

    def __eq__(self, other) -> bool:
        return isinstance(other, Template) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Template(root={self.root_kind}, nodes={self.num_nodes}, tree={self.is_tree})"


def canonical_key(template: Template) -> str:
    return template.key


# ---------------------------------------------------------------------------
# construction from factor graphs
# ---------------------------------------------------------------------------


def _extract_ball(g, root_kind: str, root_id: int, bip_radius: int) -> Template:
    model = g.model
    start = ("var", root_id) if root_kind == "var" else ("fac", root_id)
    dist = {start: 0}
    queue = [start]
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        if dist[node] >= bip_radius:
            continue
        kind, idx = node
        nbrs = g.variable_neighbors[idx] if kind == "var" else g.factor_neighbors[idx]
        other_kind = "fac" if kind == "var" else "var"
        for nbr_idx, _ in nbrs:
            nxt = (other_kind, nbr_idx)
            if nxt not in dist:
                dist[nxt] = dist[node] + 1
                queue.append(nxt)

    order = {node: pos for pos, node in enumerate(queue)}
    kinds, degrees, types, weights = [], [], [], []
    for kind, idx in queue:
        kinds.append(kind)
        if kind == "var":
            degrees.append(model.var_degree(idx))
            types.append(model.var_types[idx])
            weights.append(None)
        else:
            degrees.append(model.fac_degree(idx))
            types.append(model.fac_types[idx])
            weights.append(model.fac_weights[idx])
    slots = [[None] * d for d in degrees]
    for kind, idx in queue:
        if kind != "var":
            continue
        u = order[(kind, idx)]
        for i in range(model.var_degree(idx)):
            a, j = g.partner_of_var(idx, i)
            node = ("fac", a)
            if node in order:
                v = order[node]
                slots[u][i] = (v, j)
                slots[v][j] = (u, i)
    return Template(
        tuple(kinds),
        tuple(degrees),
        tuple(types),
        tuple(weights),
        tuple(tuple(s) for s in slots),
        root=0,
    )


def neighborhood(g, node: tuple, depth: int) -> Template:
    """The depth-`depth` neighborhood template of a node.

    `node` is ("var", x) or ("fac", a); depth counts variable layers, so a
    variable root keeps 2*depth bipartite hops and a constraint root
    2*depth + 1.  Cyclic neighborhoods are returned with is_tree False.
    """
    kind, idx = node
    if kind not in ("var", "fac"):
        raise InvalidArgument("node must be ('var', x) or ('fac', a)")
    radius = 2 * depth if kind == "var" else 2 * depth + 1
    return _extract_ball(g, kind, idx, radius)


# ---------------------------------------------------------------------------
# truncation and rerooting
# ---------------------------------------------------------------------------


def _truncate_bip(template: Template, bip_radius: int) -> Template:
    keep = [v for v in range(template.num_nodes) if template.bip_depths[v] <= bip_radius]
    keep_order = {template.root: 0}
    for v in sorted(keep, key=lambda v: (template.bip_depths[v], v)):
        if v not in keep_order:
            keep_order[v] = len(keep_order)
    kinds = [None] * len(keep_order)
    degrees = [0] * len(keep_order)
    types = [None] * len(keep_order)
    weights = [None] * len(keep_order)
    slots = [None] * len(keep_order)
    for old, new in keep_order.items():
        kinds[new] = template.kinds[old]
        degrees[new] = template.degrees[old]
        types[new] = template.types[old]
        weights[new] = template.weights[old]
        row = []
        for entry in template.slots[old]:
            if entry is not None and entry[0] in keep_order:
                row.append((keep_order[entry[0]], entry[1]))
            else:
                row.append(None)
        slots[new] = tuple(row)
    return Template(
        tuple(kinds), tuple(degrees), tuple(types), tuple(weights), tuple(slots), root=0
    )


def truncate(template: Template, depth: int) -> Template:
    """The depth-`depth` (variable-layer) truncation around the current root."""
    radius = 2 * depth if template.root_kind == "var" else 2 * depth + 1
    return _truncate_bip(template, radius)


def reroot(template: Template, j: int) -> Template:
    """Move the root to its j-th neighbor (canonical position order).

    The underlying graph is unchanged, so reroot composes with truncate to
    produce the neighbor's own neighborhood classes.
    """
    if not 0 <= j < template.root_degree:
        raise InvalidArgument(f"neighbor position {j} outside [0, {template.root_degree})")
    slot = template.canonical_root_order[j]
    entry = template.slots[template.root][slot]
    if entry is None:
        raise InvalidArgument(f"root slot {slot} is unmatched; cannot reroot")
    return Template(
        template.kinds,
        template.degrees,
        template.types,
        template.weights,
        template.slots,
        root=entry[0],
    )


def root_position_of(template: Template, old_root: int) -> int:
    """Canonical position of the edge leading to `old_root` from the root."""
    for pos, slot in enumerate(template.canonical_root_order):
        entry = template.slots[template.root][slot]
        if entry is not None and entry[0] == old_root:
            return pos
    raise InvalidArgument("old root is not adjacent to the current root")
