"""Hyperbolic pentagon-free layouts of contracted code tensors.

The flagship construction nests a six-leg seed tensor inside rings of
seven-leg tensors.  Ring r (1-based radius, layer r-1 here) attaches one
child to every free leg of the previous ring; children sitting between two
adjacent parents use two legs ("corner" nodes), the rest use one ("single"
nodes).  The module builds the layout graph, assembles the contracted
stabilizer code by repeated two-tensor contraction, and derives a
ring-by-ring contraction schedule whose bond dimensions are exactly
4^(R - r) between rings at radius r.

Chains of tensors (open paths, used for small worked examples) share the
same node, schedule, and executor machinery with all bond dimensions 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString
from .stabilizer import StabilizerCode, six_qubit_code, seven_qubit_state
from .tensor import CodeTensor, LegBinding, contract

CENTER_LEGS = 6
BLOCK_LEGS = 7
SINGLE_IN_LEG = 6
CORNER_IN_LEGS = (5, 6)  # leg 5 meets the right parent, leg 6 the left


@dataclass(frozen=True, slots=True)
class LayoutNode:
    """One tensor in the layout graph.

    ``in_links`` are (own leg, parent name, parent leg) triples; ``children``
    are (own leg, child name, child in-leg) triples in ascending own-leg
    order; ``leaf_legs`` are the legs left open to the boundary.
    """

    name: str
    kind: str  # "center", "single", "corner", or "plain" for chain nodes
    layer: int
    ring_pos: int
    in_links: tuple[tuple[int, str, int], ...]
    children: tuple[tuple[int, str, int], ...]
    leaf_legs: tuple[int, ...]

    @property
    def n_legs(self) -> int:
        return CENTER_LEGS if self.kind == "center" else BLOCK_LEGS


@dataclass(frozen=True, slots=True)
class ScheduleStep:
    """Instructions for absorbing one node during network contraction.

    ``chain`` lists the children whose messages this node consumes, in
    matrix-product order; a child flagged ``corner=True`` brings a second
    parent-facing index that is fused into this node's left bond.
    ``deferred_leg`` is the leg bound to the corner child consumed by the
    next node around the ring; its index joins the right bond.
    """

    name: str
    kind: str
    in_legs: tuple[int, ...]
    chain: tuple[tuple[int, str, bool], ...]  # (own leg, child, corner?)
    deferred_leg: int | None
    leaf_legs: tuple[tuple[int, int], ...]  # (own leg, boundary qubit)
    d_child: int
    d_out: int
    closes_ring: bool


@dataclass(frozen=True, slots=True)
class ContractionSchedule:
    """Leaf-to-root ordering of steps plus shared entry digit tables."""

    steps: tuple[ScheduleStep, ...]
    block_digits: np.ndarray  # (entries, 7) uint8 for every seven-leg node
    seed_digits: dict[PauliString, np.ndarray]  # label -> (entries, 6) uint8

    def step_for(self, name: str) -> ScheduleStep:
        for step in self.steps:
            if step.name == name:
                return step
        raise KeyError(name)


@dataclass(frozen=True, slots=True)
class HolographicLayout:
    """A layout graph, its boundary ordering, and the contracted code."""

    radius: int
    rings: tuple[tuple[str, ...], ...]
    nodes: dict[str, LayoutNode]
    boundary: tuple[tuple[str, int], ...]  # qubit index -> (node, leg)
    code: StabilizerCode | None

    @property
    def n(self) -> int:
        return len(self.boundary)

    def node_count(self) -> int:
        return len(self.nodes)


def _free_leg_span(kind: str) -> tuple[int, ...]:
    """Legs of a node that face outward (everything but its in-legs)."""
    if kind == "center":
        return tuple(range(CENTER_LEGS))
    if kind == "single":
        return tuple(range(6))
    if kind == "corner":
        return tuple(range(5))
    raise ValueError(f"no fixed leg span for kind {kind!r}")


def build_layout(radius: int, *, with_code: bool = True) -> HolographicLayout:
    """Build the nested-ring layout of the given radius.

    Radius 1 is the bare seed tensor.  Each further ring attaches seven-leg
    blocks to every free leg of the previous one: one corner node between
    each pair of cyclically adjacent parents (consuming the left parent's
    last free leg and the right parent's first), and one single node on
    every middle leg.  With ``with_code`` the stabilizer code is assembled
    by repeated contraction, with the fresh block always supplying the
    canonical side, and its qubits are permuted to boundary order
    (outermost ring first to last, free legs ascending within a node).
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")

    seed = CodeTensor.from_code(six_qubit_code())
    block = CodeTensor.from_code(seven_qubit_state())

    rings: list[list[str]] = [["c"]]
    in_links: dict[str, tuple[tuple[int, str, int], ...]] = {"c": ()}
    kinds: dict[str, str] = {"c": "center"}
    layers: dict[str, int] = {"c": 0}
    ring_pos: dict[str, int] = {"c": 0}
    children: dict[str, list[tuple[int, str, int]]] = {"c": []}

    def add_node(name: str, kind: str, layer: int, pos: int,
                 links: list[tuple[int, str, int]]) -> None:
        kinds[name] = kind
        layers[name] = layer
        ring_pos[name] = pos
        in_links[name] = tuple(links)
        children[name] = []
        for own_leg, parent, parent_leg in links:
            children[parent].append((parent_leg, name, own_leg))

    for layer in range(1, radius):
        prev = rings[-1]
        ring: list[str] = []
        if layer == 1:
            for j in range(CENTER_LEGS):
                name = f"1.{j}"
                add_node(name, "single", 1, j, [(SINGLE_IN_LEG, "c", j)])
                ring.append(name)
        else:
            for j, parent in enumerate(prev):
                left = prev[(j - 1) % len(prev)]
                free_left = _free_leg_span(kinds[left])
                free_right = _free_leg_span(kinds[parent])
                corner = f"{layer}.{len(ring)}"
                add_node(corner, "corner", layer, len(ring), [
                    (CORNER_IN_LEGS[0], parent, free_right[0]),
                    (CORNER_IN_LEGS[1], left, free_left[-1]),
                ])
                ring.append(corner)
                for leg in free_right[1:-1]:
                    name = f"{layer}.{len(ring)}"
                    add_node(name, "single", layer, len(ring),
                             [(SINGLE_IN_LEG, parent, leg)])
                    ring.append(name)
        rings.append(ring)

    nodes: dict[str, LayoutNode] = {}
    for name, kind in kinds.items():
        bound_to_parent = {leg for leg, _, _ in in_links[name]}
        child_legs = {leg for leg, _, _ in children[name]}
        all_legs = CENTER_LEGS if kind == "center" else BLOCK_LEGS
        leaves = tuple(
            leg for leg in range(all_legs)
            if leg not in bound_to_parent and leg not in child_legs
        )
        nodes[name] = LayoutNode(
            name=name,
            kind=kind,
            layer=layers[name],
            ring_pos=ring_pos[name],
            in_links=in_links[name],
            children=tuple(sorted(children[name])),
            leaf_legs=leaves,
        )

    boundary = tuple(
        (name, leg) for name in rings[-1] for leg in nodes[name].leaf_legs
    )

    code = None
    if with_code:
        acc = seed
        acc_map: list[tuple[str, int]] = [("c", leg) for leg in range(CENTER_LEGS)]
        for ring in rings[1:]:
            for name in ring:
                node = nodes[name]
                acc, acc_map = _attach_block(block, acc, acc_map, node)
        perm = [acc_map.index(slot) for slot in boundary]
        code = acc.code.permuted(perm)

    return HolographicLayout(
        radius=radius,
        rings=tuple(tuple(r) for r in rings),
        nodes=nodes,
        boundary=boundary,
        code=code,
    )


def _attach_block(
    block: CodeTensor,
    acc: CodeTensor,
    acc_map: list[tuple[str, int]],
    node: LayoutNode,
) -> tuple[CodeTensor, list[tuple[str, int]]]:
    """Contract one seven-leg block onto the accumulated code.

    The block goes in as the first argument so that the fresh small tensor,
    which always distinguishes errors on its one or two in-legs, supplies
    the canonical generator form; the accumulated side is never enumerated.
    """
    left_legs = tuple(leg for leg, _, _ in node.in_links)
    right_positions = tuple(
        acc_map.index((parent, parent_leg))
        for _, parent, parent_leg in node.in_links
    )
    binding = LegBinding(left_legs, right_positions)
    new_acc = contract(block, acc, binding)
    bound = set(left_legs)
    fresh = [(node.name, leg) for leg in range(BLOCK_LEGS) if leg not in bound]
    consumed = set(right_positions)
    kept = [slot for i, slot in enumerate(acc_map) if i not in consumed]
    return new_acc, fresh + kept


def schedule_for(layout: HolographicLayout) -> ContractionSchedule:
    """Derive the outermost-first contraction schedule for a layout.

    Each node's chain starts with the corner child on its first child-bound
    leg (the corner it consumes), followed by its single children; the
    corner on its last child-bound leg is deferred to the neighbour and its
    leg index joins the right bond.  Bond dimensions between layers l and
    l+1 are 4^(radius - 1 - l).
    """
    radius = layout.radius
    qubit_of = {slot: q for q, slot in enumerate(layout.boundary)}
    steps: list[ScheduleStep] = []
    for ring in reversed(layout.rings):
        for name in ring:
            node = layout.nodes[name]
            corner_links = [
                (leg, child, in_leg)
                for leg, child, in_leg in node.children
                if layout.nodes[child].kind == "corner"
            ]
            single_links = [
                (leg, child, in_leg)
                for leg, child, in_leg in node.children
                if layout.nodes[child].kind != "corner"
            ]
            consumed = [
                (leg, child, True)
                for leg, child, in_leg in corner_links
                if in_leg == CORNER_IN_LEGS[0]
            ]
            deferred = [
                leg
                for leg, _, in_leg in corner_links
                if in_leg == CORNER_IN_LEGS[1]
            ]
            chain = tuple(
                sorted(consumed + [(leg, child, False) for leg, child, _ in single_links])
            )
            d_out = 4 ** max(radius - 1 - node.layer, 0)
            d_child = 4 ** max(radius - 2 - node.layer, 0)
            steps.append(
                ScheduleStep(
                    name=name,
                    kind=node.kind,
                    in_legs=tuple(leg for leg, _, _ in node.in_links),
                    chain=chain,
                    deferred_leg=deferred[0] if deferred else None,
                    leaf_legs=tuple(
                        (leg, qubit_of[(name, leg)]) for leg in node.leaf_legs
                    ),
                    d_child=d_child,
                    d_out=1 if node.kind == "center" else d_out,
                    closes_ring=node.kind == "center" and bool(node.children),
                )
            )
    return ContractionSchedule(
        steps=tuple(steps),
        block_digits=_group_digits(CodeTensor.from_code(seven_qubit_state())),
        seed_digits=CodeTensor.from_code(six_qubit_code()).digit_tables(),
    )


def _group_digits(tensor: CodeTensor) -> np.ndarray:
    (table,) = tensor.digit_tables().values()
    return table


# ---------------------------------------------------------------------------
# Open chains
# ---------------------------------------------------------------------------


def chain_layout(
    links: list[tuple[int, int, int]],
) -> HolographicLayout:
    """Build an open chain: a seed tensor plus seven-leg blocks.

    ``links[i]`` attaches block i+1 as (parent index, parent leg, own
    in-leg), where index 0 is the seed and index j >= 1 is block j.  Parents
    must already be attached.  Qubit order is the raw contraction order
    (each new block's free legs first, ascending, then the previous code's
    surviving qubits); the boundary records it.  All schedule bond
    dimensions are 1.
    """
    seed = CodeTensor.from_code(six_qubit_code())
    block = CodeTensor.from_code(seven_qubit_state())

    names = ["c"] + [f"b{i}" for i in range(1, len(links) + 1)]
    links_by_child: dict[str, tuple[int, str, int]] = {}
    children: dict[str, list[tuple[int, str, int]]] = {n: [] for n in names}
    used_legs: dict[str, set[int]] = {n: set() for n in names}
    for i, (parent_idx, parent_leg, own_leg) in enumerate(links, start=1):
        if not 0 <= parent_idx < i:
            raise ValueError("parent must be attached before its child")
        parent = names[parent_idx]
        n_parent = CENTER_LEGS if parent == "c" else BLOCK_LEGS
        if not 0 <= parent_leg < n_parent or parent_leg in used_legs[parent]:
            raise ValueError(f"leg {parent_leg} of {parent} is not available")
        if not 0 <= own_leg < BLOCK_LEGS:
            raise ValueError("in-leg out of range")
        used_legs[parent].add(parent_leg)
        name = names[i]
        links_by_child[name] = (own_leg, parent, parent_leg)
        used_legs[name].add(own_leg)
        children[parent].append((parent_leg, name, own_leg))

    nodes: dict[str, LayoutNode] = {}
    for idx, name in enumerate(names):
        kind = "center" if name == "c" else "plain"
        n_legs = CENTER_LEGS if kind == "center" else BLOCK_LEGS
        in_link = () if name == "c" else (links_by_child[name],)
        leaves = tuple(
            leg for leg in range(n_legs) if leg not in used_legs[name]
        )
        nodes[name] = LayoutNode(
            name=name,
            kind=kind,
            layer=0 if name == "c" else idx,
            ring_pos=idx,
            in_links=in_link,
            children=tuple(sorted(children[name])),
            leaf_legs=leaves,
        )

    acc = seed
    acc_map = [("c", leg) for leg in range(CENTER_LEGS)]
    for name in names[1:]:
        node = nodes[name]
        acc, acc_map = _attach_block(block, acc, acc_map, node)
    boundary = tuple(acc_map)

    return HolographicLayout(
        radius=1,
        rings=(tuple(names),),
        nodes=nodes,
        boundary=boundary,
        code=acc.code,
    )


def chain_schedule(layout: HolographicLayout) -> ContractionSchedule:
    """Leaves-to-seed schedule for a chain layout (all bonds 1)."""
    qubit_of = {slot: q for q, slot in enumerate(layout.boundary)}
    order: list[str] = []
    seen: set[str] = set()

    def visit(name: str) -> None:
        for _, child, _ in layout.nodes[name].children:
            visit(child)
        if name not in seen:
            seen.add(name)
            order.append(name)

    visit("c")
    steps = []
    for name in order:
        node = layout.nodes[name]
        steps.append(
            ScheduleStep(
                name=name,
                kind=node.kind,
                in_legs=tuple(leg for leg, _, _ in node.in_links),
                chain=tuple((leg, child, False) for leg, child, _ in node.children),
                deferred_leg=None,
                leaf_legs=tuple(
                    (leg, qubit_of[(name, leg)]) for leg in node.leaf_legs
                ),
                d_child=1,
                d_out=1,
                closes_ring=False,
            )
        )
    return ContractionSchedule(
        steps=tuple(steps),
        block_digits=_group_digits(CodeTensor.from_code(seven_qubit_state())),
        seed_digits=CodeTensor.from_code(six_qubit_code()).digit_tables(),
    )


def predicted_op_count(
    layout: HolographicLayout, *, n_mat: int = 3, c_mat: float = 1.0
) -> float:
    """Closed-form work bound for contracting the layout's network.

    Sums, over every node with m legs and child bond dimension D, the term
    2^(m+2) * (m - 3) * c_mat * D^n_mat.  With the defaults this bounds the
    multiply-accumulate count of the schedule executor; the radius-1 layout
    comes out at exactly 768.
    """
    total = 0.0
    radius = layout.radius
    for node in layout.nodes.values():
        m = node.n_legs
        if node.kind in ("center", "plain") and radius == 1:
            d_child = 1
        else:
            d_child = 4 ** max(radius - 2 - node.layer, 0)
        if not node.children:
            d_child = 1
        total += (2 ** (m + 2)) * (m - 3) * c_mat * float(d_child) ** n_mat
    return total
