"""Exact maximum-likelihood decoding by tensor-network contraction.

Given independent single-qubit noise, the likelihood of each logical class
is a sum of products of per-qubit probabilities over the class's coset.
Small codes evaluate the sum directly from their class listings; layouts
evaluate it by contracting the network ring by ring with messages whose
bond dimensions stay at 4^(radius - r).  Both paths agree to floating
point accuracy, which the test suite leans on heavily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .holographic import ContractionSchedule, HolographicLayout, ScheduleStep
from .pauli import PauliString
from .stabilizer import StabilizerCode, Syndrome
from .tensor import CodeTensor, class_labels

# PRODUCT_CODE[a, b] is the code of the (phase-free) product of two
# single-qubit Paulis with codes a and b.
PRODUCT_CODE = np.array(
    [[0, 1, 2, 3],
     [1, 0, 3, 2],
     [2, 3, 0, 1],
     [3, 2, 1, 0]],
    dtype=np.uint8,
)


@dataclass(frozen=True, slots=True)
class NoiseModel:
    """Independent per-qubit Pauli noise: probs[i, g] for I, X, Y, Z."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != 4:
            raise ValueError("probs must have shape (n, 4)")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        if not np.allclose(p.sum(axis=1), 1.0, atol=1e-9):
            raise ValueError("each qubit's probabilities must sum to 1")
        object.__setattr__(self, "probs", p)

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def depolarizing(cls, n: int, p: float) -> "NoiseModel":
        """X, Y, Z each with probability p/3 on every qubit."""
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        row = np.array([1.0 - p, p / 3.0, p / 3.0, p / 3.0])
        return cls(np.tile(row, (n, 1)))


def leaf_probabilities(
    noise: NoiseModel, pure_error: PauliString | None = None
) -> np.ndarray:
    """Per-qubit leaf vectors: leaf[i, g] = probs[i, code of E_i * g].

    With no pure error this is just the noise table; otherwise column g is
    the probability of the recovery-shifted Pauli on that qubit.
    """
    if pure_error is None:
        return noise.probs.copy()
    if pure_error.n != noise.n:
        raise ValueError("pure error length must match the noise model")
    e = np.array(pure_error.codes(), dtype=np.uint8)
    return np.take_along_axis(noise.probs, PRODUCT_CODE[e].astype(np.intp), axis=1)


@dataclass(frozen=True, slots=True)
class LikelihoodTable:
    """Relative class likelihoods with a shared log scale.

    The absolute likelihood of label L is mantissa(L) * exp(log_scale);
    mantissas alone suffice for comparisons.  Ties in argmax_class resolve
    to the earliest label in enumeration order, which for one logical qubit
    is I, X, Z, Y.
    """

    labels: tuple[PauliString, ...]
    mantissas: np.ndarray
    log_scale: float
    syndrome: Syndrome | None = None

    def value(self, label: PauliString) -> float:
        return float(self.mantissas[self.labels.index(label)])

    def absolute(self, label: PauliString) -> float:
        return self.value(label) * math.exp(self.log_scale)

    def normalized(self) -> dict[PauliString, float]:
        total = float(self.mantissas.sum())
        if total <= 0:
            raise ValueError("all class likelihoods vanish")
        return {
            label: float(v) / total
            for label, v in zip(self.labels, self.mantissas)
        }

    def argmax_class(self) -> PauliString:
        return self.labels[int(np.argmax(self.mantissas))]


def likelihoods_direct(
    tensor: CodeTensor,
    noise: NoiseModel,
    syndrome: Syndrome | None = None,
    *,
    pure_error: PauliString | None = None,
    leaves: np.ndarray | None = None,
) -> LikelihoodTable:
    """Evaluate class likelihoods straight from the class listings."""
    code = tensor.code
    if leaves is None:
        if pure_error is None and syndrome is not None:
            pure_error = code.pure_error(syndrome)
        leaves = leaf_probabilities(noise, pure_error)
    cols = np.arange(code.n)
    labels = tuple(class_labels(code.k))
    values = np.empty(len(labels))
    tables = tensor.digit_tables()
    for i, label in enumerate(labels):
        digits = tables[label]
        values[i] = leaves[cols, digits].prod(axis=1).sum()
    return LikelihoodTable(
        labels=labels, mantissas=values, log_scale=0.0, syndrome=syndrome
    )


@dataclass(slots=True)
class OpCounter:
    """Multiply-accumulate tally for the network executor.

    Categories: 'leaf' gathers (one per entry per open leg), 'matmul'
    batched products (entries * rows * inner * cols), 'combine' passes that
    scale by leaf weights or accumulate into the output block (entries *
    rows * cols), and 'trace' ring closures (entries * bond, only when the
    bond dimension exceeds 1; closing a bond of dimension 1 is a reshape).
    Final scalar reductions contribute no multiplies and are not counted.
    """

    by_category: dict[str, int] = field(default_factory=dict)
    by_node: dict[str, int] = field(default_factory=dict)

    def add(self, node: str, category: str, count: int) -> None:
        self.by_category[category] = self.by_category.get(category, 0) + count
        self.by_node[node] = self.by_node.get(node, 0) + count

    @property
    def total(self) -> int:
        return sum(self.by_category.values())


def likelihoods_network(
    layout: HolographicLayout,
    schedule: ContractionSchedule,
    noise: NoiseModel,
    syndrome: Syndrome | None = None,
    *,
    pure_error: PauliString | None = None,
    leaves: np.ndarray | None = None,
    counter: OpCounter | None = None,
    bond_observer: dict[str, tuple[int, int]] | None = None,
) -> LikelihoodTable:
    """Contract the layout's network against leaf vectors.

    Messages flow from the outermost ring inward; each node batches over
    its tensor entries, chains its children's messages with matrix
    products, and scatters into an output indexed by its parent-facing
    legs.  Every message is renormalized by its largest entry, with the
    logs pooled into the table's log_scale, so deep layouts never
    underflow.  ``leaves`` overrides the noise/pure-error leaf table;
    ``bond_observer`` collects each message's observed (left, right) bond
    dimensions.
    """
    if leaves is None:
        if pure_error is None and syndrome is not None and not syndrome.is_trivial():
            if layout.code is None:
                raise ValueError("layout carries no code to map the syndrome")
            pure_error = layout.code.pure_error(syndrome)
        leaves = leaf_probabilities(noise, pure_error)
    if leaves.shape != (layout.n, 4):
        raise ValueError("leaf table must have shape (n, 4)")

    messages: dict[str, np.ndarray] = {}
    log_scale = 0.0
    result: np.ndarray | None = None
    labels = tuple(schedule.seed_digits)

    for step in schedule.steps:
        if step.kind == "center":
            values = np.empty(len(labels))
            for i, label in enumerate(labels):
                digits = schedule.seed_digits[label]
                chain = _entry_sum(step, digits, leaves, messages, counter)
                if step.closes_ring and chain.shape[1] > 1:
                    per_entry = np.einsum("eii->e", chain)
                    if counter is not None:
                        counter.add(
                            step.name, "trace", chain.shape[0] * chain.shape[1]
                        )
                else:
                    per_entry = chain.reshape(chain.shape[0], -1).sum(axis=1)
                values[i] = per_entry.sum()
            for _, child, _ in step.chain:
                del messages[child]
            scale = float(values.max())
            if scale > 0:
                values = values / scale
                log_scale += math.log(scale)
            result = values
        else:
            digits = schedule.block_digits
            chain = _entry_sum(step, digits, leaves, messages, counter)
            for _, child, _ in step.chain:
                del messages[child]
            message = _scatter(step, digits, chain, counter)
            if bond_observer is not None:
                bond_observer[step.name] = message.shape[-2:]
            if message.shape[-1] != step.d_out or message.shape[-2] != step.d_out:
                raise AssertionError(
                    f"node {step.name}: bond dims {message.shape[-2:]} "
                    f"differ from scheduled {step.d_out}"
                )
            scale = float(message.max())
            if scale > 0:
                message = message / scale
                log_scale += math.log(scale)
            messages[step.name] = message

    if result is None:
        raise ValueError("schedule has no center step")
    return LikelihoodTable(
        labels=labels,
        mantissas=result,
        log_scale=log_scale,
        syndrome=syndrome,
    )


def _entry_sum(
    step: ScheduleStep,
    digits: np.ndarray,
    leaves: np.ndarray,
    messages: dict[str, np.ndarray],
    counter: OpCounter | None,
) -> np.ndarray:
    """Leaf weights times the child-message chain, per tensor entry.

    Returns an (entries, left, right) stack of matrices.
    """
    n_entries = digits.shape[0]
    weights: np.ndarray | None = None
    for leg, qubit in step.leaf_legs:
        factor = leaves[qubit, digits[:, leg].astype(np.intp)]
        weights = factor if weights is None else weights * factor
        if counter is not None:
            counter.add(step.name, "leaf", n_entries)

    chain: np.ndarray | None = None
    for leg, child, is_corner in step.chain:
        message = messages[child]
        picked = message[digits[:, leg].astype(np.intp)]
        if is_corner:
            e, four, d_l, d_r = picked.shape
            picked = picked.reshape(e, four * d_l, d_r)
        if chain is None:
            chain = picked
        else:
            if counter is not None:
                counter.add(
                    step.name,
                    "matmul",
                    chain.shape[0] * chain.shape[1] * chain.shape[2]
                    * picked.shape[2],
                )
            chain = chain @ picked

    if chain is None:
        if weights is None:
            weights = np.ones(n_entries)
        return weights[:, None, None]
    if weights is not None:
        chain = chain * weights[:, None, None]
        if counter is not None:
            counter.add(
                step.name, "combine",
                chain.shape[0] * chain.shape[1] * chain.shape[2],
            )
    return chain


def _scatter(
    step: ScheduleStep,
    digits: np.ndarray,
    chain: np.ndarray,
    counter: OpCounter | None,
) -> np.ndarray:
    """Accumulate entry matrices into the node's outgoing message.

    The message is indexed by the node's parent-facing legs (first in-leg
    major), then the left bond, then the right bond with any deferred
    corner leg fused in as the major component.
    """
    n_entries, d_l, d_r = chain.shape
    in_index = np.zeros(n_entries, dtype=np.intp)
    for leg in step.in_legs:
        in_index = in_index * 4 + digits[:, leg]
    n_in = 4 ** len(step.in_legs)

    if step.deferred_leg is not None:
        slot = in_index * 4 + digits[:, step.deferred_leg]
        out = np.zeros((n_in * 4, d_l, d_r))
        np.add.at(out, slot, chain)
        out = out.reshape(n_in, 4, d_l, d_r).transpose(0, 2, 1, 3)
        out = out.reshape(n_in, d_l, 4 * d_r)
    else:
        out = np.zeros((n_in, d_l, d_r))
        np.add.at(out, in_index, chain)
    if counter is not None:
        counter.add(step.name, "combine", n_entries * d_l * d_r)
    return out.reshape((4,) * len(step.in_legs) + out.shape[1:])


@dataclass(frozen=True, slots=True)
class DecodeResult:
    table: LikelihoodTable
    label: PauliString
    correction: PauliString


def decode(
    layout: HolographicLayout,
    schedule: ContractionSchedule,
    noise: NoiseModel,
    syndrome: Syndrome,
    *,
    counter: OpCounter | None = None,
) -> DecodeResult:
    """Most likely logical class for a syndrome, plus a matching recovery.

    The correction is the class representative times the syndrome's pure
    error, so it reproduces the syndrome and lands in the chosen class.
    """
    if layout.code is None:
        raise ValueError("layout carries no code; rebuild with with_code=True")
    table = likelihoods_network(
        layout, schedule, noise, syndrome, counter=counter
    )
    label = table.argmax_class()
    correction = layout.code.class_representative(label) * layout.code.pure_error(
        syndrome
    )
    return DecodeResult(table=table, label=label, correction=correction)
