"""Indicator tensors of stabilizer codes and their contraction.

The tensor of an [[n, k]] code assigns, to each k-qubit class label L and
each n-qubit index string g, a 0/1 entry marking whether the Pauli string
sigma^g lies in the coset (stabilizer group) * (representative of L).  Two
such tensors can be contracted over bound leg pairs; when one of the codes
can distinguish every error on its bound legs, the contraction is again the
indicator tensor of a stabilizer code, and that code is built here
constructively from a leg-canonical generator form instead of by summing
entries.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .pauli import PauliString
from .stabilizer import ENUMERATION_CAP, StabilizerCode


class ContractionPreconditionError(ValueError):
    """Neither side can distinguish the errors on its bound legs."""


@dataclass(frozen=True, slots=True)
class LegBinding:
    """Pairs of bound legs: ``left[i]`` of one tensor meets ``right[i]``."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.left) != len(self.right):
            raise ValueError("left and right leg lists must pair up")
        if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
            raise ValueError("bound legs must be distinct on each side")
        if not self.left:
            raise ValueError("a binding needs at least one leg pair")

    @classmethod
    def of(cls, left: Sequence[int], right: Sequence[int]) -> "LegBinding":
        return cls(tuple(left), tuple(right))


def class_labels(k: int) -> list[PauliString]:
    """All 4^k class labels in the fixed order I < X < Z < Y per qubit."""
    labels = []
    for codes in itertools.product((0, 1, 3, 2), repeat=k):
        labels.append(PauliString.from_codes(reversed(codes)))
    # itertools.product varies the last position fastest; reversing the code
    # tuple makes qubit 0 the fastest-varying (least significant) position.
    return labels


def class_order_key(label: PauliString) -> tuple[int, ...]:
    """Sort key realizing the tie-break order I < X < Z < Y per qubit."""
    rank = (0, 1, 3, 2)  # code -> rank
    return tuple(rank[c] for c in reversed(label.codes()))


class CodeTensor:
    """A stabilizer code together with (possibly deferred) class listings.

    ``class_tables`` maps each class label to the frozen set of base-4 keys
    of its 2^(n-k) member strings.  Listings are materialized lazily and
    only when n - k is at most ENUMERATION_CAP; codes produced by large
    contractions simply carry their StabilizerCode.
    """

    def __init__(
        self,
        code: StabilizerCode,
        classes: Mapping[PauliString, frozenset[int]] | None = None,
    ) -> None:
        self.code = code
        self._classes: dict[PauliString, frozenset[int]] | None = (
            dict(classes) if classes is not None else None
        )

    @classmethod
    def from_code(cls, code: StabilizerCode) -> "CodeTensor":
        """Build with eagerly enumerated class listings."""
        tensor = cls(code)
        tensor.class_tables  # force materialization (and the cap check)
        return tensor

    @property
    def n_legs(self) -> int:
        return self.code.n

    @property
    def k_logical(self) -> int:
        return self.code.k

    @property
    def class_tables(self) -> dict[PauliString, frozenset[int]]:
        if self._classes is None:
            m = self.code.n - self.code.k
            if m > ENUMERATION_CAP:
                raise ValueError(
                    f"refusing to enumerate 2^{m} strings per class "
                    f"(cap is 2^{ENUMERATION_CAP})"
                )
            self._classes = {
                label: _coset_keys(self.code, label)
                for label in class_labels(self.code.k)
            }
        return self._classes

    def digit_tables(self) -> dict[PauliString, np.ndarray]:
        """Class listings as (entries, n) uint8 arrays of per-leg codes.

        Rows are sorted by key, so the tables are deterministic.
        """
        out = {}
        for label, keys in self.class_tables.items():
            table = np.empty((len(keys), self.code.n), dtype=np.uint8)
            for row, key in enumerate(sorted(keys)):
                for i in range(self.code.n):
                    table[row, i] = (key >> (2 * i)) & 3
            out[label] = table
        return out

    def entry(self, label: PauliString, indices: Sequence[int] | int) -> int:
        """The 0/1 tensor entry for a class label and an index string."""
        if isinstance(indices, int):
            key = indices
        else:
            codes = list(indices)
            if len(codes) != self.code.n:
                raise ValueError("index string length must equal n")
            key = PauliString.from_codes(codes).key()
        table = self.class_tables.get(label)
        if table is None:
            raise ValueError(f"unknown class label {label}")
        return 1 if key in table else 0

    def contract(self, other: "CodeTensor", binding: LegBinding) -> "CodeTensor":
        return contract(self, other, binding)

    def self_check(self, *, pair_samples: int = 4096, seed: int = 7) -> "CheckReport":
        """Verify the indicator-tensor laws on the enumerated classes.

        Checks 0/1-ness via exact class sizes and disjointness, closure of
        the identity class, the coset rule class(L) * class(L') within
        class(LL'), and per-member syndrome/class consistency.  Product
        checks sample deterministically once classes exceed ``pair_samples``
        pairs.
        """
        violations: list[str] = []
        code = self.code
        tables = self.class_tables
        expected = 1 << (code.n - code.k)
        seen: dict[int, PauliString] = {}
        for label, keys in tables.items():
            if len(keys) != expected:
                violations.append(
                    f"class {label or 'I'} has {len(keys)} strings, expected {expected}"
                )
            for key in keys:
                if key in seen:
                    violations.append(
                        f"string {key} appears in classes {seen[key]} and {label}"
                    )
                seen[key] = label
        for label, keys in tables.items():
            for key in keys:
                op = PauliString.from_key(code.n, key)
                got = code.logical_class(op)
                if got != label:
                    violations.append(
                        f"string {op} listed under {label} but classifies as {got}"
                    )
                    break
        rng = random.Random(seed)
        for la, lb in [(a, b) for a in tables for b in tables]:
            target = tables.get(la * lb)
            if target is None:
                violations.append(f"missing product class {la * lb}")
                continue
            ka, kb = sorted(tables[la]), sorted(tables[lb])
            if len(ka) * len(kb) <= pair_samples:
                pairs = itertools.product(ka, kb)
            else:
                pairs = (
                    (rng.choice(ka), rng.choice(kb)) for _ in range(pair_samples)
                )
            for key_a, key_b in pairs:
                prod = (
                    PauliString.from_key(code.n, key_a)
                    * PauliString.from_key(code.n, key_b)
                ).key()
                if prod not in target:
                    violations.append(
                        f"product of {key_a} ({la}) and {key_b} ({lb}) "
                        f"escapes class {la * lb}"
                    )
                    break
        return CheckReport(passed=not violations, violations=tuple(violations))


@dataclass(frozen=True, slots=True)
class CheckReport:
    passed: bool
    violations: tuple[str, ...] = field(default_factory=tuple)


def _coset_keys(code: StabilizerCode, label: PauliString) -> frozenset[int]:
    """Enumerate a logical class by a Gray-code walk over generator products."""
    rep = code.class_representative(label)
    gens = code.stabilizers
    current = rep
    keys = {current.key()}
    for step in range(1, 1 << len(gens)):
        flip = (step & -step).bit_length() - 1
        current = current * gens[flip]
        keys.add(current.key())
    return frozenset(keys)


def tensor_from_code(code: StabilizerCode) -> CodeTensor:
    """Module-level alias of :meth:`CodeTensor.from_code`."""
    return CodeTensor.from_code(code)


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------


def contract(
    a: CodeTensor,
    b: CodeTensor,
    binding: LegBinding,
    *,
    validate: bool = False,
) -> CodeTensor:
    """Contract two code tensors over the bound leg pairs.

    Requires at least one side to distinguish every error on its bound
    legs; when both do, ``a`` supplies the canonical generator form (a
    deterministic choice).  The result's legs are a's unbound legs in
    order, then b's; its logical qubits are a's then b's.  The returned
    tensor carries the contracted StabilizerCode and enumerates its class
    listings lazily.
    """
    code_a, code_b = a.code, b.code
    _check_binding(binding, code_a.n, code_b.n)
    if code_a.distinguishes_errors_on(binding.left):
        canon_is_a = True
    elif code_b.distinguishes_errors_on(binding.right):
        canon_is_a = False
    else:
        raise ContractionPreconditionError(
            "neither code distinguishes all errors on its bound legs; "
            "the contraction is not a stabilizer-code tensor"
        )

    if canon_is_a:
        c_code, d_code = code_a, code_b
        c_bound, d_bound = binding.left, binding.right
    else:
        c_code, d_code = code_b, code_a
        c_bound, d_bound = binding.right, binding.left

    canon = c_code.canonicalized_on(c_bound)
    n_pairs = len(c_bound)
    pair_x = canon.stabilizers[0 : 2 * n_pairs : 2]
    pair_z = canon.stabilizers[1 : 2 * n_pairs : 2]

    def matching_product(codes: Sequence[int]) -> PauliString:
        """The unique canonical-pair product acting as ``codes`` on c's legs."""
        op = PauliString.identity(c_code.n)
        for i, g in enumerate(codes):
            if g in (1, 2):
                op = op * pair_x[i]
            if g in (2, 3):
                op = op * pair_z[i]
        return op

    a_unbound = [q for q in range(code_a.n) if q not in set(binding.left)]
    b_unbound = [q for q in range(code_b.n) if q not in set(binding.right)]
    drop_a, drop_b = sorted(binding.left), sorted(binding.right)

    def place(c_op: PauliString, d_op: PauliString) -> PauliString:
        """Assemble a contracted operator in the fixed output leg order."""
        if canon_is_a:
            return c_op.without(drop_a).concat(d_op.without(drop_b))
        return d_op.without(drop_a).concat(c_op.without(drop_b))

    id_c = PauliString.identity(c_code.n)
    id_d = PauliString.identity(d_code.n)

    def lift_d(op: PauliString) -> PauliString:
        """Lift a d-side operator by pairing it with its canonical match."""
        codes = [op.code_at(q) for q in d_bound]
        return place(matching_product(codes), op)

    def lift_c(op: PauliString) -> PauliString:
        """Lift a c-side operator after clearing its bound-leg action."""
        codes = [op.code_at(q) for q in c_bound]
        cleared = op * matching_product(codes)
        return place(cleared, id_d)

    stabilizers = [lift_d(s) for s in d_code.stabilizers]
    stabilizers += [lift_c(s) for s in canon.stabilizers[2 * n_pairs :]]
    pure_errors = [lift_d(e) for e in d_code.pure_errors]
    pure_errors += [lift_c(e) for e in canon.pure_errors[2 * n_pairs :]]

    if canon_is_a:
        logical_x = [lift_c(op) for op in canon.logical_x] + [
            lift_d(op) for op in d_code.logical_x
        ]
        logical_z = [lift_c(op) for op in canon.logical_z] + [
            lift_d(op) for op in d_code.logical_z
        ]
    else:
        logical_x = [lift_d(op) for op in d_code.logical_x] + [
            lift_c(op) for op in canon.logical_x
        ]
        logical_z = [lift_d(op) for op in d_code.logical_z] + [
            lift_c(op) for op in canon.logical_z
        ]

    new_code = StabilizerCode(
        n=code_a.n + code_b.n - 2 * n_pairs,
        k=code_a.k + code_b.k,
        stabilizers=tuple(stabilizers),
        logical_x=tuple(logical_x),
        logical_z=tuple(logical_z),
        pure_errors=tuple(pure_errors),
    )
    if validate:
        new_code.validate()
    return CodeTensor(new_code)


def _check_binding(binding: LegBinding, n_left: int, n_right: int) -> None:
    for q in binding.left:
        if not 0 <= q < n_left:
            raise ValueError(f"bound leg {q} out of range for the left tensor")
    for q in binding.right:
        if not 0 <= q < n_right:
            raise ValueError(f"bound leg {q} out of range for the right tensor")
