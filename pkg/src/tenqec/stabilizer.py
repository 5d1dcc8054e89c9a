"""Stabilizer codes: generators, logicals, pure errors, syndromes.

A code on n qubits with k logical qubits carries n-k stabilizer generators
S_i, logical representatives X_a / Z_a, and pure errors E_i satisfying
E_i S_j = (-1)^{delta_ij} S_j E_i.  Everything is phase-free: stabilizer
eigenvalues are taken as +1 and signs never enter the group algebra.

All qubit indices are 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .pauli import PauliString

ENUMERATION_CAP = 20  # largest n - k for which 2^(n-k) coset listings are allowed


class DependentGeneratorsError(ValueError):
    """The offered stabilizer set is not independent."""


# ---------------------------------------------------------------------------
# GF(2) linear algebra on bit-packed rows
# ---------------------------------------------------------------------------


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank of a bit-matrix whose rows are packed into integers."""
    basis: list[int] = []
    rank = 0
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
            rank += 1
    return rank


def gf2_row_space(rows: Iterable[int]) -> tuple[int, ...]:
    """Canonical (reduced row echelon) basis of the row space."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
    # reduce above pivots for a unique canonical form
    basis.sort(reverse=True)
    for i in range(len(basis)):
        pivot = 1 << (basis[i].bit_length() - 1)
        for j in range(i):
            if basis[j] & pivot:
                basis[j] ^= basis[i]
    return tuple(sorted(basis, reverse=True))


def _gf2_solve_particular(
    equations: list[tuple[int, int]], width: int, n_targets: int
) -> list[int]:
    """Solve ``A v = b_t`` over GF(2) for several right-hand sides at once.

    ``equations`` holds (row mask over ``width`` columns, packed RHS bits,
    bit t for target t).  Returns one particular solution per target with
    all free variables set to zero.  Raises if any target is inconsistent.
    """
    rows = [mask | (rhs << width) for mask, rhs in equations]
    pivots: list[tuple[int, int]] = []  # (pivot column, row value)
    for row in rows:
        for col, prow in pivots:
            if (row >> col) & 1:
                row ^= prow
        body = row & ((1 << width) - 1)
        if body:
            col = body.bit_length() - 1
            pivots.append((col, row))
        elif row >> width:
            raise DependentGeneratorsError(
                "singular system: stabilizer generators are dependent"
            )
    body_mask = (1 << width) - 1
    solutions: list[int] = []
    for t in range(n_targets):
        v = 0
        # A pivot is its row's highest set bit, so every other coefficient
        # of that row sits at a lower column; sweeping pivots in ascending
        # order therefore only reads already-fixed bits (free bits stay 0).
        for col, prow in sorted(pivots, key=lambda p: p[0]):
            rhs_bit = (prow >> (width + t)) & 1
            if ((prow & body_mask & v).bit_count() & 1) ^ rhs_bit:
                v |= 1 << col
        solutions.append(v)
    return solutions


# ---------------------------------------------------------------------------
# Syndromes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Syndrome:
    """Measurement pattern of the stabilizer generators.

    Bit i of ``bits`` is set exactly when generator S_i reads -1.
    """

    length: int
    bits: int

    def __post_init__(self) -> None:
        if self.length < 0 or self.bits >> self.length:
            raise ValueError("syndrome bits exceed length")

    @classmethod
    def trivial(cls, length: int) -> "Syndrome":
        return cls(length, 0)

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "Syndrome":
        bits = 0
        length = 0
        for s in signs:
            if s == -1:
                bits |= 1 << length
            elif s != 1:
                raise ValueError(f"syndrome signs must be +1/-1, got {s}")
            length += 1
        return cls(length, bits)

    @classmethod
    def from_text(cls, text: str) -> "Syndrome":
        """Parse '+-++...' with '-' marking a flipped generator."""
        try:
            return cls.from_signs(1 if c == "+" else -1 if c == "-" else None for c in text)
        except ValueError:
            raise ValueError(f"invalid syndrome text {text!r}") from None

    def signs(self) -> tuple[int, ...]:
        return tuple(-1 if (self.bits >> i) & 1 else 1 for i in range(self.length))

    def to_text(self) -> str:
        return "".join("-" if (self.bits >> i) & 1 else "+" for i in range(self.length))

    def is_trivial(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        return self.to_text()


# ---------------------------------------------------------------------------
# The code itself
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StabilizerCode:
    """An [[n, k]] stabilizer code with fixed operator representatives.

    Use :meth:`from_operators` (or the JSON loader) to build one with
    validation; the raw constructor trusts its inputs.
    """

    n: int
    k: int
    stabilizers: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]
    pure_errors: tuple[PauliString, ...]

    # -- construction ------------------------------------------------------

    @classmethod
    def from_operators(
        cls,
        stabilizers: Sequence[PauliString | str],
        logical_x: Sequence[PauliString | str] = (),
        logical_z: Sequence[PauliString | str] = (),
        *,
        n: int | None = None,
        pure_errors: Sequence[PauliString | str] | None = None,
        validate: bool = True,
    ) -> "StabilizerCode":
        """Assemble and check a code; pure errors are solved for if absent."""
        stabs = tuple(_as_pauli(p) for p in stabilizers)
        lx = tuple(_as_pauli(p) for p in logical_x)
        lz = tuple(_as_pauli(p) for p in logical_z)
        ops = stabs + lx + lz
        if n is None:
            if not ops:
                raise ValueError("cannot infer n from an empty operator list")
            n = ops[0].n
        if len(lx) != len(lz):
            raise ValueError("logical_x and logical_z must pair up")
        k = len(lx)
        if len(stabs) != n - k:
            raise ValueError(
                f"need n-k={n - k} stabilizers for n={n}, k={k}; got {len(stabs)}"
            )
        if pure_errors is None:
            pure = tuple(solve_pure_errors(stabs, lx, lz, n=n))
        else:
            pure = tuple(_as_pauli(p) for p in pure_errors)
        code = cls(n, k, stabs, lx, lz, pure)
        if validate:
            code.validate()
        return code

    def validate(self) -> None:
        """Check every construction invariant; raise ValueError on failure."""
        base = self.stabilizers + self.logical_x + self.logical_z + self.pure_errors
        for op in base:
            if op.n != self.n:
                raise ValueError(f"operator {op} has wrong length for n={self.n}")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise ValueError("logical operator count must equal k")
        if len(self.stabilizers) != self.n - self.k:
            raise ValueError("stabilizer count must equal n-k")
        if len(self.pure_errors) != self.n - self.k:
            raise ValueError("pure error count must equal n-k")
        for i, a in enumerate(self.stabilizers):
            for b in self.stabilizers[i + 1 :]:
                if a.anticommutes(b):
                    raise ValueError(f"stabilizers {a} and {b} anticommute")
        rows = [_symplectic_row(s) for s in self.stabilizers]
        if gf2_rank(rows) != len(rows):
            raise DependentGeneratorsError("stabilizer generators are dependent")
        for a in self.logical_x + self.logical_z:
            for s in self.stabilizers:
                if a.anticommutes(s):
                    raise ValueError(f"logical {a} anticommutes with stabilizer {s}")
        for a_idx, a in enumerate(self.logical_x):
            for b_idx, b in enumerate(self.logical_z):
                want = a_idx == b_idx
                if a.anticommutes(b) != want:
                    raise ValueError(
                        f"logical pair relation broken for X_{a_idx}, Z_{b_idx}"
                    )
        for i, e in enumerate(self.pure_errors):
            for j, s in enumerate(self.stabilizers):
                want = i == j
                if e.anticommutes(s) != want:
                    raise ValueError(f"pure error {i} has wrong pattern at generator {j}")

    # -- basic queries -----------------------------------------------------

    def syndrome(self, error: PauliString) -> Syndrome:
        """Anticommutation pattern of ``error`` against the generators."""
        bits = 0
        for i, s in enumerate(self.stabilizers):
            if error.anticommutes(s):
                bits |= 1 << i
        return Syndrome(len(self.stabilizers), bits)

    def pure_error(self, syndrome: Syndrome) -> PauliString:
        """The canonical error with the given syndrome.

        This is the product of the pure-error generators selected by the
        flipped syndrome bits, a right inverse of :meth:`syndrome`.
        """
        if syndrome.length != len(self.stabilizers):
            raise ValueError("syndrome length does not match generator count")
        op = PauliString.identity(self.n)
        bits = syndrome.bits
        while bits:
            i = (bits & -bits).bit_length() - 1
            op = op * self.pure_errors[i]
            bits &= bits - 1
        return op

    def logical_class(self, op: PauliString) -> PauliString | None:
        """The k-qubit class label of ``op``, or None outside the normalizer.

        Label qubit a carries an X component when ``op`` anticommutes with
        Z_a and a Z component when it anticommutes with X_a, so the label of
        a logical representative is itself.
        """
        for s in self.stabilizers:
            if op.anticommutes(s):
                return None
        x = z = 0
        for a in range(self.k):
            if op.anticommutes(self.logical_z[a]):
                x |= 1 << a
            if op.anticommutes(self.logical_x[a]):
                z |= 1 << a
        return PauliString(self.k, x, z)

    def class_representative(self, label: PauliString) -> PauliString:
        """A fixed coset representative for a logical class label."""
        if label.n != self.k:
            raise ValueError("class label length must equal k")
        op = PauliString.identity(self.n)
        for a in range(self.k):
            if (label.x >> a) & 1:
                op = op * self.logical_x[a]
            if (label.z >> a) & 1:
                op = op * self.logical_z[a]
        return op

    def distance(self, max_weight: int) -> int | None:
        """Exhaustive code distance up to ``max_weight``; None if larger.

        Searches every Pauli of weight 1..max_weight for a normalizer
        element with a non-identity logical class.
        """
        for w in range(1, max_weight + 1):
            for qubits in itertools.combinations(range(self.n), w):
                for codes in itertools.product((1, 2, 3), repeat=w):
                    op = PauliString.identity(self.n)
                    for q, c in zip(qubits, codes):
                        op = op * PauliString.single(self.n, q, c)
                    label = self.logical_class(op)
                    if label is not None and not label.is_identity():
                        return w
        return None

    # -- leg analysis for contraction ---------------------------------------

    def distinguishes_errors_on(self, legs: Sequence[int]) -> bool:
        """True iff every nontrivial Pauli on ``legs`` has a distinct syndrome.

        Equivalently each of the 4^len(legs)-1 nontrivial strings supported
        on the listed legs anticommutes with at least one generator, since
        the syndrome map is a group homomorphism.
        """
        legs = list(legs)
        if len(set(legs)) != len(legs):
            raise ValueError("legs must be distinct")
        for codes in itertools.product(range(4), repeat=len(legs)):
            if not any(codes):
                continue
            op = PauliString.identity(self.n)
            for q, c in zip(legs, codes):
                if c:
                    op = op * PauliString.single(self.n, q, c)
            if self.syndrome(op).is_trivial():
                return False
        return True

    def canonicalized_on(self, legs: Sequence[int]) -> "StabilizerCode":
        """Re-derive generators in leg-canonical form.

        After the rewrite, generator 2j acts as a single X on legs[j],
        generator 2j+1 as a single Z there, both trivially on the other
        listed legs; all later generators act trivially on every listed
        leg.  The group is unchanged: the rewrite only swaps generators and
        multiplies them together.  Logical representatives are untouched
        and pure errors are re-solved for the new generator order.
        """
        legs = list(legs)
        if not legs:
            return self
        if not self.distinguishes_errors_on(legs):
            raise ValueError(
                f"code cannot distinguish all errors on legs {legs}; "
                "canonical form does not exist"
            )
        gens = list(self.stabilizers)
        t = 0
        for leg in legs:
            # Probing with Z then X pins an X-type then a Z-type generator.
            for probe_code in (3, 1):
                probe = PauliString.single(self.n, leg, probe_code)
                pick = next(
                    (i for i in range(t, len(gens)) if gens[i].anticommutes(probe)),
                    None,
                )
                if pick is None:  # ruled out by the distinguishability check
                    raise AssertionError("canonicalization ran out of generators")
                gens[t], gens[pick] = gens[pick], gens[t]
                for i in range(len(gens)):
                    if i != t and gens[i].anticommutes(probe):
                        gens[i] = gens[i] * gens[t]
                t += 1
        pure = tuple(solve_pure_errors(gens, self.logical_x, self.logical_z, n=self.n))
        return replace(self, stabilizers=tuple(gens), pure_errors=pure)

    # -- reshaping ----------------------------------------------------------

    def permuted(self, order: Sequence[int]) -> "StabilizerCode":
        """Relabel qubits so that new qubit i is old qubit ``order[i]``."""
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of range(n)")
        move = lambda op: op.restrict(order)
        return StabilizerCode(
            self.n,
            self.k,
            tuple(move(s) for s in self.stabilizers),
            tuple(move(a) for a in self.logical_x),
            tuple(move(a) for a in self.logical_z),
            tuple(move(e) for e in self.pure_errors),
        )


def _as_pauli(op: PauliString | str) -> PauliString:
    return PauliString.from_text(op) if isinstance(op, str) else op


def _symplectic_row(op: PauliString) -> int:
    """Bit row whose dot with v = (vx | vz << n) is the symplectic product."""
    return op.z | (op.x << op.n)


# ---------------------------------------------------------------------------
# Pure-error solving
# ---------------------------------------------------------------------------


def solve_pure_errors(
    stabilizers: Sequence[PauliString],
    logical_x: Sequence[PauliString] = (),
    logical_z: Sequence[PauliString] = (),
    *,
    n: int | None = None,
) -> list[PauliString]:
    """Find pure errors E_i with E_i S_j anticommuting exactly when i == j.

    Solves one GF(2) linear system with n-k right-hand sides; the extra
    rows force each E_i to commute with every logical representative, and a
    final symplectic sweep makes the E_i mutually commute, so the result is
    canonical for a given generator order.  Raises DependentGeneratorsError
    when the generators are dependent (the system is singular).
    """
    stabilizers = list(stabilizers)
    if not stabilizers:
        return []
    if n is None:
        n = stabilizers[0].n
    width = 2 * n
    m = len(stabilizers)
    equations: list[tuple[int, int]] = []
    for i, s in enumerate(stabilizers):
        equations.append((_symplectic_row(s), 1 << i))
    for op in list(logical_x) + list(logical_z):
        equations.append((_symplectic_row(op), 0))
    solutions = _gf2_solve_particular(equations, width, m)
    mask = (1 << n) - 1
    errors = [PauliString(n, v & mask, v >> n) for v in solutions]
    # Make the pure errors mutually commute; multiplying E_j by S_i leaves
    # every other required relation intact.
    for i in range(m):
        for j in range(i + 1, m):
            if errors[j].anticommutes(errors[i]):
                errors[j] = errors[j] * stabilizers[i]
    return errors


def spans_same_group(
    a: Sequence[PauliString], b: Sequence[PauliString]
) -> bool:
    """True iff two generator lists generate the same phase-free group."""
    rows_a = [_symplectic_row(p) for p in a]
    rows_b = [_symplectic_row(p) for p in b]
    return gf2_row_space(rows_a) == gf2_row_space(rows_b)


# ---------------------------------------------------------------------------
# Built-in codes
# ---------------------------------------------------------------------------

# Generator table for the [[6, 1, 3]] code and its ancilla-extended state.
# Column 0 is the logical reference qubit; columns 1-6 are the physical
# qubits of the six-qubit code.
_TABLE_ROWS: dict[str, str] = {
    "S1": "IZIZIII",
    "S2": "IXZYYXI",
    "S3": "IXXXXZI",
    "S4": "IIZZXIX",
    "S5": "IXYXYIZ",
    "X1": "XXZXZII",
    "Z1": "ZXYYXII",
}


def six_qubit_code() -> StabilizerCode:
    """The [[6, 1, 3]] code whose indicator tensor seeds the network center."""
    stabs = [_TABLE_ROWS[f"S{i}"][1:] for i in range(1, 6)]
    return StabilizerCode.from_operators(
        stabs,
        logical_x=[_TABLE_ROWS["X1"][1:]],
        logical_z=[_TABLE_ROWS["Z1"][1:]],
    )


def seven_qubit_state() -> StabilizerCode:
    """The [[7, 0]] stabilizer state obtained by adding the reference qubit.

    Its seven generators are the full rows of the generator table including
    the reference column, so the state's indicator tensor has one class of
    128 strings.
    """
    rows = [_TABLE_ROWS[name] for name in ("S1", "S2", "S3", "S4", "S5", "X1", "Z1")]
    return StabilizerCode.from_operators(rows)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def code_to_json_dict(code: StabilizerCode) -> dict:
    """Plain-text JSON description; Pauli operators as I/X/Y/Z strings."""
    return {
        "n": code.n,
        "k": code.k,
        "stabilizers": [s.to_text() for s in code.stabilizers],
        "logical_x": [a.to_text() for a in code.logical_x],
        "logical_z": [a.to_text() for a in code.logical_z],
        "pure_errors": [e.to_text() for e in code.pure_errors],
    }


def code_from_json_dict(data: dict, *, validate: bool = True) -> StabilizerCode:
    """Load a code description; pure errors are optional and re-solved."""
    try:
        n = int(data["n"])
        stabilizers = list(data["stabilizers"])
        logical_x = list(data.get("logical_x", []))
        logical_z = list(data.get("logical_z", []))
    except KeyError as exc:
        raise ValueError(f"code description missing field {exc.args[0]!r}") from exc
    pure = data.get("pure_errors")
    code = StabilizerCode.from_operators(
        stabilizers,
        logical_x=logical_x,
        logical_z=logical_z,
        n=n,
        pure_errors=pure,
        validate=validate,
    )
    if int(data.get("k", code.k)) != code.k:
        raise ValueError("declared k does not match the operator lists")
    return code
