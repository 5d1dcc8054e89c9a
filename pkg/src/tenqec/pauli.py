"""Phase-free multi-qubit Pauli operators in bit-packed symplectic form.

Single-qubit operators are numbered 0, 1, 2, 3 for I, X, Y, Z.  An n-qubit
operator is stored as a pair of integers (x, z) whose bit i describes qubit
i: X iff bit i of x is set, Z iff bit i of z is set, and Y iff both are.
Multiplication is a pair of word-parallel XORs and commutation is a parity
of two AND/popcount terms, so strings with thousands of qubits stay cheap.
Index strings (tuples of 0..3) and text like "XZYYXI" are views of the same
data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

PAULI_CHARS = "IXYZ"

_CHAR_TO_CODE = {c: i for i, c in enumerate(PAULI_CHARS)}

# Phase-free single-qubit products: PAULI_PRODUCT[a][b] = code of sigma^a sigma^b.
PAULI_PRODUCT = (
    (0, 1, 2, 3),
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 1, 0),
)


def _bits_to_code(x: int, z: int) -> int:
    """Map one qubit's (x, z) bit pair to its 0..3 code."""
    return ((x ^ z) & 1) | ((z & 1) << 1)


def _code_to_bits(code: int) -> tuple[int, int]:
    """Map a 0..3 code to the (x, z) bit pair of that qubit."""
    low = code & 1
    high = code >> 1
    return low ^ high, high


@dataclass(frozen=True, slots=True)
class PauliString:
    """A phase-free Pauli operator on ``n`` qubits.

    Immutable and hashable; multiplication ignores phases entirely, so the
    group is (Z_2 x Z_2)^n and every element is its own inverse.
    """

    n: int
    x: int
    z: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("qubit count must be nonnegative")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("x/z bits set beyond the qubit count")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse text like ``"XZYYXI"``; character i acts on qubit i."""
        try:
            codes = [_CHAR_TO_CODE[c] for c in text.upper()]
        except KeyError as exc:
            raise ValueError(f"invalid Pauli character {exc.args[0]!r}") from exc
        return cls.from_codes(codes)

    @classmethod
    def from_codes(cls, codes: Iterable[int]) -> "PauliString":
        """Build from an index string, a sequence of codes in 0..3."""
        x = z = 0
        n = 0
        for code in codes:
            if not 0 <= code <= 3:
                raise ValueError(f"invalid Pauli code {code}")
            xb, zb = _code_to_bits(code)
            x |= xb << n
            z |= zb << n
            n += 1
        return cls(n, x, z)

    @classmethod
    def single(cls, n: int, qubit: int, code: int | str) -> "PauliString":
        """A single-qubit operator embedded in ``n`` qubits."""
        if isinstance(code, str):
            code = _CHAR_TO_CODE[code.upper()]
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        if not 0 <= code <= 3:
            raise ValueError(f"invalid Pauli code {code}")
        xb, zb = _code_to_bits(code)
        return cls(n, xb << qubit, zb << qubit)

    @classmethod
    def from_key(cls, n: int, key: int) -> "PauliString":
        """Inverse of :meth:`key`: decode a base-4 integer index string."""
        if key < 0 or key >> (2 * n):
            raise ValueError(f"key {key} out of range for n={n}")
        return cls.from_codes((key >> (2 * i)) & 3 for i in range(n))

    # -- views -------------------------------------------------------------

    def code_at(self, qubit: int) -> int:
        """The 0..3 code acting on one qubit."""
        if not 0 <= qubit < self.n:
            raise ValueError(f"qubit {qubit} out of range for n={self.n}")
        return _bits_to_code(self.x >> qubit, self.z >> qubit)

    def codes(self) -> tuple[int, ...]:
        """The index-string view, one 0..3 code per qubit."""
        return tuple(_bits_to_code(self.x >> i, self.z >> i) for i in range(self.n))

    def key(self) -> int:
        """The index string packed as a base-4 integer, qubit i in digit i."""
        k = 0
        for i, code in enumerate(self.codes()):
            k |= code << (2 * i)
        return k

    def to_text(self) -> str:
        return "".join(PAULI_CHARS[c] for c in self.codes())

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"PauliString({self.to_text()!r})"

    # -- group operations --------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        """Phase-free product: component-wise XOR of both bit vectors."""
        if not isinstance(other, PauliString):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} != {other.n}")
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "PauliString") -> bool:
        """True iff the symplectic inner product is even."""
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} != {other.n}")
        parity = ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) & 1
        return parity == 0

    def anticommutes(self, other: "PauliString") -> bool:
        return not self.commutes(other)

    def weight(self) -> int:
        """Number of qubits acted on non-trivially."""
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    # -- reshaping ---------------------------------------------------------

    def restrict(self, qubits: Sequence[int]) -> "PauliString":
        """The sub-operator on the listed qubits, in the listed order.

        The qubit indices must be valid and distinct.  Passing a permutation
        of ``range(n)`` relabels the qubits.
        """
        if len(set(qubits)) != len(qubits):
            raise ValueError("restrict requires distinct qubit indices")
        x = z = 0
        for pos, q in enumerate(qubits):
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range for n={self.n}")
            x |= ((self.x >> q) & 1) << pos
            z |= ((self.z >> q) & 1) << pos
        return PauliString(len(qubits), x, z)

    def without(self, qubits: Sequence[int]) -> "PauliString":
        """Drop the listed qubits, keeping the rest in their original order.

        Equivalent to ``restrict`` on the complement but O(len(qubits))
        big-integer operations instead of O(n).
        """
        x, z, n = self.x, self.z, self.n
        for q in sorted(set(qubits), reverse=True):
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range for n={self.n}")
            low = (1 << q) - 1
            x = (x & low) | ((x >> (q + 1)) << q)
            z = (z & low) | ((z >> (q + 1)) << q)
            n -= 1
        return PauliString(n, x, z)

    def concat(self, other: "PauliString") -> "PauliString":
        """Juxtapose two operators; ``other`` lands on the higher qubits."""
        return PauliString(
            self.n + other.n,
            self.x | (other.x << self.n),
            self.z | (other.z << self.n),
        )
