"""Pauli strings over n qubits, stored as integer bitmasks.

Bit ``j`` of ``x``/``z`` refers to qubit ``j`` (0-based).  The operator is

    i**phase * prod_j X_j**x_j Z_j**z_j

so a ``Y`` on one qubit is ``x=z=1`` with one extra factor of ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

_SIGNS = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0  # power of i in front of the X^x Z^z product

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError(f"Pauli bits exceed {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse ``"XIZY"``, ``"-X-Z"`` or ``"+iXY"``.

        ``-`` and ``_`` inside the string (after the sign prefix) mean identity.
        """
        s = label.strip()
        sign = 0
        for prefix, k in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2), ("i", 1)):
            if s.startswith(prefix) and len(s) > len(prefix) and s[len(prefix)] in "IXYZ":
                sign = k
                s = s[len(prefix):]
                break
        x = z = 0
        ys = 0
        for j, c in enumerate(s):
            if c in "I-_":
                continue
            if c == "X":
                x |= 1 << j
            elif c == "Z":
                z |= 1 << j
            elif c == "Y":
                x |= 1 << j
                z |= 1 << j
                ys += 1
            else:
                raise ValueError(f"bad Pauli character {c!r} in {label!r}")
        return cls(len(s), x, z, sign + ys)

    @classmethod
    def from_support(cls, kind: str, qubits: Iterable[int], n: int) -> "PauliOperator":
        """Single-letter Pauli ``kind`` on each qubit in ``qubits``."""
        mask = 0
        count = 0
        for q in qubits:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            mask |= 1 << q
            count += 1
        if kind == "X":
            return cls(n, mask, 0)
        if kind == "Z":
            return cls(n, 0, mask)
        if kind == "Y":
            return cls(n, mask, mask, count)
        raise ValueError(f"unknown Pauli kind {kind!r}")

    @classmethod
    def from_bits(cls, x_bits: Sequence[int], z_bits: Sequence[int]) -> "PauliOperator":
        if len(x_bits) != len(z_bits):
            raise ValueError("x and z bit vectors differ in length")
        x = sum(1 << j for j, b in enumerate(x_bits) if b)
        z = sum(1 << j for j, b in enumerate(z_bits) if b)
        return cls(len(x_bits), x, z, _popcount(x & z))

    # -- algebra ------------------------------------------------------------
    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        # moving X^x2 left through Z^z1 picks up (-1)^{z1.x2}
        k = self.phase + other.phase + 2 * _popcount(self.z & other.x)
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z, k)

    def commutes(self, other: "PauliOperator") -> bool:
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        return (_popcount(self.x & other.z) + _popcount(self.z & other.x)) % 2 == 0

    def equal_up_to_sign(self, other: "PauliOperator") -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    def unsigned(self) -> "PauliOperator":
        """Same Pauli letters with a +1 sign (Hermitian form)."""
        return PauliOperator(self.n, self.x, self.z, _popcount(self.x & self.z))

    @property
    def sign(self) -> complex:
        """Coefficient in front of the letter string (Y counted as one letter)."""
        k = (self.phase - _popcount(self.x & self.z)) % 4
        return (1, 1j, -1, -1j)[k]

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> list[int]:
        m = self.x | self.z
        return [j for j in range(self.n) if m >> j & 1]

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple(self.x >> j & 1 for j in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple(self.z >> j & 1 for j in range(self.n))

    def x_part(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, 0)

    def z_part(self) -> "PauliOperator":
        return PauliOperator(self.n, 0, self.z)

    def letter(self, q: int) -> str:
        return "IXZY"[(self.x >> q & 1) | (self.z >> q & 1) << 1]

    def restrict(self, qubits: Sequence[int]) -> "PauliOperator":
        """Sub-Pauli on ``qubits`` (in the given order); sign dropped."""
        x = z = 0
        for j, q in enumerate(qubits):
            x |= (self.x >> q & 1) << j
            z |= (self.z >> q & 1) << j
        return PauliOperator(len(qubits), x, z, _popcount(x & z))

    def embed(self, qubits: Sequence[int], n: int) -> "PauliOperator":
        """Place this Pauli on ``qubits`` of a larger ``n``-qubit register."""
        if len(qubits) != self.n:
            raise ValueError("need one target qubit per factor")
        x = z = 0
        for j, q in enumerate(qubits):
            x |= (self.x >> j & 1) << q
            z |= (self.z >> j & 1) << q
        return PauliOperator(n, x, z, self.phase)

    def to_label(self, identity: str = "I", sign: bool = False) -> str:
        body = "".join(self.letter(q) for q in range(self.n)).replace("I", identity)
        if not sign:
            return body
        k = (self.phase - _popcount(self.x & self.z)) % 4
        return _SIGNS[k] + body

    def __str__(self) -> str:
        return self.to_label(sign=True)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """0 if ``p`` and ``q`` commute, 1 otherwise."""
    return 0 if p.commutes(q) else 1


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return p.commutes(q)


def single_qubit_paulis() -> list[str]:
    return ["X", "Y", "Z"]


def two_qubit_paulis() -> list[str]:
    """The 15 non-identity two-qubit Pauli labels, ``"IX"`` ... ``"ZZ"``."""
    return [a + b for a in "IXYZ" for b in "IXYZ" if a + b != "II"]
