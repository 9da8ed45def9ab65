"""The [[7,1,3]] Steane code.

Qubits are 0-based in code (qubit ``j`` here is qubit ``j+1`` in the usual
1-based labelling).  Syndrome bit ``i`` is the outcome of the ``i``-th check
(row ``i`` of the Hamming matrix), and bit strings print with check 1 first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .pauli import PauliOperator

N = 7
HAMMING = np.array([
    [1, 1, 1, 1, 0, 0, 0],
    [0, 1, 1, 0, 1, 1, 0],
    [0, 0, 1, 1, 0, 1, 1],
], dtype=np.uint8)


def _row_mask(row) -> int:
    return sum(1 << j for j, b in enumerate(row) if b)


ROW_MASKS = tuple(_row_mask(r) for r in HAMMING)
LOGICAL_MASK = 0b1001001  # qubits 0, 3, 6


def bits_to_str(value: int, width: int) -> str:
    """Bit ``i`` printed at position ``i`` (so check 1 / qubit 1 comes first)."""
    return "".join("1" if value >> i & 1 else "0" for i in range(width))


def str_to_bits(s: str) -> int:
    s = s.replace(" ", "")
    if set(s) - {"0", "1"}:
        raise ValueError(f"not a bit string: {s!r}")
    return sum(1 << i for i, c in enumerate(s) if c == "1")


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def syndrome_bits(mask: int) -> int:
    """3-bit syndrome of a 7-bit error pattern against the Hamming rows."""
    return sum(_parity(mask & r) << i for i, r in enumerate(ROW_MASKS))


@dataclass(frozen=True)
class Syndrome:
    s_x: int  # outcomes of the X-type checks (see Z errors)
    s_z: int  # outcomes of the Z-type checks (see X errors)

    def __str__(self) -> str:
        return f"{bits_to_str(self.s_x, 3)}/{bits_to_str(self.s_z, 3)}"


@dataclass(frozen=True)
class CodeDefinition:
    n: int = N
    k: int = 1
    d: int = 3
    h_x: np.ndarray = field(default_factory=lambda: HAMMING.copy(), compare=False)
    h_z: np.ndarray = field(default_factory=lambda: HAMMING.copy(), compare=False)

    @property
    def x_stabilizers(self) -> list[PauliOperator]:
        return [PauliOperator(N, m, 0) for m in ROW_MASKS]

    @property
    def z_stabilizers(self) -> list[PauliOperator]:
        return [PauliOperator(N, 0, m) for m in ROW_MASKS]

    @property
    def stabilizers(self) -> list[PauliOperator]:
        return self.x_stabilizers + self.z_stabilizers

    @property
    def logical_x(self) -> PauliOperator:
        return PauliOperator(N, LOGICAL_MASK, 0)

    @property
    def logical_z(self) -> PauliOperator:
        return PauliOperator(N, 0, LOGICAL_MASK)


STEANE = CodeDefinition()


def gf2_rank(m: np.ndarray) -> int:
    a = np.array(m, dtype=np.uint8) % 2
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r, c]), None)
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
    return rank


# -- syndromes and the standard table ----------------------------------------------

def syndrome_of(error: PauliOperator) -> Syndrome:
    if error.n != N:
        raise ValueError("Steane syndromes need a 7-qubit Pauli")
    # X checks anticommute with the Z part and vice versa
    return Syndrome(syndrome_bits(error.z), syndrome_bits(error.x))


def syndrome_from_bitstring(b, basis: str = "Z") -> str:
    """Parity checks of a transversal readout string, e.g. ``"0100000" -> "110"``."""
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    vec = np.array([int(c) for c in b] if isinstance(b, str) else list(b), dtype=np.uint8)
    if vec.shape != (N,):
        raise ValueError("need a 7-bit string")
    h = STEANE.h_z if basis == "Z" else STEANE.h_x
    return "".join(str(v) for v in (h @ vec) % 2)


@lru_cache(maxsize=None)
def _lut() -> dict[int, int]:
    table = {0: 0}
    for q in range(N):
        table[syndrome_bits(1 << q)] = 1 << q
    return table


LOOKUP = _lut()
# array form for vectorised decoding: syndrome -> correction mask
LOOKUP_ARRAY = np.array([LOOKUP[s] for s in range(8)], dtype=np.int64)


def lookup_table() -> dict[str, int]:
    """Syndrome string -> 1-based qubit to flip (0 for no correction)."""
    return {bits_to_str(s, 3): (m.bit_length() if m else 0) for s, m in sorted(LOOKUP.items())}


def recovery_for(syn: Syndrome) -> PauliOperator:
    """Table-lookup recovery: X from the Z-check syndrome, Z from the X-check syndrome."""
    return PauliOperator(N, LOOKUP[syn.s_z], LOOKUP[syn.s_x])


# -- stabilizer equivalence ---------------------------------------------------

@lru_cache(maxsize=None)
def _span(gens: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for coeffs in product((0, 1), repeat=len(gens)):
        v = 0
        for c, g in zip(coeffs, gens):
            if c:
                v ^= g
        out.append(v)
    return tuple(out)


STABILIZER_SPAN = _span(ROW_MASKS)  # 8 elements of the X (or Z) check span


def _lex_key(x: int, z: int) -> tuple:
    return tuple((x >> j & 1) for j in range(N)) + tuple((z >> j & 1) for j in range(N))


def reduce_min_weight(error: PauliOperator) -> PauliOperator:
    """Minimum-weight representative of ``error`` times the stabilizer group.

    Ties go to the lexicographically smallest ``(x_bits, z_bits)``.  Signs are
    dropped.
    """
    if error.n != N:
        raise ValueError("need a 7-qubit Pauli")
    best = None
    for sx in STABILIZER_SPAN:
        x = error.x ^ sx
        for sz in STABILIZER_SPAN:
            z = error.z ^ sz
            key = (bin(x | z).count("1"), _lex_key(x, z))
            if best is None or key < best[0]:
                best = (key, x, z)
    _, x, z = best
    return PauliOperator(N, x, z).unsigned()


@lru_cache(maxsize=None)
def _coset_min_weight(mask: int, with_logical: bool) -> int:
    gens = ROW_MASKS + ((LOGICAL_MASK,) if with_logical else ())
    return min(bin(mask ^ s).count("1") for s in _span(gens))


def reduced_x_weight(error: PauliOperator, with_logical: bool = False) -> int:
    return _coset_min_weight(error.x, with_logical)


def reduced_z_weight(error: PauliOperator, with_logical: bool = False) -> int:
    return _coset_min_weight(error.z, with_logical)


def is_harmful(error: PauliOperator) -> bool:
    """Either CSS part needs two or more flips after stabilizer reduction."""
    return reduced_x_weight(error) >= 2 or reduced_z_weight(error) >= 2


def is_harmful_for_zero_L(error: PauliOperator) -> bool:
    """A perfect round of correction would leave a logical X on |0>_L.

    Only the X part matters (Z errors are harmless on |0>_L); the X part of a
    Y counts.  Equivalent to the X part having stabilizer-reduced weight >= 2.
    """
    x = error.x
    return _parity((x ^ LOOKUP[syndrome_bits(x)]) & LOGICAL_MASK) == 1


def is_harmful_for_plus_L(error: PauliOperator) -> bool:
    z = error.z
    return _parity((z ^ LOOKUP[syndrome_bits(z)]) & LOGICAL_MASK) == 1


def ideal_decode(error: PauliOperator) -> PauliOperator:
    """Residual after one perfect round of table-lookup correction."""
    r = recovery_for(syndrome_of(error))
    return reduce_min_weight(r * error)


def is_estimated_logical_failure(r_dot_e: PauliOperator) -> bool:
    return _parity(r_dot_e.x & LOGICAL_MASK) == 1


def is_true_logical_failure(r_dot_e: PauliOperator) -> bool:
    return is_estimated_logical_failure(ideal_decode(r_dot_e))


# -- vectorised forms used by the Monte Carlo protocols ---------------------------

_PARITY7 = np.array([_parity(v) for v in range(1 << N)], dtype=bool)
_SYN7 = np.array([syndrome_bits(v) for v in range(1 << N)], dtype=np.int64)
_TRUE7 = np.array([_parity((v ^ LOOKUP[syndrome_bits(v)]) & LOGICAL_MASK) for v in range(1 << N)],
                  dtype=bool)


def syndromes(masks: np.ndarray) -> np.ndarray:
    return _SYN7[masks]


def estimated_failures(x_masks: np.ndarray) -> np.ndarray:
    """Residual X part anticommutes with the logical Z (per shot)."""
    return _PARITY7[x_masks & LOGICAL_MASK]


def true_failures(x_masks: np.ndarray) -> np.ndarray:
    """Residual X part still carries a logical X after ideal decoding."""
    return _TRUE7[x_masks]


def bitstring_syndromes(bits: np.ndarray) -> np.ndarray:
    """Rows of 7 readout bits (shots x 7, bool) -> 3-bit syndrome integers."""
    masks = (bits.astype(np.int64) << np.arange(N)).sum(axis=1)
    return _SYN7[masks]
