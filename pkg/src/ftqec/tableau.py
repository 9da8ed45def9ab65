"""Aaronson-Gottesman stabilizer tableau.

Used for reference runs (fixing the noiseless measurement record), exact
state checks on built circuits, and as an independent cross-check of the
vectorised Pauli-frame engine.  It is not on the Monte Carlo hot path.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliOperator


def _g(x1, z1, x2, z2):
    """Exponent of i picked up when multiplying single-qubit Paulis (vectorised)."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    out = np.zeros_like(x1)
    y = (x1 == 1) & (z1 == 1)
    xo = (x1 == 1) & (z1 == 0)
    zo = (x1 == 0) & (z1 == 1)
    out[y] = (z2 - x2)[y]
    out[xo] = (z2 * (2 * x2 - 1))[xo]
    out[zo] = (x2 * (1 - 2 * z2))[zo]
    return out


class TableauState:
    """2n generators (destabilisers then stabilisers) with sign bits."""

    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.r = np.zeros(2 * n + 1, dtype=np.uint8)
        for i in range(n):
            self.x[i, i] = 1
            self.z[n + i, i] = 1

    def copy(self) -> "TableauState":
        other = TableauState.__new__(TableauState)
        other.n = self.n
        other.x, other.z, other.r = self.x.copy(), self.z.copy(), self.r.copy()
        return other

    def _check(self, *qs: int) -> None:
        for q in qs:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for {self.n}-qubit tableau")

    # -- Clifford updates -------------------------------------------------
    def h(self, a: int) -> None:
        self._check(a)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def cnot(self, c: int, t: int) -> None:
        self._check(c, t)
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def swap(self, a: int, b: int) -> None:
        self._check(a, b)
        self.x[:, [a, b]] = self.x[:, [b, a]]
        self.z[:, [a, b]] = self.z[:, [b, a]]

    def apply_pauli(self, p: PauliOperator) -> None:
        """Conjugate the state by ``p`` (flip signs of anticommuting rows)."""
        if p.n != self.n:
            raise ValueError("Pauli size does not match the tableau")
        px = np.array(p.x_bits, dtype=np.uint8)
        pz = np.array(p.z_bits, dtype=np.uint8)
        anti = (self.x @ pz + self.z @ px) % 2
        self.r ^= anti.astype(np.uint8)

    # -- row algebra ------------------------------------------------------
    def _rowsum(self, h: int, i: int) -> None:
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(
            _g(self.x[i], self.z[i], self.x[h], self.z[h]).sum())
        self.r[h] = 0 if total % 4 == 0 else 1
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def is_random(self, a: int) -> bool:
        n = self.n
        return bool(self.x[n:2 * n, a].any())

    def measure_z(self, a: int, outcome_source: Callable[[], int] | None = None,
                  forced: int | None = None) -> tuple[int, bool]:
        """Measure Z on qubit ``a``; returns ``(bit, was_random)``.

        Random outcomes come from ``forced`` if given, else ``outcome_source``,
        else 0.
        """
        self._check(a)
        n = self.n
        hits = np.flatnonzero(self.x[n:2 * n, a])
        if hits.size:
            p = n + int(hits[0])
            for i in range(2 * n):
                if i != p and self.x[i, a]:
                    self._rowsum(i, p)
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            if forced is not None:
                bit = int(forced)
            elif outcome_source is not None:
                bit = int(outcome_source())
            else:
                bit = 0
            self.r[p] = bit
            return bit, True
        s = 2 * n
        self.x[s] = 0
        self.z[s] = 0
        self.r[s] = 0
        for i in range(n):
            if self.x[i, a]:
                self._rowsum(s, n + i)
        return int(self.r[s]), False

    def reset_z(self, a: int) -> None:
        bit, _ = self.measure_z(a)
        if bit:
            self.apply_pauli(PauliOperator.from_support("X", [a], self.n))

    def expectation(self, p: PauliOperator) -> int:
        """+1/-1 if ``p`` (Hermitian form) is in the stabiliser group up to sign, else 0."""
        n = self.n
        px = np.array(p.x_bits, dtype=np.uint8)
        pz = np.array(p.z_bits, dtype=np.uint8)
        anti_stab = (self.x[n:2 * n] @ pz + self.z[n:2 * n] @ px) % 2
        if anti_stab.any():
            return 0
        anti_destab = (self.x[:n] @ pz + self.z[:n] @ px) % 2
        s = 2 * n
        self.x[s] = 0
        self.z[s] = 0
        self.r[s] = 0
        for i in np.flatnonzero(anti_destab):
            self._rowsum(s, n + int(i))
        if not (np.array_equal(self.x[s], px) and np.array_equal(self.z[s], pz)):
            return 0
        # compare with the Hermitian form of p
        return -1 if self.r[s] else 1

    def stabilizers(self) -> list[PauliOperator]:
        n = self.n
        out = []
        for i in range(n, 2 * n):
            p = PauliOperator.from_bits(self.x[i], self.z[i])
            if self.r[i]:
                p = PauliOperator(n, p.x, p.z, p.phase + 2)
            out.append(p)
        return out


def apply_gate(state: TableauState, gate: Gate, rng: np.random.Generator | None = None,
               forced: int | None = None) -> int | None:
    """Apply one circuit operation; returns the bit for measurements."""
    k, t = gate.kind, gate.targets
    if k == "H":
        state.h(t[0])
    elif k == "CNOT":
        state.cnot(t[0], t[1])
    elif k == "SWAP":
        state.swap(t[0], t[1])
    elif k == "PrepZ":
        state.reset_z(t[0])
    elif k == "MeasZ":
        src = (lambda: int(rng.integers(2))) if rng is not None else None
        bit, _ = state.measure_z(t[0], src, forced)
        return bit
    else:  # pragma: no cover - Gate validates kinds
        raise ValueError(k)
    return None


def run_circuit(circuit: Circuit, rng: np.random.Generator | None = None,
                state: TableauState | None = None,
                faults: dict[int, PauliOperator] | None = None,
                forced: dict[str, int] | None = None,
                flips: set[int] | None = None) -> tuple[TableauState, dict[str, int], dict[str, bool]]:
    """Run ``circuit`` on a tableau.

    ``faults`` maps gate positions to Paulis applied right after that
    operation; ``flips`` lists measurement positions whose reported bit is
    inverted.  Random outcomes are drawn from ``rng``, taken from ``forced``
    (by label), or default to 0.  Returns the state, the measurement record
    and which measurements were random.
    """
    state = state or TableauState(circuit.n)
    record: dict[str, int] = {}
    random: dict[str, bool] = {}
    faults = faults or {}
    forced = forced or {}
    flips = flips or set()
    for i, g in enumerate(circuit.gates):
        if g.kind == "MeasZ":
            src = (lambda: int(rng.integers(2))) if rng is not None else None
            bit, was_random = state.measure_z(g.targets[0], src, forced.get(g.label))
            record[g.label] = bit ^ (1 if i in flips else 0)
            random[g.label] = was_random
        else:
            apply_gate(state, g)
        if i in faults:
            state.apply_pauli(faults[i])
    return state, record, random
