"""Vectorised Pauli-frame simulation.

A batch holds one X bit and one Z bit per (qubit, shot).  The frame is the
Pauli by which each shot's state differs from a fixed noiseless reference
run, so every measured bit is ``reference_bit ^ flip``.  Resets and
measurements re-randomise the Z frame of the touched qubit (a gauge choice
that leaves the physical state unchanged), which makes the outcomes of
measurements that are random in the reference come out uniformly random.

Every operation accepts an optional boolean ``mask`` over shots; unmasked
shots are left untouched, which is how adaptive protocols skip sub-circuits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .noise import NoiseParams, inject_gate_noise, measurement_flips
from .pauli import PauliOperator


class FrameBatch:
    def __init__(self, n: int, shots: int, rng: np.random.Generator | None = None,
                 randomize: bool = True):
        self.n = n
        self.shots = shots
        self.rng = rng if rng is not None else np.random.default_rng()
        self.randomize = randomize
        self.x = np.zeros((n, shots), dtype=bool)
        self.z = np.zeros((n, shots), dtype=bool)
        self.all = np.ones(shots, dtype=bool)

    def _rand(self, mask: np.ndarray) -> np.ndarray:
        return self.rng.random(self.shots) < 0.5 if self.randomize else np.zeros(self.shots, bool)

    # -- gates ----------------------------------------------------------------
    def h(self, q: int, m: np.ndarray) -> None:
        t = (self.x[q] ^ self.z[q]) & m
        self.x[q] ^= t
        self.z[q] ^= t

    def cnot(self, c: int, t: int, m: np.ndarray) -> None:
        self.x[t] ^= self.x[c] & m
        self.z[c] ^= self.z[t] & m

    def swap(self, a: int, b: int, m: np.ndarray) -> None:
        for arr in (self.x, self.z):
            t = (arr[a] ^ arr[b]) & m
            arr[a] ^= t
            arr[b] ^= t

    def prep_z(self, q: int, m: np.ndarray) -> None:
        self.x[q] &= ~m
        if self.randomize:
            self.z[q] = np.where(m, self._rand(m), self.z[q])
        else:
            self.z[q] &= ~m

    def meas_z(self, q: int, m: np.ndarray) -> np.ndarray:
        flip = self.x[q] & m
        if self.randomize:
            self.z[q] = np.where(m, self._rand(m), self.z[q])
        return flip

    def apply_pauli(self, p: PauliOperator, m: np.ndarray) -> None:
        for q in range(p.n):
            if p.x >> q & 1:
                self.x[q] ^= m
            if p.z >> q & 1:
                self.z[q] ^= m

    def apply_x(self, qubits, m: np.ndarray) -> None:
        for q in qubits:
            self.x[q] ^= m

    # -- views ------------------------------------------------------------------
    def x_mask(self, qubits) -> np.ndarray:
        """Per-shot integer bitmask of the X frame on ``qubits`` (bit j = qubits[j])."""
        out = np.zeros(self.shots, dtype=np.int64)
        for j, q in enumerate(qubits):
            out |= self.x[q].astype(np.int64) << j
        return out

    def z_mask(self, qubits) -> np.ndarray:
        out = np.zeros(self.shots, dtype=np.int64)
        for j, q in enumerate(qubits):
            out |= self.z[q].astype(np.int64) << j
        return out


def run(batch: FrameBatch, circuit: Circuit, noise: NoiseParams | None = None,
        mask: np.ndarray | None = None) -> dict[str, np.ndarray]:
    """Push every shot in ``mask`` through ``circuit``; returns flip bits per label.

    Shots outside ``mask`` get all-zero flips and an unchanged frame.
    """
    m = batch.all if mask is None else mask
    active = np.flatnonzero(m)
    noisy = noise is not None and noise.p > 0 and active.size > 0
    flips: dict[str, np.ndarray] = {}
    for g in circuit.gates:
        k, t = g.kind, g.targets
        if k == "H":
            batch.h(t[0], m)
        elif k == "CNOT":
            batch.cnot(t[0], t[1], m)
        elif k == "SWAP":
            batch.swap(t[0], t[1], m)
        elif k == "PrepZ":
            batch.prep_z(t[0], m)
        elif k == "MeasZ":
            f = batch.meas_z(t[0], m)
            if noisy:
                hit = measurement_flips(batch.rng, noise, active)
                f[hit] ^= True
            flips[g.label] = f
            continue
        if noisy:
            inject_gate_noise(batch.x, batch.z, g, noise, batch.rng, active)
    return flips


# -- deterministic single-fault propagation --------------------------------------

@dataclass(frozen=True)
class Propagation:
    residual: PauliOperator  # frame on the requested qubits at circuit end
    flips: dict[str, int]  # measurement label -> 1 if flipped vs. the reference
    frame: PauliOperator  # full-register frame at circuit end


def propagate_cases(circuit: Circuit, cases: list[tuple[int, PauliOperator | None]],
                    qubits: list[int] | None = None) -> list[Propagation]:
    """Propagate many single faults at once, one shot column per case.

    Each case is ``(location, pauli)``: the Pauli is applied right after the
    operation at ``location``; ``pauli=None`` at a measurement means its
    reported bit is flipped.  Random outcomes are pinned to the reference,
    so results are pure XOR offsets.
    """
    n = circuit.n
    ncase = len(cases)
    for loc, p in cases:
        if not 0 <= loc < len(circuit.gates):
            raise IndexError(f"fault location {loc} outside circuit of {len(circuit.gates)} ops")
        if p is not None and p.n != n:
            raise ValueError(f"fault Pauli acts on {p.n} qubits, circuit has {n}")
        if p is None and circuit.gates[loc].kind != "MeasZ":
            raise ValueError("measurement flips can only sit on measurements")
    batch = FrameBatch(n, ncase, randomize=False)
    by_loc: dict[int, list[int]] = {}
    for col, (loc, _) in enumerate(cases):
        by_loc.setdefault(loc, []).append(col)
    flips: dict[str, np.ndarray] = {}
    full = batch.all
    for i, g in enumerate(circuit.gates):
        sub = Circuit(circuit.qubits, (g,))
        out = run(batch, sub, None, full)
        flips.update(out)
        for col in by_loc.get(i, ()):
            loc, p = cases[col]
            if p is None:
                flips[g.label][col] ^= True
            else:
                onehot = np.zeros(ncase, dtype=bool)
                onehot[col] = True
                batch.apply_pauli(p, onehot)
    qubits = circuit.data_qubits if qubits is None else qubits
    results = []
    xs = batch.x_mask(qubits)
    zs = batch.z_mask(qubits)
    allq = list(range(n))
    fx = batch.x_mask(allq)
    fz = batch.z_mask(allq)
    for col in range(ncase):
        res = PauliOperator(len(qubits), int(xs[col]), int(zs[col]))
        frame = PauliOperator(n, int(fx[col]), int(fz[col]))
        results.append(Propagation(res.unsigned(), {l: int(f[col]) for l, f in flips.items()},
                                   frame.unsigned()))
    return results


def propagate_pauli(circuit: Circuit, location: int, pauli: PauliOperator | None,
                    qubits: list[int] | None = None) -> Propagation:
    """Single-fault version of :func:`propagate_cases`.

    ``location=-1`` with ``pauli=None`` propagates nothing (the reference).
    """
    if location == -1 and pauli is None:
        return propagate_cases(circuit, [(0, PauliOperator(circuit.n))], qubits)[0]
    return propagate_cases(circuit, [(location, pauli)], qubits)[0]


def _bits_array(masks: np.ndarray, width: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(width)) & 1).astype(bool)
