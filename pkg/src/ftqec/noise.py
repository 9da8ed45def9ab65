"""Circuit-level depolarizing noise with a single rate ``p``.

* H (and any 1-qubit gate): X, Y or Z afterwards, each with probability p/3.
* CNOT / SWAP: one of the 15 non-identity two-qubit Paulis, each p/15.
* PrepZ: |0> replaced by X|0> or Y|0>, each p/3.
* MeasZ: reported bit flipped with probability 2p/3.

X-basis preparation and measurement carry no extra channel; their noise
comes from the explicit H gates.  Idle qubits are noiseless.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliOperator, two_qubit_paulis

SWAP_MODES = ("decomposed", "atomic")
# index -> (x bit, z bit) for I, X, Y, Z
_XBIT = np.array([0, 1, 1, 0], dtype=bool)
_ZBIT = np.array([0, 0, 1, 1], dtype=bool)


@dataclass(frozen=True)
class NoiseParams:
    p: float
    swap_noise: str = "decomposed"

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"physical error rate must lie in [0, 1), got {self.p}")
        if self.swap_noise not in SWAP_MODES:
            raise ValueError(f"swap_noise must be one of {SWAP_MODES}")

    @property
    def p_prep(self) -> float:
        return 2.0 * self.p / 3.0

    @property
    def p_meas(self) -> float:
        return 2.0 * self.p / 3.0

    def site_probability(self, kind: str) -> float:
        return {"1q": self.p, "2q": self.p, "prep": self.p_prep, "meas": self.p_meas}[kind]


@dataclass(frozen=True)
class FaultSite:
    location: int
    kind: str  # "1q", "2q", "prep" or "meas"
    qubits: tuple[int, ...]


def site_kind(gate: Gate) -> str:
    if gate.kind == "H":
        return "1q"
    if gate.kind in ("CNOT", "SWAP"):
        return "2q"
    if gate.kind == "PrepZ":
        return "prep"
    return "meas"


_CANDIDATES = {
    "1q": ["X", "Y", "Z"],
    "2q": two_qubit_paulis(),
    "prep": ["X", "Y"],
    "meas": ["flip"],
}


def candidates(kind: str) -> list[str]:
    return list(_CANDIDATES[kind])


def expand_swaps(circuit: Circuit) -> Circuit:
    """Rewrite every SWAP as three alternating CNOTs (each a noise site)."""
    if not circuit.count("SWAP"):
        return circuit
    gates: list[Gate] = []
    for g in circuit.gates:
        if g.kind == "SWAP":
            a, b = g.targets
            gates += [Gate("CNOT", (a, b), None, g.block), Gate("CNOT", (b, a), None, g.block),
                      Gate("CNOT", (a, b), None, g.block)]
        else:
            gates.append(g)
    return replace(circuit, gates=tuple(gates))


def for_noise(circuit: Circuit, params: NoiseParams) -> Circuit:
    return expand_swaps(circuit) if params.swap_noise == "decomposed" else circuit


def enumerate_fault_sites(circuit: Circuit) -> list[tuple[FaultSite, list[str]]]:
    """Every location the noise model can hit, with its candidate faults.

    3 Paulis per 1-qubit gate, 15 per 2-qubit gate, X/Y per preparation and a
    single flip per measurement.  SWAPs are treated as given; run
    :func:`expand_swaps` first for the decomposed accounting.
    """
    out = []
    for i, g in enumerate(circuit.gates):
        kind = site_kind(g)
        out.append((FaultSite(i, kind, g.targets), candidates(kind)))
    return out


def fault_pauli(site: FaultSite, label: str, n: int) -> PauliOperator | None:
    """Full-register Pauli for a candidate (``None`` for measurement flips)."""
    if label == "flip":
        return None
    p = PauliOperator.from_label(label)
    return p.embed(site.qubits, n)


def expected_fault_count(circuit: Circuit, p: float) -> float:
    total = 0.0
    params = NoiseParams(p)
    for g in circuit.gates:
        total += params.site_probability(site_kind(g))
    return total


def sample_noise(circuit: Circuit, params: NoiseParams,
                 rng: np.random.Generator) -> list[tuple[FaultSite, str]]:
    """Draw one shot's faults explicitly (slow reference sampler)."""
    out = []
    if params.p == 0:
        return out
    for site, cands in enumerate_fault_sites(circuit):
        if rng.random() < params.site_probability(site.kind):
            out.append((site, cands[int(rng.integers(len(cands)))]))
    return out


# -- vectorised sampling -----------------------------------------------------

def bernoulli_positions(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Sorted indices ``i < n`` of successes in ``n`` Bernoulli(p) trials.

    Uses geometric gaps so the cost scales with the number of hits.
    """
    if p <= 0.0 or n == 0:
        return np.empty(0, dtype=np.int64)
    if p > 0.05:
        return np.flatnonzero(rng.random(n) < p)
    mean = n * p
    chunk = int(mean + 6.0 * np.sqrt(mean) + 16)
    pos = np.cumsum(rng.geometric(p, size=chunk)) - 1
    while pos[-1] < n:
        more = np.cumsum(rng.geometric(p, size=chunk)) + pos[-1]
        pos = np.concatenate([pos, more])
    return pos[pos < n]


def inject_gate_noise(x: np.ndarray, z: np.ndarray, gate: Gate, params: NoiseParams,
                      rng: np.random.Generator, active: np.ndarray) -> None:
    """Add post-gate depolarizing noise to frames ``x``/``z`` (qubit x shot)."""
    kind = site_kind(gate)
    hit = active[bernoulli_positions(rng, active.size, params.site_probability(kind))]
    if hit.size == 0:
        return
    if kind == "1q":
        q = gate.targets[0]
        t = rng.integers(1, 4, size=hit.size)
        x[q, hit] ^= _XBIT[t]
        z[q, hit] ^= _ZBIT[t]
    elif kind == "2q":
        a, b = gate.targets
        t = rng.integers(1, 16, size=hit.size)
        ta, tb = t // 4, t % 4
        x[a, hit] ^= _XBIT[ta]
        z[a, hit] ^= _ZBIT[ta]
        x[b, hit] ^= _XBIT[tb]
        z[b, hit] ^= _ZBIT[tb]
    elif kind == "prep":
        q = gate.targets[0]
        t = rng.integers(1, 3, size=hit.size)  # X or Y
        x[q, hit] ^= True
        z[q, hit] ^= _ZBIT[t]
    else:
        raise ValueError("measurement noise is applied to the record, not the frame")


def measurement_flips(rng: np.random.Generator, params: NoiseParams,
                      active: np.ndarray) -> np.ndarray:
    return active[bernoulli_positions(rng, active.size, params.p_meas)]
