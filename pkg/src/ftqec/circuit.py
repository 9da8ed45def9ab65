"""Circuit container, plain-text circuit files and grid connectivity checks.

Gate alphabet: ``H``, ``CNOT``, ``SWAP``, ``PrepZ``, ``MeasZ``.  X-basis
preparation and measurement are always written out as an explicit ``H``
next to the Z-basis operation, so the H carries its own gate noise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

ROLES = ("data", "syndrome", "flag", "verification", "ancilla-data", "ancilla", "idle")
GATE_KINDS = ("H", "CNOT", "SWAP", "PrepZ", "MeasZ")
_LABEL_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)\[(\d+)\]$")


class CircuitError(ValueError):
    """Malformed circuit, circuit file, or failed structural check."""


@dataclass(frozen=True)
class Qubit:
    id: int
    role: str = "data"
    coord: tuple[int, int] | None = None


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    label: str | None = None  # measurement slot, e.g. "f0X[1]"
    block: str | None = None  # sub-circuit name, e.g. "S1X"

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind in ("CNOT", "SWAP") else 1
        if len(self.targets) != want:
            raise CircuitError(f"{self.kind} takes {want} target(s), got {self.targets}")
        if want == 2 and self.targets[0] == self.targets[1]:
            raise CircuitError(f"{self.kind} targets must differ: {self.targets}")
        if self.kind == "MeasZ" and not self.label:
            raise CircuitError("measurements need a label")

    @property
    def is_unitary(self) -> bool:
        return self.kind in ("H", "CNOT", "SWAP")

    def __str__(self) -> str:
        name = {"CNOT": "CX"}.get(self.kind, self.kind)
        return f"{name}[{','.join(map(str, self.targets))}]"


def parse_label(label: str) -> tuple[str, int]:
    m = _LABEL_RE.match(label)
    if not m:
        raise CircuitError(f"measurement label {label!r} is not of the form slot[index]")
    return m.group(1), int(m.group(2))


@dataclass(frozen=True)
class Circuit:
    qubits: tuple[Qubit, ...]
    gates: tuple[Gate, ...] = ()
    name: str = ""

    def __post_init__(self):
        ids = [q.id for q in self.qubits]
        if len(set(ids)) != len(ids):
            raise CircuitError("duplicate qubit ids")
        known = set(ids)
        labels = set()
        for g in self.gates:
            for t in g.targets:
                if t not in known:
                    raise CircuitError(f"{g} acts on undeclared qubit {t}")
            if g.label is not None:
                if g.label in labels:
                    raise CircuitError(f"measurement label {g.label} used twice")
                parse_label(g.label)
                labels.add(g.label)

    # -- views --------------------------------------------------------------
    @property
    def n(self) -> int:
        return max((q.id for q in self.qubits), default=-1) + 1

    def qubit(self, qid: int) -> Qubit:
        for q in self.qubits:
            if q.id == qid:
                return q
        raise KeyError(qid)

    def ids_with_role(self, *roles: str) -> list[int]:
        return [q.id for q in self.qubits if q.role in roles]

    @property
    def data_qubits(self) -> list[int]:
        return self.ids_with_role("data")

    @property
    def measurement_labels(self) -> dict[int, str]:
        return {i: g.label for i, g in enumerate(self.gates) if g.kind == "MeasZ"}

    def labels(self) -> list[str]:
        return [g.label for g in self.gates if g.kind == "MeasZ"]

    def slot(self, name: str) -> list[str]:
        """Labels of one slot ordered by index, e.g. ``slot("f0X")``."""
        found = sorted((parse_label(l)[1], l) for l in self.labels() if parse_label(l)[0] == name)
        return [l for _, l in found]

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def cnot_count(self, swap_cost: int = 3) -> int:
        """Entangling-gate count with each SWAP costed as ``swap_cost`` CNOTs."""
        return self.count("CNOT") + swap_cost * self.count("SWAP")

    def unitary_ordinals(self) -> dict[int, int]:
        """Gate position -> index among the unitary gates of its block.

        This is the "Index" used when printing fault tables: preparations and
        measurements are not counted.
        """
        out: dict[int, int] = {}
        seen: dict[str | None, int] = {}
        for i, g in enumerate(self.gates):
            if g.is_unitary:
                out[i] = seen.get(g.block, 0)
                seen[g.block] = out[i] + 1
        return out

    def block(self, name: str) -> "Circuit":
        return replace(self, gates=tuple(g for g in self.gates if g.block == name))

    def blocks(self) -> list[str]:
        names: list[str] = []
        for g in self.gates:
            if g.block is not None and g.block not in names:
                names.append(g.block)
        return names

    # -- composition --------------------------------------------------------
    def then(self, other: "Circuit", name: str | None = None) -> "Circuit":
        """Sequential composition; qubit declarations are merged."""
        mine = {q.id: q for q in self.qubits}
        for q in other.qubits:
            if q.id in mine and mine[q.id] != q:
                # later roles win (e.g. verification qubit reused as flag)
                mine[q.id] = replace(q, coord=q.coord or mine[q.id].coord)
            else:
                mine.setdefault(q.id, q)
        return Circuit(tuple(sorted(mine.values(), key=lambda q: q.id)),
                       self.gates + other.gates, name if name is not None else self.name)

    def with_block(self, block: str) -> "Circuit":
        return replace(self, gates=tuple(replace(g, block=block) for g in self.gates))

    def relabel(self, mapping: dict[str, str]) -> "Circuit":
        return replace(self, gates=tuple(
            replace(g, label=mapping.get(g.label, g.label)) if g.label else g for g in self.gates))

    def __str__(self) -> str:
        return ", ".join(str(g) for g in self.gates if g.is_unitary)


class CircuitBuilder:
    """Mutable helper used by the circuit library."""

    def __init__(self, name: str = ""):
        self.name = name
        self.qubits: dict[int, Qubit] = {}
        self.gates: list[Gate] = []
        self.block: str | None = None

    def qubit(self, qid: int, role: str, coord: tuple[int, int] | None = None) -> None:
        if role not in ROLES:
            raise CircuitError(f"unknown role {role!r}")
        self.qubits[qid] = Qubit(qid, role, coord)

    def _add(self, kind: str, targets: Sequence[int], label: str | None = None) -> None:
        self.gates.append(Gate(kind, tuple(targets), label, self.block))

    def h(self, q: int) -> None:
        self._add("H", (q,))

    def cx(self, c: int, t: int) -> None:
        self._add("CNOT", (c, t))

    def swap(self, a: int, b: int) -> None:
        self._add("SWAP", (a, b))

    def prep_z(self, q: int) -> None:
        self._add("PrepZ", (q,))

    def prep_x(self, q: int) -> None:
        self._add("PrepZ", (q,))
        self._add("H", (q,))

    def meas_z(self, q: int, label: str) -> None:
        self._add("MeasZ", (q,), label)

    def meas_x(self, q: int, label: str) -> None:
        self._add("H", (q,))
        self._add("MeasZ", (q,), label)

    def build(self) -> Circuit:
        return Circuit(tuple(sorted(self.qubits.values(), key=lambda q: q.id)),
                       tuple(self.gates), self.name)


def h_dual(circuit: Circuit, name: str | None = None) -> Circuit:
    """Conjugate the whole circuit by H on every qubit.

    CNOTs reverse direction, Z-basis preparations and measurements become
    X-basis ones, and back-to-back H pairs on a qubit are cancelled.
    """
    raw: list[Gate] = []
    for g in circuit.gates:
        if g.kind == "CNOT":
            raw.append(replace(g, targets=g.targets[::-1]))
        elif g.kind == "PrepZ":
            raw.append(g)
            raw.append(Gate("H", g.targets, None, g.block))
        elif g.kind == "MeasZ":
            raw.append(Gate("H", g.targets, None, g.block))
            raw.append(g)
        else:
            raw.append(g)
    out: list[Gate | None] = []
    last_on: dict[int, int] = {}
    for g in raw:
        if g.kind == "H":
            q = g.targets[0]
            j = last_on.get(q)
            if j is not None and out[j] is not None and out[j].kind == "H":
                out[j] = None
                del last_on[q]
                continue
        out.append(g)
        for t in g.targets:
            last_on[t] = len(out) - 1
    return Circuit(circuit.qubits, tuple(g for g in out if g is not None),
                   name if name is not None else circuit.name + "~H")


# -- grid layouts ------------------------------------------------------------

@dataclass
class GridLayout:
    rows: int
    cols: int
    assignment: dict[int, tuple[int, int]] = field(default_factory=dict)
    roles: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        seen = {}
        for q, (r, c) in self.assignment.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise CircuitError(f"qubit {q} at {(r, c)} lies outside {self.rows}x{self.cols}")
            if (r, c) in seen:
                raise CircuitError(f"qubits {seen[(r, c)]} and {q} share site {(r, c)}")
            seen[(r, c)] = q

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> "GridLayout":
        coords = {q.id: q.coord for q in circuit.qubits if q.coord is not None}
        if not coords:
            return cls(0, 0)
        rows = max(r for r, _ in coords.values()) + 1
        cols = max(c for _, c in coords.values()) + 1
        return cls(rows, cols, coords, {q.id: q.role for q in circuit.qubits})

    def neighbours(self, q: int) -> list[int]:
        r, c = self.assignment[q]
        at = {v: k for k, v in self.assignment.items()}
        return [at[s] for s in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)) if s in at]

    def render(self) -> str:
        grid = [["." for _ in range(self.cols)] for _ in range(self.rows)]
        for q, (r, c) in self.assignment.items():
            grid[r][c] = str(q)
        return "\n".join(" ".join(f"{s:>2}" for s in row) for row in grid)


@dataclass(frozen=True)
class Violation:
    location: int
    gate: Gate
    distance: float | None  # None when a target has no coordinate


def validate_connectivity(circuit: Circuit, layout: GridLayout | None = None) -> list[Violation]:
    """Two-qubit gates whose targets are not Manhattan-distance-1 neighbours."""
    layout = layout or GridLayout.from_circuit(circuit)
    bad = []
    for i, g in enumerate(circuit.gates):
        if len(g.targets) != 2:
            continue
        a, b = g.targets
        if a not in layout.assignment or b not in layout.assignment:
            bad.append(Violation(i, g, None))
            continue
        (r1, c1), (r2, c2) = layout.assignment[a], layout.assignment[b]
        d = abs(r1 - r2) + abs(c1 - c2)
        if d != 1:
            bad.append(Violation(i, g, d))
    return bad


def interaction_degree(circuit: Circuit) -> dict[int, int]:
    """Number of distinct partners each qubit has across all two-qubit gates."""
    partners: dict[int, set[int]] = {q.id: set() for q in circuit.qubits}
    for g in circuit.gates:
        if len(g.targets) == 2:
            a, b = g.targets
            partners[a].add(b)
            partners[b].add(a)
    return {q: len(s) for q, s in partners.items()}


# -- text format ---------------------------------------------------------------

def parse_circuit(text: str, name: str = "") -> Circuit:
    """Parse the one-gate-per-line circuit format.

    ``QUBITS n``, ``COORD q r c``, ``ROLE q role`` and gate lines ``H q``,
    ``CX c t``, ``SWAP a b``, ``PREPZ q``, ``PREPX q``, ``MEASZ q label``,
    ``MEASX q label``.  Optional ``BLOCK name`` lines tag following gates.
    """
    n = None
    coords: dict[int, tuple[int, int]] = {}
    roles: dict[int, str] = {}
    b = CircuitBuilder(name)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        op = tok[0].upper()
        try:
            if op == "QUBITS":
                n = int(tok[1])
            elif op == "COORD":
                coords[int(tok[1])] = (int(tok[2]), int(tok[3]))
            elif op == "ROLE":
                if tok[2] not in ROLES:
                    raise CircuitError(f"unknown role {tok[2]!r}")
                roles[int(tok[1])] = tok[2]
            elif op == "BLOCK":
                b.block = tok[1]
            elif op == "H":
                b.h(int(tok[1]))
            elif op in ("CX", "CNOT"):
                b.cx(int(tok[1]), int(tok[2]))
            elif op == "SWAP":
                b.swap(int(tok[1]), int(tok[2]))
            elif op == "PREPZ":
                b.prep_z(int(tok[1]))
            elif op == "PREPX":
                b.prep_x(int(tok[1]))
            elif op == "MEASZ":
                b.meas_z(int(tok[1]), tok[2])
            elif op == "MEASX":
                b.meas_x(int(tok[1]), tok[2])
            else:
                raise CircuitError(f"unknown directive {tok[0]!r}")
            if op in ("CX", "CNOT", "SWAP") and len(tok) != 3:
                raise CircuitError("expected two qubit ids")
        except (IndexError, ValueError) as exc:
            raise CircuitError(f"line {lineno}: {raw.strip()!r}: {exc}") from None
    if n is None:
        raise CircuitError("missing QUBITS line")
    for g in b.gates:
        for t in g.targets:
            if not 0 <= t < n:
                raise CircuitError(f"{g} targets qubit {t} but QUBITS is {n}")
    for q in range(n):
        b.qubits[q] = Qubit(q, roles.get(q, "data"), coords.get(q))
    return b.build()


def load_circuit(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_circuit(path.read_text(), name=path.stem)


def dump_circuit(circuit: Circuit) -> str:
    lines = [f"QUBITS {circuit.n}"]
    for q in circuit.qubits:
        if q.coord is not None:
            lines.append(f"COORD {q.id} {q.coord[0]} {q.coord[1]}")
    for q in circuit.qubits:
        lines.append(f"ROLE {q.id} {q.role}")
    block = None
    for g in circuit.gates:
        if g.block != block and g.block is not None:
            lines.append(f"BLOCK {g.block}")
            block = g.block
        if g.kind == "CNOT":
            lines.append(f"CX {g.targets[0]} {g.targets[1]}")
        elif g.kind == "SWAP":
            lines.append(f"SWAP {g.targets[0]} {g.targets[1]}")
        elif g.kind == "PrepZ":
            lines.append(f"PREPZ {g.targets[0]}")
        elif g.kind == "MeasZ":
            lines.append(f"MEASZ {g.targets[0]} {g.label}")
        else:
            lines.append(f"H {g.targets[0]}")
    return "\n".join(lines) + "\n"


def gates_from_string(seq: str) -> list[tuple[str, tuple[int, ...]]]:
    """Parse ``"H[4], CX[4,5]"`` into ``[("H", (4,)), ("CNOT", (4, 5))]``."""
    out = []
    for m in re.finditer(r"(H|CX|SWAP)\[(\d+)(?:,(\d+))?\]", seq):
        kind = {"CX": "CNOT"}.get(m.group(1), m.group(1))
        ts = (int(m.group(2)),) if m.group(3) is None else (int(m.group(2)), int(m.group(3)))
        out.append((kind, ts))
    return out


def unitary_sequence(circuit: Circuit) -> list[tuple[str, tuple[int, ...]]]:
    return [(g.kind, g.targets) for g in circuit.gates if g.is_unitary]


def qubits_touched(gates: Iterable[Gate]) -> set[int]:
    return {t for g in gates for t in g.targets}
