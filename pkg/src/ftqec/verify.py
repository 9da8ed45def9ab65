"""Exhaustive single-fault analysis.

Every fault the noise model can produce is injected on its own, pushed
through the circuit as a Pauli frame, and the resulting data error and
syndrome / flag flips are recorded.  On top of that sit the fault-tolerance
certificate, flag-pattern classification and the flag-aware lookup table.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .circuit import Circuit, parse_label
from .code import (N, STABILIZER_SPAN, STEANE, CodeDefinition, bits_to_str,
                   is_harmful, is_harmful_for_plus_L, is_harmful_for_zero_L,
                   reduce_min_weight, syndrome_bits)
from .frame import propagate_cases
from .noise import enumerate_fault_sites, expand_swaps, fault_pauli
from .pauli import PauliOperator

PREDICATES = {
    "css": is_harmful,
    "zero": is_harmful_for_zero_L,
    "plus": is_harmful_for_plus_L,
}


@dataclass(frozen=True)
class FaultReport:
    location: int  # position in the circuit's gate list
    index: int | None  # ordinal among unitary gates of the block (None for prep/meas)
    gate: str
    block: str | None
    kind: str  # "1q", "2q", "prep" or "meas"
    fault: str  # e.g. "-X", "YZ", "X", "flip"
    initial: PauliOperator | None  # full-register Pauli right after the gate
    s: str
    f: str
    residual: PauliOperator  # raw error on the data qubits at the end
    reduced: PauliOperator  # min-weight stabilizer-equivalent form (7-qubit)
    harmful: bool
    flips: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def flagged(self) -> bool:
        return "1" in self.f

    def initial_label(self, data: list[int], ancillas: list[int]) -> str:
        if self.initial is None:
            return ""
        p = self.initial
        return (p.restrict(data).to_label("-") + "|" + p.restrict(ancillas).to_label("-"))

    def row(self, data: list[int], ancillas: list[int]) -> list[str]:
        return [str(self.index) if self.index is not None else str(self.location),
                self.gate, self.fault, self.initial_label(data, ancillas), self.s, self.f,
                self.residual.to_label("-")]


@dataclass
class FTResult:
    fault_tolerant: bool
    reports: list[FaultReport]  # every enumerated fault
    violations: list[FaultReport]  # harmful and unflagged

    @property
    def harmful(self) -> list[FaultReport]:
        return [r for r in self.reports if r.harmful]

    def __bool__(self) -> bool:
        return self.fault_tolerant


def _slot_bits(flips: dict[str, int], labels: list[str]) -> str:
    return "".join(str(flips.get(l, 0)) for l in labels)


def _ordered_labels(circuit: Circuit, first: str) -> list[str]:
    found = []
    for l in circuit.labels():
        slot, idx = parse_label(l)
        if slot.startswith(first):
            found.append((slot, idx, l))
    return [l for _, _, l in sorted(found)]


def _fault_label(kind: str, label: str) -> str:
    return label.replace("I", "-") if kind == "2q" else label


def _embed_data(p: PauliOperator, embed: list[int] | None) -> PauliOperator:
    if p.n == N and embed is None:
        return p
    positions = embed if embed is not None else list(range(p.n))
    return p.embed(positions, N)


def enumerate_faults(circuit: Circuit, data: list[int] | None = None,
                     embed: list[int] | None = None, predicate: str = "css",
                     blocks: list[str] | None = None, gate_faults_only: bool = False,
                     syndrome_slots: str = "s", flag_slots: str = "f") -> list[FaultReport]:
    """One :class:`FaultReport` per single fault, in circuit order.

    ``data`` lists the data qubits (default: qubits with the data role) and
    ``embed`` says which code qubits they are when fewer than seven are
    present.  ``blocks`` restricts fault locations to the named sub-circuits;
    ``gate_faults_only`` drops preparation and measurement faults.
    """
    if circuit.count("SWAP"):
        circuit = expand_swaps(circuit)
    data = circuit.data_qubits if data is None else data
    if embed is None and len(data) != N:
        embed = list(range(len(data)))
    harmful = PREDICATES[predicate]
    sites = []
    for site, cands in enumerate_fault_sites(circuit):
        g = circuit.gates[site.location]
        if blocks is not None and g.block not in blocks:
            continue
        if gate_faults_only and site.kind in ("prep", "meas"):
            continue
        for lab in cands:
            sites.append((site, lab))
    cases = [(site.location, fault_pauli(site, lab, circuit.n)) for site, lab in sites]
    props = propagate_cases(circuit, cases, data) if cases else []
    s_labels = _ordered_labels(circuit, syndrome_slots)
    f_labels = _ordered_labels(circuit, flag_slots)
    ordinals = circuit.unitary_ordinals()
    out = []
    for (site, lab), (_, pauli), pr in zip(sites, cases, props):
        g = circuit.gates[site.location]
        full = _embed_data(pr.residual, embed)
        out.append(FaultReport(
            location=site.location, index=ordinals.get(site.location), gate=str(g),
            block=g.block, kind=site.kind, fault=_fault_label(site.kind, lab), initial=pauli,
            s=_slot_bits(pr.flips, s_labels), f=_slot_bits(pr.flips, f_labels),
            residual=pr.residual, reduced=reduce_min_weight(full), harmful=harmful(full),
            flips=pr.flips))
    return out


def verify_fault_tolerance(circuit: Circuit, code: CodeDefinition = STEANE, **kw) -> FTResult:
    """A circuit is fault tolerant when every harmful single fault raises a flag."""
    if code.n != N:
        raise ValueError("only the 7-qubit code is supported")
    reports = enumerate_faults(circuit, **kw)
    bad = [r for r in reports if r.harmful and not r.flagged]
    return FTResult(not bad, reports, bad)


def format_report(reports: list[FaultReport], circuit: Circuit,
                  data: list[int] | None = None) -> str:
    """Tab-separated table with columns Index, Gate, Fault, Initial Pauli, s, f, Error."""
    data = circuit.data_qubits if data is None else data
    anc = [q.id for q in circuit.qubits if q.id not in data]
    lines = ["\t".join(("Index", "Gate", "Fault", "Initial Pauli", "s", "f", "Error"))]
    for r in reports:
        lines.append("\t".join(r.row(data, anc)))
    return "\n".join(lines) + "\n"


# -- flag patterns ------------------------------------------------------------

@dataclass(frozen=True)
class FlagPatternClass:
    pattern: str  # grouped per check, e.g. "11 00 00"
    max_weight: int  # largest reduced X weight among its single faults
    correction: PauliOperator | None
    admissible: bool
    multi_check: bool  # flags fired in more than one plaquette
    faults: int


def group_pattern(bits: str, width: int = 2) -> str:
    return " ".join(bits[i:i + width] for i in range(0, len(bits), width))


def _reduced_x_weight(x: int) -> int:
    return min(bin(x ^ s).count("1") for s in STABILIZER_SPAN)


def classify_flag_patterns(encoder: Circuit, code: CodeDefinition = STEANE,
                           width: int = 2) -> list[FlagPatternClass]:
    """Group single faults of an encoder by flag pattern and find fixes.

    A pattern is admissible when no single fault behind it leaves a harmful
    X error, possibly after one extra X correction (qubits tried in order).
    Patterns with flags in two or more plaquettes are marked and skipped.
    """
    reports = enumerate_faults(encoder, predicate="zero")
    by_pattern: dict[str, list[int]] = defaultdict(list)
    for r in reports:
        by_pattern[r.f].append(_embed_data(r.residual, None).x)
    out = []
    for bits in sorted(by_pattern, key=lambda b: (b.count("1"), b[::-1])):
        xs = by_pattern[bits]
        groups = [bits[i:i + width] for i in range(0, len(bits), width)]
        multi = sum("1" in g for g in groups) > 1
        maxw = max(_reduced_x_weight(x) for x in xs)
        correction = None
        ok = all(not is_harmful_for_zero_L(PauliOperator(N, x)) for x in xs)
        if not ok and not multi:
            for q in range(N):
                if all(not is_harmful_for_zero_L(PauliOperator(N, x ^ (1 << q))) for x in xs):
                    correction = PauliOperator(N, 1 << q)
                    ok = True
                    break
        out.append(FlagPatternClass(group_pattern(bits, width), maxw, correction,
                                    ok and not multi, multi, len(xs)))
    return out


# -- flag-aware lookup table -------------------------------------------------------

class LUTConflict(ValueError):
    def __init__(self, key, reports):
        super().__init__(f"key {key} maps to inequivalent data errors")
        self.key = key
        self.reports = reports


def _x_class(x: int) -> int:
    """Canonical representative of ``x`` modulo the X-check span (keeps logical class)."""
    return min(x ^ s for s in STABILIZER_SPAN)


def _min_weight_x(x: int) -> int:
    return min((x ^ s for s in STABILIZER_SPAN),
               key=lambda v: (bin(v).count("1"), [(v >> j) & 1 for j in range(N)]))


def build_f1s2_lut(checks: list[Circuit], code: CodeDefinition = STEANE,
                   flag_slot: str = "f1X") -> dict[tuple[str, str], PauliOperator]:
    """Map (first-round X flags, perfect-round Z syndrome) to an X recovery.

    ``checks`` are the per-plaquette circuits of one round on clean code
    states.  Every single fault in each of them is propagated; the data
    error's X part determines the perfect-round syndrome.  Keys with a
    non-trivial flag pattern must see a unique error class.
    """
    table: dict[tuple[str, str], int] = {}
    witnesses: dict[tuple[str, str], list[FaultReport]] = defaultdict(list)
    flag_labels = []
    for c in checks:
        flag_labels += [l for l in c.labels() if parse_label(l)[0] == flag_slot]
    flag_labels.sort(key=lambda l: parse_label(l)[1])
    for c in checks:
        for r in enumerate_faults(c, data=list(range(N)), predicate="zero"):
            f1 = "".join(str(r.flips.get(l, 0)) for l in flag_labels)
            if "1" not in f1:
                continue
            x = r.residual.x
            key = (group_pattern(f1), bits_to_str(syndrome_bits(x), 3))
            cls = _x_class(x)
            if key in table and table[key] != cls:
                raise LUTConflict(key, witnesses[key] + [r])
            table[key] = cls
            witnesses[key].append(r)
    return {k: PauliOperator(N, _min_weight_x(v)) for k, v in table.items()}


def x_equivalent(a: PauliOperator, b: PauliOperator) -> bool:
    """Same X error up to X-type stabilizers (logical class preserved)."""
    return _x_class(a.x) == _x_class(b.x)
