"""Circuit library: flag-bridge parity checks, the citadel layout, encoders,
reconfiguration and Steane-check circuits.

Physical qubit ids on the citadel grid::

     .   1   0   .
     2   8   7   4
     3   9  10   5
     .   .   6   .

Data qubits 0..6 carry the code (qubit ``j`` is qubit ``j+1`` in 1-based
notation); 7..10 are the four syndrome / flag-bridge ancillas.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .circuit import (Circuit, CircuitBuilder, CircuitError, GridLayout, Qubit,
                      h_dual, load_circuit, parse_circuit, validate_connectivity)
from .code import ROW_MASKS
from .pauli import PauliOperator

CITADEL_COORDS = {
    0: (0, 2), 1: (0, 1), 2: (1, 0), 3: (2, 0), 4: (1, 3), 5: (2, 3), 6: (3, 2),
    8: (1, 1), 7: (1, 2), 9: (2, 1), 10: (2, 2),
}
CITADEL_ANCILLAS = (7, 8, 9, 10)


@dataclass(frozen=True)
class CheckSpec:
    """Wiring of one weight-4 check: syndrome qubit, two flag bridges, data order.

    ``data[0]`` and ``data[1]`` couple to the syndrome qubit, ``data[2]`` to
    the first flag and ``data[3]`` to the second.  ``topology`` says whether
    the second flag hangs off the first ("chain") or off the syndrome ("star").
    """
    syndrome: int
    flags: tuple[int, int]
    data: tuple[int, int, int, int]
    topology: str = "chain"


# Per-plaquette wiring on the citadel grid.
CITADEL_CHECKS = {
    1: CheckSpec(8, (7, 9), (1, 2, 0, 3), "star"),
    2: CheckSpec(8, (7, 10), (1, 2, 4, 5), "chain"),
    3: CheckSpec(10, (9, 8), (6, 5, 3, 2), "chain"),
}


@dataclass(frozen=True)
class FBLayout:
    """Physical placement plus check wiring for flag-bridge error correction.

    Ids 0..6 are the code qubits; everything else is an ancilla.
    """
    name: str
    coords: dict[int, tuple[int, int]]
    checks: dict[int, CheckSpec]

    def grid(self) -> GridLayout:
        rows = max(r for r, _ in self.coords.values()) + 1
        cols = max(c for _, c in self.coords.values()) + 1
        roles = {q: ("data" if q < 7 else "ancilla") for q in self.coords}
        return GridLayout(rows, cols, dict(self.coords), roles)


CITADEL = FBLayout("citadel", CITADEL_COORDS, CITADEL_CHECKS)


def citadel_layout() -> GridLayout:
    return CITADEL.grid()


def _support(stabilizer: PauliOperator) -> tuple[str, list[int]]:
    if stabilizer.weight != 4:
        raise CircuitError(f"only weight-4 checks are supported, got weight {stabilizer.weight}")
    if stabilizer.z == 0:
        return "X", stabilizer.support
    if stabilizer.x == 0:
        return "Z", stabilizer.support
    raise CircuitError("check must be pure X or pure Z type")


def _unitaries(variant: int, s: int, flags: tuple[int, ...], d: tuple[int, ...],
               topology: str) -> list[tuple[int, int]]:
    if variant == 1:
        if not flags:
            return [(s, d[0]), (s, d[1]), (s, d[2]), (s, d[3])]
        f = flags[0]
        return [(s, d[0]), (s, f), (s, d[1]), (s, d[2]), (s, f), (s, d[3])]
    if variant == 2:
        f = flags[0]
        return [(s, f), (f, d[2]), (s, d[0]), (f, d[3]), (s, d[1]), (s, f)]
    if variant == 3:
        f1, f2 = flags
        src = s if topology == "star" else f1
        if topology not in ("chain", "star"):
            raise CircuitError(f"unknown topology {topology!r}")
        return [(s, f1), (src, f2), (s, d[0]), (s, d[1]), (f1, d[2]), (f2, d[3]),
                (src, f2), (s, f1)]
    raise CircuitError(f"unknown flag-circuit variant {variant}")


def _emit_check(b: CircuitBuilder, variant: int, basis: str, s: int, flags: tuple[int, ...],
                d: tuple[int, ...], topology: str, s_label: str, f_labels: list[str]) -> None:
    """X check as drawn; the Z check is its exact H-conjugate."""
    pairs = _unitaries(variant, s, flags, d, topology)
    if basis == "X":
        b.prep_z(s)
        for f in flags:
            b.prep_z(f)
        b.h(s)
        for c, t in pairs:
            b.cx(c, t)
        b.h(s)
        b.meas_z(s, s_label)
        for f, lab in zip(flags, f_labels):
            b.meas_z(f, lab)
    else:
        b.prep_z(s)
        for f in flags:
            b.prep_x(f)
        for c, t in pairs:
            b.cx(t, c)
        b.meas_z(s, s_label)
        for f, lab in zip(flags, f_labels):
            b.meas_x(f, lab)


def build_flag_circuit(variant: int, stabilizer: PauliOperator, syndrome: int,
                       flags: tuple[int, ...] = (), data: tuple[int, ...] | None = None,
                       topology: str = "chain", coords: dict[int, tuple[int, int]] | None = None,
                       prefix: tuple[str, str] = ("s", "f"), index: int = 0,
                       block: str | None = None) -> Circuit:
    """One weight-4 parity check with flag qubits.

    ``variant`` 1 is the single-flag circuit whose syndrome qubit talks to
    five partners (pass ``flags=()`` for the unflagged version); 2 and 3 use
    the flags as bridges so that no qubit needs more than three partners.
    ``data`` fixes the coupling order (defaults to the stabilizer support).
    Labels are ``{prefix[0]}[index]`` for the syndrome and
    ``{prefix[1]}[2*index + k]`` for flag ``k``.
    """
    basis, support = _support(stabilizer)
    d = tuple(support if data is None else data)
    if sorted(d) != sorted(support):
        raise CircuitError("data order must be a permutation of the stabilizer support")
    need = {1: (0, 1), 2: (1,), 3: (2,)}[variant] if variant in (1, 2, 3) else None
    if need is None:
        raise CircuitError(f"unknown flag-circuit variant {variant}")
    if len(flags) not in need:
        raise CircuitError(f"variant {variant} takes {need} flag qubit(s)")
    b = CircuitBuilder(f"circuit{variant}")
    coords = coords or {}
    for q in d:
        b.qubit(q, "data", coords.get(q))
    b.qubit(syndrome, "syndrome", coords.get(syndrome))
    for f in flags:
        b.qubit(f, "flag", coords.get(f))
    b.block = block
    width = 2 if variant == 3 else 1
    f_labels = [f"{prefix[1]}[{width * index + k}]" for k in range(len(flags))]
    _emit_check(b, variant, basis, syndrome, tuple(flags), d, topology,
                f"{prefix[0]}[{index}]", f_labels)
    return b.build()


def circuit3_reference() -> Circuit:
    """Stand-alone chain check on data 0..3 with syndrome 4 and flags 5, 6."""
    return build_flag_circuit(3, PauliOperator(4, 0b1111, 0), 4, (5, 6), (0, 1, 2, 3), "chain")


# -- citadel plaquette checks ------------------------------------------------------

def steane_stabilizer(i: int, basis: str) -> PauliOperator:
    m = ROW_MASKS[i - 1]
    return PauliOperator(7, m, 0) if basis == "X" else PauliOperator(7, 0, m)


def citadel_check(i: int, basis: str = "X", round_tag: str = "0",
                  layout: FBLayout = CITADEL) -> Circuit:
    """Plaquette ``i`` (1..3) of ``layout`` with labels for one round.

    Labels: ``s{round}{basis}[i-1]`` and ``f{round}{basis}[2i-2], [2i-1]``.
    """
    spec = layout.checks[i]
    stab = steane_stabilizer(i, basis)
    big = PauliOperator(max(layout.coords) + 1, stab.x, stab.z)
    c = build_flag_circuit(3, big, spec.syndrome, spec.flags, spec.data, spec.topology,
                           layout.coords, (f"s{round_tag}{basis}", f"f{round_tag}{basis}"),
                           i - 1, block=f"S{i}{basis}")
    return c


def _citadel_register(b: CircuitBuilder, layout: FBLayout = CITADEL) -> None:
    for q, xy in layout.coords.items():
        b.qubit(q, "data" if q < 7 else "ancilla", xy)


def data_prep(n_data: int = 7, coords: dict[int, tuple[int, int]] | None = None,
              basis: str = "Z", block: str = "prep") -> Circuit:
    b = CircuitBuilder("prep")
    coords = coords or {}
    b.block = block
    for q in range(n_data):
        b.qubit(q, "data", coords.get(q))
        (b.prep_z if basis == "Z" else b.prep_x)(q)
    return b.build()


def _on_citadel(c: Circuit, name: str, layout: FBLayout = CITADEL) -> Circuit:
    b = CircuitBuilder(name)
    _citadel_register(b, layout)
    base = b.build()
    # keep role information from the check (syndrome / flag) where present
    return base.then(c, name)


def build_flag_bridge_encoder() -> Circuit:
    """|0>^7 followed by the three X plaquette checks (labels s0X, f0X)."""
    c = _on_citadel(data_prep(7, CITADEL_COORDS), "fb-encoder")
    for i in (1, 2, 3):
        c = c.then(citadel_check(i, "X", "0"))
    return Circuit(tuple(Qubit(q.id, q.role if q.id < 7 else "ancilla", q.coord) for q in c.qubits),
                   c.gates, "fb-encoder")


def ec_checks(round_tag: str, bases: str = "XZ", layout: FBLayout = CITADEL) -> dict[str, Circuit]:
    """The six plaquette checks of one EC round, in execution order."""
    out = {}
    for basis in bases:
        for i in (1, 2, 3):
            out[f"S{i}{basis}"] = _on_citadel(citadel_check(i, basis, round_tag, layout),
                                              f"S{i}{basis}", layout)
    return out


def z_check_dual(x_check: Circuit) -> Circuit:
    """The Z-type partner of an X-type check (all gates conjugated by H)."""
    return h_dual(x_check)


# -- GotoRL encoder and reconfiguration ----------------------------------------

GOTORL_CNOTS = 11
DATA_DIR = resources.files("ftqec") / "data"


class EncoderCheckError(CircuitError):
    """A supplied encoder failed one of the structural or fault-tolerance checks."""


def prepares_zero_l(circuit: Circuit, data: list[int] | None = None) -> bool:
    """Noiseless run (random outcomes forced to 0) leaves |0>_L on ``data``.

    All six stabilizers and Z_L must be deterministic +1.
    """
    from .tableau import run_circuit

    data = circuit.data_qubits if data is None else data
    if len(data) != 7:
        return False
    state, _, _ = run_circuit(circuit)
    n = circuit.n
    for m in ROW_MASKS + (0b1001001,):
        z = PauliOperator(7, 0, m).embed(data, n)
        if state.expectation(z) != 1:
            return False
    for m in ROW_MASKS:
        if state.expectation(PauliOperator(7, m, 0).embed(data, n)) != 1:
            return False
    return True


def validate_gotorl(circuit: Circuit, certify: bool = True) -> Circuit:
    """Structural, state and fault-tolerance checks for a verified |0>_L encoder."""
    from .verify import verify_fault_tolerance

    data = circuit.data_qubits
    ver = circuit.ids_with_role("verification")
    if len(data) != 7 or len(ver) != 1 or circuit.n != 8:
        raise EncoderCheckError(
            f"need 7 data + 1 verification qubit, got {len(data)} data, {len(ver)} verification")
    if circuit.count("CNOT") != GOTORL_CNOTS or circuit.count("SWAP"):
        raise EncoderCheckError(f"need exactly {GOTORL_CNOTS} CNOTs, got {circuit.count('CNOT')}")
    meas = [g for g in circuit.gates if g.kind == "MeasZ"]
    if len(meas) != 1 or meas[0].targets[0] != ver[0] or not meas[0].label.startswith("f0"):
        raise EncoderCheckError("need one verification measurement labelled f0[...]")
    layout = GridLayout.from_circuit(circuit)
    if layout.rows > 3 or layout.cols > 3 or len(layout.assignment) != 8:
        raise EncoderCheckError("encoder must sit on a 3x3 grid with coordinates for every qubit")
    bad = validate_connectivity(circuit, layout)
    if bad:
        raise EncoderCheckError(f"non-neighbour gate {bad[0].gate}")
    if not prepares_zero_l(circuit):
        raise EncoderCheckError("noiseless run does not prepare |0>_L")
    if certify and not verify_fault_tolerance(circuit, predicate="zero"):
        raise EncoderCheckError("encoder is not fault tolerant")
    return circuit


@lru_cache(maxsize=None)
def _shipped_gotorl() -> Circuit:
    return validate_gotorl(parse_circuit((DATA_DIR / "gotorl.txt").read_text(), "gotorl"))


def load_gotorl(path=None, certify: bool = True) -> Circuit:
    """The verified 3x3 |0>_L encoder (shipped file unless ``path`` is given)."""
    if path is None:
        return _shipped_gotorl()
    return validate_gotorl(load_circuit(path), certify)


@lru_cache(maxsize=None)
def gotorl_placement() -> dict:
    """Embedding of the 3x3 encoder, its SWAP stages and the layout they reach."""
    import json

    meta = json.loads((DATA_DIR / "gotorl_fb.json").read_text())
    meta["embed"] = {int(k): int(v) for k, v in meta["embed"].items()}
    meta["swaps"] = [[tuple(p) for p in stage] for stage in meta["swaps"]]
    meta["coords"] = {int(k): tuple(v) for k, v in meta["coords"].items()}
    meta["checks"] = {int(i): CheckSpec(c["syndrome"], tuple(c["flags"]), tuple(c["data"]),
                                        c["topology"]) for i, c in meta["checks"].items()}
    return meta


def gotorl_fb_layout(meta: dict | None = None) -> FBLayout:
    """Flag-bridge layout reached by the SWAP move (12 qubits, spare id 11)."""
    meta = meta or gotorl_placement()
    return FBLayout("gotorl-fb", dict(meta["coords"]), dict(meta["checks"]))


def _remap(circuit: Circuit, mapping: dict[int, int], block: str | None = None) -> list:
    from dataclasses import replace

    return [replace(g, targets=tuple(mapping[t] for t in g.targets),
                    block=block if block is not None else g.block) for g in circuit.gates]


def build_gotorl_fb_encoder(encoder: Circuit | None = None, meta: dict | None = None) -> Circuit:
    """GotoRL encoder embedded in the 12-qubit register, then the SWAP move.

    The 3x3 encoder runs in its window, the verification qubit is reset, and
    two parallel SWAP stages (4 then 2) put the code qubits where the
    flag-bridge checks of :func:`gotorl_fb_layout` expect them.
    """
    encoder = encoder or load_gotorl()
    meta = meta or gotorl_placement()
    layout = gotorl_fb_layout(meta)
    embed = meta["embed"]
    ver = encoder.ids_with_role("verification")[0]
    b = CircuitBuilder("gotorl-fb-encoder")
    for q, xy in layout.coords.items():
        b.qubit(q, "data" if q < 7 else "ancilla", xy)
    used = set(embed.values())
    b.block = "encode"
    # qubits outside the window only take part in the move; start them in |0>
    for q in sorted(layout.coords):
        if q not in used:
            b.prep_z(q)
    b.gates.extend(_remap(encoder, embed, "encode"))
    b.prep_z(embed[ver])
    b.block = "swap"
    for stage in meta["swaps"]:
        for a, c in stage:
            b.swap(a, c)
    return b.build()


# Steane-EC register: 7 data qubits on the outside of a 5x5 grid around the
# 3x3 ancilla block (block qubit j of the encoder -> id 7 + j).
STEANE_BLOCK_OFFSET = (1, 1)


def steane_coordinates(encoder: Circuit | None = None) -> dict[int, tuple[int, int]]:
    encoder = encoder or load_gotorl()
    r0, c0 = STEANE_BLOCK_OFFSET
    coords = {}
    for q in encoder.qubits:
        r, c = q.coord
        coords[7 + q.id] = (r0 + r, c0 + c)
        if q.role == "data":
            # corners move out vertically, edge sites straight out
            if r == 1 and c == 1:
                raise CircuitError("a data qubit at the block centre has no free neighbour")
            dr = -1 if r == 0 else (1 if r == 2 else 0)
            dc = 0 if dr else (-1 if c == 0 else 1)
            coords[q.id] = (r0 + r + dr, c0 + c + dc)
    return coords


def _steane_register(b: CircuitBuilder, coords: dict[int, tuple[int, int]], ver: int) -> None:
    for q, xy in sorted(coords.items()):
        role = "data" if q < 7 else ("verification" if q == 7 + ver else "ancilla-data")
        b.qubit(q, role, xy)


def build_steane_check(basis: str, encoder: Circuit | None = None) -> Circuit:
    """Ancilla preparation plus one transversal Steane check (15 qubits).

    X check: |0>_L ancilla (verification bit ``f0X[0]``), CNOTs ancilla ->
    data, ancilla read out in X (``b0X``).  Z check: |+>_L ancilla from the
    H-dual encoder (``f0Z[0]``), CNOTs data -> ancilla, Z readout (``b0Z``).
    """
    encoder = encoder or load_gotorl()
    if basis not in ("X", "Z"):
        raise CircuitError("basis must be 'X' or 'Z'")
    coords = steane_coordinates(encoder)
    ver = encoder.ids_with_role("verification")[0]
    anc_enc = encoder if basis == "X" else h_dual(encoder)
    label = {encoder.labels()[0]: f"f0{basis}[0]"}
    b = CircuitBuilder(f"steane-{basis}")
    _steane_register(b, coords, ver)
    b.block = f"anc{basis}"
    b.gates.extend(_remap(anc_enc.relabel(label), {q: 7 + q for q in range(8)}, b.block))
    b.block = f"check{basis}"
    for j in range(7):
        if basis == "X":
            b.cx(7 + j, j)
        else:
            b.cx(j, 7 + j)
    for j in range(7):
        if basis == "X":
            b.meas_x(7 + j, f"b0X[{j}]")
        else:
            b.meas_z(7 + j, f"b0Z[{j}]")
    return b.build()


def build_steane_encoder(encoder: Circuit | None = None) -> Circuit:
    """Fresh |0>^7 data followed by the X-type Steane check (the encoding step)."""
    encoder = encoder or load_gotorl()
    coords = steane_coordinates(encoder)
    b = CircuitBuilder("steane-encoder")
    _steane_register(b, coords, encoder.ids_with_role("verification")[0])
    b.block = "prep"
    for q in range(7):
        b.prep_z(q)
    return b.build().then(build_steane_check("X", encoder), "steane-encoder")


def build_steane_hybrid(encoder: Circuit | None = None) -> Circuit:
    """Encoding X check followed by the Z check on the same ancilla block."""
    return build_steane_encoder(encoder).then(build_steane_check("Z", encoder), "steane-hybrid")


# -- resource audit -------------------------------------------------------------

@dataclass(frozen=True)
class EncodingResources:
    name: str
    encoding_cnots: int
    extra_cnots: int
    ancillas: int


def encoding_resources(encoder: Circuit | None = None) -> list[EncodingResources]:
    """CNOT and ancilla counts of the three correction-ready encoders.

    SWAPs count as three CNOTs.  Ancillas are all non-data qubits the
    protocol's register holds.
    """
    encoder = encoder or load_gotorl()
    fb = build_flag_bridge_encoder()
    g_fb = build_gotorl_fb_encoder(encoder)
    st = build_steane_encoder(encoder)
    n_enc = encoder.cnot_count()
    return [
        EncodingResources("flag-bridge", fb.cnot_count(), 0, fb.n - 7),
        EncodingResources("gotorl-fb", n_enc, g_fb.block("swap").cnot_count(), g_fb.n - 7),
        EncodingResources("gotorl-steane", n_enc, st.block("checkX").cnot_count(), st.n - 7),
    ]
