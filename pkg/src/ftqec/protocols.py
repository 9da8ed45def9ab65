"""Encoding and encoding+EC protocols as vectorised state machines.

Every protocol runs a batch of shots through the Pauli-frame engine.  The
adaptive parts (early termination, the second EC round) are handled with
per-shot masks: a sub-circuit is applied only to the shots that reach it.
Reference measurement records are all-zero, so a recorded flip *is* the
measured bit.

Bit conventions: flag strings are integers with flag ``k`` in bit ``k``
(``"10 00 00"`` is 1), syndromes carry check ``i`` in bit ``i-1`` and
readout strings carry qubit ``j`` in bit ``j``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, fields
from functools import lru_cache

import numpy as np

from .circuit import Circuit, parse_label
from .circuits import (CITADEL, FBLayout, build_flag_bridge_encoder, build_gotorl_fb_encoder,
                       build_steane_encoder, build_steane_hybrid, ec_checks, gotorl_fb_layout,
                       load_gotorl, validate_gotorl)
from .code import (LOOKUP_ARRAY, N, bits_to_str, estimated_failures, str_to_bits, syndromes,
                   true_failures)
from .frame import FrameBatch, run
from .noise import NoiseParams, for_noise
from .pauli import PauliOperator
from .verify import build_f1s2_lut, classify_flag_patterns, group_pattern

PROTOCOLS = ("enc-fb", "enc-gotorl-fb", "enc-gotorl-steane", "bare-fb", "bare-gotorl",
             "hybrid-fb", "hybrid-steane", "ec-only")
ENCODING_PROTOCOLS = PROTOCOLS[:3]
DATA = list(range(N))


# -- flag sets ------------------------------------------------------------------------

def _p(s: str) -> int:
    return str_to_bits(s)


# Patterns in the flag order of the citadel checks.  The third plaquette's two
# flags are listed in the opposite order from the usual table, so its
# single-flag pattern that needs no correction is "00 00 01" here.
FLAG_SET_1 = frozenset(map(_p, ("00 00 00", "10 00 00", "01 00 00", "00 01 00", "00 00 01")))
FLAG_SET_2 = FLAG_SET_1 | frozenset(map(_p, ("00 11 00", "00 00 11", "11 00 00", "00 10 00",
                                             "00 00 10")))


def table_pattern(pattern: str) -> str:
    """Translate between the usual table order and the citadel flag order.

    Only the flags of the third plaquette are exchanged; the map is its own
    inverse.
    """
    bits = pattern.replace(" ", "")
    return group_pattern(bits[:4] + bits[5] + bits[4])


@lru_cache(maxsize=None)
def pattern_corrections() -> dict[int, int]:
    """Single-flag-plaquette patterns of the FB encoder that need an X fix."""
    out = {}
    for cls in classify_flag_patterns(build_flag_bridge_encoder()):
        if cls.admissible and cls.correction is not None:
            out[_p(cls.pattern)] = cls.correction.x
    return out


@dataclass(frozen=True)
class PostSelectionPolicy:
    """Accepted flag patterns plus the X correction applied for each one."""
    kind: str
    accepted: frozenset[int] | None  # None accepts everything
    corrections: dict[int, int] = field(default_factory=dict, compare=False)

    def accepts(self, f0: np.ndarray) -> np.ndarray:
        if self.accepted is None:
            return np.ones(f0.shape, dtype=bool)
        return np.isin(f0, sorted(self.accepted))

    def correction_masks(self, f0: np.ndarray) -> np.ndarray:
        out = np.zeros(f0.shape, dtype=np.int64)
        for pat, mask in self.corrections.items():
            if self.accepted is None or pat in self.accepted:
                out[f0 == pat] = mask
        return out


def policy(kind: str) -> PostSelectionPolicy:
    """Encoding policies: ``trivial``, ``set1``, ``set2`` or ``none``."""
    if kind == "trivial":
        return PostSelectionPolicy(kind, frozenset({0}))
    if kind == "set1":
        return PostSelectionPolicy(kind, FLAG_SET_1, pattern_corrections())
    if kind == "set2":
        return PostSelectionPolicy(kind, FLAG_SET_2, pattern_corrections())
    if kind == "none":
        return PostSelectionPolicy(kind, None)
    raise ValueError(f"unknown policy {kind!r}")


# -- shot records ----------------------------------------------------------------------

@dataclass
class ShotBatch:
    """Measurement records and final data frame of a batch of shots (one array per field)."""
    shots: int
    s0X: np.ndarray = None
    f0X: np.ndarray = None  # six flag bits, or the verification bit
    s0Z: np.ndarray = None
    f0Z: np.ndarray = None
    s1X: np.ndarray = None
    s1Z: np.ndarray = None
    f1X: np.ndarray = None
    f1Z: np.ndarray = None
    s2X: np.ndarray = None
    s2Z: np.ndarray = None
    f2X: np.ndarray = None
    f2Z: np.ndarray = None
    b0X: np.ndarray = None
    b0Z: np.ndarray = None
    terminated: np.ndarray = None
    encoded: np.ndarray = None  # passed encoding-stage post-selection
    data_x: np.ndarray = None  # X part of the data frame (7-bit masks)
    data_z: np.ndarray = None

    def __post_init__(self):
        for f in fields(self):
            if f.name != "shots" and getattr(self, f.name) is None:
                dtype = bool if f.name in ("terminated", "encoded") else np.int64
                fill = np.ones if f.name == "encoded" else np.zeros
                setattr(self, f.name, fill(self.shots, dtype=dtype))

    @property
    def f1(self) -> np.ndarray:
        return self.f1X | (self.f1Z << 6)

    def record(self, i: int) -> "ShotRecord":
        return ShotRecord(
            s0=(bits_to_str(self.s0X[i], 3), bits_to_str(self.s0Z[i], 3)),
            f0=(group_pattern(bits_to_str(self.f0X[i], 6)), group_pattern(bits_to_str(self.f0Z[i], 6))),
            s1=(bits_to_str(self.s1X[i], 3), bits_to_str(self.s1Z[i], 3)),
            f1=(group_pattern(bits_to_str(self.f1X[i], 6)), group_pattern(bits_to_str(self.f1Z[i], 6))),
            s2=(bits_to_str(self.s2X[i], 3), bits_to_str(self.s2Z[i], 3)),
            b0=(bits_to_str(self.b0X[i], 7), bits_to_str(self.b0Z[i], 7)),
            terminated_early=bool(self.terminated[i]),
            residual_error=PauliOperator(N, int(self.data_x[i]), int(self.data_z[i])),
        )


@dataclass(frozen=True)
class ShotRecord:
    """One shot in readable form (X part, Z part) for each record slot."""
    s0: tuple[str, str]
    f0: tuple[str, str]
    s1: tuple[str, str]
    f1: tuple[str, str]
    s2: tuple[str, str]
    b0: tuple[str, str]
    terminated_early: bool
    residual_error: PauliOperator  # data frame before recovery


@dataclass
class Outcome:
    accepted: np.ndarray
    fail_estimated: np.ndarray
    fail_true: np.ndarray
    recovery_x: np.ndarray
    recovery_z: np.ndarray

    def counts(self) -> tuple[int, int, int]:
        a = self.accepted
        return int(a.sum()), int((self.fail_estimated & a).sum()), int((self.fail_true & a).sum())


# -- helpers -----------------------------------------------------------------------

def _pack(flips: dict[str, np.ndarray], slot: str, shots: int) -> np.ndarray:
    out = np.zeros(shots, dtype=np.int64)
    for label, bits in flips.items():
        name, idx = parse_label(label)
        if name == slot:
            out |= bits.astype(np.int64) << idx
    return out


def _noise(params: NoiseParams | None) -> NoiseParams | None:
    return params if params is not None and params.p > 0 else None


_gotorl_override: Circuit | None = None


def use_gotorl(circuit: Circuit | None) -> None:
    """Swap in another validated 3x3 GotoRL encoder (``None`` restores the shipped one).

    The flag-bridge move keys on qubit ids, so for ``gotorl-fb`` the override
    has to keep the shipped encoder's qubit placement.
    """
    global _gotorl_override
    if circuit is not None:
        validate_gotorl(circuit)
        shipped = {q.id: q.coord for q in load_gotorl().qubits}
        if {q.id: q.coord for q in circuit.qubits} != shipped:
            warnings.warn("GotoRL override moves qubits; the gotorl-fb SWAP layout will not fit it")
    _gotorl_override = circuit
    _circuits.cache_clear()


@lru_cache(maxsize=None)
def _circuits(which: str, swap_noise: str) -> Circuit:
    p = NoiseParams(0.0, swap_noise)
    if which == "fb":
        return for_noise(build_flag_bridge_encoder(), p)
    build = {
        "gotorl-fb": build_gotorl_fb_encoder,
        "gotorl-steane": build_steane_encoder,
        "steane-hybrid": build_steane_hybrid,
    }[which]
    return for_noise(build(_gotorl_override), p)


def _layout(name: str) -> FBLayout:
    return CITADEL if name == "citadel" else gotorl_fb_layout()


@lru_cache(maxsize=None)
def _checks(layout: str, round_tag: str) -> dict[str, Circuit]:
    return ec_checks(round_tag, "XZ", _layout(layout))


@lru_cache(maxsize=None)
def f1s2_table(layout: str = "citadel") -> np.ndarray:
    """Flag-aware LUT as a (64, 8) array of X recoveries; -1 marks a missing key."""
    checks = [c for k, c in _checks(layout, "1").items() if k.endswith("X")]
    lut = build_f1s2_lut(checks)
    arr = np.full((64, 8), -1, dtype=np.int64)
    arr[0] = LOOKUP_ARRAY
    for (f1, s2), rec in lut.items():
        arr[_p(f1), _p(s2)] = rec.x
    return arr


def _new_frame(n: int, shots: int, rng: np.random.Generator) -> FrameBatch:
    return FrameBatch(n, shots, rng)


# -- encoding only -----------------------------------------------------------------

@dataclass
class EncodingBatch:
    f0: np.ndarray  # flag pattern (FB: 6 bits) or verification bit
    s0X: np.ndarray
    data_x: np.ndarray

    def failures(self, pol: PostSelectionPolicy) -> np.ndarray:
        """Harmful X error left after the policy's pattern corrections."""
        return true_failures(self.data_x ^ pol.correction_masks(self.f0))


def run_encoder(kind: str, params: NoiseParams, shots: int,
                rng: np.random.Generator) -> EncodingBatch:
    """``kind``: ``fb``, ``gotorl-fb`` or ``gotorl-steane``."""
    circ = _circuits(kind, params.swap_noise)
    frame = _new_frame(circ.n, shots, rng)
    flips = run(frame, circ, _noise(params))
    if kind == "fb":
        f0 = _pack(flips, "f0X", shots)
        s0 = _pack(flips, "s0X", shots)
    else:
        f0 = _pack(flips, "f0X" if kind == "gotorl-steane" else "f0", shots)
        s0 = syndromes(_pack(flips, "b0X", shots)) if kind == "gotorl-steane" else np.zeros(shots, np.int64)
    return EncodingBatch(f0, s0, frame.x_mask(DATA))


def run_encoding_only(kind: str, params: NoiseParams, pol: PostSelectionPolicy | str,
                      shots: int, rng: np.random.Generator) -> Outcome:
    pol = policy(pol) if isinstance(pol, str) else pol
    if kind != "fb" and pol.kind not in ("trivial", "none"):
        raise ValueError("verification-based encoders only support the trivial or none policy")
    enc = run_encoder(kind, params, shots, rng)
    fail = enc.failures(pol)
    rec = pol.correction_masks(enc.f0)
    return Outcome(pol.accepts(enc.f0), fail, fail, rec, np.zeros(shots, np.int64))


def pattern_breakdown(params: NoiseParams, shots: int, rng: np.random.Generator,
                      patterns=None) -> dict[str, tuple[int, int]]:
    """(shots, failures) per FB-encoder flag pattern, corrections applied."""
    enc = run_encoder("fb", params, shots, rng)
    fail = enc.failures(policy("set2"))
    out = {}
    pats = sorted(set(enc.f0.tolist())) if patterns is None else [_p(p) for p in patterns]
    for pat in pats:
        m = enc.f0 == pat
        out[group_pattern(bits_to_str(pat, 6))] = (int(m.sum()), int(fail[m].sum()))
    return out


# -- flag-bridge EC cycle ------------------------------------------------------------

def _run_check(frame: FrameBatch, circ: Circuit, noise, mask):
    flips = run(frame, circ, noise, mask)
    syn = next(v for k, v in flips.items() if k.startswith("s"))
    fl = [v for k, v in sorted(flips.items(), key=lambda kv: parse_label(kv[0])) if k.startswith("f")]
    return syn, fl


def _round(frame, checks, noise, mask, rec: ShotBatch, names, s_ref=None, sequential=True,
           store="1"):
    """Run checks in order on ``mask``; returns the shots still running.

    In a sequential round a shot stops after the first check whose flags fire
    or whose syndrome bit departs from ``s_ref``.
    """
    running = mask.copy()
    for name in names:
        i, basis = int(name[1]), name[2]
        syn, fl = _run_check(frame, checks[name], noise, running)
        sattr, fattr = f"s{store}{basis}", f"f{store}{basis}"
        setattr(rec, sattr, getattr(rec, sattr) | (syn.astype(np.int64) << (i - 1)))
        fbits = (fl[0].astype(np.int64) << (2 * i - 2)) | (fl[1].astype(np.int64) << (2 * i - 1))
        setattr(rec, fattr, getattr(rec, fattr) | fbits)
        if sequential:
            ref = np.zeros(frame.shots, bool) if s_ref is None or basis == "Z" else \
                (s_ref[basis] >> (i - 1) & 1).astype(bool)
            bad = running & (fl[0] | fl[1] | (syn != ref))
            running &= ~bad
    return running


ALL_CHECKS = ("S1X", "S2X", "S3X", "S1Z", "S2Z", "S3Z")


def _second_round(frame, layout, noise, rec: ShotBatch, clean: np.ndarray, todo: np.ndarray):
    checks2 = _checks(layout, "2")
    _round(frame, checks2, noise, todo, rec, ALL_CHECKS, sequential=False, store="2")
    rec.s2X = np.where(clean, rec.s1X, rec.s2X)
    rec.s2Z = np.where(clean, rec.s1Z, rec.s2Z)
    rec.terminated = todo


def run_bare(encoder: str, params: NoiseParams, shots: int, rng: np.random.Generator,
             perfect_encoding: bool = False) -> ShotBatch:
    """Encoding (``fb`` or ``gotorl``) followed by one full flag-bridge EC cycle."""
    noise = _noise(params)
    if encoder == "fb":
        circ, layout = _circuits("fb", params.swap_noise), "citadel"
    elif encoder == "gotorl":
        circ, layout = _circuits("gotorl-fb", params.swap_noise), "gotorl"
    else:
        raise ValueError(f"unknown encoder {encoder!r}")
    checks = _checks(layout, "1")
    frame = _new_frame(max(circ.n, max(_layout(layout).coords) + 1), shots, rng)
    rec = ShotBatch(shots)
    flips = run(frame, circ, None if perfect_encoding else noise)
    if encoder == "fb":
        rec.s0X = _pack(flips, "s0X", shots)
        rec.f0X = _pack(flips, "f0X", shots)
        s_ref = {"X": rec.s0X}
    else:
        rec.f0X = _pack(flips, "f0", shots)
        s_ref = {"X": np.zeros(shots, np.int64)}
    rec.encoded = rec.f0X == 0
    running = _round(frame, checks, noise, rec.encoded, rec, ALL_CHECKS, s_ref)
    _second_round(frame, layout, noise, rec, running, rec.encoded & ~running)
    rec.data_x = frame.x_mask(DATA)
    rec.data_z = frame.z_mask(DATA)
    return rec


def run_hybrid_fb(params: NoiseParams, shots: int, rng: np.random.Generator) -> ShotBatch:
    """The encoder's X checks double as the first half of EC round one."""
    noise = _noise(params)
    circ = _circuits("fb", params.swap_noise)
    frame = _new_frame(circ.n, shots, rng)
    rec = ShotBatch(shots)
    flips = run(frame, circ, noise)
    rec.s0X = _pack(flips, "s0X", shots)
    rec.f0X = _pack(flips, "f0X", shots)
    rec.s1X = rec.s0X.copy()
    rec.f1X = rec.f0X.copy()
    running = rec.f0X == 0
    running = _round(frame, _checks("citadel", "1"), noise, running, rec, ALL_CHECKS[3:])
    rec.s0Z, rec.f0Z = rec.s1Z.copy(), rec.f1Z.copy()
    _second_round(frame, "citadel", noise, rec, running, ~running)
    rec.data_x = frame.x_mask(DATA)
    rec.data_z = frame.z_mask(DATA)
    return rec


def run_steane_hybrid(params: NoiseParams, shots: int, rng: np.random.Generator) -> ShotBatch:
    """|0>_L ancilla + transversal X check (the encoding), then a |+>_L Z check."""
    circ = _circuits("steane-hybrid", params.swap_noise)
    frame = _new_frame(circ.n, shots, rng)
    flips = run(frame, circ, _noise(params))
    rec = ShotBatch(shots)
    rec.f0X = _pack(flips, "f0X", shots)
    rec.f0Z = _pack(flips, "f0Z", shots)
    rec.b0X = _pack(flips, "b0X", shots)
    rec.b0Z = _pack(flips, "b0Z", shots)
    rec.s0X = syndromes(rec.b0X)
    rec.s0Z = syndromes(rec.b0Z)
    rec.s2X, rec.s2Z = rec.s0X, rec.s0Z
    rec.encoded = (rec.f0X == 0) & (rec.f0Z == 0)
    rec.data_x = frame.x_mask(DATA)
    rec.data_z = frame.z_mask(DATA)
    return rec


# -- decoding ----------------------------------------------------------------------

DECODERS = ("s2", "f1s2")


def decode(rec: ShotBatch, strategy: str = "f1s2", post_select: bool = True,
           layout: str = "citadel") -> Outcome:
    """Recovery from (f1, s2) and failure classification of the corrected data.

    ``s2``: Table-lookup on s2 for both error types; with ``post_select`` only
    shots with trivial f1 are kept.  ``f1s2``: the X recovery comes from the
    flag-aware LUT keyed on (f1X, s2Z).  The LUT has no entries for Z-check
    flags, so a shot is accepted only if f1Z is trivial and its (f1X, s2Z)
    key is present.
    """
    rec_z = LOOKUP_ARRAY[rec.s2X]
    accepted = rec.encoded.copy()
    if strategy == "s2":
        rec_x = LOOKUP_ARRAY[rec.s2Z]
        if post_select:
            accepted &= rec.f1 == 0
    elif strategy == "f1s2":
        rec_x = f1s2_table(layout)[rec.f1X, rec.s2Z]
        accepted &= (rec_x >= 0) & (rec.f1Z == 0)
        rec_x = np.where(rec_x >= 0, rec_x, 0)
    else:
        raise ValueError(f"unknown decoder {strategy!r}")
    residual = rec.data_x ^ rec_x
    return Outcome(accepted, estimated_failures(residual), true_failures(residual), rec_x, rec_z)


def decode_steane(rec: ShotBatch, post_select_s0Z: bool = False) -> Outcome:
    rec_x = LOOKUP_ARRAY[rec.s0Z]
    rec_z = LOOKUP_ARRAY[rec.s0X]
    accepted = rec.encoded.copy()
    if post_select_s0Z:
        accepted &= rec.s0Z == 0
    residual = rec.data_x ^ rec_x
    return Outcome(accepted, estimated_failures(residual), true_failures(residual), rec_x, rec_z)


# -- one entry point per protocol name -------------------------------------------------

def simulate(protocol: str, params: NoiseParams, shots: int, rng: np.random.Generator,
             pol: str = "trivial", decoder: str = "f1s2") -> Outcome:
    """Run ``shots`` shots of a named protocol and classify them.

    Encoding protocols use ``pol`` (trivial / set1 / set2 / none).  EC
    protocols use ``decoder`` with post-selection unless ``pol`` is "none";
    for Steane EC, ``pol`` "s0Z" adds the Z-syndrome post-selection.
    """
    if protocol == "enc-fb":
        return run_encoding_only("fb", params, pol, shots, rng)
    if protocol == "enc-gotorl-fb":
        return run_encoding_only("gotorl-fb", params, pol, shots, rng)
    if protocol == "enc-gotorl-steane":
        return run_encoding_only("gotorl-steane", params, pol, shots, rng)
    ps = pol != "none"
    if protocol == "bare-fb":
        return decode(run_bare("fb", params, shots, rng), decoder, ps)
    if protocol == "bare-gotorl":
        return decode(run_bare("gotorl", params, shots, rng), decoder, ps, layout="gotorl")
    if protocol == "ec-only":
        return decode(run_bare("fb", params, shots, rng, perfect_encoding=True), decoder, ps)
    if protocol == "hybrid-fb":
        return decode(run_hybrid_fb(params, shots, rng), decoder, ps)
    if protocol == "hybrid-steane":
        return decode_steane(run_steane_hybrid(params, shots, rng), pol == "s0Z")
    raise ValueError(f"unknown protocol {protocol!r}; choose from {', '.join(PROTOCOLS)}")
