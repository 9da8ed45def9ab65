import pytest

from ftqec.circuit import CircuitBuilder
from ftqec.circuits import (build_flag_bridge_encoder, build_flag_circuit, circuit3_reference,
                            citadel_check, ec_checks)
from ftqec.code import is_harmful_for_zero_L
from ftqec.pauli import PauliOperator
from ftqec.verify import (LUTConflict, build_f1s2_lut, classify_flag_patterns, enumerate_faults,
                          format_report, verify_fault_tolerance, x_equivalent)

import golden

C3_DATA, C3_ANC = [0, 1, 2, 3], [4, 5, 6]
FB_DATA, FB_ANC = list(range(7)), [7, 8, 9, 10]


def _rows(reports, data, anc):
    return [tuple(r.row(data, anc)) for r in reports]


def test_circuit3_harmful_faults_match_table():
    res = verify_fault_tolerance(circuit3_reference(), gate_faults_only=True)
    assert res.fault_tolerant and bool(res)
    assert _rows(res.harmful, C3_DATA, C3_ANC) == golden.TABLE_IV
    assert all(r.flagged for r in res.harmful)


def test_circuit3_with_prep_faults_still_tolerant():
    res = verify_fault_tolerance(circuit3_reference())
    extra = [r for r in res.harmful if r.kind == "prep"]
    # X or Y when preparing the first flag spreads like the -X fault after CX[4,5]
    assert len(extra) == 2 and all(r.flagged for r in extra)
    assert len(res.reports) == 135


def test_unflagged_check_is_not_fault_tolerant():
    c = build_flag_circuit(1, PauliOperator(4, 0b1111, 0), 4, ())
    res = verify_fault_tolerance(c)
    assert not res and res.violations
    assert all(r.harmful and not r.flagged for r in res.violations)


@pytest.mark.parametrize("pattern, table", [("010000", golden.TABLE_VI_A),
                                             ("110000", golden.TABLE_VI_B)])
def test_flag_bridge_plaquette_tables(pattern, table):
    enc = build_flag_bridge_encoder()
    reps = enumerate_faults(enc, blocks=["S1X"], gate_faults_only=True, predicate="zero")
    rows = _rows([r for r in reps if r.f == pattern], FB_DATA, FB_ANC)
    assert rows == table


def test_plaquette_gate_sequence():
    assert str(citadel_check(1, "X")) == golden.FB_STABILIZER_SEQ


def test_x3_fix_for_double_flag():
    classes = {c.pattern: c for c in classify_flag_patterns(build_flag_bridge_encoder())}
    fix = classes["11 00 00"].correction
    assert fix == PauliOperator.from_support("X", [2], 7)
    # re-certify: every single fault behind the pattern is harmless after the fix
    enc = build_flag_bridge_encoder()
    behind = [r for r in enumerate_faults(enc, predicate="zero") if r.f == "110000"]
    assert any(is_harmful_for_zero_L(PauliOperator(7, r.residual.x)) for r in behind)
    assert not any(is_harmful_for_zero_L(PauliOperator(7, r.residual.x ^ fix.x)) for r in behind)


def test_single_plaquette_patterns_are_admissible():
    classes = classify_flag_patterns(build_flag_bridge_encoder())
    single = [c for c in classes if not c.multi_check]
    assert len(single) == 10 and all(c.admissible for c in single)
    needs_fix = {c.pattern for c in single if c.correction is not None}
    # third plaquette flags run in the opposite order to the published table
    assert needs_fix == {"11 00 00", "00 10 00", "00 00 10"}
    assert all(not c.admissible for c in classes if c.multi_check)


def test_f1s2_lut_matches_table():
    checks = [c for k, c in ec_checks("1").items() if k.endswith("X")]
    lut = build_f1s2_lut(checks)
    assert set(lut) == set(golden.TABLE_V)
    for key, qubits in golden.TABLE_V.items():
        want = PauliOperator.from_support("X", [q - 1 for q in qubits], 7)
        assert x_equivalent(lut[key], want), key


def test_lut_conflict_detected():
    # a flagged X on the flag spreads to X2 X3, and a flagged fault on qubit 7
    # leaves X7: same key (flag, syndrome 001), logically different errors
    b = CircuitBuilder("clash")
    for q in range(7):
        b.qubit(q, "data")
    b.qubit(7, "flag")
    b.prep_z(7)
    b.cx(7, 1)
    b.cx(7, 2)
    b.h(6)
    b.h(6)
    b.cx(6, 7)
    b.meas_z(7, "f1X[0]")
    with pytest.raises(LUTConflict) as exc:
        build_f1s2_lut([b.build()])
    assert exc.value.key == ("1", "001")


def test_all_ec_checks_fault_tolerant():
    for name, c in ec_checks("1").items():
        assert verify_fault_tolerance(c, data=list(range(7))), name


def test_report_format():
    res = verify_fault_tolerance(circuit3_reference(), gate_faults_only=True)
    text = format_report(res.harmful, circuit3_reference())
    lines = text.splitlines()
    assert lines[0].split("\t") == ["Index", "Gate", "Fault", "Initial Pauli", "s", "f", "Error"]
    assert lines[1].split("\t") == list(golden.TABLE_IV[0])
    assert len(lines) == 17


def test_non_steane_code_rejected():
    from ftqec.code import CodeDefinition
    with pytest.raises(ValueError):
        verify_fault_tolerance(circuit3_reference(), code=CodeDefinition(n=5))
