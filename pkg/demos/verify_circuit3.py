"""Exhaustive single-fault check of the two-flag XXXX parity check (Circuit 3).

Prints every harmful fault with its syndrome and flag outcome, then the
verdict.  Every harmful fault should raise at least one flag.
"""
from ftqec.circuits import circuit3_reference
from ftqec.verify import format_report, verify_fault_tolerance

circ = circuit3_reference()
res = verify_fault_tolerance(circ, gate_faults_only=True)
print(format_report(res.harmful, circ), end="")
print(f"\n{len(res.reports)} single faults, {len(res.harmful)} harmful,",
      "fault tolerant" if res else f"{len(res.violations)} unflagged")
