"""Search for a verified |0>_L encoder on a 3x3 grid plus a 6-SWAP move into
a flag-bridge-ready layout.

Register: the 12 sites of a 4x4 grid without its corners.  The encoder runs
in a 3x3 window of it with the verification qubit at the window centre (the
Steane-EC move needs every code qubit on the window border); the window's
missing corner is the one empty site.  The four sites outside the window
start in |0>.

After the move, the 7 code qubits sit on 7 of the 12 sites and the other 5
serve as check ancillas.  A layout is flag-bridge ready when every X-check
support can be wired 2/1/1 to three ancillas: the syndrome qubit touches two
of the code qubits and each flag touches one, with the flags either both
next to the syndrome qubit (star) or in a line with it (chain).

The encoder: 3 qubits start in |+>, the rest in |0>, then exactly 11
nearest-neighbour CNOTs, then the single verification qubit is measured in Z.
Circuits of this form only ever produce CSS states, so the state is tracked as
the 3-dimensional span of its X stabilisers; a forward breadth-first search
from every possible start span gives exact distances that prune a depth-first
walk back from the target span.  Single faults are checked on bitmasks while
gates are placed (from the end backwards), and the full checker certifies
any survivor.

The SWAP network (4 disjoint SWAPs, then 2 disjoint SWAPs) is enumerated
first; it fixes where the encoder's qubits end up.  Every SWAP moves exactly
one code qubit: a SWAP between two code qubits would turn one fault into a
weight-2 error, and one between two ancillas would do nothing useful.

Usage: python tools/search_gotorl.py [--out src/ftqec/data]
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from collections import deque
from pathlib import Path

from ftqec.circuit import CircuitBuilder, dump_circuit, h_dual
from ftqec.circuits import CheckSpec, build_flag_circuit
from ftqec.code import ROW_MASKS, STABILIZER_SPAN, _TRUE7
from ftqec.pauli import PauliOperator
from ftqec.tableau import run_circuit
from ftqec.verify import LUTConflict, build_f1s2_lut, verify_fault_tolerance

CORNERS = {(0, 0), (0, 3), (3, 0), (3, 3)}
SITES = [(r, c) for r in range(4) for c in range(4) if (r, c) not in CORNERS]
N_CNOT = 11


def adjacent(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def matchings(edges, k):
    """All sets of ``k`` vertex-disjoint edges (sorted, deterministic)."""
    out = []

    def rec(start, chosen, used):
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        for i in range(start, len(edges)):
            a, b = edges[i]
            if a in used or b in used:
                continue
            rec(i + 1, chosen + [edges[i]], used | {a, b})

    rec(0, [], frozenset())
    return out


def final_positions(stages):
    """Site each site's content ends up on after the SWAP stages."""
    pos = {s: s for s in SITES}
    for stage in stages:
        step = dict(pos)
        for a, b in stage:
            for s, p in pos.items():
                if p == a:
                    step[s] = b
                elif p == b:
                    step[s] = a
        pos = step
    return pos


def _move(stage, data_sites):
    """Code-qubit sites after one stage, or None unless each SWAP moves exactly one."""
    nxt = set(data_sites)
    for a, b in stage:
        if (a in data_sites) == (b in data_sites):
            return None
        nxt ^= {a, b}
    return frozenset(nxt)


def placements():
    """(window offset, verification site, swap stages, final position map)."""
    edges = [(a, b) for a, b in itertools.combinations(SITES, 2) if adjacent(a, b)]
    m4, m2 = matchings(edges, 4), matchings(edges, 2)
    for off in ((0, 0), (0, 1), (1, 0), (1, 1)):
        win = [(off[0] + r, off[1] + c) for r in range(3) for c in range(3)]
        anc = win[4]
        data = frozenset(s for s in win if s in SITES and s != anc)
        for st1 in m4:
            mid = _move(st1, data)
            if mid is None:
                continue
            for st2 in m2:
                if set(st1) & set(st2):
                    continue
                if _move(st2, mid) is not None:
                    yield off, anc, (st1, st2), final_positions((st1, st2))


# -- layout wiring ----------------------------------------------------------------

def check_wirings(supp, site_of, anc_sites):
    """Every (syndrome, flags, data order, topology) bridge wiring of one check."""
    out = []
    for s, f1, f2 in itertools.permutations(anc_sites, 3):
        if not adjacent(s, f1):
            continue
        if adjacent(s, f2):
            if f1 > f2:
                continue  # star: flag order is a convention
            topology = "star"
        elif adjacent(f1, f2):
            topology = "chain"
        else:
            continue
        for d2, d3 in itertools.permutations(supp, 2):
            d01 = [q for q in supp if q not in (d2, d3)]
            if (adjacent(site_of[d2], f1) and adjacent(site_of[d3], f2)
                    and all(adjacent(site_of[q], s) for q in d01)):
                for d0, d1 in (d01, d01[::-1]):
                    out.append((s, (f1, f2), (d0, d1, d2, d3), topology))
    return out


def wirings(site_of):
    """Per-check wiring options for a code labelling of 7 sites, or None."""
    anc_sites = [s for s in SITES if s not in site_of.values()]
    opts = {}
    for i, row in enumerate(ROW_MASKS, 1):
        supp = [q for q in range(7) if row >> q & 1]
        opts[i] = check_wirings(supp, site_of, anc_sites)
        if not opts[i]:
            return None
    return opts


# -- span search ------------------------------------------------------------------

def rref(vecs):
    rows = list(vecs)
    out = []
    for bit in range(15, -1, -1):
        piv = next((r for r in rows if r >> bit & 1), None)
        if piv is None:
            continue
        rows.remove(piv)
        rows = [r ^ piv if r >> bit & 1 else r for r in rows]
        out = [o ^ piv if o >> bit & 1 else o for o in out]
        out.append(piv)
    return tuple(sorted(out))


def apply_cnot(state, c, t):
    return rref([v ^ (1 << t) if v >> c & 1 else v for v in state])


_FORWARD: dict = {}


def forward_distances(occupied: tuple[int, ...]):
    """Distances from every 3-pivot start state, over window-site bit indices."""
    if occupied in _FORWARD:
        return _FORWARD[occupied]
    coords = {s: divmod(s, 3) for s in occupied}
    moves = [(a, b) for a in occupied for b in occupied if a != b and adjacent(coords[a], coords[b])]
    dist = {}
    q = deque()
    for piv in itertools.combinations(occupied, 3):
        st = rref([1 << p for p in piv])
        dist[st] = 0
        q.append(st)
    while q:
        s = q.popleft()
        d = dist[s]
        if d >= N_CNOT:
            continue
        for c, t in moves:
            n = apply_cnot(s, c, t)
            if n not in dist:
                dist[n] = d + 1
                q.append(n)
    _FORWARD[occupied] = (dist, moves)
    return dist, moves


def build(local_coords, anc, pivots, seq):
    b = CircuitBuilder("gotorl")
    for q, xy in local_coords.items():
        b.qubit(q, "verification" if q == anc else "data", xy)
    for q in sorted(local_coords):
        if q in pivots:
            b.prep_x(q)
        else:
            b.prep_z(q)
    for c, t in seq:
        b.cx(c, t)
    b.meas_z(anc, "f0[0]")
    return b.build()


def prepares_zero_l(circ):
    state, rec, rnd = run_circuit(circ)
    if rnd["f0[0]"] or rec["f0[0]"]:
        return False
    n = circ.n
    for m in ROW_MASKS:
        if state.expectation(PauliOperator(n, m, 0)) != 1:
            return False
        if state.expectation(PauliOperator(n, 0, m)) != 1:
            return False
    return state.expectation(PauliOperator(n, 0, 0b1001001)) == 1


def _harmful(mask: int) -> bool:
    return bool(_TRUE7[mask & 0x7F])


def _push_x(m, gates):
    for c, t in gates:
        if m >> c & 1:
            m ^= 1 << t
    return m


def _faults_ok(gate, later, anc):
    """X parts of faults right after ``gate`` must be flagged if they end up harmful.

    Only X parts matter for |0>_L.  The H-dual encoder moves Z parts along
    exactly the same paths, so one check covers both.
    """
    c, t = gate
    for m in (1 << c, 1 << t, (1 << c) | (1 << t)):
        x = _push_x(m, later)
        if _harmful(x) and not x >> anc & 1:
            return False
    return True


def _inputs_ok(gates, anc):
    for q in range(8):
        m = _push_x(1 << q, gates)
        if _harmful(m) and not m >> anc & 1:
            return False
    return True


def search_encoder(local_coords, anc, limit=5_000_000):
    """Walk back from the code span along exact-distance paths; first certified wins.

    Gates are placed from the end of the circuit towards the start, so every
    fault after a placed gate can be checked as soon as the gate is placed.
    Adjacent gates on disjoint qubits are kept in one canonical order.
    """
    site = {q: xy[0] * 3 + xy[1] for q, xy in local_coords.items()}
    qubit_at = {s: q for q, s in site.items()}
    occupied = tuple(sorted(site.values()))
    dist, moves = forward_distances(occupied)
    target = rref([sum(1 << site[j] for j in range(7) if m >> j & 1) for m in ROW_MASKS])
    if dist.get(target, 99) > N_CNOT:
        return None, 0
    tried = 0
    # seq holds qubit-level gates in circuit order (earliest first)
    stack = [(target, ())]
    while stack:
        state, seq = stack.pop()
        left = N_CNOT - len(seq)
        if left == 0:
            if dist.get(state) != 0:
                continue
            tried += 1
            if _inputs_ok(seq, anc):
                pivots = {qubit_at[s] for s in occupied if any(v == 1 << s for v in state)}
                circ = build(local_coords, anc, pivots, list(seq))
                if (prepares_zero_l(circ)
                        and verify_fault_tolerance(circ, predicate="zero", data=list(range(7)))
                        and verify_fault_tolerance(h_dual(circ), predicate="plus",
                                                   data=list(range(7)))):
                    return circ, tried
            if tried >= limit:
                return None, tried
            continue
        for sc, st in reversed(moves):
            g = (qubit_at[sc], qubit_at[st])
            if seq:
                nxt_g = seq[0]
                if nxt_g == g:
                    continue
                if not {g[0], g[1]} & {nxt_g[0], nxt_g[1]} and g > nxt_g:
                    continue
            nxt = apply_cnot(state, sc, st)
            if dist.get(nxt, 99) > left - 1:
                continue
            if not _faults_ok(g, seq, anc):
                continue
            stack.append((nxt, (g,) + seq))
    return None, tried


# -- layout certification -----------------------------------------------------------

def physical_ids(site_of):
    """Code qubits keep their index at their final site; ancillas get 7..11 by site."""
    ids = {site_of[q]: q for q in range(7)}
    for s in SITES:
        if s not in ids:
            ids[s] = len(ids)
    return ids


def checks_ok(checks, ids):
    """Every X and Z bridge check is fault tolerant and the flag LUT is consistent."""
    coords = {q: s for s, q in ids.items()}
    circs = []
    for basis in "XZ":
        for i, spec in checks.items():
            stab = PauliOperator(12, ROW_MASKS[i - 1], 0) if basis == "X" else \
                PauliOperator(12, 0, ROW_MASKS[i - 1])
            c = build_flag_circuit(3, stab, spec.syndrome, spec.flags, spec.data, spec.topology,
                                   coords, (f"s1{basis}", f"f1{basis}"), i - 1)
            if not verify_fault_tolerance(c, data=list(range(7))):
                return False
            if basis == "X":
                circs.append(c)
    try:
        build_f1s2_lut(circs)
    except LUTConflict:
        return False
    return True


def certify_layout(site_of, opts, limit=2000):
    """First wiring choice whose checks pass :func:`checks_ok`, as CheckSpecs."""
    ids = physical_ids(site_of)
    for n, choice in enumerate(itertools.product(*(opts[i] for i in (1, 2, 3)))):
        if n >= limit:
            break
        cand = {i: CheckSpec(ids[s], (ids[f[0]], ids[f[1]]), d, t)
                for i, (s, f, d, t) in zip((1, 2, 3), choice)}
        if checks_ok(cand, ids):
            return ids, cand
    return None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/ftqec/data"))
    args = ap.parse_args(argv)

    labellings = {}  # final code-qubit site set -> wirable labellings

    def wirable(ends):
        if ends not in labellings:
            opts = []
            for perm in itertools.permutations(sorted(ends)):
                site_of = dict(enumerate(perm))
                w = wirings(site_of)
                if w is not None:
                    opts.append((site_of, w))
            labellings[ends] = opts
        return labellings[ends]

    found = {}  # span key -> certified encoder or None
    n_place = 0
    for off, anc_site, stages, pos in placements():
        n_place += 1
        win = [(off[0] + r, off[1] + c) for r in range(3) for c in range(3)]
        starts = [s for s in win if s in SITES and s != anc_site]
        inv = {pos[s]: s for s in starts}
        by_span = {}
        for site_of, w in wirable(frozenset(inv)):
            local = {q: (inv[site_of[q]][0] - off[0], inv[site_of[q]][1] - off[1])
                     for q in range(7)}
            span = rref([sum(1 << (local[j][0] * 3 + local[j][1]) for j in range(7) if m >> j & 1)
                         for m in ROW_MASKS])
            by_span.setdefault((off, span), []).append((site_of, w, local))
        for key, options in by_span.items():
            if key not in found:
                local = dict(options[0][2])
                local[7] = (anc_site[0] - off[0], anc_site[1] - off[1])
                found[key], tried = search_encoder(local, 7)
                print(f"{n_place} window {off} swaps {stages}: tried {tried}", file=sys.stderr)
            if found[key] is None:
                continue
            for site_of, w, local in options:
                hit = certify_layout(site_of, w)
                if hit is not None:
                    local = dict(local)
                    local[7] = (anc_site[0] - off[0], anc_site[1] - off[1])
                    write(args.out, found[key], off, stages, *hit, local)
                    return 0
    print(f"no certified encoder found ({n_place} placements)", file=sys.stderr)
    return 1


def write(out, circ, off, stages, ids, checks, local):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    header = ("# Verified |0>_L encoder on a 3x3 grid: 7 data qubits (ids = code qubit\n"
              "# index) and one verification qubit (id 7).  11 CNOTs.\n"
              "# Found by tools/search_gotorl.py.\n")
    (out / "gotorl.txt").write_text(header + dump_circuit(circ))
    meta = {
        "window_offset": list(off),
        "coords": {str(q): list(s) for s, q in sorted(ids.items(), key=lambda kv: kv[1])},
        "embed": {str(q): ids[(xy[0] + off[0], xy[1] + off[1])] for q, xy in sorted(local.items())},
        "swaps": [[[ids[a], ids[b]] for a, b in stage] for stage in stages],
        "checks": {str(i): {"syndrome": c.syndrome, "flags": list(c.flags), "data": list(c.data),
                            "topology": c.topology} for i, c in checks.items()},
    }
    (out / "gotorl_fb.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(circ)
    print(json.dumps(meta))


if __name__ == "__main__":
    sys.exit(main())
