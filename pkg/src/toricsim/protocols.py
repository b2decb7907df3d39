"""Builders for the simulated experiments.

Every experiment follows the same skeleton: a perfect preparation round
(all stabilizers plus the initial observables), noisy syndrome rounds,
the logical layer(s) with their own noise, more rounds, and a final
readout that reconstructs stabilizers and observables classically.

Detector antecedents are computed generically: the builder keeps every
tracked measurement as an operator evolved to the current time, and each
new measurement is decomposed over the tracked set by GF(2) elimination.
Measuring the original stabilizer supports after an entangling layer then
produces the recombined three-term detectors (and hence hyperedges) of
the paper's decoding graphs without protocol-specific case work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .circuits import (
    Circuit,
    GateLayer,
    MeasureLayer,
    NoiseLayer,
    depolarize1,
    depolarize2,
)
from .gf2 import Echelon
from .geometry import (
    CodeBlock,
    TwistGuide,
    build_patch,
    build_toric_code,
    cnot_layer,
    cz_layer,
    dehn_step_layer,
    fold_s_layer,
    hadamard_layer,
    idt_apply,
    patch_cnot_layer,
)
from .paulis import CliffordLayer, PauliString

PROTOCOLS = (
    "memory",
    "complete_memory",
    "transversal_cnot",
    "transversal_cz",
    "dehn_twist",
    "instantaneous_dehn_twist",
    "transversal_h",
    "partial_measurement",
    "folded_s",
)


@dataclass
class ProtocolSpec:
    kind: str
    d: int
    eps: float
    rounds_before: Optional[int] = None
    rounds_after: Optional[int] = None
    alpha: int = 1  # CNOT rounds per EC step (Dehn twist)
    m: int = 1  # measurement repetitions per EC step
    height: Optional[int] = None  # patch height (partial measurement)
    support_noise: bool = True
    gamma_rate: Optional[float] = None  # override for the last pre-gate round

    def __post_init__(self):
        if self.kind not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.kind!r}")
        if self.d < 2:
            raise ValueError("d >= 2 required")
        if not 0.0 <= self.eps <= 0.75:
            raise ValueError("eps out of range [0, 0.75]")
        if self.alpha < 1 or self.alpha > self.d:
            raise ValueError("alpha in [1, d]")
        if self.m < 1:
            raise ValueError("m >= 1")
        if self.height is not None and not 1 <= self.height <= self.d:
            raise ValueError("patch height in [1, d]")

    @property
    def r_before(self) -> int:
        return self.d if self.rounds_before is None else self.rounds_before

    @property
    def r_after(self) -> int:
        if self.rounds_after is not None:
            return self.rounds_after
        return self.d

    @property
    def patch_height(self) -> int:
        # d-1 keeps the torus distance unhindered; the floor of 3 keeps the
        # measurement observable itself above distance 2
        if self.height is not None:
            return self.height
        return min(self.d, max(3, self.d - 1))


class _Builder:
    def __init__(self, n: int):
        self.c = Circuit(n)
        self.n = n
        self.meas_count = 0
        # tracked stabilizer measurements per block, positionally aligned
        # with the block's generator list: (meas idx, operator evolved to now)
        self.tracked: Dict[int, List[Tuple[int, PauliString]]] = {}
        self._op_dict: Optional[Dict[Tuple[int, int], int]] = None
        self.obs_ops: List[PauliString] = []  # evolved observable operators
        self.obs_init: List[int] = []
        self.obs_names: List[str] = []
        self.final_meas: List[Tuple[int, PauliString]] = []

    # -- layer plumbing -------------------------------------------------
    def _append_measure(self, layer: MeasureLayer) -> int:
        base = self.meas_count
        self.c.layers.append(layer)
        self.meas_count += len(layer.measurements)
        return base

    def gate(self, layer: CliffordLayer):
        self.c.layers.append(GateLayer(layer))
        for entries in self.tracked.values():
            for i, (mi, op) in enumerate(entries):
                entries[i] = (mi, layer.conjugate(op))
        self.obs_ops = [layer.conjugate(op) for op in self.obs_ops]
        self._op_dict = None

    def noise(self, layer: NoiseLayer):
        if layer.locations:
            self.c.layers.append(layer)

    # -- antecedent resolution -------------------------------------------
    def _ops(self) -> Dict[Tuple[int, int], int]:
        if self._op_dict is None:
            self._op_dict = {}
            for entries in self.tracked.values():
                for mi, op in entries:
                    self._op_dict[(op.x, op.z)] = mi
        return self._op_dict

    def antecedents(self, s: PauliString, lineage: Optional[Tuple[int, int]] = None) -> List[int]:
        """Measurement indices whose outcomes predict s at the current time.

        Tries the exact operator, then the same-generator lineage entry plus
        an exact-match residual (stabilizer recombination around entangling
        layers), and falls back to GF(2) elimination over everything
        tracked.  The redundant generator of each toric set makes echelon
        solutions non-unique, so the cheap paths keep detectors local.
        """
        hit = self._ops().get((s.x, s.z))
        if hit is not None:
            return [hit]
        if lineage is not None:
            bi, g = lineage
            mi, op = self.tracked[bi][g]
            residual = s.multiply(op)
            rhit = self._ops().get((residual.x, residual.z))
            if rhit is not None:
                return [mi, rhit]
        tracked = self._all_tracked()
        ech = Echelon()
        for _, op in tracked:
            ech.add(op.symplectic)
        sol = ech.solve(s.symplectic)
        if sol is None:
            raise ValueError("measured operator has no deterministic antecedent")
        return [tracked[i][0] for i in sol]

    # -- rounds ----------------------------------------------------------
    def prep(self, blocks: Sequence[CodeBlock], observables: Sequence[Tuple[str, PauliString]]):
        """Perfect preparation: project stabilizers and record observables."""
        meas: List[PauliString] = []
        owners: List[int] = []
        kinds: List[str] = []
        for bi, block in enumerate(blocks):
            for s in block.x_stabs:
                meas.append(s)
                owners.append(bi)
                kinds.append("X")
            for s in block.z_stabs:
                meas.append(s)
                owners.append(bi)
                kinds.append("Z")
        obs_base = len(meas)
        for _, op in observables:
            meas.append(op)
        base = self._append_measure(MeasureLayer(meas, 0.0, ideal=True))
        for k, (owner, kind) in enumerate(zip(owners, kinds)):
            self.tracked.setdefault(owner, []).append((base + k, meas[k]))
        for i, (name, op) in enumerate(observables):
            self.obs_names.append(name)
            self.obs_init.append(base + obs_base + i)
            self.obs_ops.append(op)

    def _all_tracked(self) -> List[Tuple[int, PauliString]]:
        out = []
        for bi in sorted(self.tracked):
            out += self.tracked[bi]
        return out

    def syndrome_round(
        self,
        block_stabs: Sequence[Tuple[int, CodeBlock, List[PauliString]]],
        rate: float,
        support_noise: bool,
        noise_rate: float,
    ):
        """One faulty extraction step: deposit qubit errors, then measure.

        The noise box precedes the measurement (the error locations of the
        experiment figures), so the window between the last pre-gate round
        and an entangling layer is noiseless and qubit defects stay
        edge-like.
        """
        meas: List[PauliString] = []
        owners: List[Tuple[int, str, int]] = []
        for bi, block, stabs in block_stabs:
            for g, s in enumerate(stabs):
                meas.append(s)
                owners.append((bi, "X" if s.x else "Z", g))
        if support_noise and noise_rate > 0:
            qubits = sorted({q for s in meas for q in s.support})
            self.noise(depolarize1(self.n, qubits, noise_rate))
        layer = MeasureLayer(meas, rate)
        base = self._append_measure(layer)
        li = len(self.c.layers) - 1

        new_entries: Dict[int, List[Tuple[int, PauliString]]] = {}
        for k, (s, (bi, kind, g)) in enumerate(zip(meas, owners)):
            lineage = (bi, g) if bi in self.tracked and g < len(self.tracked[bi]) else None
            det = [base + k] + self.antecedents(s, lineage)
            self.c.detectors.append(sorted(det))
            self.c.det_sector.append(kind)
            self.c.det_time.append(li)
            self.c.det_block.append(bi)
            new_entries.setdefault(bi, []).append((base + k, s))
        for bi, entries in new_entries.items():
            self.tracked[bi] = entries
        self._op_dict = None

    # -- final readout ----------------------------------------------------
    def data_measure(
        self,
        blocks: Sequence[Tuple[int, CodeBlock]],
        basis: str,
        rate: float,
    ):
        """Destructive single-qubit readout of whole blocks.

        Every currently tracked same-basis stabilizer of the measured
        blocks is reconstructed from the data and compared to its last
        measurement.
        """
        meas = []
        for _, block in blocks:
            for q in block.qubits:
                meas.append(PauliString.single(self.n, q, basis))
        base = self._append_measure(MeasureLayer(meas, rate))
        li = len(self.c.layers) - 1
        for k, m in enumerate(meas):
            self.final_meas.append((base + k, m))
        kind = "Z" if basis == "Z" else "X"
        idx_of = {}
        k = 0
        for _, block in blocks:
            for q in block.qubits:
                idx_of[q] = base + k
                k += 1
        mask = 0
        for q in idx_of:
            mask |= 1 << q
        for bi, block in blocks:
            for mi, op in self.tracked.get(bi, []):
                pure = op.x == 0 if basis == "Z" else op.z == 0
                if not pure:
                    continue
                bits = op.z if basis == "Z" else op.x
                if bits & mask == 0:
                    continue
                det = [idx_of[q] for q in op.support if (mask >> q) & 1] + [mi]
                rest = bits & ~mask
                if rest:
                    # the operator grew into an unmeasured block; close the
                    # comparison with that part's own antecedents
                    outside = (
                        PauliString(self.n, z=rest)
                        if basis == "Z"
                        else PauliString(self.n, x=rest)
                    )
                    det += self.antecedents(outside)
                self.c.detectors.append(sorted(det))
                self.c.det_sector.append(kind)
                self.c.det_time.append(li)
                self.c.det_block.append(bi)
            # keep the block's entries: they may still serve as antecedents
            # for operators that were spread across blocks before readout

    def pair_measure(self, pairs: Sequence[Tuple[CodeBlock, CodeBlock]], recon_blocks):
        """Perfect joint two-qubit readout (XX and ZZ per qubit pair)."""
        meas: List[PauliString] = []
        for noisy, ideal in pairs:
            for q, qi in zip(noisy.qubits, ideal.qubits):
                p = PauliString.single(self.n, q, "X").multiply(
                    PauliString.single(self.n, qi, "X")
                )
                meas.append(p)
            for q, qi in zip(noisy.qubits, ideal.qubits):
                p = PauliString.single(self.n, q, "Z").multiply(
                    PauliString.single(self.n, qi, "Z")
                )
                meas.append(p)
        base = self._append_measure(MeasureLayer(meas, 0.0))
        li = len(self.c.layers) - 1
        for k, m in enumerate(meas):
            self.final_meas.append((base + k, m))
        # reconstruct S (x) S' for every tracked stabilizer of the noisy
        # blocks; compare against S's last round and the ideal antecedents
        pair_ech = Echelon()
        for m in meas:
            pair_ech.add(m.symplectic)
        for bi, noisy, ideal in recon_blocks:
            for mi, op in self.tracked.get(bi, []):
                kind = "X" if op.x else "Z"
                mirror = PauliString(
                    self.n,
                    (op.x >> noisy.offset) << ideal.offset,
                    (op.z >> noisy.offset) << ideal.offset,
                )
                target = op.multiply(mirror)
                recon = pair_ech.solve(target.symplectic)
                if recon is None:
                    raise ValueError("pair reconstruction failed")
                det = [base + i for i in recon] + [mi] + self.antecedents(mirror)
                self.c.detectors.append(sorted(det))
                self.c.det_sector.append(kind)
                self.c.det_time.append(li)
                self.c.det_block.append(bi)

    def finalize(self) -> Circuit:
        """Resolve observable reconstructions over the final measurements."""
        ech = Echelon()
        for _, op in self.final_meas:
            ech.add(op.symplectic)
        for name, init_idx, op in zip(self.obs_names, self.obs_init, self.obs_ops):
            sol = ech.solve(op.symplectic)
            if sol is None:
                raise ValueError(f"observable {name} not reconstructable at readout")
            obs_set = [init_idx] + [self.final_meas[i][0] for i in sol]
            self.c.observables.append((name, sorted(obs_set)))
        return self.c

    def mark_gamma(self):
        self.c.gamma_time = len(self.c.layers) - 1


# ---------------------------------------------------------------------------
# experiment assembly helpers


def _joint(*ops: PauliString) -> PauliString:
    acc = ops[0]
    for op in ops[1:]:
        acc = acc.multiply(op)
    return acc


def _rounds(b, spec, blocks_stabs, count, gamma_last=False):
    for i in range(count):
        rate = spec.eps
        if gamma_last and i == count - 1 and spec.gamma_rate is not None:
            rate = spec.gamma_rate
        b.syndrome_round(blocks_stabs, rate, spec.support_noise, spec.eps)


def _gate_pairs(layer: CliffordLayer) -> List[Tuple[int, int]]:
    return [qs for kind, qs in layer.gates if len(qs) == 2]


def build(spec: ProtocolSpec) -> Circuit:
    return _BUILDERS[spec.kind](spec)


def _stab_list(block: CodeBlock) -> List[PauliString]:
    return block.x_stabs + block.z_stabs


def build_memory(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    t = build_toric_code(d, d)
    b = _Builder(t.n)
    obs = [("O1", t.logicals[0][1]), ("O2", t.logicals[1][1])]
    b.prep([t], obs)
    stabs = [(0, t, _stab_list(t))]
    _rounds(b, spec, stabs, spec.r_before)
    b.gate(CliffordLayer(t.n))  # logical identity
    b.noise(depolarize1(t.n, t.qubits, spec.eps))
    _rounds(b, spec, stabs, spec.r_after)
    b.data_measure([(0, t)], "Z", spec.eps)
    c = b.finalize()
    c.meta["protocol"] = "memory"
    return c


def build_complete_memory(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    n = 4 * d * d
    t = build_toric_code(d, d, offset=0, n_total=n)
    ti = build_toric_code(d, d, noisy=False, offset=2 * d * d, n_total=n)
    b = _Builder(n)
    obs = []
    for i in range(2):
        obs.append((f"O{i+1}", _joint(t.logicals[i][0], ti.logicals[i][0])))
    for i in range(2):
        obs.append((f"O{i+3}", _joint(t.logicals[i][1], ti.logicals[i][1])))
    b.prep([t, ti], obs)
    stabs = [(0, t, _stab_list(t))]
    _rounds(b, spec, stabs, spec.r_before)
    b.gate(CliffordLayer(n))  # logical identity on both codes
    b.noise(depolarize1(n, t.qubits, spec.eps))
    _rounds(b, spec, stabs, spec.r_after)
    b.noise(depolarize1(n, t.qubits, spec.eps))  # compensates perfect joint readout
    b.pair_measure([(t, ti)], [(0, t, ti)])
    c = b.finalize()
    c.meta["protocol"] = "complete_memory"
    return c


def build_transversal_cnot(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    n = 4 * d * d
    A = build_toric_code(d, d, offset=0, n_total=n)
    B = build_toric_code(d, d, offset=2 * d * d, n_total=n)
    b = _Builder(n)
    obs = [
        ("O1", A.logicals[0][1]),
        ("O2", A.logicals[1][1]),
        ("O3", B.logicals[0][1]),
        ("O4", B.logicals[1][1]),
    ]
    b.prep([A, B], obs)
    stabs = [(0, A, _stab_list(A)), (1, B, _stab_list(B))]
    _rounds(b, spec, stabs, spec.r_before, gamma_last=True)
    b.mark_gamma()
    layer = cnot_layer(A, B)
    b.gate(layer)
    b.noise(depolarize2(n, _gate_pairs(layer), spec.eps))
    _rounds(b, spec, stabs, spec.r_after)
    b.data_measure([(0, A), (1, B)], "Z", spec.eps)
    c = b.finalize()
    c.stage1_blocks = (1,)
    c.meta["protocol"] = "transversal_cnot"
    return c


def build_transversal_cz(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    nb = 2 * d * d
    n = 4 * nb
    A = build_toric_code(d, d, offset=0, n_total=n)
    B = build_toric_code(d, d, offset=nb, n_total=n)
    Ai = build_toric_code(d, d, noisy=False, offset=2 * nb, n_total=n)
    Bi = build_toric_code(d, d, noisy=False, offset=3 * nb, n_total=n)
    b = _Builder(n)
    # logical numbering: 1,2 on block A; 3,4 on block B; primes on copies
    obs = [
        ("O1", _joint(A.logicals[0][0], Ai.logicals[0][0])),
        ("O2", _joint(A.logicals[1][0], Ai.logicals[1][0])),
        ("O3", _joint(A.logicals[0][1], Ai.logicals[0][1])),
        ("O4", _joint(A.logicals[1][1], Ai.logicals[1][1])),
        ("O5", _joint(B.logicals[0][0], Bi.logicals[0][0])),
        ("O6", _joint(B.logicals[1][0], Bi.logicals[1][0])),
        ("O7", _joint(B.logicals[0][1], Bi.logicals[0][1])),
        ("O8", _joint(B.logicals[1][1], Bi.logicals[1][1])),
    ]
    b.prep([A, B, Ai, Bi], obs)
    stabs = [(0, A, _stab_list(A)), (1, B, _stab_list(B))]
    _rounds(b, spec, stabs, spec.r_before, gamma_last=True)
    b.mark_gamma()
    noisy_layer = cz_layer(A, B)
    ideal_layer = cz_layer(Ai, Bi)
    combined = CliffordLayer(n, noisy_layer.gates + ideal_layer.gates)
    b.gate(combined)
    b.noise(depolarize2(n, _gate_pairs(noisy_layer), spec.eps))
    _rounds(b, spec, stabs, spec.r_after)
    b.noise(depolarize1(n, A.qubits + B.qubits, spec.eps))
    b.pair_measure([(A, Ai), (B, Bi)], [(0, A, Ai), (1, B, Bi)])
    c = b.finalize()
    c.stage1_blocks = (1,)
    c.meta["protocol"] = "transversal_cz"
    return c


def build_dehn_twist(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    t = build_toric_code(d, d)
    b = _Builder(t.n)
    # guide-direction logical first (stays fixed), crossing logical second
    obs = [("O1", t.logicals[1][1]), ("O2", t.logicals[0][1])]
    b.prep([t], obs)
    guide = TwistGuide.horizontal(t)
    current = [t.x_stabs + t.z_stabs]
    _rounds(b, spec, [(0, t, current[0])], spec.r_before)
    since_ec = 0
    for step in range(1, d + 1):
        layer = dehn_step_layer(t, guide, step)
        b.gate(layer)
        b.noise(depolarize2(t.n, _gate_pairs(layer), spec.eps))
        current[0] = [layer.conjugate(s) for s in current[0]]
        since_ec += 1
        if since_ec == spec.alpha or step == d:
            since_ec = 0
            for _ in range(spec.m):
                b.syndrome_round(
                    [(0, t, current[0])], spec.eps, spec.support_noise, spec.eps
                )
    _rounds(b, spec, [(0, t, current[0])], spec.r_after)
    b.data_measure([(0, t)], "Z", spec.eps)
    c = b.finalize()
    c.meta["protocol"] = "dehn_twist"
    return c


def build_idt(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    t = build_toric_code(d, d)
    b = _Builder(t.n)
    obs = [("O1", t.logicals[1][1]), ("O2", t.logicals[0][1])]
    b.prep([t], obs)
    _rounds(b, spec, [(0, t, _stab_list(t))], spec.r_before)
    layer, t2 = idt_apply(t)
    b.gate(layer)
    b.noise(depolarize2(t.n, _gate_pairs(layer), spec.eps))
    _rounds(b, spec, [(0, t2, _stab_list(t2))], spec.r_after)
    b.data_measure([(0, t2)], "Z", spec.eps)
    c = b.finalize()
    c.meta["protocol"] = "instantaneous_dehn_twist"
    return c


def build_transversal_h(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    t = build_toric_code(d, d)
    b = _Builder(t.n)
    obs = [("O1", t.logicals[0][0]), ("O2", t.logicals[1][0])]
    b.prep([t], obs)
    _rounds(b, spec, [(0, t, _stab_list(t))], spec.r_before)
    layer = hadamard_layer(t)
    b.gate(layer)
    b.noise(depolarize1(t.n, t.qubits, spec.eps))
    dual_x = [layer.conjugate(s) for s in t.z_stabs]  # X on vertex supports
    dual_z = [layer.conjugate(s) for s in t.x_stabs]  # Z on face supports
    _rounds(b, spec, [(0, t, dual_x + dual_z)], spec.r_after)
    b.data_measure([(0, t)], "Z", spec.eps)
    c = b.finalize()
    c.meta["protocol"] = "transversal_h"
    return c


def build_partial_measurement(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    h = spec.patch_height
    nt = 2 * d * d
    patch_n = d * (2 * h - 1)
    n = nt + patch_n
    t = build_toric_code(d, d, offset=0, n_total=n)
    p = build_patch("Z", d, h, offset=nt, n_total=n)
    b = _Builder(n)
    obs = [
        ("O1", t.logicals[1][1]),  # untouched logical
        ("O2", t.logicals[0][1]),  # measured logical (stays Z)
        ("O3", p.logicals[0][1]),  # measurement observable
    ]
    b.prep([t, p], obs)
    stabs = [(0, t, _stab_list(t)), (1, p, _stab_list(p))]
    _rounds(b, spec, stabs, spec.r_before, gamma_last=True)
    b.mark_gamma()
    layer = patch_cnot_layer(t, p)
    b.gate(layer)
    b.noise(depolarize2(n, _gate_pairs(layer), spec.eps))
    b.data_measure([(1, p)], "Z", spec.eps)
    b.gate(CliffordLayer(n))  # torus idles through the readout
    b.noise(depolarize1(n, t.qubits, spec.eps))
    _rounds(b, spec, [(0, t, _stab_list(t))], spec.r_after)
    b.data_measure([(0, t)], "Z", spec.eps)
    c = b.finalize()
    c.stage1_blocks = (1,)
    c.meta["protocol"] = "partial_measurement"
    return c


def build_folded_s(spec: ProtocolSpec) -> Circuit:
    d = spec.d
    nb = 2 * d * d
    n = 2 * nb
    t = build_toric_code(d, d, offset=0, n_total=n)
    ti = build_toric_code(d, d, noisy=False, offset=nb, n_total=n)
    b = _Builder(n)

    def ybar(block, i):
        x, z = block.logicals[i]
        # Hermitian Y-type product (sign +1)
        return PauliString(n, x.x, z.z, (x.x & z.z).bit_count())

    obs = [
        ("O1", _joint(ybar(t, 0), ybar(ti, 0))),
        ("O2", _joint(ybar(t, 1), ybar(ti, 1))),
        ("O3", _joint(t.logicals[0][1], ti.logicals[0][1])),
        ("O4", _joint(t.logicals[1][1], ti.logicals[1][1])),
    ]
    b.prep([t, ti], obs)
    stabs = [(0, t, _stab_list(t))]
    _rounds(b, spec, stabs, spec.r_before, gamma_last=True)
    b.mark_gamma()
    noisy_layer = fold_s_layer(t)
    ideal_layer = fold_s_layer(ti)
    combined = CliffordLayer(n, noisy_layer.gates + ideal_layer.gates)
    b.gate(combined)
    singles = [qs[0] for kind, qs in noisy_layer.gates if kind == "S"]
    b.noise(depolarize1(n, singles, spec.eps))
    b.noise(depolarize2(n, _gate_pairs(noisy_layer), spec.eps))
    _rounds(b, spec, stabs, spec.r_after)
    b.noise(depolarize1(n, t.qubits, spec.eps))
    b.pair_measure([(t, ti)], [(0, t, ti)])
    c = b.finalize()
    c.meta["protocol"] = "folded_s"
    return c


_BUILDERS = {
    "memory": build_memory,
    "complete_memory": build_complete_memory,
    "transversal_cnot": build_transversal_cnot,
    "transversal_cz": build_transversal_cz,
    "dehn_twist": build_dehn_twist,
    "instantaneous_dehn_twist": build_idt,
    "transversal_h": build_transversal_h,
    "partial_measurement": build_partial_measurement,
    "folded_s": build_folded_s,
}


# ---------------------------------------------------------------------------
# two-step partition


def two_step_partition(dem) -> Tuple[List[int], List[int]]:
    """Split detectors for the hierarchical decoder.

    Stage 1 holds every detector of the early-closing block(s) plus the
    other blocks' detectors up to the last pre-gate round (the ancestors);
    stage 2 holds the rest.  Returns (stage1 indices, stage2 indices).
    For hyperedge-free models the partition is trivial (all stage 1).
    """
    if not dem.hyperedges():
        return list(range(dem.n_detectors)), []
    s1_blocks = set(dem.stage1_blocks)
    stage1, stage2 = [], []
    for i in range(dem.n_detectors):
        if dem.det_block[i] in s1_blocks or dem.det_time[i] <= dem.gamma_time:
            stage1.append(i)
        else:
            stage2.append(i)
    s1 = set(stage1)
    for mech in dem.hyperedges():
        d = dem.dets[mech]
        in1 = sum(1 for x in d if x in s1)
        if in1 > 2 or len(d) - in1 > 2:
            raise ValueError("partition leaves a hyperedge with >2 endpoints in a stage")
    return stage1, stage2
