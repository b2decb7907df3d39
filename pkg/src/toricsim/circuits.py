"""Experiment circuits: layered Clifford gates, noise, measurements, detectors.

A circuit is a flat list of layers. Measurement outcomes are numbered
globally in time order; detectors and observables are parity sets over
those indices.  The error model is phenomenological: noise layers hold
explicit error locations, measurement layers flip outcomes.

``extract_dem`` propagates every elementary fault forward and records the
detectors and observables it flips.  Pauli faults are decomposed into
their X- and Z-components (and, where a component still spans more than
two detectors per sector, per qubit), which keeps qubit defects edge-like;
measurement flips are never decomposed, so stabilizer recombination around
an entangling layer yields genuine hyperedges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .paulis import CliffordLayer, PauliString

MERGE_DROP = 1e-12


@dataclass
class GateLayer:
    clifford: CliffordLayer


@dataclass
class NoiseLayer:
    # each location: (p_each, [alternative Paulis]); alternatives are
    # mutually exclusive, each firing with probability p_each
    locations: List[Tuple[float, List[PauliString]]]


@dataclass
class MeasureLayer:
    measurements: List[PauliString]
    flip_rate: float = 0.0
    ideal: bool = False
    flip_rates: Optional[List[float]] = None  # per-measurement override (gamma hook)

    def rate_of(self, i: int) -> float:
        if self.flip_rates is not None:
            return self.flip_rates[i]
        return self.flip_rate


@dataclass
class Circuit:
    n: int
    layers: List[object] = field(default_factory=list)
    detectors: List[List[int]] = field(default_factory=list)
    observables: List[Tuple[str, List[int]]] = field(default_factory=list)
    # metadata used by decoders and the two-step partition
    det_sector: List[str] = field(default_factory=list)  # 'X' or 'Z' lineage
    det_time: List[int] = field(default_factory=list)  # layer index of newest term
    det_block: List[int] = field(default_factory=list)
    gamma_time: int = -1  # layer index of the last pre-gate syndrome round
    stage1_blocks: Tuple[int, ...] = ()
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def n_measurements(self) -> int:
        return sum(len(l.measurements) for l in self.layers if isinstance(l, MeasureLayer))

    def measurement_paulis(self) -> List[Tuple[PauliString, int]]:
        """All measurements with the index of their layer."""
        out = []
        for li, layer in enumerate(self.layers):
            if isinstance(layer, MeasureLayer):
                for m in layer.measurements:
                    out.append((m, li))
        return out


def depolarize1(n: int, qubits: Iterable[int], eps: float) -> NoiseLayer:
    locs = []
    for q in qubits:
        alts = [PauliString.single(n, q, k) for k in ("X", "Y", "Z")]
        locs.append((eps / 3.0, alts))
    return NoiseLayer(locs)


def depolarize2(n: int, pairs: Iterable[Tuple[int, int]], eps: float) -> NoiseLayer:
    locs = []
    kinds = ("I", "X", "Y", "Z")
    for a, b in pairs:
        alts = []
        for ka in kinds:
            for kb in kinds:
                if ka == kb == "I":
                    continue
                p = PauliString.identity(n)
                if ka != "I":
                    p = p.multiply(PauliString.single(n, a, ka))
                if kb != "I":
                    p = p.multiply(PauliString.single(n, b, kb))
                alts.append(p)
        locs.append((eps / 15.0, alts))
    return NoiseLayer(locs)


# ---------------------------------------------------------------------------
# validation


class _SymbolicState:
    """Stabilizer simulation on the maximally mixed state with symbolic
    outcomes.

    Group elements carry a value expression: bit 0 is a constant, higher
    bits reference fresh random outcome variables.  Measuring an operator
    already in the group yields a forced outcome expression; anything else
    collapses or extends the group with a fresh variable.
    """

    def __init__(self, n: int):
        self.n = n
        self.gens: List[Tuple[PauliString, int]] = []
        self.next_var = 1
        self._ech: Optional[object] = None

    @staticmethod
    def _normalize(p: PauliString, val: int) -> Tuple[PauliString, int]:
        s = (p.phase - (p.x & p.z).bit_count()) & 3
        if s == 2:
            return PauliString(p.n, p.x, p.z, p.phase + 2), val ^ 1
        if s != 0:
            raise AssertionError("non-Hermitian element")
        return p, val

    def conjugate(self, layer: CliffordLayer):
        new = []
        for g, v in self.gens:
            new.append(self._normalize(layer.conjugate(g), v))
        self.gens = new
        self._ech = None

    def _echelon(self):
        if self._ech is None:
            from .gf2 import Echelon

            self._ech = Echelon()
            for g, _ in self.gens:
                self._ech.add(g.symplectic)
        return self._ech

    def measure(self, p: PauliString) -> int:
        """Returns the outcome expression for measuring +1-normalized p."""
        if (p.phase - (p.x & p.z).bit_count()) & 3 != 0:
            raise ValueError(f"measurement operator not +1 Hermitian: {p}")
        anti = [i for i, (g, _) in enumerate(self.gens) if not g.commutes(p)]
        if anti:
            i0 = anti[0]
            g0, v0 = self.gens[i0]
            for i in anti[1:]:
                gi, vi = self.gens[i]
                self.gens[i] = self._normalize(gi.multiply(g0), vi ^ v0)
            del self.gens[i0]
            var = 1 << self.next_var
            self.next_var += 1
            self.gens.append((p, var))
            self._ech = None
            return var
        sol = self._echelon().solve(p.symplectic)
        if sol is not None:
            acc = PauliString.identity(self.n)
            val = 0
            for i in sol:
                g, v = self.gens[i]
                acc = acc.multiply(g)
                val ^= v
            delta = (acc.phase - p.phase) & 3
            if delta == 2:
                val ^= 1
            elif delta != 0:
                raise AssertionError("inconsistent phase in forced outcome")
            return val
        var = 1 << self.next_var
        self.next_var += 1
        self.gens.append((p, var))
        self._ech.add(p.symplectic)
        return var


def validate(circuit: Circuit) -> List[str]:
    """Check that every detector/observable parity is deterministic and 0.

    Runs the ideal circuit through a symbolic stabilizer simulation, which
    handles interleaved collapsing measurements (destructive patch
    readout) correctly.  Returns violation descriptions, empty when ok.
    """
    state = _SymbolicState(circuit.n)
    outcome: List[int] = []
    for layer in circuit.layers:
        if isinstance(layer, GateLayer):
            state.conjugate(layer.clifford)
        elif isinstance(layer, MeasureLayer):
            for m in layer.measurements:
                outcome.append(state.measure(m))

    problems = []
    for di, det in enumerate(circuit.detectors):
        expr = 0
        for mi in det:
            expr ^= outcome[mi]
        if expr >> 1:
            problems.append(f"detector {di} nondeterministic")
        # a deterministic parity of 1 (a sign picked up by S/CZ conjugation)
        # is a fixed reference; samplers report flips relative to it
    for name, obs in circuit.observables:
        expr = 0
        for mi in obs:
            expr ^= outcome[mi]
        if expr >> 1:
            problems.append(f"observable {name} nondeterministic")
        elif expr & 1:
            problems.append(f"observable {name} has reference parity 1")
    return problems


def reference_parities(circuit: Circuit) -> List[int]:
    """Noiseless detector parities (nonzero where conjugation signs flip)."""
    state = _SymbolicState(circuit.n)
    outcome: List[int] = []
    for layer in circuit.layers:
        if isinstance(layer, GateLayer):
            state.conjugate(layer.clifford)
        elif isinstance(layer, MeasureLayer):
            for m in layer.measurements:
                outcome.append(state.measure(m))
    out = []
    for det in circuit.detectors:
        expr = 0
        for mi in det:
            expr ^= outcome[mi]
        if expr >> 1:
            raise ValueError("nondeterministic detector")
        out.append(expr & 1)
    return out


# ---------------------------------------------------------------------------
# detector error model


@dataclass
class DetectorErrorModel:
    n_detectors: int
    n_observables: int
    probs: np.ndarray  # float64 (M,)
    dets: List[Tuple[int, ...]]  # sorted detector indices per mechanism
    obs: np.ndarray  # uint64 observable masks (M,)
    tags: List[str]
    det_sector: List[str]
    det_time: List[int]
    det_block: List[int]
    gamma_time: int = -1
    stage1_blocks: Tuple[int, ...] = ()
    observable_names: List[str] = field(default_factory=list)

    @property
    def n_mechanisms(self) -> int:
        return len(self.dets)

    def hyperedges(self) -> List[int]:
        return [i for i, d in enumerate(self.dets) if len(d) >= 3]

    def to_text(self) -> str:
        lines = [f"dem v1 detectors={self.n_detectors} observables={self.n_observables}"]
        for p, d, o in zip(self.probs, self.dets, self.obs):
            parts = [f"error({p:.9g})"]
            parts += [f"D{i}" for i in d]
            o = int(o)
            for j in range(self.n_observables):
                if (o >> j) & 1:
                    parts.append(f"L{j}")
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "DetectorErrorModel":
        lines = [l for l in text.strip().splitlines() if l.strip()]
        head = lines[0].split()
        nd = int(head[1].split("=")[1])
        no = int(head[2].split("=")[1])
        probs, dets, obs = [], [], []
        for line in lines[1:]:
            parts = line.split()
            probs.append(float(parts[0][6:-1]))
            d = tuple(int(t[1:]) for t in parts[1:] if t[0] == "D")
            o = 0
            for t in parts[1:]:
                if t[0] == "L":
                    o |= 1 << int(t[1:])
            dets.append(d)
            obs.append(o)
        return DetectorErrorModel(
            nd,
            no,
            np.asarray(probs),
            dets,
            np.asarray(obs, dtype=np.uint64),
            [""] * len(dets),
            ["?"] * nd,
            [0] * nd,
            [0] * nd,
        )


def _xor_merge(p1: float, p2: float) -> float:
    return p1 * (1.0 - p2) + p2 * (1.0 - p1)


class _Propagator:
    """Forward fault propagation through the tail of a circuit."""

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        self.n = circuit.n
        # measurement bookkeeping
        self.meas_det: List[List[int]] = []
        self.meas_obs: List[int] = []
        self.layer_meas_start: Dict[int, int] = {}
        idx = 0
        for li, layer in enumerate(circuit.layers):
            if isinstance(layer, MeasureLayer):
                self.layer_meas_start[li] = idx
                idx += len(layer.measurements)
        self.n_meas = idx
        self.meas_det = [[] for _ in range(idx)]
        self.meas_obs = [0] * idx
        for di, det in enumerate(circuit.detectors):
            for mi in det:
                self.meas_det[mi].append(di)
        for oi, (_, obsset) in enumerate(circuit.observables):
            for mi in obsset:
                self.meas_obs[mi] |= 1 << oi
        # per measure-layer qubit -> measurement indices map
        self.layer_qubit_meas: Dict[int, Dict[int, List[int]]] = {}
        for li, layer in enumerate(circuit.layers):
            if not isinstance(layer, MeasureLayer):
                continue
            qmap: Dict[int, List[int]] = {}
            base = self.layer_meas_start[li]
            for k, m in enumerate(layer.measurements):
                for q in m.support:
                    qmap.setdefault(q, []).append(base + k)
            self.layer_qubit_meas[li] = qmap

    def footprint(self, fault: PauliString, after_layer: int) -> Tuple[Tuple[int, ...], int]:
        """Detector set and observable mask flipped by `fault` injected
        just after layer `after_layer`."""
        ms = self.circuit.layers
        p = fault
        flipped: List[int] = []
        for li in range(after_layer + 1, len(ms)):
            layer = ms[li]
            if isinstance(layer, GateLayer):
                p = layer.clifford.conjugate(p)
            elif isinstance(layer, MeasureLayer):
                qmap = self.layer_qubit_meas[li]
                cands: List[int] = []
                for q in p.support:
                    cands += qmap.get(q, ())
                base = self.layer_meas_start[li]
                for mi in sorted(set(cands)):
                    m = layer.measurements[mi - base]
                    if not p.commutes(m):
                        flipped.append(mi)
        detcount: Dict[int, int] = {}
        omask = 0
        for mi in flipped:
            for di in self.meas_det[mi]:
                detcount[di] = detcount.get(di, 0) ^ 1
            omask ^= self.meas_obs[mi]
        dets = tuple(sorted(d for d, c in detcount.items() if c))
        return dets, omask


def extract_dem(circuit: Circuit) -> DetectorErrorModel:
    """Propagate every elementary fault and build the merged error model."""
    prop = _Propagator(circuit)
    sector = circuit.det_sector
    # (dets, obs) -> prob, merged across independent contributions
    merged: Dict[Tuple[Tuple[int, ...], int], float] = {}
    tags: Dict[Tuple[Tuple[int, ...], int], str] = {}

    def contribute_local(local: Dict, key, p, tag):
        if key in local:
            local[key] = (local[key][0] + p, local[key][1])
        else:
            local[key] = (p, tag)

    def split_by_sector(dets: Tuple[int, ...], omask: int, p, tag, local):
        """Split a fault footprint into per-detector-sector pieces."""
        dx = tuple(d for d in dets if sector[d] == "Z")  # Z-stab lineage: X errors
        dz = tuple(d for d in dets if sector[d] == "X")
        pieces = [d for d in (dx, dz) if d]
        if not pieces:
            if omask:
                contribute_local(local, ((), omask), p, tag)
            return
        first = True
        for piece in pieces:
            contribute_local(local, (piece, omask if first else 0), p, tag)
            first = False

    for li, layer in enumerate(circuit.layers):
        if isinstance(layer, NoiseLayer):
            for loc_i, (p_each, alts) in enumerate(layer.locations):
                if p_each <= 0:
                    continue
                local: Dict[Tuple[Tuple[int, ...], int], Tuple[float, str]] = {}
                for alt in alts:
                    # decompose the fault into its X and Z components
                    comps = []
                    if alt.x:
                        comps.append(PauliString(circuit.n, x=alt.x))
                    if alt.z:
                        comps.append(PauliString(circuit.n, z=alt.z))
                    for comp in comps:
                        kind = "X" if comp.x else "Z"
                        tag = f"L{li}:{kind}{comp.support}"
                        dets, omask = prop.footprint(comp, li)
                        if len(dets) <= 2:
                            contribute_local(local, (dets, omask), p_each, tag)
                            continue
                        by_sec: Dict[str, List[int]] = {}
                        for d in dets:
                            by_sec.setdefault(sector[d], []).append(d)
                        if all(len(v) <= 2 for v in by_sec.values()):
                            split_by_sector(dets, omask, p_each, tag, local)
                        else:
                            # split per qubit, then by sector
                            for q in comp.support:
                                single = PauliString.single(circuit.n, q, kind)
                                sdets, somask = prop.footprint(single, li)
                                if len(sdets) <= 2:
                                    contribute_local(local, (sdets, somask), p_each, tag)
                                else:
                                    split_by_sector(sdets, somask, p_each, tag, local)
                # fold the location's exclusive alternatives into the model
                for key, (p, tag) in local.items():
                    if key in merged:
                        merged[key] = _xor_merge(merged[key], p)
                    else:
                        merged[key] = p
                        tags[key] = tag
        elif isinstance(layer, MeasureLayer):
            base = prop.layer_meas_start[li]
            for k, m in enumerate(layer.measurements):
                rate = layer.rate_of(k)
                if rate <= 0:
                    continue
                detcount: Dict[int, int] = {}
                omask = 0
                for di in prop.meas_det[base + k]:
                    detcount[di] = detcount.get(di, 0) ^ 1
                omask ^= prop.meas_obs[base + k]
                dets = tuple(sorted(d for d, c in detcount.items() if c))
                if not dets and not omask:
                    continue
                key = (dets, omask)
                if key in merged:
                    merged[key] = _xor_merge(merged[key], rate)
                else:
                    merged[key] = rate
                    tags[key] = f"L{li}:M{k}"

    items = sorted(merged.items(), key=lambda kv: (kv[0][0], kv[0][1]))
    probs, dets, obs, tag_list = [], [], [], []
    for (d, o), p in items:
        if p < MERGE_DROP:
            continue
        if p > 0.5:
            raise ValueError(f"mechanism probability {p} > 0.5; lower the error rate")
        probs.append(p)
        dets.append(d)
        obs.append(o)
        tag_list.append(tags[(d, o)])
    return DetectorErrorModel(
        len(circuit.detectors),
        len(circuit.observables),
        np.asarray(probs, dtype=np.float64),
        dets,
        np.asarray(obs, dtype=np.uint64),
        tag_list,
        list(circuit.det_sector),
        list(circuit.det_time),
        list(circuit.det_block),
        circuit.gamma_time,
        circuit.stage1_blocks,
        [name for name, _ in circuit.observables],
    )
