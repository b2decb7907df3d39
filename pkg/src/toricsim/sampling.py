"""Syndrome samplers.

Both samplers draw randomness from a counter-based hash keyed by
(seed, shot index, site), so any shot range can be generated on any
worker and the results are independent of scheduling and batch size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np
from scipy import sparse

from .circuits import Circuit, DetectorErrorModel, GateLayer, MeasureLayer, NoiseLayer

_G1 = np.uint64(0x9E3779B97F4A7C15)
_G2 = np.uint64(0xD1B54A32D192ED03)
_G3 = np.uint64(0x8CB92BA72F3D8DD7)


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _hash(seed: int, shots: np.ndarray, sites: np.ndarray) -> np.ndarray:
    """uint64 hash over the outer product of shot and site indices."""
    s = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    a = _mix64(shots.astype(np.uint64) * _G1 + s)
    b = sites.astype(np.uint64) * _G2 + _G3
    return _mix64(a[:, None] ^ b[None, :])


def _thresholds(probs: np.ndarray) -> np.ndarray:
    return (np.clip(probs, 0.0, 1.0) * float(2**64)).astype(np.uint64)


class DemSampler:
    """Vectorized sampler over a detector error model."""

    def __init__(self, dem: DetectorErrorModel, seed: int):
        self.dem = dem
        self.seed = int(seed)
        m = dem.n_mechanisms
        rows, cols = [], []
        for i, d in enumerate(dem.dets):
            rows += [i] * len(d)
            cols += list(d)
        self._fdet = sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.uint8), (rows, cols)),
            shape=(m, dem.n_detectors),
        )
        orows, ocols = [], []
        for i, mask in enumerate(dem.obs):
            mask = int(mask)
            j = 0
            while mask:
                if mask & 1:
                    orows.append(i)
                    ocols.append(j)
                mask >>= 1
                j += 1
        self._fobs = sparse.csr_matrix(
            (np.ones(len(orows), dtype=np.uint8), (orows, ocols)),
            shape=(m, max(dem.n_observables, 1)),
        )
        self._thr = _thresholds(dem.probs)
        self._sites = np.arange(m, dtype=np.uint64)

    def batch(self, shot_lo: int, shot_hi: int) -> Tuple[np.ndarray, np.ndarray]:
        """Detector and observable flip arrays for shots [lo, hi)."""
        shots = np.arange(shot_lo, shot_hi, dtype=np.uint64)
        fired = _hash(self.seed, shots, self._sites) < self._thr[None, :]
        sp = sparse.csr_matrix(fired)
        dets = np.asarray((sp @ self._fdet).todense(), dtype=np.int64) & 1
        obs = np.asarray((sp @ self._fobs).todense(), dtype=np.int64) & 1
        return dets.astype(bool), obs.astype(bool)

    def batches(self, shots: int, batch: int = 1024, start: int = 0) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        lo = start
        while lo < start + shots:
            hi = min(lo + batch, start + shots)
            yield self.batch(lo, hi)
            lo = hi


class FrameSampler:
    """Direct Pauli-frame simulation of a circuit, batched over shots."""

    def __init__(self, circuit: Circuit, seed: int):
        self.circuit = circuit
        self.seed = int(seed)
        self.n = circuit.n
        # assign site ids: one per noise location, one per measurement
        site = 0
        self._noise_sites: List[List[int]] = []
        self._meas_sites: List[int] = []
        for layer in circuit.layers:
            if isinstance(layer, NoiseLayer):
                ids = []
                for _ in layer.locations:
                    ids.append(site)
                    site += 2  # second slot salts the alternative choice
                self._noise_sites.append(ids)
            elif isinstance(layer, MeasureLayer):
                self._meas_sites.append(site)
                site += len(layer.measurements)
        self.n_meas = sum(
            len(l.measurements) for l in circuit.layers if isinstance(l, MeasureLayer)
        )

    def batch(self, shot_lo: int, shot_hi: int) -> Tuple[np.ndarray, np.ndarray]:
        c = self.circuit
        B = shot_hi - shot_lo
        shots = np.arange(shot_lo, shot_hi, dtype=np.uint64)
        fx = np.zeros((B, self.n), dtype=bool)
        fz = np.zeros((B, self.n), dtype=bool)
        outcome = np.zeros((B, self.n_meas), dtype=bool)
        noise_i = 0
        meas_i = 0
        mbase = 0
        for layer in c.layers:
            if isinstance(layer, GateLayer):
                self._apply_gates(layer, fx, fz)
            elif isinstance(layer, NoiseLayer):
                ids = self._noise_sites[noise_i]
                noise_i += 1
                if not layer.locations:
                    continue
                sites = np.asarray(ids, dtype=np.uint64)
                thr = _thresholds(
                    np.asarray([p * len(alts) for p, alts in layer.locations])
                )
                u = _hash(self.seed, shots, sites)
                fired = u < thr[None, :]
                pick = (_hash(self.seed, shots, sites + np.uint64(1))).astype(np.uint64)
                for k, (p, alts) in enumerate(layer.locations):
                    rows = np.flatnonzero(fired[:, k])
                    if rows.size == 0:
                        continue
                    which = (pick[rows, k] % np.uint64(len(alts))).astype(np.int64)
                    for ai, alt in enumerate(alts):
                        sel = rows[which == ai]
                        if sel.size == 0:
                            continue
                        for q in alt.support:
                            if (alt.x >> q) & 1:
                                fx[sel, q] ^= True
                            if (alt.z >> q) & 1:
                                fz[sel, q] ^= True
            elif isinstance(layer, MeasureLayer):
                base_site = self._meas_sites[meas_i]
                meas_i += 1
                for k, m in enumerate(layer.measurements):
                    col = mbase + k
                    xs = m.support if m.x else []
                    flip = np.zeros(B, dtype=bool)
                    for q in m.support:
                        if (m.z >> q) & 1:
                            flip ^= fx[:, q]
                        if (m.x >> q) & 1:
                            flip ^= fz[:, q]
                    rate = layer.rate_of(k)
                    if rate > 0:
                        u = _hash(
                            self.seed,
                            shots,
                            np.asarray([base_site + k], dtype=np.uint64),
                        )[:, 0]
                        flip ^= u < _thresholds(np.asarray([rate]))[0]
                    outcome[:, col] = flip
                mbase += len(layer.measurements)
        dets = np.zeros((B, len(c.detectors)), dtype=bool)
        for di, det in enumerate(c.detectors):
            acc = np.zeros(B, dtype=bool)
            for mi in det:
                acc ^= outcome[:, mi]
            dets[:, di] = acc
        obs = np.zeros((B, max(len(c.observables), 1)), dtype=bool)
        for oi, (_, obsset) in enumerate(c.observables):
            acc = np.zeros(B, dtype=bool)
            for mi in obsset:
                acc ^= outcome[:, mi]
            obs[:, oi] = acc
        return dets, obs

    def _apply_gates(self, layer: GateLayer, fx: np.ndarray, fz: np.ndarray):
        by_kind: dict = {}
        for kind, qs in layer.clifford.gates:
            by_kind.setdefault(kind, []).append(qs)
        for kind, pairs in by_kind.items():
            arr = np.asarray(pairs, dtype=np.int64)
            if kind == "H":
                q = arr[:, 0]
                tmp = fx[:, q].copy()
                fx[:, q] = fz[:, q]
                fz[:, q] = tmp
            elif kind == "S":
                q = arr[:, 0]
                fz[:, q] ^= fx[:, q]
            elif kind == "CNOT":
                cq, tq = arr[:, 0], arr[:, 1]
                fx[:, tq] ^= fx[:, cq]
                fz[:, cq] ^= fz[:, tq]
            elif kind == "CZ":
                a, b = arr[:, 0], arr[:, 1]
                fz[:, a] ^= fx[:, b]
                fz[:, b] ^= fx[:, a]
            elif kind == "XCX":
                a, b = arr[:, 0], arr[:, 1]
                fx[:, a] ^= fz[:, b]
                fx[:, b] ^= fz[:, a]
            elif kind == "SWAP":
                a, b = arr[:, 0], arr[:, 1]
                tmp = fx[:, a].copy()
                fx[:, a] = fx[:, b]
                fx[:, b] = tmp
                tmp = fz[:, a].copy()
                fz[:, a] = fz[:, b]
                fz[:, b] = tmp

    def batches(self, shots: int, batch: int = 1024, start: int = 0):
        lo = start
        while lo < start + shots:
            hi = min(lo + batch, start + shots)
            yield self.batch(lo, hi)
            lo = hi


def detector_marginals(batches) -> Tuple[np.ndarray, np.ndarray, int]:
    """Accumulate detector/observable flip counts over sampler batches."""
    det_counts = None
    obs_counts = None
    n = 0
    for dets, obs in batches:
        if det_counts is None:
            det_counts = dets.sum(axis=0).astype(np.int64)
            obs_counts = obs.sum(axis=0).astype(np.int64)
        else:
            det_counts += dets.sum(axis=0)
            obs_counts += obs.sum(axis=0)
        n += dets.shape[0]
    return det_counts, obs_counts, n


def exact_detector_marginals(dem: DetectorErrorModel) -> np.ndarray:
    """Analytic P(detector fires) assuming independent mechanisms.

    Uses the product formula 1/2 (1 - prod(1 - 2 p_i)) over incident
    mechanisms; serves as the oracle for sampler checks.
    """
    acc = np.ones(dem.n_detectors, dtype=np.float64)
    for p, d in zip(dem.probs, dem.dets):
        for di in d:
            acc[di] *= 1.0 - 2.0 * p
    return 0.5 * (1.0 - acc)
