"""Minimum-weight perfect matching decoding over detector error models."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ..circuits import DetectorErrorModel
from ._blossom import min_weight_perfect_matching

W_SCALE = 1_000_000  # fixed-point scale for blossom weights


def edge_weight(p: float, unit: bool = False) -> float:
    if unit:
        return 1.0
    return math.log((1.0 - p) / p)


@dataclass
class Correction:
    """A decoder output: inferred error set and its observable prediction."""

    edges: List[int]  # indices into the decoder's edge table
    obs_mask: int
    det_flips: np.ndarray  # detector indices flipped by the correction

    def is_valid_for(self, syndrome: np.ndarray) -> bool:
        want = np.flatnonzero(syndrome)
        acc: Dict[int, int] = {}
        for d in self.det_flips:
            acc[int(d)] = acc.get(int(d), 0) ^ 1
        got = sorted(d for d, c in acc.items() if c)
        return got == sorted(int(x) for x in want)


@dataclass
class _Edge:
    dets: Tuple[int, ...]  # 1 or 2 detector endpoints
    w: float
    wint: int
    obs: int
    mech: int  # source mechanism in the DEM


class MatchingGraph:
    """Edge-like view of a DEM for matching decoders.

    Mechanisms with one or two detectors become edges (single-detector
    mechanisms attach to a virtual boundary).  Measurement hyperedges are
    split into per-sector pieces when every piece stays edge-like; models
    where that fails (stabilizer recombination inside one sector, as in
    the transversal-CNOT experiment) are rejected.
    """

    def __init__(self, dem: DetectorErrorModel, unit_weights: bool = False):
        self.dem = dem
        self.n_det = dem.n_detectors
        self.edges: List[_Edge] = []
        sector = dem.det_sector
        for i in range(dem.n_mechanisms):
            dets = dem.dets[i]
            p = float(dem.probs[i])
            obs = int(dem.obs[i])
            if len(dets) == 0:
                continue  # undetectable; nothing a matcher can do
            if len(dets) <= 2:
                self._add_edge(dets, p, obs, i, unit_weights)
                continue
            by_sec: Dict[str, List[int]] = {}
            for d in dets:
                by_sec.setdefault(sector[d], []).append(d)
            parts = [tuple(v) for _, v in sorted(by_sec.items())]
            if any(len(part) > 2 for part in parts):
                raise ValueError(
                    "hyperedges present; use the two-step or union-find decoder"
                )
            first = True
            for part in parts:
                self._add_edge(part, p, obs if first else 0, i, unit_weights)
                first = False
        self.boundary = self.n_det if any(len(e.dets) == 1 for e in self.edges) else None
        self._build_graph()

    def _add_edge(self, dets, p, obs, mech, unit):
        self.edges.append(_Edge(tuple(sorted(dets)), edge_weight(p, unit), 0, obs, mech))

    @property
    def has_boundary(self) -> bool:
        return self.boundary is not None

    def _build_graph(self):
        n_nodes = self.n_det + (1 if self.boundary is not None else 0)
        self.n_nodes = n_nodes
        best: Dict[Tuple[int, int], int] = {}
        for idx, e in enumerate(self.edges):
            e.wint = int(round(e.w * W_SCALE))
            if len(e.dets) == 1:
                key = (e.dets[0], self.boundary)
            else:
                key = e.dets
            cur = best.get(key)
            if cur is None or e.wint < self.edges[cur].wint:
                best[key] = idx
        self._best = best
        rows, cols, vals = [], [], []
        for (a, b), idx in best.items():
            rows += [a, b]
            cols += [b, a]
            vals += [self.edges[idx].wint, self.edges[idx].wint]
        self._adj = sparse.csr_matrix(
            (np.asarray(vals, dtype=np.float64), (rows, cols)), shape=(n_nodes, n_nodes)
        )
        # connected components over detectors (boundary merges its comps)
        n_comp, labels = csgraph.connected_components(self._adj, directed=False)
        self.comp = labels
        # components containing any observable-carrying edge
        relevant = np.zeros(n_comp, dtype=bool)
        for e in self.edges:
            if e.obs:
                relevant[labels[e.dets[0]]] = True
        if self.boundary is not None:
            b = labels[self.boundary]
            # boundary-linked components form one matching arena
        self.comp_relevant = relevant

    def decode(self, syndrome: np.ndarray, only_relevant: bool = False) -> Correction:
        """Exact MWPM correction for one detector bit vector."""
        defects = np.flatnonzero(np.asarray(syndrome, dtype=bool)[: self.n_det])
        if defects.size == 0:
            return Correction([], 0, np.zeros(0, dtype=np.int64))
        groups: Dict[int, List[int]] = {}
        for d in defects:
            groups.setdefault(int(self.comp[d]), []).append(int(d))
        edge_ids: List[int] = []
        for comp_id in sorted(groups):
            if only_relevant and not self.comp_relevant[comp_id]:
                continue
            edge_ids += self._match_component(groups[comp_id])
        obs = 0
        flips: List[int] = []
        for idx in edge_ids:
            e = self.edges[idx]
            obs ^= e.obs
            flips += list(e.dets)
        return Correction(edge_ids, obs, np.asarray(flips, dtype=np.int64))

    def _match_component(self, defects: List[int]) -> List[int]:
        has_bnd = (
            self.boundary is not None
            and self.comp[self.boundary] == self.comp[defects[0]]
        )
        if len(defects) % 2 == 1 and not has_bnd:
            raise ValueError("odd defect parity in a component with no boundary")
        dist, pred = csgraph.dijkstra(
            self._adj, indices=defects, return_predecessors=True
        )
        k = len(defects)
        if has_bnd:
            nb = 2 * k
            W = np.zeros((nb, nb), dtype=np.int64)
            big = np.int64(0)
            for i in range(k):
                for j in range(i + 1, k):
                    w = dist[i, defects[j]]
                    W[i, j] = W[j, i] = int(w) if np.isfinite(w) else (1 << 40)
            bdist = [dist[i, self.boundary] for i in range(k)]
            cap = (int(max(W.max(), max(int(b) for b in bdist if np.isfinite(b)) if k else 0)) + 1) * (k + 1)
            for i in range(k):
                for j in range(k):
                    W[i, k + j] = W[k + j, i] = (
                        int(bdist[i]) if i == j and np.isfinite(bdist[i]) else cap
                    )
            mate = min_weight_perfect_matching(W)
            out: List[int] = []
            seen = set()
            for i in range(k):
                m = int(mate[i])
                if i in seen:
                    continue
                if m < k:
                    seen.update((i, m))
                    out += self._expand_path(pred, i, defects[i], defects[m])
                else:
                    seen.add(i)
                    out += self._expand_path(pred, i, defects[i], self.boundary)
            return out
        W = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            for j in range(i + 1, k):
                w = dist[i, defects[j]]
                W[i, j] = W[j, i] = int(w) if np.isfinite(w) else (1 << 40)
        mate = min_weight_perfect_matching(W)
        out = []
        seen = set()
        for i in range(k):
            m = int(mate[i])
            if i in seen:
                continue
            seen.update((i, m))
            out += self._expand_path(pred, i, defects[i], defects[m])
        return out

    def _expand_path(self, pred, row: int, src: int, dst: int) -> List[int]:
        out = []
        node = dst
        while node != src:
            prev = int(pred[row, node])
            if prev < 0:
                raise RuntimeError("broken shortest-path tree")
            a, b = (prev, node) if prev < node else (node, prev)
            if self.boundary is not None and b == self.boundary:
                idx = self._best[(a, self.boundary)]
            else:
                idx = self._best[(a, b)]
            out.append(idx)
            node = prev
        return out


def mwpm_decode(graph: MatchingGraph, syndrome: np.ndarray) -> Correction:
    return graph.decode(syndrome)
