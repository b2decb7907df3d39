"""Union-find decoder over decoding hypergraphs.

Clusters grow synchronously by half-edge steps around uncorrectable
defects; after every growth step each changed cluster is re-checked for
correctability by GF(2) elimination of its interior mechanisms against
its interior syndrome, and the final corrections are read off the solved
systems.  Growth is unweighted; a hyperedge is absorbed once it has
collected two growth units from active clusters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..circuits import DetectorErrorModel
from ..gf2 import Echelon, nullspace
from .matching import Correction, edge_weight


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra


class UnionFindDecoder:
    def __init__(self, dem: DetectorErrorModel):
        self.dem = dem
        self.n_det = dem.n_detectors
        self.mech_dets: List[Tuple[int, ...]] = [tuple(d) for d in dem.dets]
        self.det_mechs: List[List[int]] = [[] for _ in range(self.n_det)]
        for i, dets in enumerate(self.mech_dets):
            for d in dets:
                self.det_mechs[d].append(i)

    def decode(self, syndrome: np.ndarray, only_relevant: bool = False) -> Correction:
        syndrome = np.asarray(syndrome, dtype=bool)[: self.n_det]
        defects = [int(d) for d in np.flatnonzero(syndrome)]
        if not defects:
            return Correction([], 0, np.zeros(0, dtype=np.int64))
        dsu = _DSU(self.n_det)
        in_cluster = np.zeros(self.n_det, dtype=bool)
        in_cluster[defects] = True
        members: Dict[int, Set[int]] = {d: {d} for d in defects}
        growth: Dict[int, int] = {}
        solution: Dict[int, List[int]] = {}
        active: Dict[int, bool] = {}
        for d in defects:
            active[d] = self._check(members[d], syndrome, solution, d, growth)

        max_steps = 2 * (self.n_det + 2)
        for _ in range(max_steps):
            roots = sorted({dsu.find(d) for d in defects})
            grow_roots = [r for r in roots if active.get(r, True)]
            if not grow_roots:
                break
            touched: Set[int] = set()
            # half-edge growth from every active cluster
            for r in grow_roots:
                for d in sorted(members[r]):
                    for m in self.det_mechs[d]:
                        growth[m] = growth.get(m, 0) + 1
                        if growth[m] >= 2:
                            touched.add(m)
            changed: Set[int] = set()
            for m in sorted(touched):
                dets = self.mech_dets[m]
                if not dets:
                    continue
                base = dets[0]
                if not in_cluster[base]:
                    in_cluster[base] = True
                    members.setdefault(dsu.find(base), set()).add(base)
                    if dsu.find(base) not in members:
                        members[dsu.find(base)] = {base}
                for d in dets[1:]:
                    ra = dsu.find(base)
                    if not in_cluster[d]:
                        in_cluster[d] = True
                        members[ra].add(d)
                        changed.add(ra)
                        continue
                    rb = dsu.find(d)
                    if ra == rb:
                        continue
                    r = dsu.union(ra, rb)
                    other = rb if r == ra else ra
                    members.setdefault(r, set()).update(members.pop(other, {other}))
                    active.pop(other, None)
                    changed.add(r)
                changed.add(dsu.find(base))
            # re-check every changed cluster (from scratch, by design)
            for r in sorted({dsu.find(x) for x in changed}):
                if r not in members:
                    members[r] = {r}
                active[r] = self._check(members[r], syndrome, solution, r, growth)
        roots = {dsu.find(d) for d in defects}
        if any(active.get(r, True) for r in roots):
            raise RuntimeError("union-find failed to find a correctable cover")
        edges: List[int] = []
        for r in sorted(roots):
            edges += self._refine(members[r], solution.get(r, []), growth)
        obs = 0
        flips: List[int] = []
        for m in edges:
            obs ^= int(self.dem.obs[m])
            flips += list(self.mech_dets[m])
        return Correction(edges, obs, np.asarray(flips, dtype=np.int64))

    def _interior(self, cluster: Set[int], growth: Dict[int, int]) -> List[int]:
        # a mechanism is usable once fully grown (two half-edge units) and
        # entirely absorbed by the cluster
        interior: List[int] = []
        seen = set()
        for d in sorted(cluster):
            for m in self.det_mechs[d]:
                if m in seen:
                    continue
                seen.add(m)
                if growth.get(m, 0) >= 2 and all(x in cluster for x in self.mech_dets[m]):
                    interior.append(m)
        return interior

    def _check(
        self,
        members: Set[int],
        syndrome: np.ndarray,
        solution: Dict[int, List[int]],
        root: int,
        growth: Dict[int, int],
    ) -> bool:
        """True while the cluster is still active (not correctable)."""
        cluster = members
        local = {d: i for i, d in enumerate(sorted(cluster))}
        target = 0
        for d in cluster:
            if syndrome[d]:
                target |= 1 << local[d]
        interior = self._interior(cluster, growth)
        ech = Echelon()
        for m in interior:
            vec = 0
            for x in self.mech_dets[m]:
                vec |= 1 << local[x]
            ech.add(vec)
        sol = ech.solve(target)
        if sol is None:
            return True
        solution[root] = [interior[i] for i in sol]
        return False

    def _refine(self, cluster: Set[int], sol: List[int], growth: Dict[int, int]) -> List[int]:
        """Greedy likelihood improvement of a cluster solution.

        Sweeps the interior nullspace, flipping any vector that strictly
        lowers the total log-weight; breaks degeneracy between equivalent
        covers (boundary-like mechanisms vs longer chains).
        """
        local = {d: i for i, d in enumerate(sorted(cluster))}
        interior = self._interior(cluster, growth)
        idx_of = {m: i for i, m in enumerate(interior)}
        vecs = []
        for m in interior:
            vec = 0
            for x in self.mech_dets[m]:
                vec |= 1 << local[x]
            vecs.append(vec)
        det_rows = []
        for d in sorted(cluster):
            row = 0
            for i, m in enumerate(interior):
                if local[d] is not None and (vecs[i] >> local[d]) & 1:
                    row |= 1 << i
            det_rows.append(row)
        basis = nullspace(det_rows, len(interior))
        w = [edge_weight(float(self.dem.probs[m])) for m in interior]
        cur = 0
        for m in sol:
            cur |= 1 << idx_of[m]

        def total(mask: int) -> float:
            acc = 0.0
            mm = mask
            while mm:
                low = mm & -mm
                acc += w[low.bit_length() - 1]
                mm ^= low
            return acc

        cur_w = total(cur)
        improved = True
        while improved:
            improved = False
            for nv in basis:
                cand = cur ^ nv
                cand_w = total(cand)
                if cand_w < cur_w - 1e-12:
                    cur, cur_w = cand, cand_w
                    improved = True
        return [interior[i] for i in range(len(interior)) if (cur >> i) & 1]
