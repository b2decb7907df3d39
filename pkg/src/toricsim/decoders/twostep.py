"""Hierarchical (two-step) matching decoder for hyperedge models.

Stage one matches the detectors of the early-closing block together with
the other blocks' pre-gate history; hyperedges appear through their
stage-one restriction.  Inferred mechanisms that continue into stage two
forward their remaining endpoints into the second syndrome, which is then
matched on the stage-two restriction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..circuits import DetectorErrorModel
from .matching import Correction, MatchingGraph, _Edge, edge_weight


class _StageView:
    """A restricted DEM view exposed to MatchingGraph construction."""

    def __init__(self, dem: DetectorErrorModel, keep: Sequence[int], carry_obs: bool):
        keep_set = set(int(k) for k in keep)
        self.n_detectors = dem.n_detectors
        self.det_sector = dem.det_sector
        self.probs = []
        self.dets = []
        self.obs = []
        self.mech_of = []  # view index -> original mechanism
        self.forward = []  # dets outside the stage, per view mechanism
        for i in range(dem.n_mechanisms):
            inside = tuple(d for d in dem.dets[i] if d in keep_set)
            outside = tuple(d for d in dem.dets[i] if d not in keep_set)
            if not inside:
                continue
            straddles = bool(outside)
            # a straddling mechanism's observable mask rides with its
            # stage-1 restriction only, so it is counted at most once
            mask = int(dem.obs[i])
            if straddles and not carry_obs:
                mask = 0
            self.probs.append(float(dem.probs[i]))
            self.dets.append(inside)
            self.obs.append(mask)
            self.mech_of.append(i)
            self.forward.append(outside)
        self.probs = np.asarray(self.probs, dtype=np.float64)
        self.obs = np.asarray(self.obs, dtype=np.uint64)

    @property
    def n_mechanisms(self) -> int:
        return len(self.dets)


class TwoStepDecoder:
    def __init__(
        self,
        dem: DetectorErrorModel,
        partition: Tuple[Sequence[int], Sequence[int]],
        unit_weights: bool = False,
    ):
        self.dem = dem
        stage1, stage2 = partition
        self.stage1 = list(stage1)
        self.stage2 = list(stage2)
        self.view1 = _StageView(dem, self.stage1, carry_obs=True)
        self.view2 = _StageView(dem, self.stage2, carry_obs=False)
        self.g1 = MatchingGraph(self.view1, unit_weights)
        self.g2 = MatchingGraph(self.view2, unit_weights) if self.stage2 else None
        self._s2_mask = np.zeros(dem.n_detectors, dtype=bool)
        self._s2_mask[self.stage2] = True

    def decode(self, syndrome: np.ndarray, only_relevant: bool = False) -> Correction:
        syndrome = np.asarray(syndrome, dtype=bool)
        s1 = syndrome.copy()
        s1[self._s2_mask] = False
        c1 = self.g1.decode(s1, only_relevant=False)
        obs = c1.obs_mask
        flips: List[int] = list(c1.det_flips)
        if self.g2 is None:
            return Correction(c1.edges, obs, np.asarray(flips, dtype=np.int64))
        s2 = syndrome & self._s2_mask
        for idx in c1.edges:
            mech_view = self.g1.edges[idx].mech
            for d in self.view1.forward[mech_view]:
                s2[d] ^= True
                flips.append(d)
        c2 = self.g2.decode(s2, only_relevant=False)
        obs ^= c2.obs_mask
        flips += list(c2.det_flips)
        return Correction(
            list(c1.edges) + [len(self.g1.edges) + e for e in c2.edges],
            obs,
            np.asarray(flips, dtype=np.int64),
        )
