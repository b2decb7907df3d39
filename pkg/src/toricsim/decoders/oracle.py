"""Exact most-likely-error oracle via integer programming.

Finds the mechanism subset of maximum probability (minimum total
log-weight) reproducing a syndrome, by solving the GF(2) system
``A x = s (mod 2)`` as an ILP with slack integers.  Small models only;
this is the certification oracle for the other decoders.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ..circuits import DetectorErrorModel
from .matching import Correction, edge_weight


class OracleDecoder:
    def __init__(self, dem: DetectorErrorModel, max_weight: Optional[int] = None):
        self.dem = dem
        self.max_weight = max_weight
        m = dem.n_mechanisms
        d = dem.n_detectors
        self._A = np.zeros((d, m), dtype=np.float64)
        for i, dets in enumerate(dem.dets):
            for x in dets:
                self._A[x, i] = 1.0
        self._w = np.array([edge_weight(float(p)) for p in dem.probs])

    def decode(self, syndrome: np.ndarray, only_relevant: bool = False) -> Correction:
        dem = self.dem
        m = dem.n_mechanisms
        d = dem.n_detectors
        s = np.asarray(syndrome, dtype=np.float64)[:d]
        # A x - 2 y = s with x binary, y >= 0 integer
        n_y = d
        c = np.concatenate([self._w, np.zeros(n_y)])
        A = np.hstack([self._A, -2.0 * np.eye(d)])
        constraints = [LinearConstraint(A, s, s)]
        if self.max_weight is not None:
            row = np.concatenate([np.ones(m), np.zeros(n_y)])
            constraints.append(LinearConstraint(row, 0, self.max_weight))
        integrality = np.ones(m + n_y)
        ub = np.concatenate([np.ones(m), np.full(n_y, np.inf)])
        bounds = Bounds(np.zeros(m + n_y), ub)
        res = milp(
            c, constraints=constraints, integrality=integrality, bounds=bounds
        )
        if not res.success:
            raise ValueError("no mechanism subset reproduces the syndrome")
        x = np.round(res.x[:m]).astype(np.int64)
        edges = [int(i) for i in np.flatnonzero(x)]
        obs = 0
        flips = []
        for i in edges:
            obs ^= int(dem.obs[i])
            flips += list(dem.dets[i])
        return Correction(edges, obs, np.asarray(flips, dtype=np.int64))

    def min_weight(self, syndrome: np.ndarray) -> float:
        corr = self.decode(syndrome)
        return float(sum(self._w[i] for i in corr.edges))
