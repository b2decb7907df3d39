"""Logical error rates, threshold crossings, model fits, correlations."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .circuits import extract_dem
from .decoders import make_decoder
from .protocols import ProtocolSpec, build
from .sampling import DemSampler

CSV_HEADER = (
    "protocol,d,param_alpha,param_m,param_h,eps,decoder,observable,"
    "shots,failures,rate,ci_low,ci_high,seed"
)


def wilson(failures: int, shots: int, z: float = 1.96) -> Tuple[float, float, float]:
    """Rate with a Wilson 95% interval (robust at low counts)."""
    if shots == 0:
        return 0.0, 0.0, 1.0
    p = failures / shots
    denom = 1.0 + z * z / shots
    center = (p + z * z / (2 * shots)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / shots + z * z / (4 * shots * shots))
    return p, max(0.0, center - half), min(1.0, center + half)


@dataclass
class SweepRow:
    protocol: str
    d: int
    alpha: int
    m: int
    h: int
    eps: float
    decoder: str
    observable: str
    shots: int
    failures: int
    seed: int

    @property
    def rate(self) -> float:
        return self.failures / self.shots if self.shots else 0.0

    def to_csv(self) -> str:
        rate, lo, hi = wilson(self.failures, self.shots)
        return (
            f"{self.protocol},{self.d},{self.alpha},{self.m},{self.h},"
            f"{self.eps:.6g},{self.decoder},{self.observable},{self.shots},"
            f"{self.failures},{rate:.6g},{lo:.6g},{hi:.6g},{self.seed}"
        )


def _pack_obs(obs_bools: np.ndarray) -> np.ndarray:
    out = np.zeros(obs_bools.shape[0], dtype=np.int64)
    for j in range(obs_bools.shape[1]):
        out |= obs_bools[:, j].astype(np.int64) << j
    return out


def _decode_range(args):
    dem, decoder_name, unit_weights, seed, lo, hi, fast = args
    decoder = make_decoder(decoder_name, dem, unit_weights) if decoder_name != "uf" else make_decoder("uf", dem)
    sampler = DemSampler(dem, seed)
    n_obs = dem.n_observables
    fails = np.zeros(n_obs + 1, dtype=np.int64)
    start = lo
    while start < hi:
        stop = min(start + 1024, hi)
        dets, obs = sampler.batch(start, stop)
        actual = _pack_obs(obs)
        for i in range(dets.shape[0]):
            corr = decoder.decode(dets[i], only_relevant=fast)
            diff = corr.obs_mask ^ int(actual[i])
            for j in range(n_obs):
                if (diff >> j) & 1:
                    fails[j] += 1
            if diff:
                fails[n_obs] += 1
        start = stop
    return fails


def estimate_rate(
    spec: ProtocolSpec,
    decoder: str,
    shots: int,
    seed: int,
    workers: int = 1,
    unit_weights: bool = False,
    fast: bool = True,
) -> List[SweepRow]:
    """Monte-Carlo logical error rates, one row per observable plus the
    any-flip union row."""
    circuit = build(spec)
    dem = extract_dem(circuit)
    names = dem.observable_names + ["combined"]
    if workers <= 1:
        fails = _decode_range((dem, decoder, unit_weights, seed, 0, shots, fast))
    else:
        bounds = np.linspace(0, shots, workers + 1, dtype=np.int64)
        jobs = [
            (dem, decoder, unit_weights, seed, int(bounds[i]), int(bounds[i + 1]), fast)
            for i in range(workers)
            if bounds[i + 1] > bounds[i]
        ]
        fails = np.zeros(dem.n_observables + 1, dtype=np.int64)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_decode_range, jobs):
                fails += part
    rows = []
    for name, f in zip(names, fails):
        rows.append(
            SweepRow(
                spec.kind,
                spec.d,
                spec.alpha,
                spec.m,
                spec.patch_height if spec.kind == "partial_measurement" else 0,
                spec.eps,
                decoder,
                name,
                shots,
                int(f),
                seed,
            )
        )
    return rows


def sweep(
    base: ProtocolSpec,
    decoder: str,
    d_list: Sequence[int],
    eps_list: Sequence[float],
    shots: int,
    seed: int,
    workers: int = 1,
    progress=None,
) -> List[SweepRow]:
    rows = []
    for d in d_list:
        for eps in eps_list:
            spec = replace(base, d=d, eps=eps)
            rows += estimate_rate(spec, decoder, shots, seed, workers)
            if progress:
                progress(spec, rows[-1])
    return rows


def eps_grid(center: float, n: int = 7, span: float = 0.5) -> List[float]:
    """Log-spaced grid of n points within +-span of center."""
    lo, hi = center * (1 - span), center * (1 + span)
    return [float(x) for x in np.exp(np.linspace(math.log(lo), math.log(hi), n))]


# ---------------------------------------------------------------------------
# threshold estimation


@dataclass
class ThresholdEstimate:
    value: float
    spread: float
    crossings: List[Tuple[int, int, float]]  # (d1, d2, eps)

    def __str__(self):
        return f"threshold = {self.value:.4g} +- {self.spread:.2g}"


def threshold_estimate(
    rows: Sequence[SweepRow], observable: str = "combined"
) -> ThresholdEstimate:
    """Crossing of consecutive-distance rate curves, log-log interpolated."""
    by_d: Dict[int, List[Tuple[float, float]]] = {}
    for r in rows:
        if r.observable != observable or r.failures == 0:
            continue
        by_d.setdefault(r.d, []).append((r.eps, r.rate))
    ds = sorted(by_d)
    if len(ds) < 2:
        raise ValueError("need at least two distances")
    crossings = []
    for d1, d2 in zip(ds, ds[1:]):
        c1 = dict(by_d[d1])
        c2 = dict(by_d[d2])
        shared = sorted(set(c1) & set(c2))
        if len(shared) < 2:
            continue
        diffs = [math.log(c2[e]) - math.log(c1[e]) for e in shared]
        for i in range(len(shared) - 1):
            if diffs[i] == 0:
                crossings.append((d1, d2, shared[i]))
            elif diffs[i] * diffs[i + 1] < 0:
                x0, x1 = math.log(shared[i]), math.log(shared[i + 1])
                t = diffs[i] / (diffs[i] - diffs[i + 1])
                crossings.append((d1, d2, math.exp(x0 + t * (x1 - x0))))
    if not crossings:
        raise ValueError("rate curves do not cross within the grid")
    vals = [c[2] for c in crossings]
    value = float(np.mean(vals))
    spread = float(np.std(vals)) if len(vals) > 1 else 0.0
    return ThresholdEstimate(value, spread, crossings)


# ---------------------------------------------------------------------------
# low-rate model fit: f(p, d) = A d^2 (p / p_th)^(b (d+1) / 2)


@dataclass
class FitResult:
    A: float
    b: float
    p_th: float
    residual_norm: float
    covariance: Optional[np.ndarray]
    flagged: bool = False

    def predict(self, eps: float, d: int) -> float:
        return self.A * d * d * (eps / self.p_th) ** (self.b * (d + 1) / 2.0)

    def to_json_dict(self):
        return {
            "A": self.A,
            "b": self.b,
            "p_th": self.p_th,
            "residual_norm": self.residual_norm,
            "flagged": self.flagged,
        }


def fit_model(rows: Sequence[SweepRow], observable: str = "combined") -> FitResult:
    """Weighted Gauss-Newton on log rates, multi-start, p_th kept positive.

    Rows with zero failures are excluded; weights are the inverse variance
    of the log rate.
    """
    pts = [
        (r.eps, r.d, r.rate, r.failures)
        for r in rows
        if r.observable == observable and r.failures > 0
    ]
    if len(pts) < 3:
        raise ValueError("need at least 3 nonzero data points")
    eps = np.array([p[0] for p in pts])
    dd = np.array([p[1] for p in pts], dtype=np.float64)
    y = np.log([p[2] for p in pts])
    wt = np.array([p[3] for p in pts], dtype=np.float64)  # 1/var(log r) ~ failures

    def model_log(theta):
        logA, b, logpth = theta
        return logA + 2 * np.log(dd) + b * (dd + 1) / 2.0 * (np.log(eps) - logpth)

    def jac(theta):
        logA, b, logpth = theta
        J = np.zeros((len(y), 3))
        J[:, 0] = 1.0
        J[:, 1] = (dd + 1) / 2.0 * (np.log(eps) - logpth)
        J[:, 2] = -b * (dd + 1) / 2.0
        return J

    best = None
    for b0 in (0.5, 1.0, 1.5):
        for pth0 in (np.max(eps) * 2, np.max(eps) * 5, 0.15):
            theta = np.array([math.log(0.1), b0, math.log(pth0)])
            ok = True
            for _ in range(200):
                r = model_log(theta) - y
                J = jac(theta)
                W = np.diag(wt)
                try:
                    step = np.linalg.lstsq(
                        np.sqrt(W) @ J, -np.sqrt(W) @ r, rcond=None
                    )[0]
                except np.linalg.LinAlgError:
                    ok = False
                    break
                theta = theta + np.clip(step, -1.0, 1.0)
                if np.max(np.abs(step)) < 1e-12:
                    break
            if not ok:
                continue
            r = model_log(theta) - y
            loss = float(np.sum(wt * r * r))
            if best is None or loss < best[0]:
                best = (loss, theta.copy())
    if best is None:
        raise ValueError("fit failed to converge")
    loss, theta = best
    J = jac(theta)
    W = np.diag(wt)
    flagged = False
    cov = None
    try:
        cov = np.linalg.inv(J.T @ W @ J)
    except np.linalg.LinAlgError:
        flagged = True
    return FitResult(
        A=float(math.exp(theta[0])),
        b=float(theta[1]),
        p_th=float(math.exp(theta[2])),
        residual_norm=float(math.sqrt(loss)),
        covariance=cov,
        flagged=flagged,
    )


# ---------------------------------------------------------------------------
# correlation estimation (symmetric-difference observable)


@dataclass
class CorrelationEstimate:
    p1: float
    p2: float
    p3: float
    p_joint: float
    p_joint_direct: float
    shots: int
    ci_halfwidth: float


def correlation(
    spec: ProtocolSpec,
    decoder: str,
    obs_pair: Tuple[int, int],
    shots: int,
    seed: int,
    workers: int = 1,
) -> CorrelationEstimate:
    """Estimate P(E1), P(E2), P(E1 xor E2) and derive P(E1 and E2).

    The third observable is the symmetric difference of the two tracked
    measurement sets, so flip(O3) = flip(O1) xor flip(O2) holds shot by
    shot and 2 P(E1 and E2) = P(E1) + P(E2) - P(E3).
    """
    i, j = obs_pair
    circuit = build(spec)
    o1 = set(circuit.observables[i][1])
    o2 = set(circuit.observables[j][1])
    o3 = sorted(o1 ^ o2)
    circuit.observables.append(("O_sym_diff", o3))
    dem = extract_dem(circuit)
    decoder_obj = make_decoder(decoder, dem)
    sampler = DemSampler(dem, seed)
    n_obs = dem.n_observables
    c1 = c2 = c3 = cj = 0
    done = 0
    while done < shots:
        stop = min(done + 1024, shots)
        dets, obs = sampler.batch(done, stop)
        actual = _pack_obs(obs)
        for k in range(dets.shape[0]):
            corr = decoder_obj.decode(dets[k])
            diff = corr.obs_mask ^ int(actual[k])
            e1 = (diff >> i) & 1
            e2 = (diff >> j) & 1
            e3 = (diff >> (n_obs - 1)) & 1
            if e3 != e1 ^ e2:
                raise AssertionError("per-shot symmetric-difference identity violated")
            c1 += e1
            c2 += e2
            c3 += e3
            cj += e1 & e2
        done = stop
    p1, p2, p3 = c1 / shots, c2 / shots, c3 / shots
    p_joint = (p1 + p2 - p3) / 2.0
    # propagated half-width from Wilson intervals of the three marginals
    hw = 0.5 * sum(
        (wilson(c, shots)[2] - wilson(c, shots)[1]) / 2 for c in (c1, c2, c3)
    )
    return CorrelationEstimate(p1, p2, p3, p_joint, cj / shots, shots, hw)
