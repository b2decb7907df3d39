"""Syndrome decoders: exact MWPM, hierarchical two-step, union-find, oracle."""

from __future__ import annotations

from ..circuits import DetectorErrorModel
from .matching import Correction, MatchingGraph, edge_weight, mwpm_decode
from .oracle import OracleDecoder
from .twostep import TwoStepDecoder
from .unionfind import UnionFindDecoder

DECODER_NAMES = ("mwpm", "two-step", "uf", "oracle")


def make_decoder(name: str, dem: DetectorErrorModel, unit_weights: bool = False):
    """Instantiate a decoder by its CLI name."""
    if name == "mwpm":
        return MatchingGraph(dem, unit_weights)
    if name == "two-step":
        from ..protocols import two_step_partition

        return TwoStepDecoder(dem, two_step_partition(dem), unit_weights)
    if name == "uf":
        return UnionFindDecoder(dem)
    if name == "oracle":
        return OracleDecoder(dem)
    raise ValueError(f"unknown decoder {name!r}; choose from {DECODER_NAMES}")


__all__ = [
    "Correction",
    "MatchingGraph",
    "TwoStepDecoder",
    "UnionFindDecoder",
    "OracleDecoder",
    "make_decoder",
    "mwpm_decode",
    "edge_weight",
    "DECODER_NAMES",
]
