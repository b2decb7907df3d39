"""Bit-packed Pauli operators and depth-1 Clifford layers.

A Pauli operator on n qubits is stored as ``i**phase * X^x * Z^z`` where
``x`` and ``z`` are ints used as bit vectors and ``phase`` is an exponent
of i mod 4.  In this representation Y_q has x_q = z_q = 1 and phase 1.
Phase only matters where S/CZ conjugation introduces signs; detector and
observable bookkeeping depends on the x/z bits alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

GATE_KINDS = ("H", "S", "CNOT", "CZ", "SWAP", "XCX")
_TWO_QUBIT = {"CNOT", "CZ", "SWAP", "XCX"}


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0  # exponent of i, mod 4

    def __post_init__(self):
        mask = (1 << self.n) - 1
        object.__setattr__(self, "x", self.x & mask)
        object.__setattr__(self, "z", self.z & mask)
        object.__setattr__(self, "phase", self.phase & 3)

    # -- constructors -------------------------------------------------
    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n)

    @staticmethod
    def single(n: int, q: int, kind: str) -> "PauliString":
        if kind == "X":
            return PauliString(n, x=1 << q)
        if kind == "Z":
            return PauliString(n, z=1 << q)
        if kind == "Y":
            return PauliString(n, x=1 << q, z=1 << q, phase=1)
        raise ValueError(f"unknown Pauli kind {kind!r}")

    @staticmethod
    def from_support(n: int, kind: str, qubits: Iterable[int]) -> "PauliString":
        bits = 0
        for q in qubits:
            bits |= 1 << q
        if kind == "X":
            return PauliString(n, x=bits)
        if kind == "Z":
            return PauliString(n, z=bits)
        raise ValueError("from_support requires kind X or Z")

    # -- basic queries -------------------------------------------------
    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> List[int]:
        bits = self.x | self.z
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    @property
    def symplectic(self) -> int:
        """(x || z) packed into one int of width 2n."""
        return (self.x << self.n) | self.z

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def multiply(self, other: "PauliString") -> "PauliString":
        """Group product self * other with phase tracking."""
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        phase = self.phase + other.phase + 2 * (self.z & other.x).bit_count()
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, phase)

    def sign(self) -> complex:
        """Scalar prefactor relative to a product of X/Y/Z letters."""
        k = (self.phase - (self.x & self.z).bit_count()) & 3
        return (1, 1j, -1, -1j)[k]

    def __str__(self) -> str:
        k = (self.phase - (self.x & self.z).bit_count()) & 3
        prefix = ("+", "+i", "-", "-i")[k]
        if self.is_identity():
            return prefix + "I"
        terms = []
        for q in self.support:
            xb = (self.x >> q) & 1
            zb = (self.z >> q) & 1
            letter = "X" if xb and not zb else "Z" if zb and not xb else "Y"
            terms.append(f"{letter}{q}")
        return prefix + "*".join(terms)


@dataclass
class CliffordLayer:
    """A depth-1 layer of Clifford gates with disjoint supports."""

    n: int
    gates: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)

    def __post_init__(self):
        self._by_qubit: Dict[int, Tuple[str, Tuple[int, ...]]] = {}
        for gate in self.gates:
            self._index(gate)

    def _index(self, gate):
        kind, qubits = gate
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {kind!r}")
        expected = 2 if kind in _TWO_QUBIT else 1
        if len(qubits) != expected:
            raise ValueError(f"{kind} takes {expected} qubit(s)")
        for q in qubits:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range")
            if q in self._by_qubit:
                raise ValueError(f"qubit {q} touched twice in one layer")
            self._by_qubit[q] = gate

    def add(self, kind: str, *qubits: int) -> None:
        gate = (kind, tuple(int(q) for q in qubits))
        self._index(gate)
        self.gates.append(gate)

    def __len__(self) -> int:
        return len(self.gates)

    # -- conjugation ----------------------------------------------------
    def conjugate(self, p: PauliString, inverse: bool = False) -> PauliString:
        """Return U P U^dagger (or U^dagger P U with inverse=True)."""
        if p.n != self.n:
            raise ValueError("qubit count mismatch")
        # visit only gates touching the support; transversal layers on
        # sparse Paulis then cost O(weight)
        sup = p.support
        if len(sup) < len(self.gates):
            seen = set()
            gates = []
            for q in sup:
                g = self._by_qubit.get(q)
                if g is not None and id(g) not in seen:
                    seen.add(id(g))
                    gates.append(g)
        else:
            gates = self.gates
        x, z, phase = p.x, p.z, p.phase
        for kind, qs in gates:
            if kind == "H":
                (q,) = qs
                b = 1 << q
                xb, zb = x & b, z & b
                phase += 2 * ((xb and zb) and 1)
                x = (x & ~b) | (b if zb else 0)
                z = (z & ~b) | (b if xb else 0)
            elif kind == "S":
                (q,) = qs
                b = 1 << q
                if x & b:
                    z ^= b
                    phase += -1 if inverse else 1
            elif kind == "CNOT":
                c, t = qs
                if (x >> c) & 1:
                    x ^= 1 << t
                if (z >> t) & 1:
                    z ^= 1 << c
            elif kind == "CZ":
                a, b = qs
                xa, xb = (x >> a) & 1, (x >> b) & 1
                phase += 2 * (xa & xb)
                if xa:
                    z ^= 1 << b
                if xb:
                    z ^= 1 << a
            elif kind == "XCX":
                a, b = qs
                za, zb = (z >> a) & 1, (z >> b) & 1
                phase += 2 * (za & zb)
                if za:
                    x ^= 1 << b
                if zb:
                    x ^= 1 << a
            elif kind == "SWAP":
                a, b = qs
                xa, xb = (x >> a) & 1, (x >> b) & 1
                if xa != xb:
                    x ^= (1 << a) | (1 << b)
                za, zb = (z >> a) & 1, (z >> b) & 1
                if za != zb:
                    z ^= (1 << a) | (1 << b)
        return PauliString(self.n, x, z, phase)


def apply_permutation(p: PauliString, perm: Sequence[int]) -> PauliString:
    """Relabel qubits: bit q of the result comes from qubit perm[q]... inverse
    convention: perm maps old index -> new index."""
    x = 0
    z = 0
    for q in p.support:
        nq = perm[q]
        x |= ((p.x >> q) & 1) << nq
        z |= ((p.z >> q) & 1) << nq
    return PauliString(p.n, x, z, p.phase)


def conjugate_through(
    layers: Iterable[CliffordLayer], p: PauliString, inverse: bool = False
) -> PauliString:
    """Conjugate through a sequence of layers (applied first to last)."""
    if inverse:
        for layer in reversed(list(layers)):
            p = layer.conjugate(p, inverse=True)
    else:
        for layer in layers:
            p = layer.conjugate(p)
    return p
