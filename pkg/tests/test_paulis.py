import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricsim.paulis import CliffordLayer, PauliString, conjugate_through


def P(n, label):
    """Shorthand: P(2, 'X0*Z1')."""
    out = PauliString.identity(n)
    if label in ("", "I"):
        return out
    for term in label.split("*"):
        kind, q = term[0], int(term[1:])
        out = out.multiply(PauliString.single(n, q, kind))
    return out


class TestMultiply:
    def test_x_times_z_is_minus_i_y(self):
        prod = P(1, "X0").multiply(P(1, "Z0"))
        assert prod.x == 1 and prod.z == 1
        assert prod.sign() == -1j  # X*Z = -iY

    def test_identity(self):
        p = P(4, "X0*Z2")
        assert p.multiply(PauliString.identity(4)) == p

    def test_support_xor(self):
        prod = P(3, "X0*X1").multiply(P(3, "X1*X2"))
        assert prod == P(3, "X0*X2")

    def test_associative_up_to_phase(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = 8
            ps = [
                PauliString(n, int(rng.integers(0, 2**n)), int(rng.integers(0, 2**n)))
                for _ in range(3)
            ]
            a = ps[0].multiply(ps[1]).multiply(ps[2])
            b = ps[0].multiply(ps[1].multiply(ps[2]))
            assert (a.x, a.z, a.phase) == (b.x, b.z, b.phase)


class TestCommutes:
    def test_same_qubit_anticommute(self):
        assert not P(2, "X0").commutes(P(2, "Z0"))

    def test_distinct_qubits_commute(self):
        assert P(2, "X0").commutes(P(2, "Z1"))

    def test_weight(self):
        assert P(4, "X0*Y2*Z3").weight == 3
        assert PauliString.identity(4).weight == 0


def layer_of(n, *gates):
    layer = CliffordLayer(n)
    for kind, *qs in gates:
        layer.add(kind, *qs)
    return layer


class TestConjugate:
    def test_hadamard(self):
        h = layer_of(1, ("H", 0))
        assert h.conjugate(P(1, "X0")) == P(1, "Z0")
        assert h.conjugate(P(1, "Z0")) == P(1, "X0")
        y = h.conjugate(P(1, "Y0"))
        assert y.sign() == -1 and y.x == 1 and y.z == 1

    def test_cnot_spreading(self):
        cx = layer_of(2, ("CNOT", 0, 1))
        assert cx.conjugate(P(2, "X0")) == P(2, "X0*X1")
        assert cx.conjugate(P(2, "Z1")) == P(2, "Z0*Z1")
        assert cx.conjugate(P(2, "X1")) == P(2, "X1")
        assert cx.conjugate(P(2, "Z0")) == P(2, "Z0")

    def test_s_gate(self):
        s = layer_of(1, ("S", 0))
        assert s.conjugate(P(1, "X0")) == P(1, "Y0")
        assert s.conjugate(P(1, "Z0")) == P(1, "Z0")
        mx = s.conjugate(P(1, "Y0"))
        assert mx.sign() == -1 and mx.z == 0 and mx.x == 1
        # inverse undoes it
        assert s.conjugate(s.conjugate(P(1, "X0")), inverse=True) == P(1, "X0")

    def test_cz(self):
        cz = layer_of(2, ("CZ", 0, 1))
        assert cz.conjugate(P(2, "X0")) == P(2, "X0*Z1")
        assert cz.conjugate(P(2, "X1")) == P(2, "Z0*X1")
        assert cz.conjugate(P(2, "Z0")) == P(2, "Z0")
        yy = cz.conjugate(P(2, "X0*X1"))
        assert yy == P(2, "Y0*Y1") and yy.sign() == 1

    def test_xcx(self):
        g = layer_of(2, ("XCX", 0, 1))
        assert g.conjugate(P(2, "X0")) == P(2, "X0")
        assert g.conjugate(P(2, "X1")) == P(2, "X1")
        assert g.conjugate(P(2, "Z0")) == P(2, "Z0*X1")
        assert g.conjugate(P(2, "Z1")) == P(2, "X0*Z1")

    def test_swap(self):
        sw = layer_of(2, ("SWAP", 0, 1))
        assert sw.conjugate(P(2, "Y0")) == P(2, "Y1")

    def test_unknown_gate_rejected(self):
        with pytest.raises(ValueError):
            layer_of(2, ("T", 0))

    def test_overlapping_supports_rejected(self):
        with pytest.raises(ValueError):
            layer_of(3, ("CNOT", 0, 1), ("H", 1))


def random_layer(rng, n):
    layer = CliffordLayer(n)
    qubits = list(rng.permutation(n))
    while len(qubits) >= 2:
        kind = ("H", "S", "CNOT", "CZ", "SWAP", "XCX")[rng.integers(0, 6)]
        if kind in ("H", "S"):
            layer.add(kind, qubits.pop())
        else:
            layer.add(kind, qubits.pop(), qubits.pop())
    return layer


def random_pauli(rng, n):
    return PauliString(n, int(rng.integers(0, 2**n)), int(rng.integers(0, 2**n)))


class TestLayerProperties:
    def test_automorphism(self):
        # conjugation distributes over multiplication, up to phase
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = 16
            layer = random_layer(rng, n)
            p, q = random_pauli(rng, n), random_pauli(rng, n)
            lhs = layer.conjugate(p.multiply(q))
            rhs = layer.conjugate(p).multiply(layer.conjugate(q))
            assert (lhs.x, lhs.z, lhs.phase) == (rhs.x, rhs.z, rhs.phase)

    def test_symplectic_preservation(self):
        rng = np.random.default_rng(11)
        for _ in range(2000):
            n = 12
            layer = random_layer(rng, n)
            p, q = random_pauli(rng, n), random_pauli(rng, n)
            assert p.commutes(q) == layer.conjugate(p).commutes(layer.conjugate(q))

    def test_involutions(self):
        # H, CZ, CNOT, SWAP, XCX layers square to the identity map
        rng = np.random.default_rng(5)
        for kind in ("H", "CNOT", "CZ", "SWAP", "XCX"):
            n = 10
            layer = CliffordLayer(n)
            if kind == "H":
                for q in range(n):
                    layer.add("H", q)
            else:
                for q in range(0, n, 2):
                    layer.add(kind, q, q + 1)
            for _ in range(50):
                p = random_pauli(rng, n)
                pp = layer.conjugate(layer.conjugate(p))
                assert (pp.x, pp.z, pp.phase) == (p.x, p.z, p.phase)

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            n = 12
            layers = [random_layer(rng, n) for _ in range(3)]
            p = random_pauli(rng, n)
            fwd = conjugate_through(layers, p)
            back = conjugate_through(layers, fwd, inverse=True)
            assert (back.x, back.z, back.phase) == (p.x, p.z, p.phase)


@given(st.integers(1, 40), st.data())
@settings(max_examples=50, deadline=None)
def test_rendering_roundtrip_weight(n, data):
    x = data.draw(st.integers(0, 2**n - 1))
    z = data.draw(st.integers(0, 2**n - 1))
    p = PauliString(n, x, z)
    s = str(p)
    assert s[0] in "+-"
    assert p.weight == (0 if s.endswith("I") else s.count("*") + 1)
