import numpy as np

from toricsim.gf2 import Echelon, in_span, nullspace, parity, rank, solve


def test_rank_simple():
    assert rank([0b011, 0b110, 0b101]) == 2
    assert rank([0b011, 0b110, 0b000]) == 2
    assert rank([]) == 0


def test_solve_finds_combination():
    rows = [0b0011, 0b0110, 0b1100]
    target = 0b1010  # rows[0] ^ rows[1] ^ rows[2] = 0b1001; try 0b0101 = r0^r1
    sol = solve(rows, 0b0101)
    assert sol is not None
    acc = 0
    for i in sol:
        acc ^= rows[i]
    assert acc == 0b0101
    assert solve(rows, 0b0001) is None


def test_echelon_incremental_rank():
    ech = Echelon()
    assert ech.add(0b01)
    assert ech.add(0b10)
    assert not ech.add(0b11)
    assert ech.rank == 2
    assert ech.contains(0b11)
    assert ech.solve(0b11) == [0, 1]


def test_nullspace_is_orthogonal():
    rng = np.random.default_rng(0)
    n = 20
    rows = [int(rng.integers(0, 2**n)) for _ in range(8)]
    basis = nullspace(rows, n)
    assert len(basis) == n - rank(rows)
    for v in basis:
        for r in rows:
            assert parity(v & r) == 0


def test_in_span_random_consistency():
    rng = np.random.default_rng(1)
    n = 16
    rows = [int(rng.integers(0, 2**n)) for _ in range(6)]
    # any XOR-combination is in the span
    for _ in range(20):
        mask = int(rng.integers(0, 2 ** len(rows)))
        acc = 0
        for i in range(len(rows)):
            if (mask >> i) & 1:
                acc ^= rows[i]
        assert in_span(acc, rows)
