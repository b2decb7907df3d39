"""Toric codes, cylindrical patches, and the constant-depth constructions.

Conventions (row-major over vertices, periodic in both directions for tori):
  * h(r, c) is the horizontal edge east of vertex (r, c);
  * v(r, c) is the vertical edge south of vertex (r, c);
  * the X-stabilizer of face (r, c) covers {h(r,c), v(r,c), h(r+1,c), v(r,c+1)};
  * the Z-stabilizer of vertex (r, c) covers {h(r,c), h(r,c-1), v(r,c), v(r-1,c)}.

Canonical logical pairs of a torus:
  qubit 0: X on h-row 0 (horizontal loop), Z on h-column 0 (vertical co-cycle);
  qubit 1: X on v-column 0 (vertical loop), Z on v-row 0 (horizontal co-cycle).

A torus can carry a shear (from instantaneous Dehn twists along horizontal
guides); stabilizers and the crossing logicals become staircases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .gf2 import Echelon, parity
from .paulis import CliffordLayer, PauliString, apply_permutation


# ---------------------------------------------------------------------------
# layouts


@dataclass(frozen=True)
class TorusLayout:
    a: int  # rows
    b: int  # columns
    shear: int = 0  # accumulated instantaneous twists along horizontal guides

    def __post_init__(self):
        if self.a < 2 or self.b < 2:
            raise ValueError("torus needs a, b >= 2")

    @property
    def n_qubits(self) -> int:
        return 2 * self.a * self.b

    def h(self, r: int, c: int) -> int:
        return 2 * ((r % self.a) * self.b + (c % self.b))

    def v(self, r: int, c: int) -> int:
        return 2 * ((r % self.a) * self.b + (c % self.b)) + 1


@dataclass(frozen=True)
class PatchLayout:
    """Cylindrical patch; ``kind`` names the boundary/logical type.

    A Z-patch wraps vertically (width rows, ``height`` columns of h-edges)
    and its Z logical runs along the wrap.  An X-patch wraps horizontally.
    Both have ``width * (2*height - 1)`` qubits.
    """

    kind: str  # "Z" or "X"
    width: int
    height: int

    def __post_init__(self):
        if self.kind not in ("Z", "X"):
            raise ValueError("patch kind must be 'Z' or 'X'")
        if self.width < 2 or self.height < 1:
            raise ValueError("patch needs width >= 2 and height >= 1")

    @property
    def n_qubits(self) -> int:
        return self.width * (2 * self.height - 1)

    # Z-patch: hp(r, c) with c in [0, height), vp(r, c) with c in [1, height);
    # r wraps.  X-patch: hp(r, c) with r in [0, height), vp(r, c) with r in
    # [0, height-1); c wraps.
    def hp(self, r: int, c: int) -> int:
        if self.kind == "Z":
            return (r % self.width) * (2 * self.height - 1) + c
        return r * self.width + (c % self.width)

    def vp(self, r: int, c: int) -> int:
        if self.kind == "Z":
            return (r % self.width) * (2 * self.height - 1) + self.height + (c - 1)
        return self.height * self.width + r * self.width + (c % self.width)


@dataclass
class CodeBlock:
    """A code block over the global qubit register."""

    layout: object
    offset: int
    n: int  # global register width
    x_stabs: List[PauliString]
    z_stabs: List[PauliString]
    logicals: List[Tuple[PauliString, PauliString]]  # (X, Z) pairs
    noisy: bool = True
    stab_names: Dict[int, str] = field(default_factory=dict)

    @property
    def stabilizers(self) -> List[PauliString]:
        return self.x_stabs + self.z_stabs

    @property
    def qubits(self) -> List[int]:
        return list(range(self.offset, self.offset + self.layout.n_qubits))

    def h(self, r: int, c: int) -> int:
        return self.offset + self.layout.h(r, c)

    def v(self, r: int, c: int) -> int:
        return self.offset + self.layout.v(r, c)

    def hp(self, r: int, c: int) -> int:
        return self.offset + self.layout.hp(r, c)

    def vp(self, r: int, c: int) -> int:
        return self.offset + self.layout.vp(r, c)


# ---------------------------------------------------------------------------
# builders


def build_toric_code(
    a: int,
    b: int,
    noisy: bool = True,
    offset: int = 0,
    n_total: Optional[int] = None,
    shear: int = 0,
) -> CodeBlock:
    layout = TorusLayout(a, b, shear % b)
    n = n_total if n_total is not None else offset + layout.n_qubits
    s = shear % b
    x_stabs, z_stabs = [], []
    names = {}
    for r in range(a):
        for c in range(b):
            face = [layout.h(r, c), layout.v(r, c), layout.v(r, c + 1), layout.h(r + 1, c + s)]
            x_stabs.append(PauliString.from_support(n, "X", [offset + q for q in face]))
            vert = [layout.h(r, c), layout.h(r, c - 1), layout.v(r, c), layout.v(r - 1, c - s)]
            z_stabs.append(PauliString.from_support(n, "Z", [offset + q for q in vert]))
    block = CodeBlock(layout, offset, n, x_stabs, z_stabs, [], noisy)
    for i, (r, c) in enumerate(itertools.product(range(a), range(b))):
        block.stab_names[i] = f"F({r},{c})"
        block.stab_names[a * b + i] = f"V({r},{c})"
    block.logicals = _torus_logicals(block)
    return block


def _torus_logicals(block: CodeBlock) -> List[Tuple[PauliString, PauliString]]:
    lay: TorusLayout = block.layout
    a, b, s, n = lay.a, lay.b, lay.shear, block.n
    x1 = PauliString.from_support(n, "X", [block.h(0, c) for c in range(b)])
    z2 = PauliString.from_support(n, "Z", [block.v(0, c) for c in range(b)])
    if (s * a) % b == 0:
        z1 = PauliString.from_support(n, "Z", [block.h(r, s * r) for r in range(a)])
        x2 = PauliString.from_support(n, "X", [block.v(r, s * r) for r in range(a)])
        return [(x1, z1), (x2, z2)]
    # shear does not close on this rectangle: complete the pairs generically,
    # putting the pair that anticommutes with the horizontal X loop first
    pairs = css_logical_pairs(block.stabilizers, n, block.qubits)
    return sorted(pairs, key=lambda p: 0 if not p[1].commutes(x1) else 1)


def build_patch(
    kind: str,
    width: int,
    height: int,
    noisy: bool = True,
    offset: int = 0,
    n_total: Optional[int] = None,
) -> CodeBlock:
    layout = PatchLayout(kind, width, height)
    n = n_total if n_total is not None else offset + layout.n_qubits
    w, h = width, height
    x_stabs, z_stabs = [], []
    names = {}

    seen = set()

    def xs(qubits):
        p = PauliString.from_support(n, "X", [offset + q for q in qubits])
        if (p.x, p.z) not in seen:  # degenerate shapes (h=1) repeat operators
            seen.add((p.x, p.z))
            x_stabs.append(p)

    def zs(qubits):
        p = PauliString.from_support(n, "Z", [offset + q for q in qubits])
        if (p.x, p.z) not in seen:
            seen.add((p.x, p.z))
            z_stabs.append(p)

    if kind == "Z":
        # vertical cylinder: full Z-vertices, truncated X-faces at c=0, h-1
        for r in range(w):
            for c in range(h):
                face = [layout.hp(r, c), layout.hp(r + 1, c)]
                if c >= 1:
                    face.append(layout.vp(r, c))
                if c + 1 <= h - 1:
                    face.append(layout.vp(r, c + 1))
                xs(face)
            for c in range(1, h):
                zs(
                    [
                        layout.hp(r, c),
                        layout.hp(r, c - 1),
                        layout.vp(r, c),
                        layout.vp(r - 1, c),
                    ]
                )
        zbar = PauliString.from_support(n, "Z", [offset + layout.hp(r, 0) for r in range(w)])
        xbar = PauliString.from_support(n, "X", [offset + layout.hp(0, c) for c in range(h)])
        logicals = [(xbar, zbar)]
    else:
        # horizontal cylinder: full X-faces, truncated Z-vertices at r=0, h-1
        for r in range(h - 1):
            for c in range(w):
                xs(
                    [
                        layout.hp(r, c),
                        layout.vp(r, c),
                        layout.hp(r + 1, c),
                        layout.vp(r, c + 1),
                    ]
                )
        for c in range(w):
            zs([layout.hp(0, c), layout.hp(0, c - 1), layout.vp(0, c)])
            for r in range(1, h - 1):
                zs(
                    [
                        layout.hp(r, c),
                        layout.hp(r, c - 1),
                        layout.vp(r, c),
                        layout.vp(r - 1, c),
                    ]
                )
            if h >= 2:
                zs([layout.hp(h - 1, c), layout.hp(h - 1, c - 1), layout.vp(h - 2, c)])
        xbar = PauliString.from_support(n, "X", [offset + layout.hp(0, c) for c in range(w)])
        zbar = PauliString.from_support(n, "Z", [offset + layout.hp(r, 0) for r in range(h)])
        logicals = [(xbar, zbar)]
    return CodeBlock(layout, offset, n, x_stabs, z_stabs, logicals, noisy)


# ---------------------------------------------------------------------------
# generic logical-pair completion (used for non-closing shears and checks)


def css_logical_pairs(
    stabilizers: Sequence[PauliString], n: int, qubits: Sequence[int]
) -> List[Tuple[PauliString, PauliString]]:
    """Symplectic completion: logical (X, Z) pairs modulo the stabilizers."""
    mask = 0
    for q in qubits:
        mask |= 1 << q
    stab_vecs = [s.symplectic for s in stabilizers]
    ech = Echelon()
    for v in stab_vecs:
        ech.add(v)

    def sympl(u: int, v: int) -> int:
        ux, uz = u >> n, u & ((1 << n) - 1)
        vx, vz = v >> n, v & ((1 << n) - 1)
        return parity(ux & vz) ^ parity(uz & vx)

    # centralizer candidates: X / Z type vectors on the block's qubits
    cands: List[int] = []
    from .gf2 import nullspace

    checks = []
    for s in stab_vecs:
        sx, sz = s >> n, s & ((1 << n) - 1)
        checks.append((sz << n) | sx)  # symplectic form swaps halves
    # restrict to block qubits: append constraints zeroing other columns
    full = nullspace(checks, 2 * n)
    restricted = []
    for v in full:
        vx, vz = v >> n, v & ((1 << n) - 1)
        if (vx | vz) & ~mask:
            continue
        restricted.append(v)
    # quotient out the stabilizer span, then pair greedily
    quot = []
    e2 = Echelon()
    for v in stab_vecs:
        e2.add(v)
    for v in restricted:
        if not e2.contains(v):
            e2.add(v)
            quot.append(v)
    pairs = []
    pool = quot[:]
    while pool:
        u = pool.pop(0)
        partner = None
        for i, w in enumerate(pool):
            if sympl(u, w):
                partner = pool.pop(i)
                break
        if partner is None:
            continue
        fixed = []
        for w in pool:
            if sympl(w, partner):
                w ^= u
            if sympl(w, u):
                w ^= partner
            fixed.append(w)
        pool = fixed
        xop = PauliString(n, u >> n, u & ((1 << n) - 1))
        zop = PauliString(n, partner >> n, partner & ((1 << n) - 1))
        if xop.z.bit_count() > zop.z.bit_count():  # orient X-ish first
            xop, zop = zop, xop
        pairs.append((xop, zop))
    return pairs


# ---------------------------------------------------------------------------
# pairing maps for every construction


def cnot_layer(ctrl: CodeBlock, tgt: CodeBlock) -> CliffordLayer:
    """Transversal CNOT between two congruent tori (qubit i -> qubit i)."""
    la, lb = ctrl.layout, tgt.layout
    if (la.a, la.b) != (lb.a, lb.b):
        raise ValueError("tori must have identical shape")
    layer = CliffordLayer(ctrl.n)
    for q in range(la.n_qubits):
        layer.add("CNOT", ctrl.offset + q, tgt.offset + q)
    return layer


def cz_layer(a: CodeBlock, b: CodeBlock, shift: bool = True) -> CliffordLayer:
    """Shifted transversal CZ: face (r,c) of `a` lands on vertex (r,c) of `b`."""
    la, lb = a.layout, b.layout
    if (la.a, la.b) != (lb.a, lb.b):
        raise ValueError("tori must have identical shape")
    layer = CliffordLayer(a.n)
    for r in range(la.a):
        for c in range(la.b):
            if shift:
                layer.add("CZ", a.h(r, c), b.v(r - 1, c))
                layer.add("CZ", a.v(r, c), b.h(r, c - 1))
            else:
                layer.add("CZ", a.h(r, c), b.h(r, c))
                layer.add("CZ", a.v(r, c), b.v(r, c))
    return layer


def xcx_layer(a: CodeBlock, b: CodeBlock) -> CliffordLayer:
    """Shifted transversal X-controlled NOT: vertex (r,c) of `a` on face (r,c) of `b`."""
    la, lb = a.layout, b.layout
    if (la.a, la.b) != (lb.a, lb.b):
        raise ValueError("tori must have identical shape")
    layer = CliffordLayer(a.n)
    for r in range(la.a):
        for c in range(la.b):
            layer.add("XCX", a.h(r, c), b.v(r, c + 1))
            layer.add("XCX", a.v(r, c), b.h(r + 1, c))
    return layer


def patch_cnot_layer(torus: CodeBlock, patch: CodeBlock) -> CliffordLayer:
    """Entangling CNOTs between a torus and a cylindrical patch.

    Z-patch: torus qubits control, patch targets (measures the Z logical of
    torus qubit 0).  X-patch: patch controls, torus targets (measures X).
    The band starts at torus column 0 (Z) / row 0 (X); any band is
    equivalent modulo stabilizers.
    """
    lay: PatchLayout = patch.layout
    layer = CliffordLayer(torus.n)
    t: TorusLayout = torus.layout
    if lay.kind == "Z":
        if lay.width != t.a or lay.height > t.b:
            raise ValueError("patch section must match the torus and fit inside it")
        for r in range(lay.width):
            for c in range(lay.height):
                layer.add("CNOT", torus.h(r, c), patch.hp(r, c))
            for c in range(1, lay.height):
                layer.add("CNOT", torus.v(r, c), patch.vp(r, c))
    else:
        if lay.width != t.b or lay.height > t.a:
            raise ValueError("patch section must match the torus and fit inside it")
        for r in range(lay.height):
            for c in range(lay.width):
                layer.add("CNOT", patch.hp(r, c), torus.h(r, c))
        for r in range(lay.height - 1):
            for c in range(lay.width):
                layer.add("CNOT", patch.vp(r, c), torus.v(r, c))
    return layer


def patch_xcx_layer(torus: CodeBlock, patch: CodeBlock) -> CliffordLayer:
    """XCX entanglement with a Z-patch (vertex-on-face shifted pairing)."""
    lay: PatchLayout = patch.layout
    if lay.kind != "Z":
        raise ValueError("XCX patch entanglement uses a Z-patch")
    t: TorusLayout = torus.layout
    if lay.width != t.a or lay.height > t.b:
        raise ValueError("patch section must match the torus and fit inside it")
    layer = CliffordLayer(torus.n)
    for r in range(lay.width):
        for c in range(lay.height):
            layer.add("XCX", torus.v(r - 1, c), patch.hp(r, c))
        for c in range(1, lay.height):
            layer.add("XCX", torus.h(r, c - 1), patch.vp(r, c))
    return layer


def patch_cz_layer(torus: CodeBlock, patch: CodeBlock) -> CliffordLayer:
    """CZ entanglement with an X-patch (face-on-vertex shifted pairing)."""
    lay: PatchLayout = patch.layout
    if lay.kind != "X":
        raise ValueError("CZ patch entanglement uses an X-patch")
    t: TorusLayout = torus.layout
    if lay.width != t.b or lay.height > t.a:
        raise ValueError("patch section must match the torus and fit inside it")
    layer = CliffordLayer(torus.n)
    for rp in range(lay.height - 1):
        for c in range(lay.width):
            layer.add("CZ", torus.h(rp + 1, c), patch.vp(rp, c))
    for rp in range(lay.height):
        for c in range(lay.width):
            layer.add("CZ", torus.v(rp, c + 1), patch.hp(rp, c))
    return layer


def fold_s_layer(code: CodeBlock) -> CliffordLayer:
    """Folded S: S along the diagonal, CZ across the glide reflection.

    The fold is the reflection about the line through the h(k,k) midpoints:
    h(r,c) <-> h(c,r) and v(r,c) <-> v(c-1, r+1).  Its 2d fixed qubits get
    S gates; every other orbit pair gets a CZ.
    """
    lay: TorusLayout = code.layout
    if lay.a != lay.b:
        raise ValueError("folded S needs a square torus")
    if lay.shear:
        raise ValueError("folded S on a sheared torus is not supported")
    d = lay.a
    layer = CliffordLayer(code.n)
    seen = set()
    for r in range(d):
        for c in range(d):
            q = code.h(r, c)
            p = code.h(c, r)
            if q == p:
                layer.add("S", q)
            elif q not in seen and p not in seen:
                layer.add("CZ", q, p)
            seen.update((q, p))
            q = code.v(r, c)
            p = code.v(c - 1, r + 1)
            if q == p:
                layer.add("S", q)
            elif q not in seen and p not in seen:
                layer.add("CZ", q, p)
            seen.update((q, p))
    return layer


def hadamard_layer(code: CodeBlock) -> CliffordLayer:
    layer = CliffordLayer(code.n)
    for q in code.qubits:
        layer.add("H", q)
    return layer


def hadamard_relabel_perm(code: CodeBlock) -> List[int]:
    """Dual-lattice relabeling: h(r,c) -> v(r,c+1), v(r,c) -> h(r+1,c)."""
    lay: TorusLayout = code.layout
    if lay.shear:
        raise ValueError("dual relabeling defined on the unsheared torus")
    perm = list(range(code.n))
    for r in range(lay.a):
        for c in range(lay.b):
            perm[code.h(r, c)] = code.v(r, c + 1)
            perm[code.v(r, c)] = code.h(r + 1, c)
    return perm


def idt_layer(code: CodeBlock) -> CliffordLayer:
    """Instantaneous Dehn twist along horizontal guides.

    CNOTs are controlled on every vertical qubit; targets sit bottom-right
    for an unsheared code and alternate to bottom-left after an odd number
    of twists, which makes the procedure involutive.
    """
    lay: TorusLayout = code.layout
    t = lay.shear if lay.shear % 2 == 0 else lay.shear - 1
    layer = CliffordLayer(code.n)
    for r in range(lay.a):
        for c in range(lay.b):
            layer.add("CNOT", code.v(r, c), code.h(r + 1, c + t))
    return layer


def idt_apply(code: CodeBlock) -> Tuple[CliffordLayer, CodeBlock]:
    """The IDT layer together with the resulting (re-sheared) block."""
    lay: TorusLayout = code.layout
    layer = idt_layer(code)
    new_shear = lay.shear + 1 if lay.shear % 2 == 0 else lay.shear - 1
    new_block = build_toric_code(
        lay.a, lay.b, code.noisy, code.offset, code.n, shear=new_shear
    )
    return layer, new_block


@dataclass(frozen=True)
class TwistGuide:
    """Guide data for a stepwise Dehn twist along a horizontal loop."""

    row: int  # guide sits on v-row `row`; the parallel X loop on h-row row+1
    guide: PauliString  # L_Z
    parallel: PauliString  # L_X
    direction: str = "h"

    @staticmethod
    def horizontal(code: CodeBlock, row: int = 0) -> "TwistGuide":
        lay: TorusLayout = code.layout
        lz = PauliString.from_support(code.n, "Z", [code.v(row, c) for c in range(lay.b)])
        lx = PauliString.from_support(
            code.n, "X", [code.h(row + 1, c) for c in range(lay.b)]
        )
        return TwistGuide(row, lz, lx)


def dehn_step_layer(code: CodeBlock, guide: TwistGuide, step: int) -> CliffordLayer:
    """CNOT round `step` (1-based) of the Dehn twist procedure."""
    lay: TorusLayout = code.layout
    if not 1 <= step <= lay.b:
        raise ValueError("step out of range")
    layer = CliffordLayer(code.n)
    r = guide.row
    for c in range(lay.b):
        layer.add("CNOT", code.v(r, c), code.h(r + 1, c + step - 1))
    return layer


def dehn_twist_stabilizers(code: CodeBlock, guide: TwistGuide, k: int) -> CodeBlock:
    """Stabilizer sets after k CNOT rounds of the Dehn twist."""
    lay: TorusLayout = code.layout
    if not 0 <= k <= lay.b:
        raise ValueError("k out of range")
    x_stabs, z_stabs = code.x_stabs, code.z_stabs
    for j in range(1, k + 1):
        layer = dehn_step_layer(code, guide, j)
        x_stabs = [layer.conjugate(s) for s in x_stabs]
        z_stabs = [layer.conjugate(s) for s in z_stabs]
    out = replace(code)
    out.x_stabs = x_stabs
    out.z_stabs = z_stabs
    return out


# ---------------------------------------------------------------------------
# checking machinery


def joint_stabilizer_echelon(blocks: Sequence[CodeBlock]) -> Echelon:
    ech = Echelon()
    for block in blocks:
        for s in block.stabilizers:
            ech.add(s.symplectic)
    return ech


def check_stabilizer_preservation(
    layer: CliffordLayer,
    blocks: Sequence[CodeBlock],
    relabel: Optional[Sequence[int]] = None,
    out_blocks: Optional[Sequence[CodeBlock]] = None,
) -> Tuple[bool, Optional[PauliString]]:
    """True iff every conjugated stabilizer stays in the joint group.

    ``out_blocks`` gives the post-layer stabilizer group when it changes
    (instantaneous Dehn twist); by default the input group is used.  On
    failure the first violating image is returned as witness.
    """
    target = joint_stabilizer_echelon(out_blocks if out_blocks is not None else blocks)
    for block in blocks:
        for s in block.stabilizers:
            img = layer.conjugate(s)
            if relabel is not None:
                img = apply_permutation(img, relabel)
            if not target.contains(img.symplectic):
                return False, img
    return True, None


@dataclass
class LogicalAction:
    """Images of the logical generators in the post-construction basis."""

    names: List[str]  # e.g. ["X0", "Z0", "X1", "Z1", ...]
    images: Dict[str, List[str]]  # name -> product of post-basis names

    def __str__(self) -> str:
        lines = []
        for name in self.names:
            img = "*".join(self.images[name]) or "I"
            lines.append(f"{name} -> {img}")
        return "\n".join(lines)

    def is_symplectic(self) -> bool:
        """The induced map preserves logical commutation relations."""
        k = len(self.names) // 2

        def vec(name):
            out = 0
            for t in self.images[name]:
                i = int(t[1:])
                out ^= 1 << (2 * i + (0 if t[0] == "X" else 1))
            return out

        def sym(u, v):
            acc = 0
            for i in range(k):
                acc ^= ((u >> (2 * i)) & 1) * ((v >> (2 * i + 1)) & 1)
                acc ^= ((v >> (2 * i)) & 1) * ((u >> (2 * i + 1)) & 1)
            return acc & 1

        vecs = [vec(n) for n in self.names]
        base = [1 << i for i in range(2 * k)]
        for i in range(2 * k):
            for j in range(i + 1, 2 * k):
                if sym(vecs[i], vecs[j]) != sym(base[i], base[j]):
                    return False
        return True


def logical_action(
    layer: CliffordLayer,
    blocks: Sequence[CodeBlock],
    relabel: Optional[Sequence[int]] = None,
    out_blocks: Optional[Sequence[CodeBlock]] = None,
) -> LogicalAction:
    """Decompose conjugated logicals over the post-construction basis.

    Raises if the construction is not stabilizer-preserving.
    """
    ok, witness = check_stabilizer_preservation(layer, blocks, relabel, out_blocks)
    if not ok:
        raise ValueError(f"construction does not preserve the stabilizer group: {witness}")
    post = list(out_blocks if out_blocks is not None else blocks)
    stab_ech = joint_stabilizer_echelon(post)

    names: List[str] = []
    gens: List[PauliString] = []
    post_pairs: List[Tuple[str, PauliString, str, PauliString]] = []
    qubit_no = 0
    for bi, block in enumerate(blocks):
        pblock = post[bi]
        for (x_old, z_old), (x_new, z_new) in zip(block.logicals, pblock.logicals):
            names += [f"X{qubit_no}", f"Z{qubit_no}"]
            gens += [x_old, z_old]
            post_pairs.append((f"X{qubit_no}", x_new, f"Z{qubit_no}", z_new))
            qubit_no += 1

    images: Dict[str, List[str]] = {}
    for name, g in zip(names, gens):
        img = layer.conjugate(g)
        if relabel is not None:
            img = apply_permutation(img, relabel)
        terms: List[str] = []
        acc = PauliString.identity(img.n)
        for xn, xop, zn, zop in post_pairs:
            if not img.commutes(zop):
                terms.append(xn)
                acc = acc.multiply(xop)
            if not img.commutes(xop):
                terms.append(zn)
                acc = acc.multiply(zop)
        residual = img.multiply(acc)  # equal x/z bits cancel; rest must be stabilizer
        if not stab_ech.contains(residual.symplectic):
            raise AssertionError(f"image of {name} not in logical+stabilizer span")
        images[name] = terms
    return LogicalAction(names, images)


# ---------------------------------------------------------------------------
# block export


def export_codeblock(block: CodeBlock) -> str:
    lines = ["X-STABS"]
    lines += [str(s) for s in block.x_stabs]
    lines.append("Z-STABS")
    lines += [str(s) for s in block.z_stabs]
    lines.append("LOGICALS")
    for x, z in block.logicals:
        lines.append(str(x))
        lines.append(str(z))
    return "\n".join(lines) + "\n"
