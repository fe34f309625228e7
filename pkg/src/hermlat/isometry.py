"""Isometry of hermitian lattices, automorphism groups, decomposition.

Isometry search runs on the rank-2g trace lattices: candidate images of
the pseudo-basis anchor vectors are short vectors of the right norm in
the target, placed by backtracking, with multiplication-by-omega
equivariance enforced as a hard constraint inside the search (each
placement fixes the image of the whole pseudo-component, whose ideal
generators must land inside the target module).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .kmatrix import kmat, kmat_conj_transpose, kmat_mul
from .lattices import HermitianLattice, TraceLattice, _bilinear
from .linalg import ZModule, det_int, lll_reduce_gram
from .orders import FracIdeal


@dataclass(frozen=True)
class IsometryWitness:
    """K-linear map sending the first lattice onto the second.

    matrix rows are the images of the first lattice's pseudo-basis
    vectors in the second's pseudo-basis coordinates, so the Gram
    transport law reads  matrix * G2 * conj(matrix)^T == G1.
    """

    matrix: tuple[tuple, ...]

    def compose(self, other: "IsometryWitness") -> "IsometryWitness":
        return IsometryWitness(kmat_mul(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix)


@dataclass
class IsometryResult:
    witness: IsometryWitness | None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.witness is not None


def verify_witness(l1: HermitianLattice, l2: HermitianLattice,
                   w: IsometryWitness) -> bool:
    """Check both witness invariants by direct matrix arithmetic."""
    c = w.matrix
    transported = kmat_mul(kmat_mul(c, l2.gram), kmat_conj_transpose(c))
    if transported != l1.gram:
        return False
    # module transport: image of each ideal generator times its basis
    # vector must lie in L2, and the induced integer map must be unimodular
    rows = []
    basis2 = _pseudo_z_basis(l2)
    for i, ideal in enumerate(l1.ideals):
        for gen in ideal.generators():
            img = [gen * x for x in c[i]]
            coords = basis2.coords_of(img)
            if coords is None:
                return False
            rows.append(coords)
    return abs(det_int(rows)) == 1


class _PseudoZBasis:
    """Z-basis of a lattice in its own pseudo-basis coordinates, with
    exact coordinate extraction."""

    def __init__(self, lat: HermitianLattice):
        self.order = lat.order
        self.scalars = [(i, gen) for i, ideal in enumerate(lat.ideals)
                        for gen in ideal.generators()]
        rows = []
        g = lat.rank
        for i, gen in self.scalars:
            vec = [lat.order.k(0)] * g
            vec[i] = gen
            rows.append([c for x in vec for c in (x.a, x.b)])
        self.module = ZModule.from_rows(rows)

    def coords_of(self, kvec):
        flat = [c for x in kvec for c in (x.a, x.b)]
        coeffs = self.module._solve(flat)
        if coeffs is None or any(c.denominator != 1 for c in coeffs):
            return None
        return [int(c) for c in coeffs]


def _pseudo_z_basis(lat: HermitianLattice) -> _PseudoZBasis:
    return _PseudoZBasis(lat)


# ---------------------------------------------------------------------------
# The backtracking search


def _search_isometries(l1: HermitianLattice, l2: HermitianLattice,
                       limit: int | None = 1):
    """Backtracking over short-vector images; yields witness matrices.

    Placement order is by ascending shell size (rarest norm first).
    Stops after `limit` witnesses (None = all).
    """
    t1, t2 = l1.trace_lattice(), l2.trace_lattice()
    g = l1.rank
    n2 = 2 * g
    anchors = [2 * i for i in range(g)]
    e = [tuple(int(r == p) for r in range(n2)) for p in range(n2)]
    norm1 = [t1.gram[p][p] for p in anchors]
    pair_plain = [[t1.gram[anchors[i]][anchors[j]] for j in range(g)] for i in range(g)]
    pair_omega = [[_bilinear(t1.gram, t1.omega_apply(e[anchors[i]]), e[anchors[j]])
                   for j in range(g)] for i in range(g)]

    shells: list[list[tuple[int, ...]]] = []
    for i in range(g):
        half = t2.vectors_of_norm(norm1[i])
        shells.append([tuple(v) for v in half] + [tuple(-x for x in v) for v in half])
    if any(not s for s in shells):
        return
    positions = sorted(range(g), key=lambda i: len(shells[i]))

    omega2_rows = t2.omega
    gram2 = t2.gram
    found = 0
    placed: list[tuple[int, ...] | None] = [None] * g

    def omega_image(w):
        return tuple(sum(w[k] * omega2_rows[k][j] for k in range(n2) if w[k])
                     for j in range(n2))

    def companion_ok(i, w, w_omega):
        ideal = l1.ideals[i]
        a, b, c = ideal.a, ideal.b, ideal.c
        return all((b * w[r] + c * w_omega[r]) % a == 0 for r in range(n2))

    def backtrack(k):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if k == g:
            found += 1
            yield [placed[i] for i in range(g)]
            return
        i = positions[k]
        for w in shells[i]:
            w_omega = omega_image(w)
            if not companion_ok(i, w, w_omega):
                continue
            ok = True
            for kk in range(k):
                j = positions[kk]
                wj = placed[j]
                if _bilinear(gram2, w, wj) != pair_plain[i][j]:
                    ok = False
                    break
                if _bilinear(gram2, w_omega, wj) != pair_omega[i][j]:
                    ok = False
                    break
                if _bilinear(gram2, omega_image(wj), w) != pair_omega[j][i]:
                    ok = False
                    break
            if not ok:
                continue
            placed[i] = w
            yield from backtrack(k + 1)
            placed[i] = None
            if limit is not None and found >= limit:
                return

    order = l1.order
    for assignment in backtrack(0):
        rows = []
        for i in range(g):
            w = assignment[i]
            scal = Fraction(l1.ideals[i].den, l1.ideals[i].a)
            kcoords = []
            for j in range(g):
                x = t2.basis_map[2 * j][1] * w[2 * j] + t2.basis_map[2 * j + 1][1] * w[2 * j + 1]
                kcoords.append(x * scal)
            rows.append(kcoords)
        yield IsometryWitness(kmat(rows))


_FILTERS = ("rank", "scale", "volume", "steinitz", "trace determinant", "theta")


def _separating_invariant(l1, l2, theta_depth):
    if l1.rank != l2.rank:
        return "rank"
    if l1.scale_ideal() != l2.scale_ideal():
        return "scale"
    if l1.volume_ideal() != l2.volume_ideal():
        return "volume"
    if l1.steinitz_class() != l2.steinitz_class():
        return "steinitz"
    t1, t2 = l1.trace_lattice(), l2.trace_lattice()
    if t1.det() != t2.det():
        return "trace determinant"
    if theta_depth and t1.theta_prefix(theta_depth) != t2.theta_prefix(theta_depth):
        return "theta"
    return None


def is_isometric(l1: HermitianLattice, l2: HermitianLattice, *,
                 theta_depth: int = 20) -> IsometryResult:
    """Hermitian isometry test;  witness, or the name of the first cheap
    invariant separating the two, or "search exhausted"."""
    assert l1.order == l2.order, "lattices over different orders"
    sep = _separating_invariant(l1, l2, theta_depth)
    if sep is not None:
        return IsometryResult(None, sep)
    for witness in _search_isometries(l1, l2, limit=1):
        return IsometryResult(witness)
    return IsometryResult(None, "search exhausted")


@dataclass
class AutomorphismGroup:
    lattice: HermitianLattice
    elements: tuple[IsometryWitness, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> tuple[IsometryWitness, ...]:
        gens: list[IsometryWitness] = []
        closed = {self._identity().matrix}
        for el in self.elements:
            if el.matrix in closed:
                continue
            gens.append(el)
            closed = _mulclose([g.matrix for g in gens], self._identity().matrix)
            if len(closed) == len(self.elements):
                break
        return tuple(gens)

    def _identity(self) -> IsometryWitness:
        from .kmatrix import kmat_identity
        return IsometryWitness(kmat_identity(self.lattice.order, self.lattice.rank))


def _mulclose(mats, identity):
    seen = {identity}
    frontier = [identity]
    while frontier:
        m = frontier.pop()
        for gmat in mats:
            prod = kmat_mul(m, gmat)
            if prod not in seen:
                seen.add(prod)
                frontier.append(prod)
    return seen


def automorphisms(lat: HermitianLattice) -> AutomorphismGroup:
    """The full (finite) group of self-isometries."""
    elements = tuple(_search_isometries(lat, lat, limit=None))
    assert elements, "automorphism group must contain the identity"
    return AutomorphismGroup(lat, elements)


# ---------------------------------------------------------------------------
# Orthogonal decomposition


def decompose(lat: HermitianLattice) -> list[HermitianLattice]:
    """Finest orthogonal splitting into hermitian sublattices.

    Connected components of the graph on Kneser-indecomposable short
    vectors (non-orthogonality edges), coarsened by the omega action;
    the blocks are then H-orthogonal and R-stable.
    """
    if lat.rank == 1:
        return [lat]
    tl = lat.trace_lattice()
    n2 = tl.rank
    red, _ = lll_reduce_gram([list(r) for r in tl.gram])
    bound = max(red[i][i] for i in range(n2))
    identity_rows = tuple(tuple(int(i == j) for j in range(n2)) for i in range(n2))
    while True:
        vecs = tl.vectors_up_to(bound)
        if vecs:
            span = ZModule.from_rows([list(v) for v, _ in vecs])
            if span.den == 1 and tuple(tuple(r) for r in span.rows) == identity_rows:
                break
        bound *= 2

    # Kneser filter: v splits iff some shorter a has T(a, v) = +-T(a, a)
    indec = []
    for v, nv in vecs:
        splits = False
        for a, na in vecs:
            if na >= nv:
                break
            if abs(_bilinear(tl.gram, a, v)) == na:
                splits = True
                break
        if not splits:
            indec.append(v)

    parent = list(range(len(indec)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i in range(len(indec)):
        for j in range(i + 1, len(indec)):
            if find(i) == find(j):
                continue
            if _bilinear(tl.gram, indec[i], indec[j]) != 0:
                union(i, j)
            elif _bilinear(tl.gram, tl.omega_apply(indec[i]), indec[j]) != 0:
                union(i, j)

    comps: dict[int, list[tuple[int, ...]]] = {}
    for i, v in enumerate(indec):
        comps.setdefault(find(i), []).append(v)
    if len(comps) == 1:
        return [lat]

    from .lattices import lattice_from_z_generators
    blocks = []
    for members in comps.values():
        kvecs = []
        for v in members:
            coords = [lat.order.k(0)] * lat.rank
            for p, (i, gen) in enumerate(tl.basis_map):
                if v[p]:
                    coords[i] = coords[i] + v[p] * gen
            # place into the ambient frame of lat
            amb = [sum((coords[i] * lat.basis[i][j] for i in range(lat.rank)),
                       start=lat.order.k(0)) for j in range(lat.ambient_dim)]
            kvecs.append(tuple(amb))
        blocks.append(lattice_from_z_generators(lat.order, kvecs, lat.ambient))
    blocks.sort(key=lambda b: b.key())
    return blocks
