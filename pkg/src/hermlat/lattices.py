"""Hermitian lattices over an imaginary quadratic maximal order.

A lattice is a pseudo-basis: fractional ideals (a_1, ..., a_g) and the
Gram matrix G of the implicit basis vectors, G[i][j] = H(x_i, x_j).
Lattices built by dual / decomposition carry, in addition, the basis
rows expressing their vectors in the frame of the lattice they came
from, together with that frame's hermitian form, so that containment
and index questions reduce to integer HNF comparisons of Z-modules.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .kmatrix import (
    is_positive_definite,
    kmat,
    kmat_identity,
    kmat_inverse,
    kmat_mul,
    kvec_mat,
)
from .linalg import ZModule, short_vectors_gram
from .orders import FracIdeal, KNumber, Order, class_group, idempotents, is_principal


class HermitianLattice:
    """Positive definite hermitian R-lattice in pseudo-basis form."""

    __slots__ = ("order", "ideals", "gram", "basis", "ambient", "_key", "_module")

    def __init__(self, order: Order, ideals, gram, basis=None, ambient=None,
                 validate: bool = True):
        self.order = order
        self.ideals = tuple(ideals)
        self.gram = kmat(gram)
        if basis is None:
            assert ambient is None
            self.basis = kmat_identity(order, len(self.ideals))
            self.ambient = self.gram
        else:
            assert ambient is not None
            self.basis = kmat(basis)
            self.ambient = kmat(ambient)
        self._key = None
        self._module = None
        if validate:
            self._validate()

    def _validate(self):
        g = self.rank
        assert g >= 1, "rank 0 lattices are rejected"
        assert len(self.gram) == g and all(len(r) == g for r in self.gram)
        assert all(i.order == self.order for i in self.ideals)
        assert is_positive_definite(self.gram), "Gram must be hermitian positive definite"
        assert len(self.basis) == g and len(self.basis[0]) == self.ambient_dim

    @property
    def rank(self) -> int:
        return len(self.ideals)

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient)

    # -- value semantics ----------------------------------------------------

    def module(self) -> ZModule:
        """The underlying Z-module in ambient coordinates (rank 2g)."""
        if self._module is None:
            rows = []
            for ideal, bas in zip(self.ideals, self.basis):
                for gen in ideal.generators():
                    vec = [gen * x for x in bas]
                    rows.append(_flatten_kvec(vec))
            self._module = ZModule.from_rows(rows)
        return self._module

    def key(self):
        if self._key is None:
            amb = tuple(tuple((x.a, x.b) for x in row) for row in self.ambient)
            self._key = (self.order.disc, amb, self.module().key())
        return self._key

    def __eq__(self, other):
        return isinstance(other, HermitianLattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"HermitianLattice(disc={self.order.disc}, rank={self.rank}, "
                f"ideals={[str(i) for i in self.ideals]})")

    # -- invariants ----------------------------------------------------------

    def scale_ideal(self) -> FracIdeal:
        """H(L, L) as a fractional ideal."""
        gens = []
        for i, ai in enumerate(self.ideals):
            for j, aj in enumerate(self.ideals):
                gij = self.gram[i][j]
                if not gij:
                    continue
                for u in ai.generators():
                    for v in aj.conj().generators():
                        gens.append(u * v * gij)
        return FracIdeal.from_k_generators(self.order, gens)

    def volume_ideal(self) -> FracIdeal:
        from .kmatrix import kmat_det
        d = kmat_det(self.gram)
        assert d.is_rational() and d.a > 0
        q = d.a
        for ideal in self.ideals:
            q *= ideal.norm()
        return FracIdeal.unit_ideal(self.order).scale_rational(q)

    def dual(self) -> "HermitianLattice":
        ginv = kmat_inverse(self.gram)
        ideals = tuple(i.conj().inverse() for i in self.ideals)
        basis = kmat_mul(ginv, self.basis)
        return HermitianLattice(self.order, ideals, ginv, basis=basis,
                                ambient=self.ambient, validate=False)

    def is_integral(self) -> bool:
        return self.scale_ideal().is_integral()

    def is_modular(self, a: FracIdeal) -> bool:
        vol = self.volume_ideal()
        power = FracIdeal.unit_ideal(self.order)
        for _ in range(self.rank):
            power = power * a
        return vol == power and self.scale_ideal() == a

    def is_unimodular(self) -> bool:
        return self.is_modular(FracIdeal.unit_ideal(self.order))

    def steinitz_class(self) -> int:
        """Index of the class of the product of the coefficient ideals."""
        prod = FracIdeal.unit_ideal(self.order)
        for ideal in self.ideals:
            prod = prod * ideal
        return class_group(self.order).class_of(prod)

    def steinitz_ideal(self) -> FracIdeal:
        return class_group(self.order).classes[self.steinitz_class()]

    def polarization_degree(self) -> int:
        """Index of L in its dual, by explicit Z-module HNF comparison."""
        dual = self.dual()
        if not dual.module().contains_module(self.module()):
            raise ValueError("polarization degree requires an integral lattice")
        return self.module().index_in(dual.module())

    # -- trace form ----------------------------------------------------------

    def trace_lattice(self) -> "TraceLattice":
        g = self.rank
        scalars = []
        for i, ideal in enumerate(self.ideals):
            for gen in ideal.generators():
                scalars.append((i, gen))
        n2 = 2 * g
        gram = [[Fraction(0)] * n2 for _ in range(n2)]
        for p in range(n2):
            ip, gp = scalars[p]
            for q in range(p, n2):
                iq, gq = scalars[q]
                val = (gp * gq.conj() * self.gram[ip][iq]).trace()
                gram[p][q] = val
                gram[q][p] = val
        omega = [[0] * n2 for _ in range(n2)]
        t, n = self.order.t, self.order.n
        for i, ideal in enumerate(self.ideals):
            a, b, c = ideal.a, ideal.b, ideal.c
            # multiplication by w on the generators (a, b+cw)/den
            omega[2 * i][2 * i] = -b // c
            omega[2 * i][2 * i + 1] = a // c
            omega[2 * i + 1][2 * i] = -(b * b + t * b * c + n * c * c) // (a * c)
            omega[2 * i + 1][2 * i + 1] = b // c + t
        return TraceLattice(self.order, tuple(tuple(r) for r in gram),
                            tuple(tuple(r) for r in omega), tuple(scalars))

    # -- pseudo-basis normalisation -------------------------------------------

    def steinitz_normal_form(self) -> "HermitianLattice":
        """Same lattice with coefficient ideals (R, ..., R, class rep)."""
        order = self.order
        unit = FracIdeal.unit_ideal(order)
        ideals = list(self.ideals)
        rows = [list(r) for r in kmat_identity(order, self.rank)]
        for i in range(self.rank - 1):
            if ideals[i] == unit:
                continue
            a_id, b_id = ideals[i], ideals[i + 1]
            alpha, beta = _coprime_pair(a_id, b_id)
            u, v = idempotents(a_id.inverse().scale(alpha), b_id.inverse().scale(beta))
            delta, gamma = u / alpha, -v / beta
            xi = [alpha * x + beta * y for x, y in zip(rows[i], rows[i + 1])]
            yi = [gamma * x + delta * y for x, y in zip(rows[i], rows[i + 1])]
            rows[i], rows[i + 1] = xi, yi
            ideals[i], ideals[i + 1] = unit, a_id * b_id
        last = ideals[-1]
        rep = class_group(order).classes[class_group(order).class_of(last)]
        mu = is_principal(last * rep.inverse())
        assert mu is not None
        ideals[-1] = rep
        rows[-1] = [mu * x for x in rows[-1]]
        basis = kmat_mul(kmat(rows), self.basis)
        gram = _gram_of_rows(kmat(rows), self.gram)
        out = HermitianLattice(order, ideals, gram, basis=basis,
                               ambient=self.ambient, validate=False)
        assert out == self
        return out


def _flatten_kvec(vec) -> list[Fraction]:
    out = []
    for x in vec:
        out.append(x.a)
        out.append(x.b)
    return out


def _gram_of_rows(rows, form):
    """Gram matrix of row vectors under the hermitian form (sesquilinear,
    conjugation on the second argument)."""
    order = rows[0][0].order
    m = len(rows)
    out = [[order.k(0)] * m for _ in range(m)]
    for i in range(m):
        fi = kvec_mat(rows[i], form)
        for j in range(m):
            out[i][j] = sum((fi[k] * rows[j][k].conj() for k in range(len(fi))),
                            start=order.k(0))
    return kmat(out)


def _coprime_pair(a_id: FracIdeal, b_id: FracIdeal):
    """alpha in a, beta in b with alpha*a^-1 + beta*b^-1 = R."""
    unit = FracIdeal.unit_ideal(a_id.order)
    a_inv, b_inv = a_id.inverse(), b_id.inverse()
    bound = max(a_id.norm(), 1)
    alphas = a_id.elements_of_norm_at_most(4 * bound)
    alpha = alphas[0]
    u_id = a_inv.scale(alpha)
    bbound = max(b_id.norm(), 1)
    while True:
        for beta in b_id.elements_of_norm_at_most(4 * bbound):
            if u_id + b_inv.scale(beta) == unit:
                return alpha, beta
        bbound *= 4


# ---------------------------------------------------------------------------
# The rank-2g integer lattice carrying the trace form


class TraceLattice:
    """Trace form Tr H on the Z-basis of a hermitian lattice, with the
    multiplication-by-omega matrix (row convention: w*v = v @ omega)."""

    __slots__ = ("order", "gram", "omega", "basis_map", "_sv_bound", "_sv", "_det")

    def __init__(self, order, gram, omega, basis_map):
        self.order = order
        self.gram = gram
        self.omega = omega
        self.basis_map = basis_map
        self._sv_bound = Fraction(-1)
        self._sv = []
        self._det = None

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> Fraction:
        if self._det is None:
            from .linalg import det_fraction
            self._det = det_fraction(self.gram)
        return self._det

    def inner(self, u, v) -> Fraction:
        return _bilinear(self.gram, u, v)

    def omega_apply(self, v):
        n = self.rank
        return tuple(sum(v[k] * self.omega[k][j] for k in range(n)) for j in range(n))

    def vectors_up_to(self, bound):
        """(vector, norm) pairs, 0 < norm <= bound, one per +-pair,
        sorted by (norm, vector)."""
        bound = Fraction(bound)
        if bound > self._sv_bound:
            vecs = [(nrm, tuple(v)) for v, nrm in
                    short_vectors_gram([list(r) for r in self.gram], bound)]
            vecs.sort()
            self._sv = [(v, nrm) for nrm, v in vecs]
            self._sv_bound = bound
        return [(v, nrm) for v, nrm in self._sv if nrm <= bound]

    def vectors_of_norm(self, norm):
        norm = Fraction(norm)
        return [v for v, nrm in self.vectors_up_to(norm) if nrm == norm]

    def minimum(self) -> Fraction:
        from .linalg import lll_reduce_gram
        red, _ = lll_reduce_gram([list(r) for r in self.gram])
        best = min(red[i][i] for i in range(self.rank))
        vecs = self.vectors_up_to(best)
        return vecs[0][1] if vecs else best

    def theta_prefix(self, depth=20):
        """Counts of vectors (both signs) by norm for norms <= depth."""
        counts: dict[Fraction, int] = {}
        for _, nrm in self.vectors_up_to(depth):
            counts[nrm] = counts.get(nrm, 0) + 2
        return tuple(sorted(counts.items()))


def _bilinear(gram, u, v) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
    return total


# ---------------------------------------------------------------------------
# Spec-facing operation names


def scale(lat: HermitianLattice) -> FracIdeal:
    return lat.scale_ideal()


def volume(lat: HermitianLattice) -> FracIdeal:
    return lat.volume_ideal()


def dual(lat: HermitianLattice) -> HermitianLattice:
    return lat.dual()


def is_integral(lat: HermitianLattice) -> bool:
    return lat.is_integral()


def is_modular(lat: HermitianLattice, a: FracIdeal) -> bool:
    return lat.is_modular(a)


def is_unimodular(lat: HermitianLattice) -> bool:
    return lat.is_unimodular()


def steinitz(lat: HermitianLattice) -> int:
    return lat.steinitz_class()


def polarization_degree(lat: HermitianLattice) -> int:
    return lat.polarization_degree()


def trace_lattice(lat: HermitianLattice) -> TraceLattice:
    return lat.trace_lattice()


def minimum_vectors(tl: TraceLattice, bound) -> list[tuple[int, ...]]:
    """All nonzero v with T(v, v) <= bound, one of each +-pair."""
    assert Fraction(bound) > 0
    return [v for v, _ in tl.vectors_up_to(bound)]


def reconstruct_gram(tl: TraceLattice):
    """Recover the pseudo-basis Gram from (gram, omega, basis_map).

    The pairings T(u, v) and T(conj(w) u, v) pin down the two rational
    coordinates of H(u, v); this inverts trace_lattice exactly.
    """
    order = tl.order
    t, n = order.t, order.n
    g = tl.rank // 2
    disc = t * t - 4 * n
    out = [[order.k(0)] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            p, q = 2 * i, 2 * j
            e_p = tuple(int(r == p) for r in range(tl.rank))
            e_q = tuple(int(r == q) for r in range(tl.rank))
            t1 = _bilinear(tl.gram, e_p, e_q)
            t_omega = _bilinear(tl.gram, tl.omega_apply(e_p), e_q)
            t2 = t * t1 - t_omega  # Tr(conj(w) H)
            # solve 2x + t y = t1, t x + 2 n y = t2
            y = (t * t1 - 2 * t2) / (-disc)
            x = (t1 - t * y) / 2
            h_pq = KNumber(order, x, y)
            gp, gq = tl.basis_map[p][1], tl.basis_map[q][1]
            out[i][j] = h_pq / (gp * gq.conj())
    return kmat(out)


# ---------------------------------------------------------------------------
# Pseudo-HNF over the order (Cohen-style) and module reconstruction


def pseudo_hnf(order: Order, gens):
    """Triangularize pseudo-generators [(ideal, vector)] of a torsion-free
    R-module into a pseudo-basis (pivot entries 1)."""
    rows = [(ideal, tuple(vec)) for ideal, vec in gens if any(vec)]
    assert rows
    ncols = len(rows[0][1])
    result = []
    for col in range(ncols):
        active = [k for k, (_, v) in enumerate(rows) if v[col]]
        if not active:
            continue
        main = rows[active[0]]
        spawned = []
        for k in active[1:]:
            main, leftover = _combine_pseudo(main, rows[k], col)
            if any(leftover[1]):
                spawned.append(leftover)
        piv = main[1][col]
        main = (main[0].scale(piv), tuple(x / piv for x in main[1]))
        result.append(main)
        keep = set(active)
        rows = [r for k, r in enumerate(rows) if k not in keep] + spawned
    assert not rows, "pseudo-generators left after triangularisation"
    return result


def _combine_pseudo(r1, r2, col):
    b1, v1 = r1
    b2, v2 = r2
    a1, a2 = v1[col], v2[col]
    s1, s2 = b1.scale(a1), b2.scale(a2)
    c_id = s1 + s2
    c_inv = c_id.inverse()
    u, v = idempotents(s1 * c_inv, s2 * c_inv)
    w = tuple((u / a1) * x + (v / a2) * y for x, y in zip(v1, v2))
    rest = tuple(x / a1 - y / a2 for x, y in zip(v1, v2))
    d_id = s1 * (s2 * c_inv)
    return (c_id, w), (d_id, rest)


def lattice_from_z_generators(order: Order, vectors, ambient) -> HermitianLattice:
    """Hermitian lattice spanned over R by K-vectors, under the given
    ambient hermitian form (vectors expressed in the ambient frame)."""
    unit = FracIdeal.unit_ideal(order)
    pseudo = pseudo_hnf(order, [(unit, v) for v in vectors])
    ideals = [ideal for ideal, _ in pseudo]
    rows = kmat([v for _, v in pseudo])
    gram = _gram_of_rows(rows, ambient)
    return HermitianLattice(order, ideals, gram, basis=rows, ambient=ambient)


def direct_sum(*lats: HermitianLattice) -> HermitianLattice:
    order = lats[0].order
    assert all(l.order == order for l in lats)
    ideals = [i for l in lats for i in l.ideals]
    n = sum(l.rank for l in lats)
    gram = [[order.k(0)] * n for _ in range(n)]
    off = 0
    for l in lats:
        for i in range(l.rank):
            for j in range(l.rank):
                gram[off + i][off + j] = l.gram[i][j]
        off += l.rank
    return HermitianLattice(order, ideals, gram)


def rescale(lat: HermitianLattice, q) -> HermitianLattice:
    """Same module, hermitian form multiplied by the positive rational q."""
    q = Fraction(q)
    assert q > 0
    gram = kmat([[x * q for x in row] for row in lat.gram])
    return HermitianLattice(lat.order, lat.ideals, gram)
