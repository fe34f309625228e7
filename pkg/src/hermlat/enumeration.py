"""Classification of integral unimodular hermitian lattices up to isometry.

Strategy, per rank g:

* classes containing a vector of norm 1 split off a unimodular rank-1
  summand, so they are exactly <1> + X over the rank g-1 classes
  (uniqueness of orthogonal decomposition makes this map a bijection);

* classes with minimum >= 2 contain the free sublattice M spanned by
  K-successive-minima vectors.  Its Gram lies in a finite box: the
  diagonal obeys the Minkowski bound for the rank-2g trace form (exact
  integer inequalities via the Hermite constants for ranks 2, 4, 6) and
  every off-diagonal entry is Cauchy-Schwarz bounded and Voronoi-reduced
  against both diagonal entries.  Every unimodular L with these minima
  is an overlattice of its M with index det(Gram_M), so gluing isotropic
  R-submodules of M#/M of that order yields every class;  results are
  kept only in the box matching their true successive minima and then
  deduplicated by isometry.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .kmatrix import kmat, kmat_det, kmat_inverse
from .lattices import (
    HermitianLattice,
    TraceLattice,
    direct_sum,
    lattice_from_z_generators,
    pseudo_hnf,
)
from .linalg import snf_with_transform, mat_inverse_fraction, mat_mul
from .isometry import is_isometric
from .orders import FracIdeal, KNumber, Order, class_group


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchBudget:
    max_candidates: int | None = None
    max_seconds: float | None = None
    candidates: int = 0
    glue_tested: int = 0
    isometry_tests: int = 0
    exhausted: bool = False
    started: float = field(default_factory=time.monotonic)

    def tick(self, kind: str = "candidates", n: int = 1):
        setattr(self, kind, getattr(self, kind) + n)
        if self.max_candidates is not None and \
                self.candidates + self.glue_tested > self.max_candidates:
            raise BudgetExceeded("candidate cap")
        if self.max_seconds is not None and \
                (self.candidates + self.glue_tested) % 64 == 0 and \
                time.monotonic() - self.started > self.max_seconds:
            raise BudgetExceeded("time cap")


@dataclass
class ClassList:
    order: Order
    rank: int
    free_only: bool
    indecomposable_only: bool
    reps: tuple[HermitianLattice, ...]
    provenance: tuple[dict, ...]
    stats: dict
    complete: bool = True


# ---------------------------------------------------------------------------
# Gram boxes for the minima sublattice


def _voronoi_bound_num_den(order: Order) -> tuple[int, int]:
    """kappa^2 as a fraction (num, den): covering radius bound of R in C,
    max norm over the corners of the half-open unit cell."""
    one_plus = order.one + order.omega
    one_minus = order.one - order.omega
    num = max(one_plus.norm(), one_minus.norm())
    return int(num), 4


def _diagonal_tuples(order: Order, g: int) -> list[tuple[int, ...]]:
    """Ascending diagonals (m_1 <= ... <= m_g), m_1 >= 2, satisfying the
    exact Minkowski product bound for the trace form."""
    absd = -order.disc

    def ok(prod: int) -> bool:
        if g == 1:
            return 3 * prod * prod <= absd
        if g == 2:
            return 2 * prod <= absd
        return 3 * prod * prod <= absd ** 3

    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], prod: int):
        if len(prefix) == g:
            out.append(prefix)
            return
        m = prefix[-1] if prefix else 2
        while ok(prod * m ** (g - len(prefix))):
            rec(prefix + (m,), prod * m)
            m += 1

    rec((), 1)
    return out


def _elements_norm_at_most(order: Order, bound: int) -> list[KNumber]:
    """All elements of R with norm <= bound, zero included, both signs."""
    if bound <= 0:
        return [order.k(0)]
    unit = FracIdeal.unit_ideal(order)
    half = unit.elements_of_norm_at_most(bound)
    return [order.k(0)] + half + [-x for x in half]


def _voronoi_ok(beta: KNumber, m: int) -> bool:
    """All lambda in R give N(lambda)*m + Tr(lambda*beta) >= 0, i.e. the
    vector pair (m, beta) is length-reduced."""
    order = beta.order
    if not beta:
        return True
    # only lambda with N(lambda) < 4 N(beta) / m^2 can violate
    lam_bound = (4 * beta.norm()) / (m * m)
    for lam in _elements_norm_at_most(order, int(lam_bound) + 1):
        if lam and lam.norm() * m + (lam * beta).trace() < 0:
            return False
    return True


def _det3_hermitian(g):
    (a, p, q), (_, b, r), (_, _, c) = g[0], g[1], g[2]
    val = a * b * c - a * (r.norm()) - b * (q.norm()) - c * (p.norm()) \
        + (p * r * q.conj()).trace()
    assert val.is_rational()
    return val.a


def _orbit_canonical(order: Order, gram, diag) -> bool:
    """Keep one Gram per (units^g x equal-diagonal permutations) orbit."""
    g = len(diag)
    units = order.units()
    blocks: list[list[int]] = []
    for i in range(g):
        if blocks and diag[i] == diag[blocks[-1][0]]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    perms = [()]
    for blk in blocks:
        new = []
        for p in perms:
            for q in permutations(blk):
                new.append(p + q)
        perms = new

    def key(mat):
        return tuple((mat[i][j].a, mat[i][j].b)
                     for i in range(g) for j in range(i + 1, g))

    base = key(gram)
    from itertools import product as iproduct
    for perm in perms:
        for us in iproduct(units, repeat=g):
            cand = [[us[i] * gram[perm[i]][perm[j]] * us[j].conj()
                     for j in range(g)] for i in range(g)]
            if key(cand) < base:
                return False
    return True


def _gram_boxes(order: Order, g: int, budget: SearchBudget, rng):
    """Integral pos-def Gram candidates for the minima sublattice."""
    knum, kden = _voronoi_bound_num_den(order)
    diags = _diagonal_tuples(order, g)
    if rng is not None:
        rng.shuffle(diags)
    elem_cache: dict[int, list[KNumber]] = {}

    def elems(bound: int):
        if bound not in elem_cache:
            elem_cache[bound] = _elements_norm_at_most(order, bound)
        return elem_cache[bound]

    for diag in diags:
        pairs = [(i, j) for i in range(g) for j in range(i + 1, g)]
        cand: dict[tuple[int, int], list[KNumber]] = {}
        for i, j in pairs:
            mi, mj = diag[i], diag[j]
            window = min(mi * mj, (knum * min(mi, mj) ** 2) // kden)
            lst = [b for b in elems(window)
                   if b.norm() <= window
                   and _voronoi_ok(b, mi) and _voronoi_ok(b.conj(), mj)]
            if rng is not None:
                rng.shuffle(lst)
            cand[(i, j)] = lst

        # explicit small-rank loops keep the determinant pruning simple
        if g == 2:
            m0, m1 = diag
            for b01 in cand[(0, 1)]:
                budget.tick()
                det = m0 * m1 - b01.norm()
                if det < 1:
                    continue
                gram = kmat([[order.k(m0), b01], [b01.conj(), order.k(m1)]])
                if _orbit_canonical(order, gram, diag):
                    yield gram
        elif g == 3:
            m0, m1, m2 = diag
            for b01 in cand[(0, 1)]:
                if m0 * m1 - b01.norm() < 1:
                    continue
                for b02 in cand[(0, 2)]:
                    for b12 in cand[(1, 2)]:
                        budget.tick()
                        gram = kmat([
                            [order.k(m0), b01, b02],
                            [b01.conj(), order.k(m1), b12],
                            [b02.conj(), b12.conj(), order.k(m2)]])
                        if _det3_hermitian(gram) < 1:
                            continue
                        if _orbit_canonical(order, gram, diag):
                            yield gram
        else:
            raise ValueError(f"rank {g} not supported")


# ---------------------------------------------------------------------------
# K-successive minima


def _k_successive_minima(tl: TraceLattice, g: int, upto: Fraction):
    """First g successive minima of H over K-independent lattice vectors,
    or None if fewer were found below the bound (H-norms, i.e. T/2)."""
    rows: list[list[Fraction]] = []

    def rank_grows(vec) -> bool:
        v = [Fraction(x) for x in vec]
        for row in rows:
            piv = next(i for i, x in enumerate(row) if x)
            if v[piv]:
                f = v[piv] / row[piv]
                v = [a - f * b for a, b in zip(v, row)]
        if not any(v):
            return False
        rows.append(v)
        return True

    minima = []
    for v, nrm in tl.vectors_up_to(upto):
        if rank_grows(v):
            rank_grows(list(tl.omega_apply(v)))
            minima.append(nrm / 2)
            if len(minima) == g:
                return tuple(minima)
    return None


# ---------------------------------------------------------------------------
# Overlattice gluing


def _kpair_mul(x, y, t, n):
    return (x[0] * y[0] - n * x[1] * y[1],
            x[0] * y[1] + x[1] * y[0] + t * x[1] * y[1])


def _glue_overlattices(order: Order, gram, budget: SearchBudget, rng=None):
    """All unimodular overlattices of the free lattice with this integral
    Gram, as hermitian lattices (abstract pseudo-basis presentation)."""
    g = len(gram)
    unit = FracIdeal.unit_ideal(order)
    det = kmat_det(gram)
    assert det.is_rational() and det.a.denominator == 1
    d = int(det.a)
    base = HermitianLattice(order, [unit] * g, gram, validate=False)
    if d == 1:
        return [base]
    t, n = order.t, order.n

    # integer representation of G over the interleaved bases
    # (x_k, w x_k) of M and (y_k, w y_k) of M#
    c_rows = []
    for i in range(g):
        for s in range(2):
            row = []
            for j in range(g):
                val = gram[i][j] if s == 0 else order.omega * gram[i][j]
                assert val.is_integral()
                row.extend((int(val.a), int(val.b)))
            c_rows.append(row)
    dmat, _, v = snf_with_transform(c_rows)
    vinv = [[int(x) for x in row] for row in mat_inverse_fraction(v)]
    n2 = 2 * g
    diag = [dmat[p][p] for p in range(n2)]
    pos = [p for p in range(n2) if diag[p] != 1]
    if not pos:
        return [base]
    mods = [diag[p] for p in pos]

    omega_h = [[0] * n2 for _ in range(n2)]
    for k in range(g):
        omega_h[2 * k][2 * k + 1] = 1
        omega_h[2 * k + 1][2 * k] = -n
        omega_h[2 * k + 1][2 * k + 1] = t
    w_full = mat_mul(mat_mul(vinv, omega_h), v)

    adj_k = kmat_inverse(gram)
    adj = [[None] * g for _ in range(g)]
    for a in range(g):
        for b in range(g):
            x = adj_k[a][b] * det.a
            assert x.is_integral()
            adj[a][b] = (int(x.a), int(x.b))

    from itertools import product as iproduct
    elements = list(iproduct(*[range(m) for m in mods]))

    kappa: dict[tuple, list[tuple[int, int]]] = {}
    rho: dict[tuple, list[tuple[int, int]]] = {}
    for e in elements:
        lift = [0] * n2
        for val, p in zip(e, pos):
            if val:
                for r in range(n2):
                    lift[r] += val * vinv[p][r]
        kap = [(lift[2 * k], lift[2 * k + 1]) for k in range(g)]
        kappa[e] = kap
        rho[e] = [
            tuple(map(sum, zip(*(_kpair_mul(kap[a], adj[a][b], t, n)
                                 for a in range(g)))))
            for b in range(g)]

    def pair_integral(e, f) -> bool:
        kf = kappa[f]
        re_acc = im_acc = 0
        for b in range(g):
            conj_f = (kf[b][0] + t * kf[b][1], -kf[b][1])
            val = _kpair_mul(rho[e][b], conj_f, t, n)
            re_acc += val[0]
            im_acc += val[1]
        return re_acc % d == 0 and im_acc % d == 0

    iso_elems = [e for e in elements if any(e) and pair_integral(e, e)]
    if rng is not None:
        rng.shuffle(iso_elems)

    zero = tuple(0 for _ in pos)

    def add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, mods))

    def omega_act(e):
        # e over the nontrivial h' coordinates -> e_full * W, reduced
        full = [0] * n2
        for val, p in zip(e, pos):
            full[p] = val
        img = [sum(full[k] * w_full[k][r] for k in range(n2) if full[k])
               for r in range(n2)]
        return tuple(img[p] % diag[p] for p in pos)

    def rspan(base_set: frozenset, q) -> frozenset:
        cur = set(base_set)
        for gen in (q, omega_act(q)):
            while True:
                added = {add(s, gen) for s in cur} - cur
                if not added:
                    break
                cur |= added
        return frozenset(cur)

    results: list[list[tuple]] = []
    seen: set[frozenset] = set()
    start = frozenset({zero})
    queue: list[tuple[frozenset, list]] = [(start, [])]
    while queue:
        s_set, gens = queue.pop()
        for q in iso_elems:
            if q in s_set:
                continue
            if not all(pair_integral(q, h) and pair_integral(h, q) for h in gens):
                continue
            new_set = rspan(s_set, q)
            sz = len(new_set)
            if sz > d or d % sz:
                continue
            if new_set in seen:
                continue
            seen.add(new_set)
            budget.tick("glue_tested")
            new_gens = gens + [q]
            if sz == d:
                results.append(new_gens)
            else:
                queue.append((new_set, new_gens))

    out = []
    ginv = adj_k
    for gens in results:
        vectors = [tuple(order.k(int(i == j)) for j in range(g)) for i in range(g)]
        for e in gens:
            kap = kappa[e]
            kvec = [KNumber(order, Fraction(a), Fraction(b)) for a, b in kap]
            xcoords = tuple(
                sum((kvec[a] * ginv[a][b] for a in range(g)), start=order.k(0))
                for b in range(g))
            vectors.append(xcoords)
        lat = lattice_from_z_generators(order, vectors, gram)
        # forget the embedding: the class only needs (ideals, gram)
        out.append(HermitianLattice(lat.order, lat.ideals, lat.gram))
    return out


# ---------------------------------------------------------------------------
# Top level enumeration


def _dedup(cands, kept, budget: SearchBudget, theta_depth=20):
    """Append non-isometric candidates to kept (list of (lat, bucket))."""
    added = []
    for lat, prov in cands:
        bucket = (lat.steinitz_class(), lat.trace_lattice().theta_prefix(theta_depth))
        dup = False
        for other, obucket in kept:
            if obucket != bucket:
                continue
            budget.tick("isometry_tests")
            if is_isometric(other, lat):
                dup = True
                break
        if not dup:
            kept.append((lat, bucket))
            added.append((lat, prov))
    return added


def _classes(order: Order, g: int, budget: SearchBudget, rng):
    """All unimodular rank-g classes as (lattice, provenance) pairs."""
    unit = FracIdeal.unit_ideal(order)
    if g == 1:
        grp = class_group(order)
        out = []
        for idx, rep in enumerate(grp.classes):
            gram = [[order.k(1 / rep.norm())]]
            out.append((HermitianLattice(order, [rep], gram),
                        {"source": f"rank-1 class {idx}"}))
        return out

    smaller = _classes(order, g - 1, budget, rng)
    one = HermitianLattice(order, [unit], [[order.k(1)]])
    out = [(direct_sum(one, lat), {"source": "unit vector + " + prov["source"]})
           for lat, prov in smaller]
    if budget.exhausted:
        return out

    kept: list[tuple[HermitianLattice, tuple]] = []
    found: list[tuple[HermitianLattice, dict]] = []
    try:
        for gram in _gram_boxes(order, g, budget, rng):
            diag = tuple(gram[i][i].a for i in range(g))
            free = HermitianLattice(order, [unit] * g, gram, validate=False)
            tl = free.trace_lattice()
            minima = _k_successive_minima(tl, g, 2 * diag[-1])
            if minima != diag:
                continue
            for lat in _glue_overlattices(order, gram, budget, rng):
                lat_minima = _k_successive_minima(lat.trace_lattice(), g, 2 * diag[-1])
                if lat_minima != diag:
                    continue
                prov = {"source": f"minima box {tuple(int(m) for m in diag)}",
                        "candidates_seen": budget.candidates,
                        "glue_tested": budget.glue_tested}
                found.extend(_dedup([(lat, prov)], kept, budget))
    except BudgetExceeded:
        budget.exhausted = True
    return out + found


def enumerate_unimodular(order: Order, g: int, free_only: bool = False, *,
                         seed=None, max_candidates=None,
                         max_seconds=None) -> ClassList:
    """One representative per isometry class of unimodular hermitian
    lattices of rank g (restricted to free ones if free_only)."""
    if g not in (1, 2, 3):
        raise ValueError(f"rank {g} out of supported range 1..3")
    import random
    rng = random.Random(seed) if seed is not None else None
    budget = SearchBudget(max_candidates=max_candidates, max_seconds=max_seconds)
    pairs = _classes(order, g, budget, rng)
    complete = not budget.exhausted
    if free_only:
        pairs = [(lat, prov) for lat, prov in pairs if lat.steinitz_class() == 0]
    for lat, _ in pairs:
        assert lat.is_unimodular()
    stats = {"candidates": budget.candidates, "glue_tested": budget.glue_tested,
             "isometry_tests": budget.isometry_tests}
    return ClassList(order, g, free_only, False,
                     tuple(lat for lat, _ in pairs),
                     tuple(prov for _, prov in pairs), stats, complete)


def filter_indecomposable(classes: ClassList) -> ClassList:
    from .isometry import decompose
    keep = [(lat, prov) for lat, prov in zip(classes.reps, classes.provenance)
            if len(decompose(lat)) == 1]
    return ClassList(classes.order, classes.rank, classes.free_only, True,
                     tuple(lat for lat, _ in keep),
                     tuple(prov for _, prov in keep),
                     dict(classes.stats), classes.complete)
