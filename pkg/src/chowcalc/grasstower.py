"""Towers of Grassmannian bundles: presented Chow rings and Gysin maps.

A tower level G(k, E) over a base ring introduces fresh Chern variables for
the tautological sub-bundle; the defining relations are the vanishing of the
Whitney quotient classes above the quotient rank.  Normal forms are computed
per degree by integer lattice reduction, Gysin pushforwards by Schur-basis
coefficient extraction (an exact per-degree linear solve).
"""

from __future__ import annotations

import itertools

from .chern import Bundle
from .polyring import Poly, PolyError, VarTable, poly_det, series_invert
from .zgraded import DegreeLattice


class TowerError(Exception):
    pass


# -- partitions --------------------------------------------------------------


def check_partition(lam, k, m):
    """Validate that lam is a partition inside the k x m box."""
    lam = tuple(int(p) for p in lam)
    if any(p < 0 for p in lam):
        raise TowerError("partition parts must be nonnegative")
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise TowerError("partition parts must be weakly decreasing")
    lam = tuple(p for p in lam if p > 0)
    if len(lam) > k or any(p > m for p in lam):
        raise TowerError("partition %r does not fit the %dx%d box" % (lam, k, m))
    return lam


def partitions_in_box(k, m):
    """All partitions with at most k parts, each part at most m."""
    out = []

    def rec(prefix, maxpart):
        out.append(tuple(p for p in prefix if p))
        if len(prefix) == k:
            return
        for p in range(maxpart, 0, -1):
            rec(prefix + [p], p)

    rec([], m)
    return sorted(set(out), key=lambda lam: (sum(lam), lam))


def conjugate(lam):
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def schur_from_chern(bundle, lam):
    """Schur polynomial s_lam of a bundle via the dual Jacobi-Trudi
    determinant in its Chern classes."""
    table = bundle.table
    lam = tuple(p for p in lam if p)
    if not lam:
        return table.one()
    mu = conjugate(lam)
    n = len(mu)
    rows = [
        [bundle.c(mu[i] - i + j) if mu[i] - i + j >= 0 else table.zero() for j in range(n)]
        for i in range(n)
    ]
    return poly_det(rows)


# -- graded rings ------------------------------------------------------------


class GradedRing:
    """A polynomial ring with homogeneous relations, reduced per degree."""

    def __init__(self, table, relations=()):
        self.table = table
        rels = []
        for r in relations:
            if r.is_zero():
                continue
            if r.table != table:
                raise TowerError("relation over the wrong table")
            if not r.is_homogeneous():
                raise TowerError("relations must be homogeneous")
            rels.append(r)
        self.relations = tuple(rels)
        self._lattices = {}

    def lattice(self, d):
        if d not in self._lattices:
            self._lattices[d] = DegreeLattice(self.table, self.relations, d)
        return self._lattices[d]

    def normal_form(self, p):
        """Canonical representative modulo the relation ideal, per degree."""
        if p.table != self.table:
            raise TowerError("polynomial over the wrong table")
        if p.is_zero() or not self.relations:
            return p
        out = self.table.zero()
        for d, part in p.graded_parts().items():
            lat = self.lattice(d)
            out = out + lat.poly(lat.reduce(lat.vector(part)))
        return out

    def is_equivalent(self, a, b):
        return self.normal_form(a - b).is_zero()

    def basis_monomials(self, d):
        """Retained monomial basis of the degree-d quotient."""
        if not self.relations:
            return self.table.monomials(d)
        return self.lattice(d).retained_monomials()

    def __eq__(self, other):
        return (
            isinstance(other, GradedRing)
            and self.table == other.table
            and self.relations == other.relations
        )

    def __repr__(self):
        return "GradedRing(%r, %d relations)" % (self.table, len(self.relations))


def free_ring(variables, degree_bound=10):
    return GradedRing(VarTable(variables, degree_bound))


# -- the Gysin solver --------------------------------------------------------


class _Fiber:
    """The data needed to push forward along one Grassmannian factor.

    `subvars` are the Chern variables of the tautological sub-bundle; the
    `relations` are the factor's defining relations.  Variables occurring
    neither in the relations nor among the subvars are spectators: the
    pushforward is linear over them, so classes are split along spectator
    monomials and each piece is solved over the smaller core table.
    """

    def __init__(self, table, subvars, k, n, relations):
        self.table = table
        self.subvars = tuple(subvars)
        self.k = k
        self.n = n
        self.relations = tuple(relations)
        self.relative_dim = k * (n - k)
        core = set(self.subvars)
        for r in relations:
            core |= r.variables()
        self.core_names = tuple(nm for nm in table.names if nm in core)
        self.core_table = VarTable(
            [(nm, table.degrees[table.index[nm]]) for nm in self.core_names],
            table.degree_bound,
        )
        self.base_names = tuple(
            nm for nm in self.core_names if nm not in set(self.subvars)
        )
        self.target_table = VarTable(
            [
                (nm, table.degrees[table.index[nm]])
                for nm in table.names
                if nm not in set(self.subvars)
            ],
            table.degree_bound,
        )
        self.core_relations = tuple(r.convert(self.core_table) for r in relations)
        self.core_ring = GradedRing(self.core_table, self.core_relations)
        self.box = partitions_in_box(k, n - k)
        self.top = tuple([n - k] * k)
        sub = Bundle(
            k,
            [self.core_table.one()] + [self.core_table.var(v) for v in self.subvars],
        )
        self._schur = {lam: schur_from_chern(sub, lam) for lam in self.box}
        self._solvers = {}

    def _split_spectators(self, p):
        """Group terms by spectator monomial; values over the core table."""
        table = self.table
        spec_idx = [
            i for i, nm in enumerate(table.names) if nm not in set(self.core_names)
        ]
        core_idx = [table.index[nm] for nm in self.core_names]
        groups = {}
        for expo, c in p.terms.items():
            spec = tuple(expo[i] for i in spec_idx)
            core = tuple(expo[i] for i in core_idx)
            groups.setdefault(spec, {})[core] = c
        out = []
        for spec, terms in groups.items():
            out.append((spec, self.core_table.poly(terms)))
        return out, spec_idx

    def _solver(self, d):
        """Rows NF(s_mu * m) for the degree-d Schur-coefficient solve."""
        if d not in self._solvers:
            lat = self.core_ring.lattice(d)
            rows = []
            labels = []
            for lam in self.box:
                rem = d - sum(lam)
                if rem < 0:
                    continue
                s = self._schur[lam]
                base_monos = [
                    m
                    for m in self.core_table.monomials(rem)
                    if all(
                        m[self.core_table.index[v]] == 0 for v in self.subvars
                    )
                ]
                for m in base_monos:
                    prod = s * Poly(self.core_table, {m: 1})
                    rows.append(lat.reduce(lat.vector(prod)))
                    labels.append((lam, m))
            from .zgraded import row_hnf

            if rows:
                H, U, pivots = row_hnf(rows)
            else:
                H, U, pivots = [], [], []
            self._solvers[d] = (lat, rows, labels, H, U, pivots)
        return self._solvers[d]

    def _solve_core(self, p_core):
        """Coefficient of the top-box Schur class of a core polynomial."""
        d = p_core.degree()
        if d < 0:
            return self.core_table.zero()
        lat, rows, labels, H, U, pivots = self._solver(d)
        v = lat.reduce(lat.vector(p_core))
        y = [0] * len(rows)
        v = list(v)
        for r, c in pivots:
            if v[c] == 0:
                continue
            piv = H[r][c]
            if v[c] % piv:
                raise TowerError("class is not in the Schur-basis module span")
            q = v[c] // piv
            y[r] = q
            Hr = H[r]
            for kk in range(len(v)):
                v[kk] -= q * Hr[kk]
        if any(v):
            raise TowerError("class is not in the Schur-basis module span")
        coeffs = [
            sum(y[r] * U[r][i] for r in range(len(rows))) for i in range(len(rows))
        ]
        out_terms = {}
        for coeff, (lam, m) in zip(coeffs, labels):
            if coeff and lam == self.top:
                out_terms[m] = out_terms.get(m, 0) + coeff
        return self.core_table.poly(out_terms)

    def gysin(self, p):
        """Pushforward to the target table (all variables minus the subvars)."""
        if p.table != self.table:
            raise TowerError("polynomial over the wrong table")
        if p.is_zero():
            return self.target_table.zero()
        if not p.is_homogeneous():
            raise TowerError("Gysin pushforward requires a homogeneous class")
        if p.degree() < self.relative_dim:
            return self.target_table.zero()
        groups, spec_idx = self._split_spectators(p)
        spec_names = [self.table.names[i] for i in spec_idx]
        out = self.target_table.zero()
        for spec, p_core in groups:
            coeff = self._solve_core(p_core)
            # reassemble: spectator monomial times the base-variable result
            for core_expo, c in coeff.terms.items():
                expo = [0] * self.target_table.nvars
                for nm, e in zip(spec_names, spec):
                    if e:
                        expo[self.target_table.index[nm]] = e
                for nm, e in zip(self.core_table.names, core_expo):
                    if e:
                        expo[self.target_table.index[nm]] += e
                key = tuple(expo)
                out = out + Poly(self.target_table, {key: c})
        return out


# -- tower levels ------------------------------------------------------------


class TowerLevel:
    """One Grassmannian bundle G(k, E) over a base ring."""

    def __init__(self, base, E, k, subvar_names):
        if not isinstance(base, GradedRing):
            raise TowerError("base must be a GradedRing")
        n = E.rank
        if not (1 <= k < n):
            raise TowerError("need 1 <= k < rank(E)")
        if len(subvar_names) != k:
            raise TowerError("need exactly %d sub-bundle variable names" % k)
        if E.table != base.table:
            raise TowerError("bundle must live over the base table")
        for nm in subvar_names:
            if nm in base.table.index:
                raise TowerError("variable name %r already in use" % nm)
        table = base.table.extended(
            [(nm, i) for i, nm in enumerate(subvar_names, start=1)]
        )
        self.base = base
        self.k = k
        self.n = n
        self.subvars = tuple(subvar_names)
        self.table = table
        self.E = Bundle(n, [c.convert(table) for c in E.chern])
        self.taut_sub = Bundle(
            k, [table.one()] + [table.var(nm) for nm in subvar_names]
        )
        q = self.E.total() * series_invert(self.taut_sub.total())
        quot_chern = [
            q.graded_part(d) for d in range(min(n - k, table.degree_bound) + 1)
        ]
        self.taut_quot = Bundle(n - k, quot_chern)
        self.new_relations = tuple(
            q.graded_part(d)
            for d in range(n - k + 1, min(n, table.degree_bound) + 1)
            if not q.graded_part(d).is_zero()
        )
        base_rels = tuple(r.convert(table) for r in base.relations)
        self.ring = GradedRing(table, base_rels + self.new_relations)
        self._fiber = _Fiber(table, self.subvars, k, n, self.new_relations)

    @property
    def relative_dim(self):
        return self.k * (self.n - self.k)

    @property
    def relations(self):
        return self.ring.relations

    def schur(self, lam, which="sub"):
        lam = check_partition(lam, self.k if which == "sub" else self.n - self.k,
                              self.n - self.k if which == "sub" else self.k)
        if which == "sub":
            return schur_from_chern(self.taut_sub, lam)
        if which == "quot":
            return schur_from_chern(self.taut_quot, lam)
        raise TowerError("which must be 'sub' or 'quot'")

    def normal_form(self, p):
        return self.ring.normal_form(p)

    def gysin(self, p):
        """Pushforward to the base; degree drops by k(n-k)."""
        return self._fiber.gysin(p)


def extend(base, E, k, subvar_names):
    """Build the Grassmannian bundle level G(k, E) over a base ring."""
    return TowerLevel(base, E, k, subvar_names)


class FiberProduct:
    """Two tower levels over a common base, joined into one ring."""

    def __init__(self, a, b):
        if a.base != b.base:
            raise TowerError("fiber product requires the same base ring")
        b_names = list(b.subvars)
        clash = set(a.subvars) & set(b.subvars)
        if clash:
            b_names = [
                nm + "_2" if nm in set(a.subvars) else nm for nm in b.subvars
            ]
            if set(b_names) & set(a.subvars):
                raise TowerError("could not disambiguate sub-bundle variables")
        table = a.base.table.extended(
            [(nm, i) for i, nm in enumerate(a.subvars, start=1)]
            + [(nm, i) for i, nm in enumerate(b_names, start=1)]
        )
        self.base = a.base
        self.factors = (a, b)
        self.table = table
        self.subvars = (tuple(a.subvars), tuple(b_names))

        def move(p, old_names, new_names):
            ren = {o: table.var(n) for o, n in zip(old_names, new_names)}
            return p.substitute(ren, table=table)

        a_rels = tuple(move(r, a.subvars, a.subvars) for r in a.new_relations)
        b_rels = tuple(move(r, b.subvars, b_names) for r in b.new_relations)
        base_rels = tuple(r.convert(table) for r in a.base.relations)
        self.factor_relations = (a_rels, b_rels)
        self.ring = GradedRing(table, base_rels + a_rels + b_rels)
        self._fibers = (
            _Fiber(table, self.subvars[0], a.k, a.n, a_rels),
            _Fiber(table, self.subvars[1], b.k, b.n, b_rels),
        )

    def normal_form(self, p):
        return self.ring.normal_form(p)

    def gysin(self, factor, p):
        """Pushforward along the projection forgetting the given factor (0/1)."""
        return self._fibers[factor].gysin(p)


def fiber_product(a, b):
    return FiberProduct(a, b)


def subset_symmetrization(p, sub_names, roots, values):
    """Randomized Gysin oracle by subset symmetrization over the Chern roots.

    For a G(k, E) level whose sub-bundle Chern variables are `sub_names`, the
    pushforward of g(b_1..b_k) is the classical sum over k-element subsets I
    of the roots of E:

        sum_I  g(e_1(x_I), ..., e_k(x_I)) / prod_{i in I, j not in I} (x_i - x_j)

    `roots` are distinct integers standing in for the Chern roots; `values`
    gives an integer for every other variable of p, and must assign the
    elementary symmetric functions of the roots to the Chern variables of E
    for a comparison against gysin to be meaningful.  Returns an exact
    Fraction.
    """
    from fractions import Fraction

    roots = list(roots)
    n = len(roots)
    k = len(sub_names)
    if len(set(roots)) != n:
        raise TowerError("oracle roots must be distinct")
    total = Fraction(0)
    for I in itertools.combinations(range(n), k):
        chosen = [roots[i] for i in I]
        # elementary symmetric functions of the chosen roots
        es = [1] + [0] * k
        for x in chosen:
            for t in range(k, 0, -1):
                es[t] += es[t - 1] * x
        point = dict(values)
        for name, val in zip(sub_names, es[1:]):
            point[name] = val
        num = p.eval(point)
        den = 1
        rest = [j for j in range(n) if j not in I]
        for i in I:
            for j in rest:
                den *= roots[i] - roots[j]
        total += Fraction(num, den)
    return total
