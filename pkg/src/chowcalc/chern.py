"""Formal vector bundle calculus: Chern classes and degeneracy loci.

Bundles are purely formal: a rank plus a truncated total Chern class over a
shared variable table.  Duals, determinants, line twists and exterior squares
are computed by the splitting principle; Whitney quotients by truncated
series division; degeneracy classes by the Thom-Porteous determinant.
"""

from __future__ import annotations

from math import comb

from .polyring import (
    Poly,
    PolyError,
    RootSet,
    VarTable,
    poly_det,
    series_invert,
    symmetric_reduce,
)


class BundleError(Exception):
    pass


class InconsistentSequenceError(BundleError):
    """Whitney division produced nonzero classes above the quotient rank."""


class Bundle:
    """Formal bundle: rank plus Chern classes c_0=1, c_1, ..., c_rank."""

    __slots__ = ("rank", "chern")

    def __init__(self, rank, chern, check=True):
        if rank < 0:
            raise BundleError("rank must be nonnegative")
        chern = list(chern)
        if not chern:
            raise BundleError("need at least c_0")
        table = chern[0].table
        bound = table.degree_bound
        if len(chern) < rank + 1:
            chern = chern + [table.zero()] * (rank + 1 - len(chern))
        if len(chern) > rank + 1:
            raise BundleError("more Chern classes than the rank allows")
        if check:
            if chern[0] != table.one():
                raise BundleError("c_0 must be 1")
            for i, ci in enumerate(chern[1:], start=1):
                if ci.table != table:
                    raise BundleError("Chern classes over different tables")
                if i > bound and not ci.is_zero():
                    raise BundleError("class above the degree bound must be zero")
                if not ci.is_zero() and not (ci.is_homogeneous() and ci.degree() == i):
                    raise BundleError("c_%d must be homogeneous of degree %d" % (i, i))
        self.rank = rank
        self.chern = tuple(chern)

    @property
    def table(self):
        return self.chern[0].table

    def c(self, i):
        """Chern class c_i (zero above the rank or the degree bound)."""
        if i < 0:
            raise BundleError("negative Chern index")
        if i > self.rank:
            return self.table.zero()
        return self.chern[i]

    def total(self):
        out = self.table.zero()
        for ci in self.chern:
            out = out + ci
        return out

    def __eq__(self, other):
        if not isinstance(other, Bundle):
            return NotImplemented
        return self.rank == other.rank and self.chern == other.chern

    def __repr__(self):
        return "Bundle(rank=%d, c=%s)" % (self.rank, self.total())


def trivial(table, rank):
    return Bundle(rank, [table.one()])


def line(cls1):
    """Line bundle with the given first Chern class (homogeneous, degree 1)."""
    table = cls1.table
    if not cls1.is_zero() and not (cls1.is_homogeneous() and cls1.degree() == 1):
        raise BundleError("a line class must be homogeneous of degree 1")
    return Bundle(1, [table.one(), cls1])


def from_total(rank, total):
    """Bundle with the given truncated total class (graded parts become c_i)."""
    table = total.table
    chern = [total.graded_part(d) for d in range(min(rank, table.degree_bound) + 1)]
    return Bundle(rank, chern)


def dual(E):
    """c_i(E*) = (-1)^i c_i(E)."""
    chern = [ci if i % 2 == 0 else -ci for i, ci in enumerate(E.chern)]
    return Bundle(E.rank, chern, check=False)


def determinant(E):
    """Top exterior power: the line bundle with class c_1(E)."""
    return line(E.c(1))


def tensor_line(E, ell):
    """Twist by a line bundle with first Chern class `ell`.

    c_i(E (x) L) = sum_j binom(rank - j, i - j) c_j(E) ell^(i-j).
    """
    table = E.table
    if isinstance(ell, int):
        ell = table.const(ell)
    if not ell.is_zero() and not (ell.is_homogeneous() and ell.degree() == 1):
        raise BundleError("twisting class must be homogeneous of degree 1")
    r = E.rank
    powers = [table.one()]
    for _ in range(r):
        powers.append(powers[-1] * ell)
    chern = [table.one()]
    for i in range(1, r + 1):
        ci = table.zero()
        for j in range(i + 1):
            coef = comb(r - j, i - j)
            if coef:
                ci = ci + coef * (E.c(j) * powers[i - j])
        chern.append(ci)
    return Bundle(r, chern)


# Universal exterior-square classes, cached per (rank, degree) in the
# elementary symmetric basis.
_WEDGE2_CACHE = {}


def _wedge2_universal(n, up_to):
    key = (n, up_to)
    if key not in _WEDGE2_CACHE:
        roots = RootSet(n, up_to)
        pair_sums = []
        xs = roots.roots()
        for i in range(n):
            for j in range(i + 1, n):
                pair_sums.append(xs[i] + xs[j])
        # elementary symmetric functions of the pairwise sums, by degree
        e_parts = [roots.table.one()]
        for s in pair_sums:
            new = [e_parts[0]]
            for k in range(1, len(e_parts) + 1):
                prev = e_parts[k] if k < len(e_parts) else roots.table.zero()
                new.append(prev + e_parts[k - 1] * s)
            e_parts = new
        e_names = ["e%d" % i for i in range(1, n + 1)]
        e_table = VarTable([(nm, i) for i, nm in enumerate(e_names, start=1)], up_to)
        reduced = []
        for k in range(1, min(len(pair_sums), up_to) + 1):
            reduced.append(symmetric_reduce(e_parts[k], roots, e_table, e_names))
        _WEDGE2_CACHE[key] = (e_table, e_names, reduced)
    return _WEDGE2_CACHE[key]


def exterior_square(E):
    """Second exterior power, rank C(n, 2), via the splitting principle."""
    n = E.rank
    if n < 2:
        raise BundleError("exterior square needs rank >= 2")
    table = E.table
    bound = table.degree_bound
    rank = comb(n, 2)
    e_table, e_names, reduced = _wedge2_universal(n, min(rank, bound))
    assignments = {nm: E.c(i) for i, nm in enumerate(e_names, start=1)}
    chern = [table.one()]
    for k, rk in enumerate(reduced, start=1):
        chern.append(rk.substitute(assignments, table=table))
    return Bundle(rank, chern)


def formal_quotient(total, sub, rank=None):
    """Series quotient c(total)/c(sub) packaged as a bundle, unvalidated.

    Used where an exact sequence exists only after further restriction, so
    the classes above the quotient rank need not vanish in the ambient ring.
    """
    if total.table != sub.table:
        raise BundleError("bundles over different tables")
    if rank is None:
        rank = total.rank - sub.rank
    if rank < 0:
        raise BundleError("quotient rank must be nonnegative")
    table = total.table
    q = total.total() * series_invert(sub.total())
    chern = [q.graded_part(d) for d in range(min(rank, table.degree_bound) + 1)]
    return Bundle(rank, chern)


def whitney_quotient(total, sub, ring=None):
    """Solve 0 -> sub -> total -> Q -> 0 for Q by Whitney series division.

    The computed classes above rank(Q) must vanish up to the degree bound --
    modulo the relations of `ring` when one is supplied, identically
    otherwise -- else the data is inconsistent and we raise.
    """
    if total.table != sub.table:
        raise BundleError("bundles over different tables")
    if total.rank < sub.rank:
        raise BundleError("sub-bundle rank exceeds total rank")
    table = total.table
    rank = total.rank - sub.rank
    q = total.total() * series_invert(sub.total())
    for d in range(rank + 1, table.degree_bound + 1):
        part = q.graded_part(d)
        if ring is not None:
            part = ring.normal_form(part)
        if not part.is_zero():
            raise InconsistentSequenceError(
                "quotient class in degree %d does not vanish: %s" % (d, part)
            )
    chern = [q.graded_part(d) for d in range(min(rank, table.degree_bound) + 1)]
    return Bundle(rank, chern)


def difference_class(F, E, k):
    """Chern class c_k of the formal difference F - E (series division)."""
    if F.table != E.table:
        raise BundleError("bundles over different tables")
    table = F.table
    if k < 0:
        return table.zero()
    if k > table.degree_bound:
        return table.zero()
    q = F.total() * series_invert(E.total())
    return q.graded_part(k)


def porteous(E, F, r):
    """Thom-Porteous class of the rank <= r degeneracy locus of a map E -> F.

    The expected-codimension class is the (e - r) x (e - r) determinant
    det( c_{f-r+j-i}(F - E) ); for r = 0 it is the top Chern class of
    Hom(E, F).
    """
    if E.table != F.table:
        raise BundleError("bundles over different tables")
    e, f = E.rank, F.rank
    if r < 0 or r > min(e, f):
        raise BundleError("r must satisfy 0 <= r <= min(rank E, rank F)")
    size = e - r
    table = E.table
    if size == 0:
        return table.one()
    q = F.total() * series_invert(E.total())
    parts = {}

    def cpart(k):
        if k < 0 or k > table.degree_bound:
            return table.zero()
        if k not in parts:
            parts[k] = q.graded_part(k)
        return parts[k]

    rows = [[cpart(f - r + j - i) for j in range(size)] for i in range(size)]
    return poly_det(rows)
