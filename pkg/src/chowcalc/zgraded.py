"""Graded ideal arithmetic over Z via per-degree integer lattice normal forms.

Every homogeneous question (membership, containment, quotient structure) is
answered degree by degree: the degree-d slice of an ideal is the integer span
of generator-times-monomial products, a sublattice of the free module on the
degree-d monomials.  Hermite and Smith normal forms make the answers exact
and certifiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .polyring import Poly, PolyError


class GradedError(Exception):
    pass


# -- integer matrix canonical forms -----------------------------------------


def row_hnf(rows):
    """Row-style Hermite normal form with transform.

    Returns (H, U, pivots) with H = U * M (U unimodular), pivot entries
    positive, entries above each pivot reduced into [0, pivot).  `pivots` is a
    list of (row_index, col_index) pairs in echelon order.
    """
    m = len(rows)
    H = [list(r) for r in rows]
    ncols = len(H[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_op_sub(i, j, q):
        # row_i -= q * row_j
        Hi, Hj = H[i], H[j]
        for k in range(ncols):
            Hi[k] -= q * Hj[k]
        Ui, Uj = U[i], U[j]
        for k in range(m):
            Ui[k] -= q * Uj[k]

    def row_swap(i, j):
        H[i], H[j] = H[j], H[i]
        U[i], U[j] = U[j], U[i]

    pivots = []
    r = 0
    for col in range(ncols):
        # eliminate within this column using Euclidean steps
        while True:
            nonzero = [i for i in range(r, m) if H[i][col]]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda i: abs(H[i][col]))
            if piv != r:
                row_swap(piv, r)
            done = True
            for i in range(r + 1, m):
                if H[i][col]:
                    q = H[i][col] // H[r][col]
                    row_op_sub(i, r, q)
                    if H[i][col]:
                        done = False
            if done:
                break
        if r < m and H[r][col]:
            if H[r][col] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            p = H[r][col]
            for i in range(r):
                q = H[i][col] // p
                if q:
                    row_op_sub(i, r, q)
            pivots.append((r, col))
            r += 1
            if r == m:
                break
    return H, U, pivots


def hermite(M):
    """Column-style Hermite normal form of an integer matrix.

    Canonical form with nonnegative pivots and reduced entries; computed from
    the row-style form of the transpose.
    """
    if not M:
        return []
    Mt = [list(col) for col in zip(*M)]
    H, _, _ = row_hnf(Mt)
    return [list(row) for row in zip(*H)]


def smith(M):
    """Smith normal form with transforms: returns (D, U, V) with U*M*V = D.

    Diagonal entries are nonnegative and satisfy the divisibility chain.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [list(r) for r in M]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_sub(i, j, q):
        for k in range(n):
            D[i][k] -= q * D[j][k]
        for k in range(m):
            U[i][k] -= q * U[j][k]

    def col_sub(i, j, q):
        for k in range(m):
            D[k][i] -= q * D[k][j]
        for k in range(n):
            V[k][i] -= q * V[k][j]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for k in range(m):
            D[k][i], D[k][j] = D[k][j], D[k][i]
        for k in range(n):
            V[k][i], V[k][j] = V[k][j], V[k][i]

    t = 0
    while t < min(m, n):
        # find a nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            again = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_sub(i, t, q)
                    if D[i][t]:
                        row_swap(t, i)
                        again = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_sub(j, t, q)
                    if D[t][j]:
                        col_swap(t, j)
                        again = True
            if not again:
                break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        # enforce divisibility: fold offending later entries into this pivot
        redo = False
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t]:
                    row_sub(t, i, -1)
                    redo = True
                    break
            if redo:
                break
        if not redo:
            t += 1
    return D, U, V


def primitive(vec):
    """True iff the gcd of the entries of a nonzero integer vector is 1."""
    vec = list(vec)
    if not any(vec):
        raise GradedError("primitivity is undefined for the zero vector")
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    return g == 1


def solve_row_combination(rows, target):
    """Integer x with x * rows == target, or None.

    Solves for a row vector of coefficients over the given span rows.
    """
    if not rows:
        return [] if not any(target) else None
    H, U, pivots = row_hnf(rows)
    v = list(target)
    y = [0] * len(rows)
    for r, c in pivots:
        if v[c] == 0:
            continue
        p = H[r][c]
        if v[c] % p:
            return None
        q = v[c] // p
        y[r] = q
        Hr = H[r]
        for k in range(len(v)):
            v[k] -= q * Hr[k]
    if any(v):
        return None
    m = len(rows)
    return [sum(y[r] * U[r][i] for r in range(m)) for i in range(m)]


# -- per-degree lattices -----------------------------------------------------


class DegreeLattice:
    """The degree-d slice of the span of generator*monomial products.

    Columns are the degree-d monomials in descending graded-lex order; rows
    are labelled by (generator index, cofactor monomial).
    """

    def __init__(self, table, generators, d):
        self.table = table
        self.degree = d
        self.cols = table.monomials(d)
        self.col_index = {e: i for i, e in enumerate(self.cols)}
        rows = []
        labels = []
        for gi, g in enumerate(generators):
            gd = g.degree()
            if gd < 0 or gd > d:
                continue
            for mono in table.monomials(d - gd):
                prod = g * Poly(table, {mono: 1})
                rows.append(self.vector(prod))
                labels.append((gi, mono))
        self.rows = rows
        self.labels = labels
        if rows:
            self.H, self.U, self.pivots = row_hnf(rows)
        else:
            self.H, self.U, self.pivots = [], [], []

    def vector(self, p):
        v = [0] * len(self.cols)
        for e, c in p.terms.items():
            v[self.col_index[e]] = c
        return v

    def poly(self, v):
        return Poly(self.table, {e: c for e, c in zip(self.cols, v) if c})

    def reduce(self, v):
        """Canonical representative of v modulo the lattice.

        Pivot-column entries are reduced into [0, pivot); the surviving
        monomials are the graded-lex-least spanning set.
        """
        v = list(v)
        for r, c in self.pivots:
            p = self.H[r][c]
            q = v[c] // p
            if q:
                Hr = self.H[r]
                for k in range(len(v)):
                    v[k] -= q * Hr[k]
        return v

    def solve(self, v):
        """Coefficients over the labelled rows expressing v, or None."""
        if not self.rows:
            return [] if not any(v) else None
        H, U, pivots = self.H, self.U, self.pivots
        v = list(v)
        y = [0] * len(self.rows)
        for r, c in pivots:
            if v[c] == 0:
                continue
            p = H[r][c]
            if v[c] % p:
                return None
            q = v[c] // p
            y[r] = q
            Hr = H[r]
            for k in range(len(v)):
                v[k] -= q * Hr[k]
        if any(v):
            return None
        m = len(self.rows)
        return [sum(y[r] * U[r][i] for r in range(m)) for i in range(m)]

    def retained_monomials(self):
        """Monomials that can occur in canonical representatives."""
        pivot_cols = {c: self.H[r][c] for r, c in self.pivots}
        out = []
        for i, e in enumerate(self.cols):
            if i not in pivot_cols or pivot_cols[i] > 1:
                out.append(e)
        return out


@dataclass
class GroupStructure:
    """Quotient group in one degree: free rank plus torsion invariants."""

    degree: int
    free_rank: int
    torsion: tuple

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z^%d" % self.free_rank if self.free_rank > 1 else "Z")
        for t in self.torsion:
            parts.append("Z/%d" % t)
        return " + ".join(parts) if parts else "0"


class GradedIdeal:
    """Homogeneous ideal given by generators, queried per degree over Z."""

    def __init__(self, generators):
        gens = [g for g in generators if not g.is_zero()]
        if not gens:
            raise GradedError("need at least one nonzero generator")
        table = gens[0].table
        for g in gens:
            if g.table != table:
                raise GradedError("generators over different tables")
            if not g.is_homogeneous():
                raise GradedError("generator %s is not homogeneous" % g)
        self.table = table
        self.generators = tuple(gens)
        self._lattices = {}

    def lattice(self, d):
        if d not in self._lattices:
            self._lattices[d] = DegreeLattice(self.table, self.generators, d)
        return self._lattices[d]

    def member(self, p):
        """Membership with certificate.

        Returns (True, certificate) or (False, None); the certificate is a
        list of (generator index, cofactor Poly) with
        sum(cofactor * generator) == p exactly.
        """
        if p.is_zero():
            return True, []
        if not p.is_homogeneous():
            raise GradedError("membership requires a homogeneous polynomial")
        d = p.degree()
        if d > self.table.degree_bound:
            raise GradedError("degree %d above the bound" % d)
        lat = self.lattice(d)
        x = lat.solve(lat.vector(p))
        if x is None:
            return False, None
        cof = {}
        for coeff, (gi, mono) in zip(x, lat.labels):
            if coeff:
                cur = cof.get(gi, self.table.zero())
                cof[gi] = cur + Poly(self.table, {mono: coeff})
        cert = sorted(cof.items())
        return True, cert

    def certificate_product(self, cert):
        out = self.table.zero()
        for gi, cofactor in cert:
            out = out + cofactor * self.generators[gi]
        return out

    def normal_form(self, p):
        """Canonical representative of a homogeneous p modulo the ideal."""
        if p.is_zero():
            return p
        if not p.is_homogeneous():
            raise GradedError("normal form requires a homogeneous polynomial")
        lat = self.lattice(p.degree())
        return lat.poly(lat.reduce(lat.vector(p)))

    def contains(self, other, up_to):
        """Generator-wise containment of `other` in self through degree up_to.

        Returns (ok, witness) where witness is the first failing generator.
        """
        for g in other.generators:
            if g.degree() > up_to:
                continue
            ok, _ = self.member(g)
            if not ok:
                return False, g
        return True, None

    def equal(self, other, up_to):
        """Two-sided containment plus per-degree lattice comparison."""
        ok, w = self.contains(other, up_to)
        if not ok:
            return False, ("missing from left ideal", w)
        ok, w = other.contains(self, up_to)
        if not ok:
            return False, ("missing from right ideal", w)
        for d in range(up_to + 1):
            a = self.lattice(d)
            b = other.lattice(d)
            Ha = [r for r in a.H if any(r)]
            Hb = [r for r in b.H if any(r)]
            if Ha != Hb:
                return False, ("degree-%d spans differ" % d, None)
        return True, None

    def quotient_structure(self, d):
        """Free rank and torsion of the degree-d quotient module."""
        if d > self.table.degree_bound:
            raise GradedError("degree %d above the bound" % d)
        lat = self.lattice(d)
        ncols = len(lat.cols)
        if not lat.rows:
            return GroupStructure(d, ncols, ())
        D, _, _ = smith(lat.rows)
        diag = [D[i][i] for i in range(min(len(lat.rows), ncols)) if D[i][i]]
        torsion = tuple(x for x in diag if x > 1)
        return GroupStructure(d, ncols - len(diag), torsion)
