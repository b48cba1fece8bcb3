"""Exact integer linear algebra: normal forms, lattice kernels and
finite abelian groups.

Everything here works with arbitrary-precision Python ints.  Matrices are
immutable: stored as a tuple of row tuples.  All normal-form routines are
deterministic (minimal-absolute-value pivot, lowest index wins ties) so
that outputs are reproducible across runs.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import prod


class ZLinAlgError(Exception):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ZLinAlgError("row count mismatch")
        for row in self.data:
            if len(row) != self.cols:
                raise ZLinAlgError("column count mismatch")

    @staticmethod
    def from_rows(rows_list):
        rows_list = [tuple(int(x) for x in r) for r in rows_list]
        nrows = len(rows_list)
        ncols = len(rows_list[0]) if rows_list else 0
        return IntMatrix(nrows, ncols, tuple(rows_list))

    @staticmethod
    def zero(rows, cols):
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n):
        return IntMatrix(
            n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        )

    @staticmethod
    def diagonal(entries):
        entries = list(entries)
        n = len(entries)
        return IntMatrix(
            n, n,
            tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)),
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def transpose(self):
        return IntMatrix(
            self.cols, self.rows,
            tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ZLinAlgError("dimension mismatch in matrix product")
            ot = other.transpose()
            return IntMatrix(
                self.rows, other.cols,
                tuple(
                    tuple(sum(a * b for a, b in zip(row, ocol)) for ocol in ot.data)
                    for row in self.data
                ),
            )
        return NotImplemented

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ZLinAlgError("dimension mismatch in matrix sum")
        return IntMatrix(
            self.rows, self.cols,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)),
        )

    def __neg__(self):
        return IntMatrix(
            self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data)
        )

    def apply(self, vec):
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ZLinAlgError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.data)

    def is_identity(self):
        return self.rows == self.cols and all(
            self.data[i][j] == (1 if i == j else 0)
            for i in range(self.rows) for j in range(self.cols)
        )

    def det(self):
        """Determinant via fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ZLinAlgError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self):
        return self.rows == self.cols and self.det() in (1, -1)

    def to_text(self):
        lines = ["%d %d" % (self.rows, self.cols)]
        for r in self.data:
            lines.append(" ".join(str(x) for x in r))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text):
        tokens = text.split()
        if len(tokens) < 2:
            raise ZLinAlgError("matrix text too short")
        rows, cols = int(tokens[0]), int(tokens[1])
        entries = tokens[2:]
        if len(entries) != rows * cols:
            raise ZLinAlgError(
                "expected %d entries, got %d" % (rows * cols, len(entries))
            )
        it = iter(int(t) for t in entries)
        return IntMatrix.from_rows([[next(it) for _ in range(cols)] for _ in range(rows)])


def unimodular_inverse(m):
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    n = m.rows
    if m.cols != n:
        raise ZLinAlgError("not square")
    a = [[Fraction(m.data[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZLinAlgError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        pk = a[k][k]
        a[k] = [x / pk for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    inv = [[a[i][n + j] for j in range(n)] for i in range(n)]
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise ZLinAlgError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in row] for row in inv])


@dataclass(frozen=True)
class SmithDecomposition:
    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    source: IntMatrix

    @property
    def diagonal(self):
        return tuple(
            self.d.data[i][i] for i in range(min(self.d.rows, self.d.cols))
        )

    @property
    def rank(self):
        return sum(1 for x in self.diagonal if x != 0)


def _min_abs_pivot(m, start, rows, cols):
    """Position of the nonzero entry of least absolute value in the
    trailing block, lowest (row, col) on ties.  None if the block is zero."""
    best = None
    for i in range(start, rows):
        for j in range(start, cols):
            x = m[i][j]
            if x != 0 and (best is None or abs(x) < abs(m[best[0]][best[1]])):
                best = (i, j)
                if abs(x) == 1:
                    return best
    return best


def smith_normal_form(mat):
    """Smith decomposition u * mat * v = d with u, v unimodular and the
    diagonal of d a non-negative divisibility chain."""
    rows, cols = mat.rows, mat.cols
    m = [list(r) for r in mat.data]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, f):
        m[dst] = [a + f * b for a, b in zip(m[dst], m[src])]
        u[dst] = [a + f * b for a, b in zip(u[dst], u[src])]

    def addmul_col(dst, src, f):
        for r in m:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    def negate_row(i):
        m[i] = [-a for a in m[i]]
        u[i] = [-a for a in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        while True:
            piv = _min_abs_pivot(m, t, rows, cols)
            if piv is None:
                break
            if piv[0] != t:
                swap_rows(t, piv[0])
            if piv[1] != t:
                swap_cols(t, piv[1])
            # one reduction sweep; leftovers trigger pivot re-selection,
            # with a strictly smaller pivot each round
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    addmul_row(i, t, -(m[i][t] // m[t][t]))
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    addmul_col(j, t, -(m[t][j] // m[t][t]))
            if any(m[i][t] for i in range(t + 1, rows)) or any(
                m[t][j] for j in range(t + 1, cols)
            ):
                continue
            # pivot must divide the whole trailing block for the chain
            witness = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if m[i][j] % m[t][t] != 0:
                        witness = i
                        break
                if witness is not None:
                    break
            if witness is not None:
                addmul_row(t, witness, 1)
                continue
            break
        if piv is None:
            break
        if m[t][t] < 0:
            negate_row(t)
        t += 1

    um = IntMatrix.from_rows(u)
    vm = IntMatrix.from_rows(v)
    dm = IntMatrix.from_rows(m)
    return SmithDecomposition(dm, um, vm, mat)


def hermite_normal_form(mat):
    """Row-style Hermite normal form: returns (h, u) with u unimodular,
    u * mat = h, h in echelon form with positive pivots and entries above
    each pivot reduced into [0, pivot)."""
    rows, cols = mat.rows, mat.cols
    m = [list(r) for r in mat.data]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]

    r = 0
    for c in range(cols):
        # gcd sweep on column c below row r
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0 and (piv is None or abs(m[i][c]) < abs(m[piv][c])):
                piv = i
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        u[r], u[piv] = u[piv], u[r]
        while True:
            done = True
            for i in range(r + 1, rows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if m[i][c] != 0:
                        m[r], m[i] = m[i], m[r]
                        u[r], u[i] = u[i], u[r]
                        done = False
            if done:
                break
        if m[r][c] < 0:
            m[r] = [-a for a in m[r]]
            u[r] = [-a for a in u[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q != 0:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        r += 1
        if r == rows:
            break
    return IntMatrix.from_rows(m), IntMatrix.from_rows(u)


def kernel_basis_of_matrix(mat):
    """Basis (as rows) of {x : mat . x = 0} over the integers."""
    h, u = hermite_normal_form(mat.transpose())
    kernel_rows = [u.data[i] for i in range(mat.cols) if not any(h.data[i])]
    return IntMatrix.from_rows(kernel_rows) if kernel_rows else IntMatrix.zero(0, mat.cols)


def solve_integer(a, b):
    """One integer solution x of a . x = b, or None if unsolvable."""
    if len(b) != a.rows:
        raise ZLinAlgError("right-hand side length mismatch")
    snf = smith_normal_form(a)
    c = snf.u.apply(b)
    y = [0] * a.cols
    diag = snf.diagonal
    for i in range(a.rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return snf.v.apply(y)


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group in invariant-factor form.

    Elements are coordinate tuples, coordinate i taken modulo
    invariant_factors[i].  The empty factor list is the trivial group.
    """

    invariant_factors: tuple

    def __post_init__(self):
        fs = self.invariant_factors
        for f in fs:
            if f < 2:
                raise ZLinAlgError("invariant factors must be >= 2")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ZLinAlgError("invariant factors must form a divisibility chain")

    @staticmethod
    def of(*factors):
        return FinAbGroup(tuple(int(f) for f in factors))

    @property
    def rank(self):
        return len(self.invariant_factors)

    @property
    def order(self):
        return prod(self.invariant_factors)

    @property
    def exponent(self):
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def zero(self):
        return (0,) * self.rank

    def reduce(self, vec):
        if len(vec) != self.rank:
            raise ZLinAlgError("coordinate length mismatch")
        return tuple(int(x) % f for x, f in zip(vec, self.invariant_factors))

    def add(self, a, b):
        return tuple((x + y) % f for x, y, f in zip(a, b, self.invariant_factors))

    def neg(self, a):
        return tuple((-x) % f for x, f in zip(a, self.invariant_factors))

    def sub(self, a, b):
        return tuple((x - y) % f for x, y, f in zip(a, b, self.invariant_factors))

    def scale(self, k, a):
        return tuple((k * x) % f for x, f in zip(a, self.invariant_factors))

    def elements(self):
        def rec(i):
            if i == self.rank:
                yield ()
                return
            for rest in rec(i + 1):
                for x in range(self.invariant_factors[i]):
                    yield (x,) + rest
        return list(rec(0))

    def element_order(self, a):
        n = 1
        for x, f in zip(a, self.invariant_factors):
            if x:
                g = _gcd(x, f)
                n = _lcm(n, f // g)
        return n

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join("Z/%d" % f for f in self.invariant_factors)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _lcm(a, b):
    return a * b // _gcd(a, b) if a and b else 0


LATTICE = "lattice"


@dataclass(frozen=True)
class AbHom:
    """Homomorphism between a lattice Z^n (given by its rank) and/or a
    FinAbGroup, acting on coordinate column vectors by self.matrix."""

    domain: object  # int rank, or FinAbGroup
    codomain: object
    matrix: IntMatrix

    def __post_init__(self):
        dn = self.domain_rank
        cn = self.codomain_rank
        if self.matrix.rows != cn or self.matrix.cols != dn:
            raise ZLinAlgError("matrix shape does not match domain/codomain")
        if isinstance(self.domain, FinAbGroup):
            # relations must map to relations
            for i, f in enumerate(self.domain.invariant_factors):
                img = tuple(f * self.matrix.data[r][i] for r in range(cn))
                if not self._codomain_is_zero(img):
                    raise ZLinAlgError("map not well defined on domain relations")

    @property
    def domain_rank(self):
        return self.domain.rank if isinstance(self.domain, FinAbGroup) else int(self.domain)

    @property
    def codomain_rank(self):
        return self.codomain.rank if isinstance(self.codomain, FinAbGroup) else int(self.codomain)

    def _codomain_is_zero(self, vec):
        if isinstance(self.codomain, FinAbGroup):
            return all(x % f == 0 for x, f in zip(vec, self.codomain.invariant_factors))
        return not any(vec)

    def apply(self, vec):
        out = self.matrix.apply(vec)
        if isinstance(self.codomain, FinAbGroup):
            return self.codomain.reduce(out)
        return out

    def is_surjective(self):
        if not isinstance(self.codomain, FinAbGroup):
            raise ZLinAlgError("surjectivity test implemented for finite codomain only")
        (grp, free_rank), _ = cokernel(self)
        return free_rank == 0 and grp.order == 1


def kernel_basis(f):
    """Basis (rows) of ker f for f with lattice domain Z^n."""
    if isinstance(f.domain, FinAbGroup):
        raise ZLinAlgError("kernel_basis expects a lattice domain")
    n = f.domain_rank
    if isinstance(f.codomain, FinAbGroup):
        rel = IntMatrix.diagonal(f.codomain.invariant_factors)
        stacked = _hstack(f.matrix, rel)
        ker = kernel_basis_of_matrix(stacked)
        proj = IntMatrix.from_rows([row[:n] for row in ker.data]) if ker.rows else IntMatrix.zero(0, n)
        # drop dependent rows via HNF
        h, _ = hermite_normal_form(proj)
        rows = [r for r in h.data if any(r)]
        return IntMatrix.from_rows(rows) if rows else IntMatrix.zero(0, n)
    ker = kernel_basis_of_matrix(f.matrix)
    if ker.rows == 0:
        return IntMatrix.zero(0, n)
    h, _ = hermite_normal_form(ker)
    rows = [r for r in h.data if any(r)]
    return IntMatrix.from_rows(rows) if rows else IntMatrix.zero(0, n)


def sublattice_index(basis, n):
    """Index of the sublattice spanned by the rows of `basis` in Z^n,
    or None if the sublattice has lower rank."""
    if basis.rows < n:
        return None
    h, _ = hermite_normal_form(basis)
    idx = 1
    for i in range(n):
        if h.data[i][i] == 0:
            return None
        idx *= h.data[i][i]
    return idx


def _hstack(a, b):
    if a.rows != b.rows:
        raise ZLinAlgError("row mismatch in hstack")
    return IntMatrix(a.rows, a.cols + b.cols,
                     tuple(ra + rb for ra, rb in zip(a.data, b.data)))


def cokernel(f):
    """Cokernel of f, in invariant-factor form, with the projection map.

    Returns ((group, free_rank), projection).  free_rank > 0 means the
    cokernel is infinite: group carries the torsion part only.
    """
    m = f.matrix
    cn = f.codomain_rank
    if isinstance(f.codomain, FinAbGroup):
        rel = IntMatrix.diagonal(f.codomain.invariant_factors)
        full = _hstack(m, rel) if m.cols else rel
    else:
        full = m
    if full.cols == 0:
        full = IntMatrix.zero(cn, 1)  # image is 0
    snf = smith_normal_form(full)
    diag = list(snf.diagonal) + [0] * (cn - len(snf.diagonal))
    factors = [d for d in diag if d not in (0, 1)]
    free_rank = sum(1 for d in diag if d == 0)
    grp = FinAbGroup(tuple(factors))
    # projection: codomain coords -> cokernel coords.  u maps codomain to
    # the SNF basis; keep coordinates whose diagonal is not 1.
    keep = [i for i, d in enumerate(diag) if d != 1 and d != 0]
    proj_rows = [snf.u.data[i] for i in keep]
    proj_matrix = IntMatrix.from_rows(proj_rows) if proj_rows else IntMatrix.zero(0, cn)
    if isinstance(f.codomain, FinAbGroup) and free_rank == 0:
        projection = AbHom(f.codomain, grp, proj_matrix)
    elif free_rank == 0:
        projection = AbHom(cn, grp, proj_matrix)
    else:
        projection = None  # infinite cokernel: torsion projection only
    return (grp, free_rank), projection
