"""Dense linear algebra over tower fields, plus integer Smith normal form.

Matrices are lists of rows of raw field values (see exactfield).  Sizes here
are tiny (at most 10x10 matrices and a few dozen 55-dimensional coefficient
vectors), so straightforward Gauss-Jordan is plenty.
"""

from __future__ import annotations

from .errors import NonInvertible
from .exactfield import raw_add, raw_inv, raw_is_zero, raw_mul, raw_scalar, raw_sub


def mat_identity(desc, n):
    one = raw_scalar(desc, 1)
    zero = raw_scalar(desc, 0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(desc, A, B):
    n, inner, m = len(A), len(B), len(B[0])
    zero = raw_scalar(desc, 0)
    C = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = zero
            for k in range(inner):
                a = Ai[k]
                if raw_is_zero(desc, a):
                    continue
                b = B[k][j]
                if raw_is_zero(desc, b):
                    continue
                acc = raw_add(desc, acc, raw_mul(desc, a, b))
            row.append(acc)
        C.append(row)
    return C


def mat_inverse(desc, A):
    """Gauss-Jordan inverse; raises NonInvertible on singular input."""
    n = len(A)
    ident = mat_identity(desc, n)
    aug = [list(A[i]) + ident[i] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not raw_is_zero(desc, aug[i][c])), None)
        if piv is None:
            raise NonInvertible("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = raw_inv(desc, aug[c][c])
        aug[c] = [raw_mul(desc, inv, x) for x in aug[c]]
        for i in range(n):
            if i != c and not raw_is_zero(desc, aug[i][c]):
                f = aug[i][c]
                aug[i] = [
                    raw_sub(desc, x, raw_mul(desc, f, y)) for x, y in zip(aug[i], aug[c])
                ]
    return [row[n:] for row in aug]


class RowSpace:
    """Incrementally reduced row space of coefficient vectors over a field."""

    def __init__(self, desc, width):
        self.desc = desc
        self.width = width
        self.rows = []
        self.pivots = []

    def _reduce(self, vec):
        desc = self.desc
        vec = list(vec)
        for row, piv in zip(self.rows, self.pivots):
            c = vec[piv]
            if raw_is_zero(desc, c):
                continue
            for j in range(self.width):
                if not raw_is_zero(desc, row[j]):
                    vec[j] = raw_sub(desc, vec[j], raw_mul(desc, c, row[j]))
        return vec

    def contains(self, vec):
        return all(raw_is_zero(self.desc, x) for x in self._reduce(vec))

    def add(self, vec):
        """Insert a vector; returns True when it enlarged the space."""
        desc = self.desc
        red = self._reduce(vec)
        piv = next((j for j in range(self.width) if not raw_is_zero(desc, red[j])), None)
        if piv is None:
            return False
        inv = raw_inv(desc, red[piv])
        red = [raw_mul(desc, inv, x) for x in red]
        for i, row in enumerate(self.rows):
            c = row[piv]
            if raw_is_zero(desc, c):
                continue
            self.rows[i] = [raw_sub(desc, x, raw_mul(desc, c, y)) for x, y in zip(row, red)]
        self.rows.append(red)
        self.pivots.append(piv)
        return True

    @property
    def rank(self):
        return len(self.rows)


def span_rank(desc, vectors, width):
    space = RowSpace(desc, width)
    for v in vectors:
        space.add(v)
    return space.rank


def span_equal(desc, vecs_a, vecs_b, width):
    sa = RowSpace(desc, width)
    for v in vecs_a:
        sa.add(v)
    sb = RowSpace(desc, width)
    for v in vecs_b:
        sb.add(v)
    return sa.rank == sb.rank and all(sa.contains(v) for v in sb.rows)


# ---------------------------------------------------------------------------
# integer Smith normal form (for exponent-lattice solving)


def smith_normal_form(A):
    """U * A * V = D with U, V unimodular, D diagonal and d1 | d2 | ...

    A is a list of integer rows; returns (D, U, V).  Intended for the tiny
    exponent matrices arising from monomial comparisons.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for r in D:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    def sweep(t):
        while t < min(m, n):
            piv = next(
                ((i, j) for i in range(t, m) for j in range(t, n) if D[i][j]), None
            )
            if piv is None:
                return
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            while True:
                done = True
                for i in range(t + 1, m):
                    if D[i][t]:
                        add_row(t, i, -(D[i][t] // D[t][t]))
                        if D[i][t]:
                            swap_rows(t, i)
                            done = False
                for j in range(t + 1, n):
                    if D[t][j]:
                        add_col(t, j, -(D[t][j] // D[t][t]))
                        if D[t][j]:
                            swap_cols(t, j)
                            done = False
                if done:
                    break
            if D[t][t] < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            t += 1

    sweep(0)
    changed = True
    while changed:
        changed = False
        for i in range(min(m, n) - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a and b and b % a:
                add_col(i + 1, i, 1)
                sweep(i)
                changed = True
    return D, U, V
