"""Projective matrices modulo scalars and finite matrix groups.

A ProjMatrix stores an invertible n x n matrix over a tower field in a
canonical scaling: the first nonzero entry in row-major order equals 1.
Equality, hashing and group closure all work on that canonical form.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InputError, NonInvertible, PreconditionError
from .exactfield import (
    FieldElement,
    parse_raw,
    raw_inv,
    raw_is_zero,
    raw_mul,
    raw_scalar,
    serialize_raw,
)
from .linalg import mat_inverse, mat_mul


class ProjMatrix:
    """An invertible matrix modulo scalars."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field, rows, check_invertible=True):
        vals = []
        for row in rows:
            vals.append(
                tuple(c.value if isinstance(c, FieldElement) else c for c in row)
            )
        n = len(vals)
        if any(len(r) != n for r in vals):
            raise InputError("matrix must be square")
        scale = None
        for row in vals:
            for c in row:
                if not raw_is_zero(field, c):
                    scale = raw_inv(field, c)
                    break
            if scale is not None:
                break
        if scale is None:
            raise NonInvertible("zero matrix")
        self.field = field
        self.n = n
        self.rows = tuple(
            tuple(raw_mul(field, scale, c) for c in row) for row in vals
        )
        if check_invertible:
            mat_inverse(field, [list(r) for r in self.rows])  # raises if singular

    # -- group operations -----------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        if other.field != self.field or other.n != self.n:
            raise InputError("dimension or field mismatch")
        prod = mat_mul(self.field, [list(r) for r in self.rows], [list(r) for r in other.rows])
        return ProjMatrix(self.field, prod, check_invertible=False)

    def inv(self):
        return ProjMatrix(
            self.field, mat_inverse(self.field, [list(r) for r in self.rows]),
            check_invertible=False,
        )

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        result = identity(self.field, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def key(self):
        return self.rows

    def is_identity(self):
        one = raw_scalar(self.field, 1)
        zero = raw_scalar(self.field, 0)
        return all(
            self.rows[i][j] == (one if i == j else zero)
            for i in range(self.n)
            for j in range(self.n)
        )

    def entry(self, i, j):
        return FieldElement(self.field, self.rows[i][j])

    def to_doc(self):
        return [[serialize_raw(self.field, c) for c in row] for row in self.rows]

    def __repr__(self):
        return f"ProjMatrix({self.n}x{self.n} over {self.field})"


def identity(field, n):
    one = raw_scalar(field, 1)
    zero = raw_scalar(field, 0)
    return ProjMatrix(
        field,
        [[one if i == j else zero for j in range(n)] for i in range(n)],
        check_invertible=False,
    )


def diagonal(field, entries):
    entries = [e.value if isinstance(e, FieldElement) else e for e in entries]
    zero = raw_scalar(field, 0)
    n = len(entries)
    return ProjMatrix(
        field, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
    )


def proj_mul(a, b):
    return a * b


def proj_inv(a):
    return a.inv()


def proj_eq(a, b):
    """True iff a = lambda * b for some scalar; canonical forms make this =="""
    return a == b


def galois_on_matrix(g, A):
    """Entrywise Galois action followed by canonical rescaling."""
    if g.field != A.field:
        raise InputError("map and matrix live over different fields")
    rows = [[g.apply_raw(c) for c in row] for row in A.rows]
    return ProjMatrix(A.field, rows, check_invertible=False)


class MatrixGroup:
    """A finite subgroup of PGL_n, closed under product and inverse."""

    __slots__ = ("field", "n", "elements", "generators", "_index")

    def __init__(self, field, elements, generators):
        self.field = field
        self.n = elements[0].n if elements else 0
        self.elements = list(elements)
        self.generators = list(generators)
        self._index = {m.key(): i for i, m in enumerate(self.elements)}

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m):
        return isinstance(m, ProjMatrix) and m.key() in self._index

    def index_of(self, m):
        return self._index.get(m.key())

    def verify_closed(self):
        for a in self.elements:
            if a.inv() not in self:
                return False
            for b in self.elements:
                if a * b not in self:
                    return False
        return True


def group_closure(generators, cap=10000):
    """BFS closure of the generated group; errors when the cap is exceeded."""
    gens = list(generators)
    if not gens:
        raise InputError("no generators")
    field = gens[0].field
    n = gens[0].n
    for g in gens:
        if g.field != field or g.n != n:
            raise InputError("generators over a common field and dimension required")
    start = identity(field, n)
    seen = {start.key(): start}
    queue = [start]
    while queue:
        current = queue.pop()
        for g in gens:
            nxt = current * g
            k = nxt.key()
            if k not in seen:
                if len(seen) >= cap:
                    raise PreconditionError(
                        f"group closure exceeded the cap of {cap} elements"
                    )
                seen[k] = nxt
                queue.append(nxt)
    elements = list(seen.values())
    return MatrixGroup(field, elements, gens)


# ---------------------------------------------------------------------------
# matrix text formats


def matrix_to_text(A):
    import json

    return json.dumps(A.to_doc())


def parse_matrix(field, doc_or_text):
    """Parse a matrix from nested lists or from bracket map notation.

    Nested lists are row-major element serializations.  The alternative
    syntax ``[Y:Z:3X]`` (or with lower-case variables) lists the linear forms
    of the map; coefficients may be rationals or bracketed element
    serializations, e.g. ``[x:y:[0,1]z]``.
    """
    import json

    if isinstance(doc_or_text, str):
        text = doc_or_text.strip()
        if ":" in text:
            return _parse_bracket_map(field, text)
        doc = json.loads(text)
    else:
        doc = doc_or_text
    rows = [[parse_raw(field, c) for c in row] for row in doc]
    return ProjMatrix(field, rows)


_TERM_RE = re.compile(r"([+-]?)\s*((?:\[[^A-Za-z]*\])|(?:\d+(?:/\d+)?))?\s*([A-Za-z])")


def _parse_bracket_map(field, text):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise InputError("bracket map must be enclosed in [ ]")
    body = text[1:-1]
    forms = _split_colons(body)
    if len(forms) < 2:
        raise InputError("bracket map needs at least two coordinates")
    var_names = {}
    parsed = []
    for form in forms:
        terms = []
        pos = 0
        for m in _TERM_RE.finditer(form):
            sign, coeff, var = m.groups()
            var = var.upper()
            var_names[var] = True
            if coeff is None:
                c = raw_scalar(field, 1)
            elif coeff.startswith("["):
                from .polyalg import _bracket_to_json
                import json

                c = parse_raw(field, json.loads(_bracket_to_json(coeff)))
            else:
                c = raw_scalar(field, Fraction(coeff))
            if sign == "-":
                from .exactfield import raw_neg

                c = raw_neg(field, c)
            terms.append((var, c))
        parsed.append(terms)
    names = sorted(var_names)
    allowed = ["X", "Y", "Z", "W", "U", "V", "S", "T"]
    order = [v for v in allowed if v in names] + [v for v in names if v not in allowed]
    if len(parsed) != len(order):
        # square map over the variables that appear; pad with standard letters
        order = (["X", "Y", "Z"] + [v for v in names if v not in ("X", "Y", "Z")])[
            : len(parsed)
        ]
    index = {v: i for i, v in enumerate(order)}
    zero = raw_scalar(field, 0)
    rows = []
    from .exactfield import raw_add

    for terms in parsed:
        row = [zero] * len(parsed)
        for var, c in terms:
            if var not in index:
                raise InputError(f"variable {var!r} outside the map's coordinate set")
            row[index[var]] = raw_add(field, row[index[var]], c)
        rows.append(row)
    return ProjMatrix(field, rows)


def _split_colons(body):
    depth = 0
    out = []
    buf = []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == ":" and depth == 0:
            out.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    out.append("".join(buf).strip())
    return out
