"""Sparse multivariate polynomials over tower-field coefficients.

Provides linear and general substitution, proportionality testing, Buchberger
Groebner bases with the product and chain criteria, normal forms, ideal
equality, and the Jacobian smoothness test for plane curves.

Terms are stored as a dict from exponent tuples to raw field values; no zero
coefficient is ever stored.  The default term order is graded reverse
lexicographic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DescriptorMismatch, InputError, PreconditionError
from .exactfield import (
    FieldElement,
    parse_raw,
    raw_add,
    raw_inv,
    raw_is_zero,
    raw_mul,
    raw_neg,
    raw_scalar,
    raw_scale,
    raw_sub,
    serialize_raw,
)

GREVLEX = "grevlex"
LEX = "lex"


def order_key(order):
    if order == GREVLEX:
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    if order == LEX:
        return lambda e: e
    raise InputError(f"unknown term order {order!r}")


class MultiPoly:
    """Immutable sparse polynomial over a fixed field and variable list."""

    __slots__ = ("field", "variables", "terms", "order", "_lead")

    def __init__(self, field, variables, terms, order=GREVLEX, _clean=False):
        self.field = field
        self.variables = tuple(variables)
        self.order = order
        if _clean:
            self.terms = terms
        else:
            clean = {}
            for exp, c in terms.items():
                if isinstance(c, FieldElement):
                    c = c.value
                if not raw_is_zero(field, c):
                    clean[tuple(exp)] = c
            self.terms = clean
        self._lead = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, variables, order=GREVLEX):
        return cls(field, variables, {}, order, _clean=True)

    @classmethod
    def constant(cls, field, variables, c, order=GREVLEX):
        if isinstance(c, FieldElement):
            c = c.value
        elif isinstance(c, (int, Fraction)):
            c = raw_scalar(field, c)
        exp = (0,) * len(variables)
        return cls(field, variables, {exp: c}, order)

    @classmethod
    def variable(cls, field, variables, name, order=GREVLEX):
        i = list(variables).index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(field, variables, {exp: raw_scalar(field, 1)}, order, _clean=True)

    def _check(self, other):
        if self.field != other.field:
            raise DescriptorMismatch("polynomials over different fields")
        if self.variables != other.variables:
            raise InputError("polynomials with different variable lists")

    # -- basic queries --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def lead_exp(self):
        if self._lead is None and self.terms:
            self._lead = max(self.terms, key=order_key(self.order))
        return self._lead

    def lead_coeff_raw(self):
        return self.terms[self.lead_exp()]

    def coeff(self, exp):
        return FieldElement(self.field, self.terms.get(tuple(exp), raw_scalar(self.field, 0)))

    def sorted_terms(self):
        key = order_key(self.order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        desc = self.field
        res = dict(self.terms)
        for e, c in other.terms.items():
            if e in res:
                s = raw_add(desc, res[e], c)
                if raw_is_zero(desc, s):
                    del res[e]
                else:
                    res[e] = s
            else:
                res[e] = c
        return MultiPoly(desc, self.variables, res, self.order, _clean=True)

    def __neg__(self):
        desc = self.field
        return MultiPoly(
            desc,
            self.variables,
            {e: raw_neg(desc, c) for e, c in self.terms.items()},
            self.order,
            _clean=True,
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            desc = self.field
            res = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    p = raw_mul(desc, c1, c2)
                    if e in res:
                        s = raw_add(desc, res[e], p)
                        if raw_is_zero(desc, s):
                            del res[e]
                        else:
                            res[e] = s
                    elif not raw_is_zero(desc, p):
                        res[e] = p
            return MultiPoly(desc, self.variables, res, self.order, _clean=True)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        desc = self.field
        if isinstance(c, FieldElement):
            c = c.value
        elif isinstance(c, (int, Fraction)):
            c = raw_scalar(desc, c)
        if raw_is_zero(desc, c):
            return MultiPoly.zero(desc, self.variables, self.order)
        return MultiPoly(
            desc,
            self.variables,
            {e: raw_mul(desc, v, c) for e, v in self.terms.items()},
            self.order,
            _clean=True,
        )

    def mul_term(self, exp, coeff):
        desc = self.field
        return MultiPoly(
            desc,
            self.variables,
            {
                tuple(a + b for a, b in zip(e, exp)): raw_mul(desc, c, coeff)
                for e, c in self.terms.items()
            },
            self.order,
            _clean=True,
        )

    def __pow__(self, n):
        result = MultiPoly.constant(self.field, self.variables, 1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def with_order(self, order):
        if order == self.order:
            return self
        return MultiPoly(self.field, self.variables, self.terms, order, _clean=True)

    def monic(self):
        if not self.terms:
            return self
        inv = raw_inv(self.field, self.lead_coeff_raw())
        return self.scale(FieldElement(self.field, inv))

    def content_normalized(self):
        """Scale by a rational so nested numerators are coprime integers.

        Controls coefficient growth in characteristic 0; a no-op over F_p.
        """
        if self.field.characteristic or not self.terms:
            return self
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            for f in _iter_base(self.field, c):
                num_gcd = gcd(num_gcd, abs(f.numerator))
                den_lcm = den_lcm * f.denominator // gcd(den_lcm, f.denominator)
        if num_gcd == 0:
            return self
        factor = Fraction(den_lcm, num_gcd)
        if factor == 1:
            return self
        return self.scale(factor)

    # -- substitution ----------------------------------------------------------

    def compose(self, images):
        """Substitute every variable by the polynomial images[name]."""
        desc = self.field
        sample = next(iter(images.values()))
        out_vars = sample.variables
        order = sample.order
        for v in self.variables:
            if v not in images:
                raise InputError(f"no image supplied for variable {v!r}")
        power_cache = {v: {0: MultiPoly.constant(desc, out_vars, 1, order)} for v in self.variables}

        def vpow(v, n):
            cache = power_cache[v]
            if n not in cache:
                cache[n] = vpow(v, n - 1) * images[v]
            return cache[n]

        acc = MultiPoly.zero(desc, out_vars, order)
        for exp, c in self.terms.items():
            t = MultiPoly.constant(desc, out_vars, c, order)
            for v, e in zip(self.variables, exp):
                if e:
                    t = t * vpow(v, e)
            acc = acc + t
        return acc

    def eval_at(self, point):
        """Evaluate at a tuple of field elements or raw values."""
        desc = self.field
        vals = [p.value if isinstance(p, FieldElement) else p for p in point]
        acc = raw_scalar(desc, 0)
        for exp, c in self.terms.items():
            t = c
            for v, e in zip(vals, exp):
                if e:
                    t = raw_mul(desc, t, raw_pow_cached(desc, v, e))
            acc = raw_add(desc, acc, t)
        return FieldElement(desc, acc)

    # -- comparison and io -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"MultiPoly({poly_to_text(self)})"


def raw_pow_cached(desc, v, e):
    # local helper; exponents are tiny so plain powering is fine
    acc = v
    for _ in range(e - 1):
        acc = raw_mul(desc, acc, v)
    return acc


def _iter_base(desc, raw, lvl=None):
    lvl = desc.height if lvl is None else lvl
    if lvl == 0:
        yield raw
    else:
        for c in raw:
            yield from _iter_base(desc, c, lvl - 1)


# ---------------------------------------------------------------------------
# text format: sum of "coeff * X^i*Y^j" terms; coefficients use the element
# serialization of exactfield (nested [..] lists, rationals as n or n/d).


def poly_to_text(p):
    if not p.terms:
        return "0"
    parts = []
    for exp, c in p.sorted_terms():
        cs = serialize_raw(p.field, c)
        cstr = _coeff_text(cs)
        monos = [
            f"{v}^{e}" if e > 1 else v for v, e in zip(p.variables, exp) if e
        ]
        if monos:
            parts.append(cstr + "*" + "*".join(monos))
        else:
            parts.append(cstr)
    return " + ".join(parts)


def _coeff_text(cs):
    if isinstance(cs, list):
        return "[" + ",".join(_coeff_text(c) for c in cs) + "]"
    return str(cs)


def poly_from_text(field, variables, text, order=GREVLEX):
    """Parse the textual polynomial format; round-trips poly_to_text exactly."""
    text = text.strip()
    if text in ("0", ""):
        return MultiPoly.zero(field, variables, order)
    terms = {}
    for piece, sign in _split_terms(text):
        exp = [0] * len(variables)
        coeff_doc = None
        for factor in _split_factors(piece):
            factor = factor.strip()
            if not factor:
                raise InputError(f"empty factor in term {piece!r}")
            if factor[0] == "[" or factor[0].isdigit() or factor[0] in "+-":
                if coeff_doc is not None:
                    raise InputError(f"two coefficients in term {piece!r}")
                coeff_doc = factor
            else:
                if "^" in factor:
                    name, _, e = factor.partition("^")
                    e = int(e)
                else:
                    name, e = factor, 1
                name = name.strip()
                if name not in variables:
                    raise InputError(f"unknown variable {name!r}")
                exp[list(variables).index(name)] += e
        raw = (
            raw_scalar(field, 1)
            if coeff_doc is None
            else parse_raw(field, _coeff_doc(coeff_doc))
        )
        if sign < 0:
            raw = raw_neg(field, raw)
        key = tuple(exp)
        prev = terms.get(key)
        terms[key] = raw if prev is None else raw_add(field, prev, raw)
    return MultiPoly(field, variables, terms, order)


def _coeff_doc(tok):
    import json as _json

    tok = tok.strip()
    if tok.startswith("["):
        return _json.loads(_bracket_to_json(tok))
    return tok


def _bracket_to_json(tok):
    # wrap bare rationals like -3/7 in quotes so json can parse the nest
    out = []
    buf = []
    for ch in tok:
        if ch in "[],":
            if buf:
                out.append('"' + "".join(buf).strip() + '"')
                buf = []
            out.append(ch)
        else:
            buf.append(ch)
    if buf:
        out.append('"' + "".join(buf).strip() + '"')
    return "".join(out)


def _split_terms(text):
    out = []
    depth = 0
    buf = []
    sign = 1
    prev = ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and ch in "+-" and prev not in ("", "*", "^", "/", "+", "-"):
            out.append(("".join(buf).strip(), sign))
            buf = []
            sign = 1 if ch == "+" else -1
            prev = ""
            continue
        buf.append(ch)
        if not ch.isspace():
            prev = ch
    last = "".join(buf).strip()
    if last:
        out.append((last, sign))
    return out


def _split_factors(piece):
    depth = 0
    start = 0
    out = []
    for i, ch in enumerate(piece):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(piece[start:i])
            start = i + 1
    out.append(piece[start:])
    return out


# ---------------------------------------------------------------------------
# plane curves


class PlaneCurve:
    """A nonzero homogeneous form of degree >= 4 in exactly three variables."""

    __slots__ = ("form", "degree", "genus")

    def __init__(self, form):
        if len(form.variables) != 3:
            raise InputError("plane curves need exactly three variables")
        if form.is_zero():
            raise InputError("the zero form defines no curve")
        if not form.is_homogeneous():
            raise InputError("defining form must be homogeneous")
        d = form.total_degree()
        if d < 4:
            raise InputError(f"degree must be >= 4, got {d}")
        self.form = form
        self.degree = d
        self.genus = (d - 1) * (d - 2) // 2

    @property
    def field(self):
        return self.form.field

    def partials(self):
        return [poly_partial(self.form, i) for i in range(3)]

    def __repr__(self):
        return f"PlaneCurve(degree={self.degree}, genus={self.genus})"


def poly_partial(p, var_index):
    desc = p.field
    res = {}
    for exp, c in p.terms.items():
        e = exp[var_index]
        if e == 0:
            continue
        nexp = tuple(x - 1 if i == var_index else x for i, x in enumerate(exp))
        nc = raw_scale(desc, e, c)
        if not raw_is_zero(desc, nc):
            res[nexp] = nc
    return MultiPoly(desc, p.variables, res, p.order, _clean=True)


# ---------------------------------------------------------------------------
# substitution by matrices and proportionality


def substitute_linear(F, M):
    """F composed with the linear change of variables given by matrix rows.

    ``M`` may be a ProjMatrix or a plain list of rows of raw/FieldElement
    values over F's field; row i is the linear form substituted for variable
    i.  Degree and homogeneity are preserved; the right-action law
    (F o M) o N = F o (M N) holds.
    """
    rows = getattr(M, "rows", M)
    n = len(rows)
    if n != len(F.variables):
        raise InputError("matrix dimension must equal the variable count")
    desc = F.field
    images = {}
    for i, v in enumerate(F.variables):
        terms = {}
        for j in range(n):
            c = rows[i][j]
            if isinstance(c, FieldElement):
                c = c.value
            if raw_is_zero(desc, c):
                continue
            exp = tuple(1 if k == j else 0 for k in range(n))
            terms[exp] = c
        images[v] = MultiPoly(desc, F.variables, terms, F.order, _clean=True)
    return F.compose(images)


def proportionality(F, G):
    """The scalar lam with F = lam * G, or None; lam unique for nonzero G."""
    if F.variables != G.variables:
        raise InputError("polynomials with different variable lists")
    if F.is_zero() and G.is_zero():
        raise PreconditionError("both inputs are zero")
    if G.is_zero() or F.is_zero():
        return None
    if set(F.terms) != set(G.terms):
        return None
    desc = F.field
    lam = None
    for e, c in F.terms.items():
        ratio = raw_mul(desc, c, raw_inv(desc, G.terms[e]))
        if lam is None:
            lam = ratio
        elif lam != ratio:
            return None
    return FieldElement(desc, lam)


# ---------------------------------------------------------------------------
# Groebner bases


class GroebnerBasis:
    __slots__ = ("generators", "order", "reduced")

    def __init__(self, generators, order, reduced=True):
        self.generators = list(generators)
        self.order = order
        self.reduced = reduced

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def _exp_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _exp_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _exp_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def normal_form(F, basis):
    """Remainder of F under multivariate division by the basis."""
    gens = list(basis.generators if isinstance(basis, GroebnerBasis) else basis)
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return F
    desc = F.field
    lead = [(g.lead_exp(), raw_inv(desc, g.lead_coeff_raw()), g) for g in gens]
    rem_terms = {}
    p = F
    while p.terms:
        e = p.lead_exp()
        c = p.terms[e]
        hit = next((t for t in lead if _exp_divides(t[0], e)), None)
        if hit is None:
            rem_terms[e] = c
            nt = dict(p.terms)
            del nt[e]
            p = MultiPoly(desc, F.variables, nt, F.order, _clean=True)
        else:
            ge, ginv, g = hit
            f = raw_mul(desc, c, ginv)
            p = p - g.mul_term(_exp_sub(e, ge), f)
    return MultiPoly(desc, F.variables, rem_terms, F.order, _clean=True)


def s_polynomial(f, g):
    desc = f.field
    lf, lg = f.lead_exp(), g.lead_exp()
    l = _exp_lcm(lf, lg)
    cf = raw_inv(desc, f.lead_coeff_raw())
    cg = raw_inv(desc, g.lead_coeff_raw())
    return f.mul_term(_exp_sub(l, lf), cf) - g.mul_term(_exp_sub(l, lg), cg)


def buchberger(generators, order=GREVLEX, reduce=True):
    """Groebner basis via Buchberger with normal selection and the product
    and chain criteria."""
    gens = [g.with_order(order) for g in generators if not g.is_zero()]
    if not gens:
        raise InputError("empty generator list")
    vars0 = gens[0].variables
    for g in gens:
        if g.variables != vars0:
            raise InputError("inconsistent variable sets")
    desc = gens[0].field
    G = [g.content_normalized() for g in gens]
    key = order_key(order)
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    treated = set()
    while pairs:
        i, j = min(pairs, key=lambda p: key(_exp_lcm(G[p[0]].lead_exp(), G[p[1]].lead_exp())))
        pairs.discard((i, j))
        treated.add((i, j))
        li, lj = G[i].lead_exp(), G[j].lead_exp()
        l = _exp_lcm(li, lj)
        if l == tuple(a + b for a, b in zip(li, lj)):
            continue  # product criterion: coprime leading terms
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _exp_divides(G[k].lead_exp(), l):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in treated and pjk in treated:
                    skip = True
                    break
        if skip:
            continue
        h = normal_form(s_polynomial(G[i], G[j]), G)
        if h.is_zero():
            continue
        h = h.content_normalized()
        new = len(G)
        G.append(h)
        for k in range(new):
            pairs.add((k, new))
    if not reduce:
        return GroebnerBasis([g.monic() for g in G], order, reduced=False)
    # inter-reduce to the unique reduced basis
    G = [g.monic() for g in G]
    # drop generators whose lead is divisible by another lead
    keep = []
    for i, g in enumerate(G):
        li = g.lead_exp()
        if any(
            j != i and _exp_divides(G[j].lead_exp(), li)
            and (G[j].lead_exp() != li or j < i)
            for j in range(len(G))
        ):
            continue
        keep.append(g)
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        r = normal_form(g, others)
        if not r.is_zero():
            reduced.append(r.monic())
    reduced.sort(key=lambda g: key(g.lead_exp()), reverse=True)
    return GroebnerBasis(reduced, order, reduced=True)


def ideal_equal(A, B, order=GREVLEX):
    """True iff the two generator lists generate the same ideal.

    For families of homogeneous polynomials of one common degree this is a
    row-span comparison; the general path reduces each side against a basis
    of the other.
    """
    A = [a for a in A if not a.is_zero()]
    B = [b for b in B if not b.is_zero()]
    if not A or not B:
        return not A and not B
    if A[0].variables != B[0].variables or A[0].field != B[0].field:
        raise InputError("ideal comparison needs a shared variable set and field")
    degs_a = {a.total_degree() for a in A}
    degs_b = {b.total_degree() for b in B}
    if (
        len(degs_a) == 1
        and degs_a == degs_b
        and all(p.is_homogeneous() for p in A + B)
    ):
        from .linalg import span_equal

        monos = sorted({e for p in A + B for e in p.terms})
        index = {e: i for i, e in enumerate(monos)}
        desc = A[0].field
        zero = raw_scalar(desc, 0)

        def vec(p):
            v = [zero] * len(monos)
            for e, c in p.terms.items():
                v[index[e]] = c
            return v

        return span_equal(desc, [vec(p) for p in A], [vec(p) for p in B], len(monos))
    ga = buchberger(A, order)
    gb = buchberger(B, order)
    return all(normal_form(b, ga).is_zero() for b in B) and all(
        normal_form(a, gb).is_zero() for a in A
    )


# ---------------------------------------------------------------------------
# smoothness


def is_smooth(curve, max_power=None, corroborate=True):
    """Jacobian criterion for a plane curve; returns (verdict, certificate).

    The partials have no common projective zero iff X^N, Y^N, Z^N all lie in
    the partial ideal for some N; the effective bound for three forms of
    degree d-1 is N = 3(d-1)-2.  A "singular" verdict over a Q-based field
    with rational coefficients is corroborated by searching small prime
    reductions for a common projective zero (reported, not proof).
    """
    d = curve.degree
    p = curve.field.characteristic
    if p and d % p == 0:
        raise PreconditionError("characteristic divides the degree")
    bound = max_power if max_power is not None else 3 * (d - 1) - 2
    parts = curve.partials()
    basis = buchberger(parts, GREVLEX)
    names = curve.form.variables
    witness = None
    for N in range(1, bound + 1):
        ok = True
        for i, v in enumerate(names):
            exp = tuple(N if j == i else 0 for j in range(3))
            mono = MultiPoly(
                curve.field, names, {exp: raw_scalar(curve.field, 1)}, GREVLEX, _clean=True
            )
            if not normal_form(mono, basis).is_zero():
                ok = False
                break
        if ok:
            witness = N
            break
    cert = {"bound": bound, "witnessed_power": witness}
    if witness is not None:
        return True, cert
    if corroborate and p == 0:
        point = _singular_point_mod_small_prime(curve)
        if point is not None:
            cert["corroboration"] = point
    return False, cert


def _singular_point_mod_small_prime(curve):
    desc = curve.field
    # only attempt when every coefficient is rational
    rats = {}
    for e, c in curve.form.terms.items():
        flat = list(_iter_base(desc, c))
        if any(f != 0 for f in flat[1:]):
            return None
        rats[e] = flat[0]
    for q in (7, 11, 13, 17, 19, 23):
        if any(f.denominator % q == 0 for f in rats.values()):
            continue
        parts = []
        for i in range(3):
            terms = {}
            for e, f in rats.items():
                if e[i] == 0:
                    continue
                ne = tuple(x - 1 if j == i else x for j, x in enumerate(e))
                val = (e[i] * f.numerator * pow(f.denominator, -1, q)) % q
                terms[ne] = (terms.get(ne, 0) + val) % q
            parts.append({e: c for e, c in terms.items() if c})

        def ev(terms, pt):
            acc = 0
            for e, c in terms.items():
                t = c
                for x, k in zip(pt, e):
                    for _ in range(k):
                        t = t * x % q
                acc = (acc + t) % q
            return acc

        for pt in _proj_points(q):
            if all(ev(t, pt) == 0 for t in parts):
                return {"prime": q, "point": list(pt)}
    return None


def _proj_points(q):
    for y in range(q):
        for z in range(q):
            yield (1, y, z)
    for z in range(q):
        yield (0, 1, z)
    yield (0, 0, 1)
