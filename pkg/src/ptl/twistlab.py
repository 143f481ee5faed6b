"""Cocycle verification, twist construction and twist enumeration.

Cocycles live on finite Galois quotients given by generators and relations.
The twisted product along a relation accumulates the Galois action on the
left, matching the composition rule for crossed homomorphisms, and a cocycle
is valid when every relation evaluates to the projective identity.

Twist enumeration over finite fields is by brute force on parameter pairs
modulo the stated equivalence, cross-checkable against the twisted-conjugacy
(Frobenius cohomology) count of the automorphism group.
"""

from __future__ import annotations

from math import gcd

from .errors import CheckRefuted, InputError, PreconditionError
from .exactfield import (
    FieldElement,
    extends,
    lift_raw,
    raw_is_zero,
    raw_scalar,
    restrict_raw,
    verify_galois_map,
)
from .polyalg import MultiPoly, PlaneCurve, is_smooth, proportionality, substitute_linear
from .projlin import MatrixGroup, ProjMatrix, galois_on_matrix, identity


class GaloisPresentation:
    """A finite Galois quotient: named generators with relation words.

    ``maps`` sends each generator name to a verified GaloisMap on the
    splitting field; ``relations`` are words over the generator names (a
    token may carry an exponent suffix like ``s^2``).
    """

    def __init__(self, field, maps, relations):
        self.field = field
        self.maps = dict(maps)
        self.relations = [list(_expand_word(w)) for w in relations]
        for w in self.relations:
            for name in w:
                if name not in self.maps:
                    raise InputError(f"relation uses unknown generator {name!r}")

    def generator_names(self):
        return list(self.maps)

    def composite(self, word):
        """The composite Galois map of a word (leftmost acts last)."""
        from .exactfield import identity_map

        acc = identity_map(self.field)
        for name in word:
            acc = acc.compose(self.maps[name])
        return acc

    def verify(self):
        report = []
        for name, g in self.maps.items():
            ok, rep = verify_galois_map(g)
            if not ok:
                report.append(f"generator {name!r}: " + "; ".join(rep))
        for w in self.relations:
            comp = self.composite(w)
            for i in range(self.field.height):
                from .exactfield import gen_raw

                v = gen_raw(self.field, i)
                if comp.apply_raw(v) != v:
                    report.append(
                        f"relation {'*'.join(w)} does not act as the identity"
                    )
                    break
        return (not report, report)


def _expand_word(word):
    if isinstance(word, str):
        word = word.split()
    out = []
    for tok in word:
        if "^" in tok:
            name, _, e = tok.partition("^")
            out.extend([name] * int(e))
        else:
            out.append(tok)
    return out


def cyclic_presentation(field, sigma, name="s"):
    """Presentation of a cyclic quotient generated by one verified map."""
    return GaloisPresentation(field, {name: sigma}, [[name] * sigma.order])


class Cocycle:
    """An assignment of a projective matrix to each presentation generator."""

    def __init__(self, presentation, values, ambient=None):
        self.presentation = presentation
        self.values = dict(values)
        self.ambient = ambient
        for name in presentation.generator_names():
            if name not in self.values:
                raise InputError(f"cocycle misses a value for generator {name!r}")

    def value(self, name):
        return self.values[name]

    def twisted_product(self, word):
        """xi_g1 * g1(xi_g2) * (g1 g2)(xi_g3) * ... along the word."""
        pres = self.presentation
        from .exactfield import identity_map

        gamma = identity_map(pres.field)
        acc = None
        for name in word:
            v = self.values[name]
            tv = galois_on_matrix(gamma, v)
            acc = tv if acc is None else acc * tv
            gamma = gamma.compose(pres.maps[name])
        if acc is None:
            acc = identity(pres.field, next(iter(self.values.values())).n)
        return acc


def verify_cocycle(xi):
    """Weil condition: every relation's twisted product is projectively 1."""
    report = []
    pres = xi.presentation
    ok_p, rep = pres.verify()
    if not ok_p:
        return False, ["presentation invalid: " + "; ".join(rep)]
    if xi.ambient is not None:
        for name, v in xi.values.items():
            if v not in xi.ambient:
                raise PreconditionError(
                    f"value of {name!r} lies outside the ambient automorphism group"
                )
    for w in pres.relations:
        prod = xi.twisted_product(w)
        if not prod.is_identity():
            report.append(f"relation {'*'.join(w)}: twisted product is not the identity")
    return (not report, report)


class TwistResult:
    """A k-rational model produced from a splitting matrix."""

    def __init__(self, curve, matrix, scalar, cocycle):
        self.curve = curve
        self.matrix = matrix
        self.scalar = scalar
        self.cocycle = cocycle


def _lex_first_exp(poly):
    return max(poly.terms)


def rational_model(F_over_L, big, small):
    """Normalize by the lexicographically first monomial's coefficient and
    push the coefficients down to the small field; None when not rational."""
    lead = _lex_first_exp(F_over_L)
    lam = F_over_L.terms[lead]
    inv = FieldElement(big, lam).inv()
    normalized = F_over_L.scale(inv)
    terms = {}
    for e, c in normalized.terms.items():
        down = restrict_raw(big, small, c)
        if down is None:
            return None, lam
        terms[e] = down
    return MultiPoly(small, F_over_L.variables, terms, F_over_L.order), lam


def twist_from_splitting(curve, M, presentation, ambient=None):
    """Build the k-rational twist model F o M together with its cocycle.

    ``curve`` is over k, ``M`` over a splitting tower L extending k, and
    ``presentation`` describes the finite quotient Gal(L/k).  The induced
    cocycle sends each generator g to M * g(M)^-1; when an ambient
    automorphism group is supplied the values must land in it.
    """
    L = M.field
    k = curve.field
    if not extends(L, k):
        raise InputError("splitting matrix must live over an extension of the base")
    lifted = MultiPoly(
        L,
        curve.form.variables,
        {e: lift_raw(L, k, c) for e, c in curve.form.terms.items()},
        curve.form.order,
    )
    composed = substitute_linear(lifted, M)
    model, lam = rational_model(composed, L, k)
    if model is None:
        raise CheckRefuted(
            "F o M is not proportional to a form over the base field"
        )
    values = {}
    for name, g in presentation.maps.items():
        values[name] = M * galois_on_matrix(g, M).inv()
    xi = Cocycle(presentation, values, ambient)
    ok, rep = verify_cocycle(xi)
    if not ok:
        raise CheckRefuted("induced cocycle fails the Weil condition: " + "; ".join(rep))
    return TwistResult(PlaneCurve(model), M, lam, xi)


def diagonal_twist(curve, D, attested_diagonal_group=True):
    """The k-rational model F o D for a diagonal splitting matrix D."""
    if not attested_diagonal_group:
        raise PreconditionError(
            "the diagonal-automorphism hypothesis must be attested for this route"
        )
    L = D.field
    k = curve.field
    zero = raw_scalar(L, 0)
    for i in range(D.n):
        for j in range(D.n):
            if i != j and D.rows[i][j] != zero:
                raise InputError("matrix is not diagonal")
    lifted = MultiPoly(
        L,
        curve.form.variables,
        {e: lift_raw(L, k, c) for e, c in curve.form.terms.items()},
        curve.form.order,
    )
    composed = substitute_linear(lifted, D)
    model, _ = rational_model(composed, L, k)
    if model is None:
        raise CheckRefuted("F o D is not proportional to a form over the base field")
    return PlaneCurve(model)


# ---------------------------------------------------------------------------
# twist families over finite fields


class FamilyClass:
    __slots__ = (
        "representative",
        "size",
        "is_trivial_class",
        "meets_literal_set",
        "literal_representative",
        "smooth",
    )

    def __init__(self, representative, size, is_trivial_class, meets_literal_set,
                 literal_representative, smooth):
        self.representative = representative
        self.size = size
        self.is_trivial_class = is_trivial_class
        self.meets_literal_set = meets_literal_set
        self.literal_representative = literal_representative
        self.smooth = smooth


class FamilyReport:
    def __init__(self, d, q, family, classes, aut_order):
        self.d = d
        self.q = q
        self.family = family
        self.classes = classes
        self.aut_order = aut_order

    @property
    def total_count(self):
        return len(self.classes)

    @property
    def literal_count(self):
        return sum(1 for c in self.classes if c.meets_literal_set)

    @property
    def h1_count(self):
        return cyclic_coinvariant_count(self.aut_order, self.q)

    def counts_agree(self):
        return self.total_count == self.h1_count


def cyclic_coinvariant_count(n, q):
    """|A / (pi - 1) A| for A = Z/n with pi acting as multiplication by q."""
    return gcd(q - 1, n)


def representative_curve(field, d, family, a, b):
    vars3 = ("X", "Y", "Z")
    one = raw_scalar(field, 1)
    av = raw_scalar(field, a)
    bv = raw_scalar(field, b)
    if family == 1:
        terms = {(d, 0, 0): av, (0, d, 0): one, (1, 0, d - 1): bv}
    else:
        terms = {(d, 0, 0): one, (0, d - 1, 1): av, (1, 0, d - 1): bv}
    return PlaneCurve(MultiPoly(field, vars3, terms))


def family_classes_fq(d, q, family, check_smooth=True):
    """Enumerate parameter classes of the two diagonal twist families.

    Family 1 is a*X^d + Y^d + b*X*Z^(d-1) with (a, b) ~ (s^d a, s t^(d-1) b);
    family 2 is X^d + a*Y^(d-1)*Z + b*X*Z^(d-1) with
    (a, b) ~ (s^(d-1) t a, s^(d-1) b).  The full quotient is enumerated; the
    class of (1, 1) is flagged as trivial, and each class records whether it
    meets the literal non-power parameter set.
    """
    if family not in (1, 2):
        raise InputError("family must be 1 or 2")
    if d < 4:
        raise InputError("degree must be >= 4")
    from .exactfield import prime_field

    p = _char_of_prime_power(q)
    if p != q:
        raise InputError("prime-power q beyond primes is not supported here")
    if p <= (d - 1) * (d - 2) + 1:
        raise PreconditionError(
            f"characteristic must exceed (d-1)(d-2)+1 = {(d - 1) * (d - 2) + 1}"
        )
    field = prime_field(q)
    units = list(range(1, q))
    # the acting subgroup H
    H = set()
    for s in units:
        if family == 1:
            h1 = pow(s, d, q)
            for t in units:
                H.add((h1, s * pow(t, d - 1, q) % q))
        else:
            sd = pow(s, d - 1, q)
            for t in units:
                H.add((sd * t % q, sd))
    dth = {pow(x, d, q) for x in units}
    d1th = {pow(x, d - 1, q) for x in units}
    if family == 1:
        in_literal = lambda a, b: a not in dth and b not in d1th
    else:
        in_literal = lambda a, b: a not in d1th and b not in d1th
    seen = [[False] * q for _ in range(q)]
    classes = []
    for a in units:
        for b in units:
            if seen[a][b]:
                continue
            orbit = [(h1 * a % q, h2 * b % q) for h1, h2 in H]
            is_trivial = False
            literal_rep = None
            for x, y in orbit:
                seen[x][y] = True
                if (x, y) == (1, 1):
                    is_trivial = True
                if literal_rep is None and in_literal(x, y):
                    literal_rep = (x, y)
            rep = literal_rep if literal_rep is not None else min(orbit)
            curve = representative_curve(field, d, family, rep[0], rep[1])
            smooth = None
            if check_smooth:
                smooth, _ = is_smooth(curve)
            classes.append(
                FamilyClass(rep, len(set(orbit)), is_trivial, literal_rep is not None,
                            literal_rep, smooth)
            )
    aut_order = d * (d - 1) if family == 1 else (d - 1) ** 2
    return FamilyReport(d, q, family, classes, aut_order)


def _char_of_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            return p
    raise InputError("q must be >= 2")


# ---------------------------------------------------------------------------
# Frobenius cohomology of a finite automorphism group


def h1_frobenius(group, frobenius_action):
    """Twisted-conjugacy classes {xi ~ a^-1 xi pi(a)} of a finite group.

    ``frobenius_action`` is a GaloisMap on the group's field; it must permute
    the group.  For abelian groups this computes the coinvariants.
    """
    images = {}
    for m in group:
        im = galois_on_matrix(frobenius_action, m)
        if im not in group:
            raise PreconditionError("the action does not preserve the group")
        images[m.key()] = im
    unassigned = {m.key(): m for m in group}
    classes = []
    while unassigned:
        _, seed = next(iter(unassigned.items()))
        orbit = {}
        stack = [seed]
        while stack:
            x = stack.pop()
            if x.key() in orbit:
                continue
            orbit[x.key()] = x
            for a in group:
                y = a.inv() * x * images[a.key()]
                if y.key() not in orbit:
                    stack.append(y)
        for k in orbit:
            unassigned.pop(k, None)
        classes.append(list(orbit.values()))
    return classes


# ---------------------------------------------------------------------------
# plane-model obstruction classifier


MUST_BE_PLANE = "must-be-plane"
POSSIBLY_OBSTRUCTED = "possibly-obstructed"


def obstruction_classifier(d, field_kind="general", has_rational_point=None):
    """Decide whether a smooth plane-model over the base field is forced.

    Degree coprime to 3 forces a plane model; so does a base field with
    trivial 3-torsion Brauer group (finite fields and the reals), and so does
    a rational point.  Otherwise the result is possibly-obstructed, with the
    guarantee that a model exists over some extension of degree dividing 3.
    """
    if d < 4:
        raise InputError("degree must be >= 4")
    if field_kind not in ("finite", "real", "general"):
        raise InputError("field_kind must be finite, real or general")
    report = []
    if d % 3 != 0:
        report.append(f"degree {d} is coprime to 3: plane model over the base field")
        return MUST_BE_PLANE, report
    if field_kind in ("finite", "real"):
        report.append(
            f"{field_kind} base field has trivial 3-torsion Brauer group: "
            "plane model over the base field"
        )
        return MUST_BE_PLANE, report
    if has_rational_point:
        report.append("a rational point trivializes the ambient Brauer-Severi surface")
        return MUST_BE_PLANE, report
    report.append(
        "no criterion applies; a non-singular plane model exists over an "
        "extension L with [L:k] dividing 3"
    )
    return POSSIBLY_OBSTRUCTED, report
