"""Automorphism verification and exact diagonal-automorphism enumeration.

A projective matrix M is an automorphism of the curve F = 0 when F o M is a
scalar multiple of F.  Diagonal automorphisms diag(1, s, t) are enumerated
exactly: each pair of monomials of F imposes s^da * t^db = 1 on the exponent
differences (da, db), and the solution group of the resulting congruence
lattice is finite and computed through the Smith normal form.  Solutions are
kept as root-of-unity exponent data; no embedding is fixed.
"""

from __future__ import annotations

from math import gcd

from .errors import InputError, PreconditionError
from .exactfield import (
    FieldDescriptor,
    RATIONAL_BASE,
    TowerLevel,
    cyclotomic_polynomial,
    raw_is_zero,
    raw_scalar,
)
from .linalg import smith_normal_form
from .polyalg import MultiPoly, proportionality, substitute_linear
from .projlin import diagonal, group_closure


def is_automorphism(curve, M):
    """The scalar lam with F o M = lam * F, or None."""
    if M.n != 3:
        raise InputError("plane-curve automorphisms are 3x3")
    return proportionality(substitute_linear(curve.form, M), curve.form)


class DiagonalAutoSet:
    """The group of diagonal projective automorphisms diag(1, s, t) of a curve.

    ``generators`` is a list of (n, (a, b)) entries meaning diag(1, zeta_n^a,
    zeta_n^b); ``elements`` lists every member against the common modulus
    ``modulus``.
    """

    def __init__(self, curve, generators, modulus, elements):
        self.curve = curve
        self.generators = generators
        self.modulus = modulus
        self.elements = elements

    @property
    def order(self):
        return len(self.elements)

    def is_trivial(self):
        return self.order == 1

    def is_cyclic(self):
        return any(d == 1 for d, _ in self.generators) or len(self.generators) <= 1

    def contains_exponents(self, n, a, b):
        """Is diag(1, zeta_n^a, zeta_n^b) in the set?"""
        coords = []
        for v in (a, b):
            g = gcd(v % n, n) or n
            num, den = (v % n) // g, n // g
            if self.modulus % den:
                return False
            coords.append(num * (self.modulus // den) % self.modulus)
        return tuple(coords) in self.elements

    def verify(self, max_checked=200):
        """Check every listed matrix against the curve with exact arithmetic.

        Requires the curve's coefficients to be rational, so the check can run
        in the cyclotomic field of the common modulus.
        """
        n = self.modulus
        if n == 1:
            return True
        curveQ = _rational_form(self.curve)
        if curveQ is None:
            raise PreconditionError("verification needs rational curve coefficients")
        field = cyclotomic_field(n)
        zeta = field.gen(0) if field.height else field.one()
        from .polyalg import PlaneCurve

        lifted = PlaneCurve(
            MultiPoly(
                field,
                self.curve.form.variables,
                {e: raw_scalar(field, c) for e, c in curveQ.items()},
            )
        )
        for a, b in list(self.elements)[:max_checked]:
            M = diagonal(field, [field.one(), zeta**a, zeta**b])
            if is_automorphism(lifted, M) is None:
                return False
        return True


def _rational_form(curve):
    from .polyalg import _iter_base

    desc = curve.field
    if desc.characteristic:
        return None
    out = {}
    for e, c in curve.form.terms.items():
        flat = list(_iter_base(desc, c))
        if any(f != 0 for f in flat[1:]):
            return None
        out[e] = flat[0]
    return out


def cyclotomic_field(n, name=None):
    """Q(zeta_n) with the literal cyclotomic certificate."""
    if n <= 2:
        return FieldDescriptor(RATIONAL_BASE, ())
    from fractions import Fraction

    poly = [Fraction(c) for c in cyclotomic_polynomial(n)]
    return FieldDescriptor(
        RATIONAL_BASE, [TowerLevel(name or f"zeta{n}", poly, {"cyclotomic": n})]
    )


def enumerate_diagonal_autos(curve):
    """The complete group of diagonal projective automorphisms of the curve."""
    if not curve.form.is_homogeneous():
        raise InputError("non-homogeneous input")
    exps = sorted(curve.form.terms)
    if len(exps) < 2:
        raise PreconditionError(
            "a single-monomial form has infinitely many diagonal symmetries"
        )
    base = exps[0]
    rows = [[e[1] - base[1], e[2] - base[2]] for e in exps[1:]]
    D, _, V = smith_normal_form(rows)
    d1 = D[0][0] if len(D) >= 1 and len(D[0]) >= 1 else 0
    d2 = D[1][1] if len(D) >= 2 and len(D[1]) >= 2 else 0
    if d1 == 0 or d2 == 0:
        raise PreconditionError(
            "exponent lattice has rank < 2; diagonal symmetry group is infinite"
        )
    p = curve.field.characteristic
    if p and (d1 % p == 0 or d2 % p == 0):
        raise PreconditionError(
            f"characteristic {p} divides a candidate root-of-unity order"
        )
    modulus = d2  # d1 | d2
    generators = []
    # solution generators: (s, t) = zeta_{d_i}^(V[0][i]), zeta_{d_i}^(V[1][i])
    for i, di in ((0, d1), (1, d2)):
        if di == 1:
            continue
        generators.append((di, (V[0][i] % di, V[1][i] % di)))
    elements = set()
    g1 = _scaled(generators[0], modulus) if len(generators) > 0 else (0, 0)
    g2 = _scaled(generators[1], modulus) if len(generators) > 1 else (0, 0)
    n1 = generators[0][0] if generators else 1
    n2 = generators[1][0] if len(generators) > 1 else 1
    for i in range(n1):
        for j in range(n2):
            elements.add(
                (
                    (i * g1[0] + j * g2[0]) % modulus,
                    (i * g1[1] + j * g2[1]) % modulus,
                )
            )
    if len(elements) != d1 * d2:
        raise AssertionError("solution group size must be d1*d2")
    return DiagonalAutoSet(curve, generators, modulus, elements)


def _scaled(gen, modulus):
    n, (a, b) = gen
    f = modulus // n
    return (a * f % modulus, b * f % modulus)


def verify_group_order(curve, generators, claimed_order, cap=10000):
    """Check the generators fix the curve and close into the claimed order."""
    report = []
    for i, M in enumerate(generators):
        lam = is_automorphism(curve, M)
        if lam is None:
            report.append(f"generator {i} is not an automorphism of the curve")
    if report:
        raise PreconditionError("; ".join(report))
    group = group_closure(generators, cap)
    ok = group.order == claimed_order
    report.append(f"closure order {group.order}, claimed {claimed_order}")
    return ok, report, group
