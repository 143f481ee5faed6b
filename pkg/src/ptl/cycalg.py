"""Cyclic algebras of degree 3: cocycle matrices and norm obstructions.

An algebra is specified by a cyclic cubic extension L/k with a chosen
generator of its Galois group and an element a of k*.  Its projective cocycle
sends the generator to the companion matrix [[0,0,a],[1,0,0],[0,1,0]], whose
cube is a times the identity.  The algebra is trivial exactly when a is a
norm from L; triviality is certified by a bounded witness search, and
non-triviality by one of two local obstructions (an inert prime at which a
has valuation coprime to 3, or a non-cube residue at a tamely and totally
ramified prime).  Neither test fires outside its hypotheses, so "undecided"
is an honest third answer.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import gcd

from .errors import InputError, PreconditionError
from .exactfield import (
    FieldElement,
    extends,
    is_inert_cubic,
    lift_raw,
    norm_cyclic,
    raw_is_zero,
    restrict_raw,
    verify_galois_map,
)
from .projlin import ProjMatrix
from .twistlab import Cocycle, cyclic_presentation


class CyclicAlgebraSpec:
    """(chi, a): a cyclic cubic extension with generator sigma, and a in k*."""

    def __init__(self, base_field, ext_field, sigma, a, attested_disc=None, name=""):
        if not extends(ext_field, base_field):
            raise InputError("the extension tower must extend the base tower")
        if ext_field.degree() != 3 * base_field.degree():
            raise InputError("the extension must have degree 3 over the base")
        if sigma.order != 3:
            raise InputError("the chosen Galois generator must have order 3")
        ok, rep = verify_galois_map(sigma)
        if not ok:
            raise InputError("sigma fails verification: " + "; ".join(rep))
        if isinstance(a, FieldElement):
            if a.field != base_field:
                raise InputError("a must live in the base field")
        else:
            a = base_field.scalar(a)
        if a.is_zero():
            raise InputError("a must be nonzero")
        self.base_field = base_field
        self.ext_field = ext_field
        self.sigma = sigma
        self.a = a
        self.attested_disc = attested_disc
        self.name = name

    def lift_a(self):
        return FieldElement(
            self.ext_field, lift_raw(self.ext_field, self.base_field, self.a.value)
        )


def pgl3_cocycle_of(spec):
    """The PGL_3 cocycle of the algebra: sigma -> companion matrix of a."""
    L = spec.ext_field
    aL = spec.lift_a()
    zero, one = L.zero(), L.one()
    companion = ProjMatrix(
        L,
        [[zero, zero, aL], [one, zero, zero], [zero, one, zero]],
    )
    pres = cyclic_presentation(L, spec.sigma, "s")
    pres.base = spec.base_field
    return Cocycle(pres, {"s": companion})


# ---------------------------------------------------------------------------
# norm triviality


class NormVerdict:
    def __init__(self, status, witness=None, obstruction=None, report=()):
        self.status = status  # "trivial" | "nontrivial" | "undecided"
        self.witness = witness
        self.obstruction = obstruction
        self.report = list(report)

    def __repr__(self):
        return f"NormVerdict({self.status})"


def norm_triviality(spec, search_bound=50):
    """Decide whether a is a norm from L, as far as the toolbox reaches.

    Local obstructions run first; a successful witness search returns the
    witness x with N(x) = a exactly.  The search is a semi-decision, so the
    fall-through answer is "undecided".
    """
    report = []
    obstruction = _inert_prime_test(spec, report)
    if obstruction:
        return NormVerdict("nontrivial", obstruction=obstruction, report=report)
    obstruction = _ramified_unit_test(spec, report)
    if obstruction:
        return NormVerdict("nontrivial", obstruction=obstruction, report=report)
    witness = _norm_witness_search(spec, search_bound, report)
    if witness is not None:
        return NormVerdict("trivial", witness=witness, report=report)
    report.append(f"no witness of height <= {search_bound}; no local test applies")
    return NormVerdict("undecided", report=report)


def _rational_constant(desc, raw):
    from .polyalg import _iter_base

    flat = list(_iter_base(desc, raw))
    if any(f != 0 for f in flat[1:]):
        return None
    return flat[0]


def _inert_prime_test(spec, report):
    """a has valuation coprime to 3 at a prime inert in L/Q;  k = Q only."""
    k, L = spec.base_field, spec.ext_field
    if k.height != 0 or k.characteristic or L.height != 1:
        return None
    minpoly = []
    for c in L.levels[0].minpoly:
        if not isinstance(c, Fraction) or c.denominator != 1:
            return None
        minpoly.append(int(c))
    a = spec.a.value
    for p, v in _rational_valuations(a):
        if v % 3 == 0:
            continue
        verdict, rep = is_inert_cubic(minpoly, p, attested_disc=spec.attested_disc)
        report.extend(f"inert test at {p}: {line}" for line in rep)
        if verdict == "inert":
            report.append(
                f"{p} is inert in the extension and v_{p}(a) = {v} is not 0 mod 3"
            )
            return {"test": "inert-prime", "prime": p, "valuation": v}
    return None


def _rational_valuations(x):
    x = Fraction(x)
    out = {}
    for n, sign in ((x.numerator, 1), (x.denominator, -1)):
        n = abs(n)
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, 0) + sign
                n //= d
            d += 1
        if n > 1:
            out[n] = out.get(n, 0) + sign
    return sorted(out.items())


def _ramified_unit_test(spec, report):
    """Non-cube residue of the unit a at a tame totally ramified prime.

    Applies to k = Q(zeta_3) and L = k(m^(1/3)) with m a rational integer:
    at a rational prime p = 1 mod 3 with p | m, p^2 not dividing m and p not
    dividing 3a, the extension is totally and tamely ramified above p, so a
    unit that is a norm must reduce to a cube in the residue field F_p.
    """
    k, L = spec.base_field, spec.ext_field
    if k.characteristic or k.height != 1 or L.height != 2:
        return None
    if [str(c) for c in [k.levels[0].minpoly[i] for i in range(3)]] != ["1", "1", "1"]:
        return None
    top = L.levels[1].minpoly
    if not raw_is_zero(L, top[1], 1) or not raw_is_zero(L, top[2], 1):
        return None
    m_raw = _rational_constant_level1(top[0])
    if m_raw is None or m_raw.denominator != 1:
        return None
    m = -int(m_raw)  # minpoly is y^3 - m
    if m == 0:
        return None
    a = spec.a.value  # pair (u, v) = u + v*zeta
    u, v = a
    for p, e in _rational_valuations(Fraction(m)):
        if e != 1 or p % 3 != 1:
            continue
        if u.denominator % p == 0 or v.denominator % p == 0:
            continue
        roots = [r for r in range(p) if (r * r + r + 1) % p == 0]
        for r in roots:
            residue = (
                u.numerator * pow(u.denominator, -1, p)
                + v.numerator * pow(v.denominator, -1, p) * r
            ) % p
            if residue == 0:
                report.append(f"ramified test at ({p}, zeta->{r}): a is not a unit")
                break
            if pow(residue, (p - 1) // gcd(3, p - 1), p) != 1:
                report.append(
                    f"ramified test: a = {residue} mod the prime ({p}, zeta->{r}) "
                    f"and {residue} is not a cube mod {p}"
                )
                return {
                    "test": "ramified-unit",
                    "prime": p,
                    "zeta_image": r,
                    "residue": residue,
                }
        else:
            report.append(f"ramified test at {p}: all residues are cubes")
    return None


def _rational_constant_level1(raw):
    # raw is a level-1 value (tuple of Fractions); rational iff tail vanishes
    if any(c != 0 for c in raw[1:]):
        return None
    return raw[0]


def _norm_witness_search(spec, bound, report):
    """Search x = (c0 + c1*g + c2*g^2) / t with small integral coordinates.

    Norms scale by cubes, so it suffices to enumerate integral coordinate
    vectors y and accept when N(y)/a is the cube of a rational t; the witness
    is then y/t.  Coordinates run over the base field's power basis with
    integer entries of increasing sup-norm.
    """
    k, L = spec.base_field, spec.ext_field
    kdim = k.degree()
    if kdim > 2:
        return None
    gen = L.gen(-1)
    basis = [L.one(), gen, gen * gen]
    if kdim == 2:
        zk = FieldElement(L, lift_raw(L, k, k.gen(0).value))
        basis = [b * z for b in basis for z in (L.one(), zk)]
    sigma = spec.sigma
    a = spec.a
    cap = min(bound, 3)
    tried = 0
    for h in range(1, cap + 1):
        for coords in iproduct(range(-h, h + 1), repeat=len(basis)):
            if max((abs(c) for c in coords), default=0) != h:
                continue
            tried += 1
            y = L.zero()
            for c, b in zip(coords, basis):
                if c:
                    y = y + b * c
            if y.is_zero():
                continue
            n = norm_cyclic(sigma, y)
            ratio_raw = restrict_raw(L, k, (n / FieldElement(L, lift_raw(L, k, a.value))).value)
            if ratio_raw is None:
                continue
            ratio = _rational_constant(k, ratio_raw)
            if ratio is None or ratio <= 0:
                continue
            t = _rational_cube_root(ratio)
            if t is None:
                continue
            witness = y * (Fraction(1) / t)
            check = norm_cyclic(sigma, witness)
            if restrict_raw(L, k, check.value) == a.value:
                report.append(
                    f"witness found at height {h} after {tried} candidates"
                )
                return witness
    return None


def _rational_cube_root(x):
    x = Fraction(x)
    n = _int_cube_root(x.numerator)
    d = _int_cube_root(x.denominator)
    if n is None or d is None:
        return None
    return Fraction(n, d)


def _int_cube_root(n):
    if n < 0:
        r = _int_cube_root(-n)
        return None if r is None else -r
    r = round(n ** (1 / 3)) if n < 10**15 else int(n ** (1 / 3))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == n:
            return c
    return None


# ---------------------------------------------------------------------------
# standard-form recognition of cyclic order-3 cocycles


def classify_standard_sigma_image(xi, base_field=None):
    """Recognize a cyclic order-3 cocycle as a cyclic algebra (chi, a).

    The single generator value must be a monomial matrix whose nonzero
    pattern is a 3-cycle; any such matrix is conjugate over the base field to
    the standard companion form, with a equal to the product of its three
    nonzero entries (well-defined modulo cubes; the canonical scaling fixes
    the reported value).  Returns (spec, detail) or (None, detail).
    """
    ok, rep = _verify_cyclic3(xi)
    if not ok:
        raise PreconditionError("unverified cocycle: " + "; ".join(rep))
    pres = xi.presentation
    names = pres.generator_names()
    # locate the unique non-identity value
    value = None
    for name in names:
        v = xi.value(name)
        if not v.is_identity():
            if value is not None:
                return None, {"reason": "more than one nontrivial generator value"}
            value = v
            sigma_name = name
    if value is None:
        # the trivial cocycle: the split algebra (chi, 1)
        base = base_field or getattr(pres, "base", None)
        if base is None:
            return None, {"reason": "no base field attached to the presentation"}
        sigma = next(iter(pres.maps.values()))
        spec = CyclicAlgebraSpec(base, pres.field, sigma, base.one())
        return spec, {"pattern": "identity", "a": "1"}
    if value.n != 3:
        return None, {"reason": "value is not 3x3"}
    L = value.field
    pattern = {}
    for i in range(3):
        nz = [j for j in range(3) if not raw_is_zero(L, value.rows[i][j])]
        if len(nz) != 1:
            return None, {"reason": "value is not a monomial matrix"}
        pattern[i] = nz[0]
    if sorted(pattern.values()) != [0, 1, 2]:
        return None, {"reason": "value is not a monomial matrix"}
    if any(pattern[i] == i for i in pattern):
        return None, {"reason": "nonzero pattern is not a 3-cycle"}
    prod = L.one()
    for i in range(3):
        prod = prod * FieldElement(L, value.rows[i][pattern[i]])
    base = base_field or getattr(pres, "base", None)
    if base is None:
        return None, {"reason": "no base field attached to the presentation"}
    down = restrict_raw(L, base, prod.value)
    if down is None:
        return None, {"reason": "entry product does not lie in the base field"}
    sigma = pres.maps[sigma_name]
    spec = CyclicAlgebraSpec(base, L, sigma, FieldElement(base, down))
    detail = {
        "pattern": {i: pattern[i] for i in range(3)},
        "a": FieldElement(base, down).serialize(),
    }
    return spec, detail


def _verify_cyclic3(xi):
    from .twistlab import verify_cocycle

    pres = xi.presentation
    sizes = [len(w) for w in pres.relations]
    if not any(s == 3 for s in sizes):
        return False, ["presentation is not a cyclic order-3 quotient"]
    return verify_cocycle(xi)
