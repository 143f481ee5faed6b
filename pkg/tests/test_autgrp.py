import pytest

from ptl import fixtures
from ptl.autgrp import (
    cyclotomic_field,
    enumerate_diagonal_autos,
    is_automorphism,
    verify_group_order,
)
from ptl.errors import PreconditionError
from ptl.exactfield import prime_field, raw_scalar
from ptl.polyalg import MultiPoly, PlaneCurve, poly_from_text
from ptl.projlin import diagonal, parse_matrix

V = ("X", "Y", "Z")


def family_curve(d, second="Y"):
    Q = fixtures.field("q")
    if second == "Y":
        text = f"1*X^{d} + 1*Y^{d} + 1*X*Z^{d-1}"
    else:
        text = f"1*X^{d} + 1*Y^{d-1}*Z + 1*X*Z^{d-1}"
    return PlaneCurve(poly_from_text(Q, V, text))


class TestIsAutomorphism:
    def test_swap_on_family(self):
        K = fixtures.field("q_zeta3")
        curve = fixtures.ca_curve(K, 3)
        lam = is_automorphism(curve, fixtures.matrix("R"))
        assert lam == K.one()

    def test_cyclic_shift_on_quintic(self):
        Q = fixtures.field("q")
        lam = is_automorphism(fixtures.curve("quintic_cyclic3"), fixtures.matrix("alpha_quintic"))
        assert lam == Q.one()

    def test_non_automorphism(self):
        # scaling Z by 2 scales Z^6 by 64 but X^6 by 1
        K = fixtures.field("q_zeta3")
        curve = fixtures.ca_curve(K, 3)
        M = diagonal(K, [K.one(), K.one(), K.scalar(2)])
        assert is_automorphism(curve, M) is None


class TestDiagonalEnumeration:
    def test_family_one_cyclic_of_order_d_times_d_minus_1(self):
        for d in (5, 6):
            ds = enumerate_diagonal_autos(family_curve(d))
            assert ds.order == d * (d - 1)
            assert ds.is_cyclic()
            assert ds.contains_exponents(d * (d - 1), d - 1, d)

    def test_family_two_order(self):
        ds = enumerate_diagonal_autos(family_curve(5, second="Y4Z"))
        assert ds.order == 16
        assert ds.contains_exponents(16, 1, 12)

    def test_fermat_order_d_squared(self):
        Q = fixtures.field("q")
        for d in (4, 5, 6):
            f = poly_from_text(Q, V, f"1*X^{d} + 1*Y^{d} + 1*Z^{d}")
            assert enumerate_diagonal_autos(PlaneCurve(f)).order == d * d

    def test_quintic_trivial(self):
        ds = enumerate_diagonal_autos(fixtures.curve("quintic_cyclic3"))
        assert ds.is_trivial()

    def test_characteristic_collision_rejected(self):
        F5 = prime_field(5)
        f = poly_from_text(F5, V, "1*X^4 + 1*Y^4 + 1*X*Z^3")
        # the solution orders are 4 and 12; char 5 is fine
        assert enumerate_diagonal_autos(PlaneCurve(f)).order == 12
        g = poly_from_text(F5, V, "1*X^10 + 1*Y^10 + 1*Z^10")
        with pytest.raises(PreconditionError):
            enumerate_diagonal_autos(PlaneCurve(g))

    def test_verify_elements_exactly(self):
        ds = enumerate_diagonal_autos(family_curve(5))
        assert ds.verify()

    @pytest.mark.parametrize(
        "name", ["quintic_cyclic3", "fermat6"]
    )
    def test_brute_force_agreement(self, name):
        # oracle: test every diag(1, zeta_n^a, zeta_n^b) for n up to 24
        curve = fixtures.curve(name)
        ds = enumerate_diagonal_autos(curve)
        self._check_brute(curve, ds, nmax=24)

    def test_brute_force_agreement_family(self):
        curve = family_curve(5)
        ds = enumerate_diagonal_autos(curve)
        self._check_brute(curve, ds, nmax=24)

    @staticmethod
    def _check_brute(curve, ds, nmax):
        # direct oracle in the cyclotomic field: diag(1, zeta^a, zeta^b)
        # preserves the form iff every monomial picks up the same scaling
        # factor zeta^(a e2 + b e3)
        exps = sorted(curve.form.terms)
        for n in range(1, nmax + 1):
            F = cyclotomic_field(n)
            if F.height:
                zeta = F.gen(0)
            else:
                zeta = F.scalar(-1) if n == 2 else F.one()
            powers = [F.one()]
            for _ in range(n - 1):
                powers.append(powers[-1] * zeta)
            for a in range(n):
                for b in range(n):
                    factors = {powers[(a * e[1] + b * e[2]) % n] for e in exps}
                    got = len(factors) == 1
                    assert got == ds.contains_exponents(n, a, b), (n, a, b)

    def test_closed_under_composition(self):
        ds = enumerate_diagonal_autos(family_curve(5))
        n = ds.modulus
        elems = ds.elements
        for a1, b1 in list(elems)[:10]:
            for a2, b2 in list(elems)[:10]:
                assert ((a1 + a2) % n, (b1 + b2) % n) in elems


class TestVerifyGroupOrder:
    def test_family_group_order_54(self):
        K = fixtures.field("q_zeta3")
        curve = fixtures.ca_curve(K, 3)
        gens = [fixtures.matrix(n) for n in ("R", "T", "U")]
        ok, report, group = verify_group_order(curve, gens, 54)
        assert ok, report
        assert group.order == 54

    def test_quintic_group_order_3(self):
        ok, _, _ = verify_group_order(
            fixtures.curve("quintic_cyclic3"), [fixtures.matrix("alpha_quintic")], 3
        )
        assert ok

    def test_wrong_order_refuted(self):
        Q = fixtures.field("q")
        K = fixtures.field("q_zeta3")
        curve = fixtures.ca_curve(K, 3)
        from ptl.projlin import identity

        ok, report, _ = verify_group_order(curve, [identity(K, 3)], 2)
        assert not ok

    def test_non_automorphism_generator_reported(self):
        K = fixtures.field("q_zeta3")
        curve = fixtures.ca_curve(K, 3)
        bad = diagonal(K, [K.one(), K.one(), K.scalar(2)])
        with pytest.raises(PreconditionError, match="generator 0"):
            verify_group_order(curve, [bad], 1)

    def test_products_of_automorphisms_are_automorphisms(self):
        K = fixtures.field("q_zeta3")
        curve = fixtures.ca_curve(K, 3)
        gens = [fixtures.matrix(n) for n in ("R", "T", "U")]
        _, _, group = verify_group_order(curve, gens, 54)
        for m in list(group)[:20]:
            assert is_automorphism(curve, m) is not None
