import pytest

from ptl import fixtures
from ptl.errors import CheckRefuted, InputError, PreconditionError
from ptl.exactfield import (
    extends,
    finite_extension,
    frobenius,
    identity_map,
    lift_raw,
    prime_field,
)
from ptl.polyalg import MultiPoly, PlaneCurve, poly_from_text, proportionality, substitute_linear
from ptl.projlin import (
    MatrixGroup,
    ProjMatrix,
    diagonal,
    group_closure,
    identity,
    parse_matrix,
)
from ptl.twistlab import (
    Cocycle,
    GaloisPresentation,
    MUST_BE_PLANE,
    POSSIBLY_OBSTRUCTED,
    cyclic_coinvariant_count,
    cyclic_presentation,
    diagonal_twist,
    family_classes_fq,
    h1_frobenius,
    obstruction_classifier,
    representative_curve,
    twist_from_splitting,
    verify_cocycle,
)

V = ("X", "Y", "Z")


class TestVerifyCocycle:
    def test_companion_with_two(self):
        xi = fixtures.load_cocycle("section2")
        ok, report = verify_cocycle(xi)
        assert ok, report

    def test_trivial(self):
        ok, _ = verify_cocycle(fixtures.load_cocycle("trivial"))
        assert ok

    def test_order_mismatch_refuted(self):
        # an order-2 value on an order-3 relation cannot satisfy the
        # twisted-product condition
        ok, report = verify_cocycle(fixtures.load_cocycle("broken"))
        assert not ok
        assert any("twisted product" in line for line in report)

    def test_ambient_membership_enforced(self):
        QF = fixtures.field("qf")
        pres = cyclic_presentation(QF, fixtures.qf_sigma(), "s")
        outside = diagonal(QF, [QF.one(), QF.one(), QF.scalar(5)])
        xi = Cocycle(pres, {"s": outside}, ambient=MatrixGroup(QF, [identity(QF, 3)], []))
        with pytest.raises(PreconditionError):
            verify_cocycle(xi)


class TestTwistFromSplitting:
    def test_identity_matrix_gives_back_the_curve(self):
        QF = fixtures.field("qf")
        Q = fixtures.field("q")
        curve = PlaneCurve(poly_from_text(Q, V, "1*X^4 + 1*Y^4 + 1*Z^4"))
        pres = cyclic_presentation(QF, fixtures.qf_sigma(), "s")
        result = twist_from_splitting(curve, identity(QF, 3), pres)
        assert result.curve.form == curve.form
        assert result.cocycle.value("s").is_identity()

    def test_diagonal_splitting_over_f41(self):
        # g a generator of F_41*: the matrix diag(u, 1, u) over F_41[u]/(u^5-g)
        # produces the rational model g X^5 + Y^5 + g X Z^4 with cocycle in
        # the diagonal symmetry group
        q = 41
        g = next(x for x in range(2, q) if all(pow(x, (q - 1) // p, q) != 1 for p in (2, 5)))
        Fq = prime_field(q)
        L = finite_extension(q, "u", [-g, 0, 0, 0, 0, 1])
        u = L.gen(0)
        curve = representative_curve(Fq, 5, 1, 1, 1)
        pres = cyclic_presentation(L, frobenius(L, "pi"), "pi")
        M = diagonal(L, [u, L.one(), u])
        result = twist_from_splitting(curve, M, pres)
        expected = representative_curve(Fq, 5, 1, g, g)
        lam = proportionality(result.curve.form, expected.form)
        assert lam is not None
        value = result.cocycle.value("pi")
        group = group_closure(
            [diagonal(L, [L.one(), L.scalar(pow(g, 2 * 4, q)), L.scalar(pow(g, 2 * 5, q))])]
        )
        assert value in group

    def test_round_trip_recovers_the_form(self):
        q = 41
        g = 6
        Fq = prime_field(q)
        L = finite_extension(q, "u", [-g, 0, 0, 0, 0, 1])
        u = L.gen(0)
        curve = representative_curve(Fq, 5, 1, 1, 1)
        pres = cyclic_presentation(L, frobenius(L, "pi"), "pi")
        M = diagonal(L, [u, L.one(), u])
        result = twist_from_splitting(curve, M, pres)
        lifted_model = MultiPoly(
            L, V, {e: lift_raw(L, Fq, c) for e, c in result.curve.form.terms.items()}
        )
        back = substitute_linear(lifted_model, M.inv())
        lifted_original = MultiPoly(
            L, V, {e: lift_raw(L, Fq, c) for e, c in curve.form.terms.items()}
        )
        assert proportionality(back, lifted_original) is not None

    def test_irrational_composition_refused(self):
        q = 41
        Fq = prime_field(q)
        L = finite_extension(q, "u", [-6, 0, 0, 0, 0, 1])
        u = L.gen(0)
        curve = representative_curve(Fq, 5, 1, 1, 1)
        pres = cyclic_presentation(L, frobenius(L, "pi"), "pi")
        # diag(u, 1, 1) scales X^5 by u^5 = 6 but X Z^4 by u: not rational
        with pytest.raises(CheckRefuted):
            twist_from_splitting(curve, diagonal(L, [u, L.one(), L.one()]), pres)


class TestDiagonalTwist:
    def test_identity(self):
        Fq = prime_field(31)
        curve = representative_curve(Fq, 5, 1, 1, 1)
        assert diagonal_twist(curve, identity(Fq, 3)).form == curve.form

    def test_family_representative(self):
        q = 41
        g = 6
        Fq = prime_field(q)
        L = finite_extension(q, "u", [-g, 0, 0, 0, 0, 1])
        u = L.gen(0)
        curve = representative_curve(Fq, 5, 1, 1, 1)
        model = diagonal_twist(curve, diagonal(L, [u, L.one(), u]))
        assert proportionality(model.form, representative_curve(Fq, 5, 1, g, g).form)

    def test_non_diagonal_rejected(self):
        Fq = prime_field(31)
        curve = representative_curve(Fq, 5, 1, 1, 1)
        with pytest.raises(InputError):
            diagonal_twist(curve, parse_matrix(Fq, "[Y:Z:X]"))


class TestFamilyClasses:
    @pytest.mark.parametrize(
        "d,q,family,expected",
        [(5, 41, 1, 20), (5, 31, 1, 10), (5, 61, 1, 20), (5, 31, 2, 2), (5, 61, 2, 4)],
    )
    def test_counts_match_cohomology(self, d, q, family, expected):
        rep = family_classes_fq(d, q, family, check_smooth=False)
        assert rep.total_count == expected
        assert rep.h1_count == expected
        assert rep.counts_agree()

    def test_trivial_class_flagged(self):
        rep = family_classes_fq(5, 31, 1, check_smooth=False)
        trivial = [c for c in rep.classes if c.is_trivial_class]
        assert len(trivial) == 1
        assert not trivial[0].meets_literal_set

    def test_every_unit_a_fifth_power_collapses_the_a_direction(self):
        # q = 43: gcd(5, 42) = 1 so the literal non-power set is empty and
        # only gcd(20, 42) = 2 classes remain
        rep = family_classes_fq(5, 43, 1, check_smooth=False)
        assert rep.total_count == 2
        assert rep.literal_count == 0
        assert rep.counts_agree()

    def test_representatives_smooth(self):
        rep = family_classes_fq(5, 31, 2)
        assert all(c.smooth for c in rep.classes)

    def test_char_bound(self):
        with pytest.raises(PreconditionError):
            family_classes_fq(5, 7, 1)

    def test_orbit_sizes_partition_the_units(self):
        rep = family_classes_fq(5, 31, 1, check_smooth=False)
        assert sum(c.size for c in rep.classes) == 30 * 30


class TestH1Frobenius:
    def test_trivial_action_counts_elements(self):
        F31 = prime_field(31)
        group = group_closure([parse_matrix(F31, "[Y:Z:X]")])
        classes = h1_frobenius(group, identity_map(F31))
        assert len(classes) == 3

    def test_inversion_action_single_class(self):
        # mu_3 inside F_25; the 5-power Frobenius inverts it, and
        # (pi - 1) is then surjective on Z/3
        F25 = finite_extension(5, "z", [1, 1, 1])
        z = F25.gen(0)
        group = group_closure([diagonal(F25, [F25.one(), z, F25.one()])])
        assert group.order == 3
        classes = h1_frobenius(group, frobenius(F25, "pi"))
        assert len(classes) == 1
        assert cyclic_coinvariant_count(3, 5) == 1

    def test_order54_group_against_independent_enumeration(self):
        F25 = finite_extension(5, "z", [1, 1, 1])
        z = F25.gen(0)
        R = parse_matrix(F25, "[Y:X:Z]")
        T = parse_matrix(F25, "[Z:X:Y]")
        U = diagonal(F25, [F25.one(), F25.one(), z])
        group = group_closure([R, T, U])
        assert group.order == 54
        pi = frobenius(F25, "pi")
        classes = h1_frobenius(group, pi)
        # independent oracle: orbit partition computed with a different
        # traversal
        from ptl.projlin import galois_on_matrix

        elems = list(group)
        images = {m.key(): galois_on_matrix(pi, m) for m in elems}
        seen = set()
        count = 0
        for x in elems:
            if x.key() in seen:
                continue
            count += 1
            frontier = [x]
            while frontier:
                y = frontier.pop()
                if y.key() in seen:
                    continue
                seen.add(y.key())
                for a in elems:
                    nxt = a.inv() * y * images[a.key()]
                    if nxt.key() not in seen:
                        frontier.append(nxt)
        assert len(classes) == count
        assert sum(len(c) for c in classes) == 54

    def test_action_must_preserve_group(self):
        F25 = finite_extension(5, "z", [1, 1, 1])
        z = F25.gen(0)
        group = MatrixGroup(F25, [identity(F25, 3), diagonal(F25, [F25.one(), z, F25.one()])], [])
        with pytest.raises(PreconditionError):
            h1_frobenius(group, frobenius(F25, "pi"))


class TestCoinvariants:
    @pytest.mark.parametrize(
        "n,q,expected",
        [(20, 41, 20), (20, 31, 10), (20, 61, 20), (16, 31, 2), (16, 61, 4), (3, 31, 3), (3, 2, 1)],
    )
    def test_counts(self, n, q, expected):
        assert cyclic_coinvariant_count(n, q) == expected


class TestObstructionClassifier:
    def test_degree_coprime_to_three(self):
        verdict, _ = obstruction_classifier(5, "general")
        assert verdict == MUST_BE_PLANE

    def test_finite_field(self):
        verdict, _ = obstruction_classifier(6, "finite")
        assert verdict == MUST_BE_PLANE

    def test_rational_point(self):
        verdict, _ = obstruction_classifier(6, "general", has_rational_point=True)
        assert verdict == MUST_BE_PLANE

    def test_possibly_obstructed_with_degree_three_guarantee(self):
        verdict, report = obstruction_classifier(6, "general")
        assert verdict == POSSIBLY_OBSTRUCTED
        assert any("dividing 3" in line for line in report)

    def test_coprime_wins_regardless(self):
        for kind in ("finite", "real", "general"):
            for point in (None, True, False):
                v, _ = obstruction_classifier(7, kind, point)
                assert v == MUST_BE_PLANE

    def test_degree_bound(self):
        with pytest.raises(InputError):
            obstruction_classifier(3)


class TestPresentation:
    def test_relation_words_with_exponents(self):
        QF = fixtures.field("qf")
        pres = GaloisPresentation(QF, {"s": fixtures.qf_sigma()}, [["s^3"]])
        ok, report = pres.verify()
        assert ok, report

    def test_bad_relation_detected(self):
        QF = fixtures.field("qf")
        pres = GaloisPresentation(QF, {"s": fixtures.qf_sigma()}, [["s", "s"]])
        ok, report = pres.verify()
        assert not ok
