import random

import pytest

from ptl import fixtures
from ptl.errors import InputError, NonInvertible, PreconditionError
from ptl.exactfield import finite_extension, frobenius, prime_field, rationals
from ptl.projlin import (
    MatrixGroup,
    ProjMatrix,
    diagonal,
    galois_on_matrix,
    group_closure,
    identity,
    matrix_to_text,
    parse_matrix,
    proj_eq,
    proj_inv,
    proj_mul,
)

Q = rationals()


class TestProjectiveBasics:
    def test_companion_cube_is_projectively_trivial(self):
        phi = fixtures.matrix("phi_section2")
        assert (phi**3).is_identity()
        assert not (phi**2).is_identity()

    def test_scalars_are_invisible(self):
        five_i = ProjMatrix(Q, [[Q.scalar(5 if i == j else 0) for j in range(3)] for i in range(3)])
        assert proj_eq(identity(Q, 3), five_i)

    def test_product_of_t_and_u_has_order_three(self):
        K = fixtures.field("q_zeta3")
        TU = proj_mul(fixtures.matrix("T"), fixtures.matrix("U"))
        assert (TU**3).is_identity()
        assert not TU.is_identity()
        # direct multiplication oracle: [Z:X:Y] then scaling Z by zeta gives
        # the monomial map [zeta Z:X:Y]
        z = K.gen(0)
        expected = ProjMatrix(
            K,
            [
                [K.zero(), K.zero(), z],
                [K.one(), K.zero(), K.zero()],
                [K.zero(), K.one(), K.zero()],
            ],
        )
        assert proj_eq(TU, expected)

    def test_singular_matrix_rejected(self):
        with pytest.raises(NonInvertible):
            ProjMatrix(Q, [[Q.one(), Q.one(), Q.zero()]] * 3)

    def test_inverse(self):
        phi = fixtures.matrix("phi_section2")
        assert (phi * proj_inv(phi)).is_identity()

    def test_canonicalization_idempotent(self):
        rng = random.Random(2)
        F31 = prime_field(31)
        for _ in range(30):
            rows = [[F31.scalar(rng.randrange(31)) for _ in range(3)] for _ in range(3)]
            try:
                m = ProjMatrix(F31, rows)
            except NonInvertible:
                continue
            again = ProjMatrix(F31, [list(r) for r in m.rows])
            assert m == again

    def test_proj_eq_is_equivalence(self):
        K = fixtures.field("q_zeta3")
        T = fixtures.matrix("T")
        z = K.gen(0)
        scaled = ProjMatrix(K, [[z * K.element(c) for c in row] for row in T.rows])
        assert proj_eq(T, T)
        assert proj_eq(T, scaled) and proj_eq(scaled, T)


class TestGaloisAction:
    def test_rational_matrix_fixed(self):
        sigma = fixtures.qf_sigma()
        QF = sigma.field
        phi = fixtures.matrix("phi_section2")
        assert galois_on_matrix(sigma, phi) == phi

    def test_diagonal_kummer_action(self):
        L = fixtures.field("q_zeta3_cbrt7")
        sigma = fixtures.cbrt7_sigma()
        z, w = L.gen(0), L.gen(1)
        D = diagonal(L, [L.one(), w, w * w])
        expected = diagonal(L, [L.one(), z * w, z * z * w * w])
        assert galois_on_matrix(sigma, D) == expected

    def test_frobenius_powers_entries(self):
        F = finite_extension(31, "eta", [-25, 0, 0, 1])
        pi = frobenius(F)
        eta = F.gen(0)
        D = diagonal(F, [F.one(), eta, eta * eta])
        image = galois_on_matrix(pi, D)
        assert image == diagonal(F, [F.one(), eta**31, (eta * eta) ** 31])

    def test_action_commutes_with_product(self):
        rng = random.Random(9)
        L = fixtures.field("q_zeta3_cbrt7")
        sigma = fixtures.cbrt7_sigma()
        basis = [L.one(), L.gen(0), L.gen(1), L.gen(0) * L.gen(1)]

        def rand_matrix():
            while True:
                rows = []
                for _ in range(3):
                    row = []
                    for _ in range(3):
                        x = L.zero()
                        for g in basis:
                            x = x + g * rng.randrange(-1, 2)
                        row.append(x)
                    rows.append(row)
                try:
                    return ProjMatrix(L, rows)
                except NonInvertible:
                    continue

        for _ in range(25):
            A, B = rand_matrix(), rand_matrix()
            assert galois_on_matrix(sigma, A * B) == galois_on_matrix(
                sigma, A
            ) * galois_on_matrix(sigma, B)


class TestClosure:
    def test_family_symmetry_group_order(self):
        gens = [fixtures.matrix(n) for n in ("R", "T", "U")]
        group = group_closure(gens)
        assert group.order == 54

    def test_cyclic_shift_order_three(self):
        assert group_closure([parse_matrix(Q, "[Y:Z:X]")]).order == 3

    def test_identity_alone(self):
        assert group_closure([identity(Q, 3)]).order == 1

    def test_closure_is_closed(self):
        group = group_closure([parse_matrix(Q, "[Y:Z:X]"), parse_matrix(Q, "[Y:X:Z]")])
        assert group.order == 6
        assert group.verify_closed()

    def test_cap_exceeded(self):
        with pytest.raises(PreconditionError):
            group_closure([fixtures.matrix(n) for n in ("R", "T", "U")], cap=10)


class TestMatrixIO:
    def test_bracket_notation(self):
        m = parse_matrix(Q, "[Y:Z:3X]")
        assert m.rows[2][0] == Q.scalar(3).value or m.rows == parse_matrix(
            Q, [[0, 1, 0], [0, 0, 1], [3, 0, 0]]
        ).rows

    def test_bracket_with_element_coefficient(self):
        K = fixtures.field("q_zeta3")
        m = parse_matrix(K, "[X:Y:[0,1]Z]")
        assert m == fixtures.matrix("U")

    def test_round_trip(self):
        import json

        L = fixtures.field("q_zeta3_cbrt7")
        phi = fixtures.matrix("phi10")
        doc = json.loads(matrix_to_text(phi))
        assert parse_matrix(L, doc) == phi

    def test_bad_dimension(self):
        with pytest.raises(InputError):
            ProjMatrix(Q, [[Q.one(), Q.zero()], [Q.zero(),]])
