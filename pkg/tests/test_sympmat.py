import random

import numpy as np
import pytest
import scipy.linalg

from phasework import sympmat as sm
from phasework.errors import NotSymplecticError

Q = sm.rational


def mat_eq(a, b):
    return np.all(np.asarray(a) == np.asarray(b))


class TestIsSymplectic:
    def test_j_is_symplectic(self):
        assert sm.j_matrix(1).is_symplectic()
        assert sm.j_matrix(3).is_symplectic()

    def test_dilation_generator(self):
        D = sm.dilation([[2]])
        assert mat_eq(D.mat, [[Q(1, 2), 0], [0, 2]])
        assert D.is_symplectic()

    def test_unit_shear_matrix(self):
        # upper-triangular [[1,1],[0,1]] passes the block conditions
        S = sm.SympMat([[1, 1], [0, 1]], exact=True)
        assert S.is_symplectic()
        assert sm.block_conditions(S)

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError):
            sm.SympMat(np.eye(3))

    def test_non_symplectic_rejected(self):
        with pytest.raises(NotSymplecticError):
            sm.SympMat([[2, 0], [0, 2]], exact=True)

    def test_block_conditions_match_definition(self):
        rng = random.Random(3)
        for _ in range(50):
            S = sm.random_symplectic(rng, n=2)
            assert S.is_symplectic() and sm.block_conditions(S)


class TestGenerators:
    def test_zero_shear_is_identity(self):
        V = sm.shear([[0]])
        assert mat_eq(V.mat, np.eye(2))

    def test_j_entries(self):
        assert mat_eq(sm.j_matrix(1).as_float_array(), [[0, 1], [-1, 0]])

    def test_singular_dilation_rejected(self):
        with pytest.raises(ValueError):
            sm.dilation([[0]])

    def test_asymmetric_shear_rejected(self):
        with pytest.raises(ValueError):
            sm.shear([[0, 1], [0, 0]])


class TestTensorConjugate:
    def test_tensor_identity(self):
        I = sm.SympMat(np.eye(2), exact=True)
        assert mat_eq(sm.tensor(I, I).as_float_array(), np.eye(4))

    def test_tensor_shear_rotation(self):
        c, s = np.cos(1.0), np.sin(1.0)
        S1 = sm.SympMat([[1, 2], [0, 1]], check=False)
        S2 = sm.SympMat([[c, -s], [s, c]], check=False)
        T = sm.tensor(S1, S2)
        expect = np.array([
            [1, 0, 2, 0],
            [0, c, 0, -s],
            [0, 0, 1, 0],
            [0, s, 0, c],
        ])
        assert np.allclose(T.mat, expect, atol=1e-15)

    def test_tensor_j_j(self):
        T = sm.tensor(sm.j_matrix(1), sm.j_matrix(1))
        expect = np.zeros((4, 4))
        expect[0, 2] = expect[1, 3] = 1.0
        expect[2, 0] = expect[3, 1] = -1.0
        assert mat_eq(T.as_float_array(), expect)

    def test_conjugate_examples(self):
        I = sm.SympMat(np.eye(2), exact=True)
        assert sm.conjugate(I) == I
        S = sm.SympMat([[1, 2], [0, 1]], exact=True)
        assert mat_eq(sm.conjugate(S).as_float_array(), [[1, -2], [0, 1]])
        c, s = np.cos(0.3), np.sin(0.3)
        R = sm.SympMat([[c, s], [-s, c]], check=False)
        assert np.allclose(sm.conjugate(R).mat, [[c, -s], [s, c]])

    def test_conjugate_involution_and_homomorphism(self):
        rng = random.Random(11)
        for _ in range(50):
            S1 = sm.random_symplectic(rng, n=1)
            S2 = sm.random_symplectic(rng, n=1)
            assert sm.conjugate(sm.conjugate(S1)) == S1
            assert sm.conjugate(S1 @ S2) == sm.conjugate(S1) @ sm.conjugate(S2)

    def test_tensor_homomorphism(self):
        rng = random.Random(12)
        for _ in range(30):
            S1, S2 = (sm.random_symplectic(rng, n=1) for _ in range(2))
            T1, T2 = (sm.random_symplectic(rng, n=1) for _ in range(2))
            lhs = sm.tensor(S1, S2) @ sm.tensor(T1, T2)
            rhs = sm.tensor(S1 @ T1, S2 @ T2)
            assert lhs == rhs


class TestDoubling:
    def test_identity_doubles_to_signed_diagonal(self):
        I4 = sm.SympMat(np.eye(4), exact=True)
        out = sm.doubling(I4)
        assert mat_eq(out.as_float_array(), np.diag([1, 1, 1, -1, 1, 1, 1, -1]))

    def test_wigner_projection_doubles_cleanly(self):
        A = sm.a_tau(Q(1, 2))
        out = sm.doubling(A)
        assert out == sm.doubling_closed_form(A)
        # A13 and A21 vanish, so every sign-flipped quarter either vanishes
        # or duplicates its partner
        for i in (1, 2):
            for j in (1, 3):
                pass
        assert out.is_symplectic()

    def test_product_equals_closed_form_fuzzed(self):
        rng = random.Random(21)
        for _ in range(60):
            A = sm.random_symplectic(rng, n=2, max_len=6)
            assert sm.doubling(A) == sm.doubling_closed_form(A)


class TestCovariance:
    def test_a_tau_covariance(self):
        tau = Q(1, 4)
        B = sm.covariance_matrix(sm.a_tau(tau))
        assert mat_eq(B, [[0, tau - Q(1, 2)], [tau - Q(1, 2), 0]])

    def test_wigner_covariance_vanishes(self):
        B = sm.covariance_matrix(sm.a_tau(Q(1, 2)))
        assert mat_eq(B, np.zeros((2, 2)))

    def test_stft_not_covariant(self):
        assert sm.covariance_matrix(sm.a_standard()) is None

    def test_tau_sweep_symmetric_vanishes_iff_half(self):
        for num in range(-4, 9):
            tau = Q(num, 4)
            B = sm.covariance_matrix(sm.a_tau(tau))
            assert B is not None
            assert mat_eq(B, np.asarray(B).T)
            if tau == Q(1, 2):
                assert all(x == 0 for x in np.asarray(B).flat)
            else:
                assert any(x != 0 for x in np.asarray(B).flat)

    def test_covariant_template_is_symplectic_and_roundtrips(self):
        rng = random.Random(5)
        for _ in range(20):
            a11 = [[sm.rational(rng.randint(-6, 6), rng.randint(1, 3))]]
            a21 = [[sm.rational(rng.randint(-6, 6), rng.randint(1, 3))]]
            a13 = [[sm.rational(rng.randint(-6, 6), rng.randint(1, 3))]]
            A = sm.covariant_template(a11, a21, a13)
            assert A.is_symplectic()
            B = sm.covariance_matrix(A)
            assert B is not None
            assert B[0, 0] == a13[0][0] and B[1, 1] == -a21[0][0]

    def test_doubling_preserves_covariance_with_closed_form_b(self):
        # covariant A doubles to covariant A' whose B-matrix has the
        # block-diagonal signed layout
        rng = random.Random(6)
        for _ in range(20):
            a11 = Q(rng.randint(-6, 6), rng.randint(1, 3))
            a21 = Q(rng.randint(-6, 6), rng.randint(1, 3))
            a13 = Q(rng.randint(-6, 6), rng.randint(1, 3))
            A = sm.covariant_template([[a11]], [[a21]], [[a13]])
            Bs = sm.covariance_matrix(sm.doubling(A))
            assert Bs is not None
            expect = np.array([
                [a13, 0, Q(1, 2) - a11, 0],
                [0, -a13, 0, Q(1, 2) - a11],
                [Q(1, 2) - a11, 0, -a21, 0],
                [0, Q(1, 2) - a11, 0, a21],
            ], dtype=object)
            assert mat_eq(Bs, expect)


class TestShiftInvertibility:
    def test_stft_gives_identity(self):
        assert mat_eq(sm.shift_invertibility(sm.a_standard()), np.eye(2))

    def test_wigner_gives_half_identity(self):
        E = sm.shift_invertibility(sm.a_tau(Q(1, 2)))
        assert mat_eq(E, [[Q(1, 2), 0], [0, Q(1, 2)]])

    def test_partial_ft_not_invertible(self):
        assert sm.shift_invertibility(sm.a_ft2()) is None


class TestInteraction:
    def test_identity_evolution_fixes_a(self):
        A = sm.a_tau(Q(1, 2))
        I = sm.SympMat(np.eye(2), exact=True)
        assert sm.interaction_matrix(A, I, I) == A

    def test_free_vs_rotation_example(self):
        t = 1.0
        A = sm.a_tau(0.5, exact=False)
        S1 = sm.SympMat([[1, 2 * t], [0, 1]], check=False)
        S2 = sm.SympMat([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], check=False)
        C = sm.interaction_matrix(A, S1, S2)
        EC = sm.shift_invertibility(C)
        assert np.allclose(EC, [[0.5, t], [0.0, 0.5]], atol=1e-14)
        # the product definition, not the printed matrix: row 0 carries t
        assert abs(C.mat[0, 2] - t / 2 * 2) < 1e-14

    def test_shift_invertibility_transport_fuzzed(self):
        rng = random.Random(31)
        hits = 0
        for _ in range(80):
            A = sm.random_symplectic(rng, n=2, max_len=6)
            EA = sm.shift_invertibility(A)
            if EA is None:
                continue
            hits += 1
            S1 = sm.random_symplectic(rng, n=1, max_len=6)
            S2 = sm.random_symplectic(rng, n=1, max_len=6)
            EC = sm.shift_invertibility(sm.interaction_matrix(A, S1, S2))
            assert EC is not None
            assert mat_eq(EC, EA @ S1.mat)
        assert hits >= 15


class TestHamiltonFlow:
    def test_free_particle(self):
        for t in (0.0, 0.3, 1.7, -2.2):
            St = sm.hamilton_flow(sm.QuadraticForm.free_particle(), t)
            assert np.max(np.abs(St.mat - [[1, 2 * t], [0, 1]])) < 1e-12

    def test_harmonic_oscillator(self):
        for t in (0.1, np.pi / 4, 2.5):
            St = sm.hamilton_flow(sm.QuadraticForm.harmonic_oscillator(), t)
            expect = [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]]
            assert np.max(np.abs(St.mat - expect)) < 1e-12

    def test_t_zero_identity(self):
        St = sm.hamilton_flow(sm.QuadraticForm(np.diag([0.7, 1.3])), 0.0)
        assert mat_eq(St.mat, np.eye(2))

    def test_group_law(self):
        qf = sm.QuadraticForm(np.array([[0.4, 0.1], [0.1, 1.0]]))
        for s, t in ((0.3, 0.5), (1.1, -0.4)):
            lhs = sm.hamilton_flow(qf, s + t).mat
            rhs = (sm.hamilton_flow(qf, s) @ sm.hamilton_flow(qf, t)).mat
            assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_flow_is_symplectic(self):
        qf = sm.QuadraticForm(np.array([[1.2, -0.3], [-0.3, 0.5]]))
        assert sm.hamilton_flow(qf, 0.9).is_symplectic(1e-10)

    def test_expm_against_scipy(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            M = rng.normal(size=(4, 4))
            assert np.max(np.abs(sm.expm_taylor(M) - scipy.linalg.expm(M))) < 1e-11


class TestFuzzSuite:
    def test_generator_words_symplectic(self):
        rng = random.Random(99)
        for _ in range(300):
            assert sm.random_symplectic(rng, n=1).is_symplectic()
        for _ in range(100):
            assert sm.random_symplectic(rng, n=2).is_symplectic()


class TestSerialization:
    def test_exact_roundtrip(self, tmp_path):
        rng = random.Random(1)
        S = sm.random_symplectic(rng, n=2)
        path = tmp_path / "s.csv"
        sm.save_matrix_csv(path, S)
        assert sm.load_matrix_csv(path, exact=True) == S

    def test_float_roundtrip(self, tmp_path):
        t = 0.37
        S = sm.SympMat([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], check=False)
        path = tmp_path / "s.csv"
        sm.save_matrix_csv(path, S)
        S2 = sm.load_matrix_csv(path, exact=False)
        assert np.array_equal(S2.mat, S.mat)
