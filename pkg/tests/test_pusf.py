"""
Test p-unconditional Schauder frames generated by group representations.

These tests ensure that:
1. Analysis, synthesis and Gramian operators place functionals and vectors correctly
2. verify_p_usf separates reconstruction, isometry and projection failures
3. Group-matrix Gramians and shift invariance agree on group and non-group pairs
4. Representations rebuilt from a Gramian regenerate the input families
5. The Gramian commutes with lambda and decomposes over rho
6. orbit_pair moves a group-p-USF inside its orbit and rejects bad operators
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import group_pairs, make_group, non_group_pairs
from gsframes.group_core import build_abelian
from gsframes.lp_ops import LinOp, left_regular, right_regular
from gsframes.numerics import Tolerances
from gsframes.pusf import (
    AmbientNorm,
    FramePair,
    FrameShapeError,
    NotInCommutant,
    NotIsometry,
    OrbitMode,
    PreconditionFailed,
    RepresentationFamily,
    analysis_operator,
    build_representation,
    check_factorization,
    check_gramian_commutes_left_regular,
    check_intertwining,
    check_right_regular_decomposition,
    check_shift_invariance,
    generate_pair,
    gramian,
    gramian_right_regular_decomposition,
    is_group_matrix,
    left_regular_family,
    orbit_pair,
    random_group_pair,
    random_subspace_pair,
    regenerate_families,
    standard_pair,
    synthesis_operator,
    verify_p_usf,
)
from gsframes.reporting import Verdict

COORDINATE = AmbientNorm(kind="coordinate")


def hadamard_pair(group):
    """f_0 = zeta_0 + zeta_1, f_1 = zeta_0 - zeta_1 with tau_0 = (1,1)/2, tau_1 = (1,-1)/2."""
    return FramePair.from_families(group, [[1, 1], [1, -1]], [[0.5, 0.5], [0.5, -0.5]],
                                   p=2.0, ambient=COORDINATE)


class TestOperators:
    """Test analysis, synthesis and Gramian placement."""

    def test_standard_pair_is_identity(self, z3):
        pair = standard_pair(z3, 3.0)
        assert np.array_equal(analysis_operator(pair).matrix, np.eye(3))
        assert np.array_equal(synthesis_operator(pair).matrix, np.eye(3))
        assert np.array_equal(gramian(pair).matrix, np.eye(3))

    def test_zero_functionals(self, z2):
        pair = FramePair.from_families(z2, [[0, 0], [0, 0]], [[1, 0], [0, 1]])
        assert np.array_equal(analysis_operator(pair).matrix, np.zeros((2, 2)))

    def test_hadamard_placement(self, z2):
        pair = hadamard_pair(z2)
        assert np.array_equal(analysis_operator(pair).matrix, [[1, 1], [1, -1]])
        assert np.array_equal(synthesis_operator(pair).matrix, [[0.5, 0.5], [0.5, -0.5]])

    def test_constant_vectors(self, z2):
        pair = FramePair.from_families(z2, [[1, 0], [0, 1]], [[1, 0], [1, 0]])
        assert np.array_equal(synthesis_operator(pair).matrix, [[1, 1], [0, 0]])

    def test_rank_one_gramian(self, z3):
        tau = [[1, 2, 0]] * 3
        pair = FramePair.from_families(z3, np.eye(3), tau)
        assert np.linalg.matrix_rank(gramian(pair).matrix) == 1

    def test_shape_errors(self, z2):
        with pytest.raises(FrameShapeError):
            FramePair.from_families(z2, [[1, 0]], [[1, 0]])
        with pytest.raises(FrameShapeError):
            FramePair(z2, np.ones((2, 3)), np.ones((3, 2)))


class TestVerifyPUSF:
    """Test the p-USF verdict."""

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
    @pytest.mark.parametrize("ambient", [AmbientNorm(), COORDINATE])
    def test_standard_pair_passes(self, z4, p, ambient):
        report = verify_p_usf(standard_pair(z4, p, ambient))
        assert report.verdict is Verdict.PASS
        assert report.residuals["reconstruction"] == 0.0
        assert report.residuals["projection"] == 0.0

    def test_hadamard_pair_fails_isometry_only(self, z2):
        report = verify_p_usf(hadamard_pair(z2))
        assert report.verdict is Verdict.FAIL
        assert report.residuals["reconstruction"] <= report.thresholds["reconstruction"]
        assert report.details["isometry"] is False
        assert report.details["isometry_method"] == "structural"
        witness = np.asarray(report.witnesses["isometry"])
        theta = np.array([[1, 1], [1, -1]])
        assert abs(np.linalg.norm(theta @ witness) - np.linalg.norm(witness)) > 0.1

    def test_zero_vectors_fail_reconstruction_at_identity(self, z3):
        pair = FramePair(z3, np.eye(3), np.zeros((3, 3)))
        report = verify_p_usf(pair)
        assert report.verdict is Verdict.FAIL
        assert report.witnesses["reconstruction"] == {"basis_vector": z3.identity}

    def test_unitary_method_for_coordinate_l2(self, z4):
        pair = random_group_pair(z4, seed=5)
        q, _ = np.linalg.qr(pair.vectors.conj().T)
        unitary_pair = FramePair(z4, q, q.conj().T, 2.0, COORDINATE)
        report = verify_p_usf(unitary_pair)
        assert report.details["isometry_method"] in ("unitary", "structural")
        assert report.verdict is Verdict.PASS

    def test_sampled_method_detects_norm_mismatch(self, z4):
        pair = standard_pair(z4, 3.0, AmbientNorm(kind="coordinate", q=2.0))
        report = verify_p_usf(pair)
        assert report.details["isometry_method"] == "sampled"
        assert report.verdict is Verdict.FAIL
        assert "isometry" in report.witnesses

    @pytest.mark.parametrize("name", ["Z_2", "Z_3", "Z_4", "S_3"])
    def test_seeded_group_pairs_pass(self, name):
        group = make_group(name)
        for pair in group_pairs(group, 3, seed=40):
            assert verify_p_usf(pair).verdict is Verdict.PASS
            assert check_factorization(pair).verdict is Verdict.PASS


class TestGroupMatrix:
    """Test is_group_matrix and shift invariance."""

    @pytest.mark.parametrize("name", ["Z_2", "Z_3", "S_3"])
    def test_identity_matrix(self, name):
        group = make_group(name)
        witness = is_group_matrix(np.eye(group.order), group)
        assert witness is not None
        expected = np.zeros(group.order)
        expected[group.identity] = 1.0
        assert_allclose(witness.nu, expected)

    def test_circulant_over_z3(self, z3):
        a, b, c = 1.0 + 2j, -0.5, 3j
        m = np.array([[a, b, c], [c, a, b], [b, c, a]])
        witness = is_group_matrix(m, z3)
        assert witness is not None
        assert_allclose(witness.nu, [a, b, c])

    def test_diagonal_rejected(self, z2):
        assert is_group_matrix(np.diag([1.0, 2.0]), z2) is None

    def test_standard_pair_shift_invariant(self, s3):
        report = check_shift_invariance(standard_pair(s3))
        assert report.verdict is Verdict.PASS
        assert report.details["criteria_agree"] is True

    def test_perturbed_identity_functional(self, z3):
        functionals = np.eye(3)
        functionals[0, 0] += 1.0
        pair = FramePair(z3, functionals, np.eye(3))
        report = check_shift_invariance(pair)
        assert report.verdict is Verdict.FAIL
        u, g, h = report.witnesses["shift_invariance"]["u_g_h"]
        G = gramian(pair).matrix
        assert G[z3.mul(u, g), z3.mul(u, h)] != G[g, h]
        assert report.details["criteria_agree"] is True

    @pytest.mark.parametrize("name", ["Z_2", "Z_3", "Z_4", "S_3", "Z_3table"])
    def test_non_group_pairs_rejected(self, name):
        group = make_group(name)
        for pair in non_group_pairs(group, 7):
            assert verify_p_usf(pair).verdict is Verdict.PASS
            assert is_group_matrix(gramian(pair), group) is None
            assert check_shift_invariance(pair).verdict is Verdict.FAIL
            assert gramian_right_regular_decomposition(pair) is None

    def test_non_group_gramian_does_not_commute_with_lambda(self, z2):
        pair = random_subspace_pair(z2, seed=3)
        assert check_gramian_commutes_left_regular(pair).verdict is Verdict.FAIL


class TestRepresentation:
    """Test representation rebuilding and regeneration."""

    def test_standard_pair_gives_left_regular(self, z3):
        rep = build_representation(standard_pair(z3))
        for g in z3.elements:
            assert_allclose(rep[g].matrix, left_regular(z3, g).matrix)
        assert rep.report.verdict is Verdict.PASS

    def test_trivial_group(self):
        group = build_abelian([1])
        rep = build_representation(standard_pair(group))
        assert len(rep) == 1
        assert_allclose(rep[0].matrix, [[1.0]])

    @pytest.mark.parametrize("name", ["Z_2", "Z_3", "Z_4", "S_3", "Z_3table"])
    def test_round_trip(self, name):
        group = make_group(name)
        for pair in group_pairs(group, 7, seed=100):
            assert is_group_matrix(gramian(pair), group) is not None
            rep = build_representation(pair)
            assert rep.report.verdict is Verdict.PASS, rep.report.witnesses
            assert rep.report.residuals["homomorphism"] <= 1e-9
            regenerated = regenerate_families(rep, pair)
            assert_allclose(regenerated.functionals, pair.functionals, atol=1e-9)
            assert_allclose(regenerated.vectors, pair.vectors, atol=1e-9)
            assert check_intertwining(pair, rep).verdict is Verdict.PASS

    def test_generated_pairs_have_group_matrix_gramians(self, s3):
        rng = np.random.default_rng(8)
        rep = left_regular_family(s3)
        for _ in range(5):
            f = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            tau = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            pair = generate_pair(s3, rep, f, tau)
            assert is_group_matrix(gramian(pair), s3) is not None

    def test_non_group_pair_raises_with_report(self, z3):
        pair = random_subspace_pair(z3, seed=2)
        with pytest.raises(PreconditionFailed) as exc_info:
            build_representation(pair)
        assert exc_info.value.report.check == "shift-invariance"

    def test_non_usf_raises_with_report(self, z2):
        with pytest.raises(PreconditionFailed) as exc_info:
            build_representation(FramePair(z2, np.eye(2), np.zeros((2, 2))))
        assert exc_info.value.report.check == "p-usf"

    def test_identity_family_does_not_intertwine(self, z3):
        pair = standard_pair(z3)
        identity = RepresentationFamily(z3, [LinOp(np.eye(3), z3)] * 3)
        assert check_intertwining(pair, identity).verdict is Verdict.FAIL


class TestGramianStructure:
    """Test commutation with lambda and the rho decomposition."""

    @pytest.mark.parametrize("name", ["Z_2", "Z_4", "S_3"])
    def test_group_pairs_commute_with_lambda(self, name):
        group = make_group(name)
        for pair in group_pairs(group, 3, seed=7):
            assert check_gramian_commutes_left_regular(pair).verdict is Verdict.PASS

    def test_standard_pair_eta(self, s3):
        decomposition = gramian_right_regular_decomposition(standard_pair(s3))
        expected = np.zeros(6)
        expected[s3.identity] = 1.0
        assert_allclose(decomposition.eta, expected)

    def test_eta_is_the_identity_row(self, z3):
        pair = random_group_pair(z3, seed=12, generator=0)
        rep = build_representation(pair)
        decomposition = gramian_right_regular_decomposition(pair, rep)
        g = gramian(pair).matrix
        assert_allclose(decomposition.eta, g[z3.identity])
        assert decomposition.cross_check <= 1e-9
        combination = sum(decomposition.eta[h] * right_regular(z3, h).matrix for h in z3.elements)
        assert_allclose(combination, g, atol=1e-9)

    def test_decomposition_report(self, s3):
        pair = random_group_pair(s3, seed=4)
        rep = build_representation(pair)
        report = check_right_regular_decomposition(pair, rep)
        assert report.verdict is Verdict.PASS
        assert "eta_from_representation" in report.residuals


class TestOrbitPair:
    """Test moving a pair by isometries in the commutants."""

    def test_unimodular_scalar(self, z4):
        pair = random_group_pair(z4, seed=9)
        rep = build_representation(pair)
        c = np.exp(0.7j)
        u = LinOp(c * np.eye(pair.dim))
        moved = orbit_pair(pair, rep, u)
        e = z4.identity
        assert_allclose(moved.functional(e), pair.functional(e) / c, atol=1e-12)
        assert_allclose(moved.vector(e), c * pair.vector(e), atol=1e-12)
        assert check_shift_invariance(moved).verdict is Verdict.PASS

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
    def test_left_regular_on_z4(self, z4, p):
        pair = standard_pair(z4, p)
        rep = build_representation(pair)
        for h in z4.elements:
            moved = orbit_pair(pair, rep, left_regular(z4, h), OrbitMode.COMMUTANT)
            assert verify_p_usf(moved).verdict is Verdict.PASS
            assert check_shift_invariance(moved).verdict is Verdict.PASS

    def test_left_regular_in_double_commutant_of_s3(self, s3):
        pair = standard_pair(s3)
        rep = build_representation(pair)
        for h in s3.elements:
            moved = orbit_pair(pair, rep, left_regular(s3, h), "double-commutant")
            assert check_shift_invariance(moved).verdict is Verdict.PASS

    def test_commutant_basis_isometry(self, z4):
        # rho_h commutes with lambda(Z_4), so it lies in the commutant of the standard representation
        pair = standard_pair(z4, 3.0, COORDINATE)
        rep = build_representation(pair)
        moved = orbit_pair(pair, rep, right_regular(z4, 1))
        assert verify_p_usf(moved).verdict is Verdict.PASS

    def test_transposition_not_in_commutant(self, s3):
        pair = standard_pair(s3)
        rep = build_representation(pair)
        with pytest.raises(NotInCommutant) as exc_info:
            orbit_pair(pair, rep, left_regular(s3, 1), OrbitMode.COMMUTANT)
        assert exc_info.value.residual > 1e-9

    @pytest.mark.parametrize("ambient", [AmbientNorm(), COORDINATE])
    def test_non_unimodular_diagonal(self, z4, ambient):
        pair = standard_pair(z4, 1.0, ambient)
        rep = build_representation(pair)
        with pytest.raises(NotIsometry):
            orbit_pair(pair, rep, LinOp(np.diag([2.0, 1.0, 1.0, 1.0])))

    def test_tolerances_are_respected(self, z4):
        pair = standard_pair(z4)
        rep = build_representation(pair, Tolerances())
        moved = orbit_pair(pair, rep, LinOp(-np.eye(4)), tolerances=Tolerances())
        assert_allclose(moved.vectors, -np.eye(4))
