"""Minimal dilations, their verification, analysis/synthesis, transport."""

import numpy as np
import pytest

from framepovm import (
    FramedPOVM,
    InvalidIsometryError,
    InvalidPovmError,
    NaimarkRepresentation,
    Tolerances,
    VectorValuedMeasure,
    analysis_measure,
    check_minimality,
    intertwining_unitary,
    minimal_dilation,
    povm_from_frame,
    povm_from_fusion_frame,
    povm_from_sampled_generalized_frame,
    shuffled_dilation,
    synthesize_measure,
    transport,
    validate,
    verify_dilation,
)


class TestMinimalDilation:
    def test_orthonormal_basis(self, ons_frame):
        povm = povm_from_frame(ons_frame)
        rep = minimal_dilation(povm)
        assert rep.sharp_dim == 2
        assert rep.block_dims == (1, 1)
        gram = rep.gram()
        np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)

    def test_repeated_basis_matches_frame_synthesis(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        rep = minimal_dilation(povm)
        assert rep.sharp_dim == 3
        expected = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]], dtype=complex)
        np.testing.assert_allclose(rep.synthesis_map, expected, atol=1e-14)
        np.testing.assert_allclose(rep.gram(), np.diag([2.0, 1.0]), atol=1e-14)

    def test_fusion_blocks(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        rep = minimal_dilation(povm)
        assert rep.sharp_dim == 3
        assert rep.block_dims == (2, 1)
        np.testing.assert_allclose(rep.gram(), np.diag([1.0, 1.0, 4.0]), atol=1e-12)
        # second block is e3 scaled by the weight
        np.testing.assert_allclose(
            rep.block_of_synthesis(1), np.array([[0.0], [0.0], [2.0]]), atol=1e-12
        )

    def test_sharp_dim_counts_frame_vectors(self, gen):
        frame = gen.frame()
        rep = minimal_dilation(povm_from_frame(frame))
        assert rep.sharp_dim == len(frame.vectors)
        assert rep.block_dims == (1,) * len(frame.vectors)

    def test_rejects_invalid_povm(self):
        loose = Tolerances(psd=0.9)
        shaky = FramedPOVM(2, [np.diag([1.0, -0.5]).astype(complex)], tol=loose)
        with pytest.raises(InvalidPovmError):
            minimal_dilation(shaky)

    def test_dilation_identity_random(self, gen):
        for _ in range(20):
            povm = gen.povm()
            rep = minimal_dilation(povm)
            report = verify_dilation(povm, rep)
            assert report.ok
            assert report.max_effect_residual <= 1e-9 * report.scale
            assert report.total_residual <= 1e-9 * report.scale
            assert report.minimal


class TestVerifyDilation:
    def test_self_consistency(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        rep = minimal_dilation(povm)
        report = verify_dilation(povm, rep)
        assert report.ok and report.minimal

    def test_zeroed_synthesis_reports_effect_norm(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        rep = minimal_dilation(povm)
        zeroed = NaimarkRepresentation(
            rep.space, rep.dim, rep.block_dims,
            np.zeros_like(rep.synthesis_map), None,
        )
        report = verify_dilation(povm, zeroed)
        assert not report.ok
        worst = max(np.linalg.norm(op.matrix, 2) for op in povm.effects)
        assert abs(report.max_effect_residual - worst) <= 1e-12

    def test_tight_gram_is_scaled_identity(self, mercedes_frame):
        povm = povm_from_frame(mercedes_frame)
        rep = minimal_dilation(povm)
        report = verify_dilation(povm, rep)
        assert report.tight_residual is not None
        assert report.tight_residual <= 1e-9 * report.scale

    def test_gram_bounds_match_validate(self, gen):
        for _ in range(10):
            povm = gen.povm()
            rep = minimal_dilation(povm)
            report = verify_dilation(povm, rep)
            outcome = validate(povm)
            assert abs(report.gram_bounds[0] - outcome.bounds.lower) <= 1e-9
            assert abs(report.gram_bounds[1] - outcome.bounds.upper) <= 1e-9


class TestMinimality:
    def test_construction_is_minimal(self, gen):
        rep = minimal_dilation(gen.povm())
        assert check_minimality(rep)

    def test_padded_zero_block_is_not_minimal(self, ons_frame):
        povm = povm_from_frame(ons_frame)
        rep = minimal_dilation(povm)
        padded = NaimarkRepresentation(
            rep.space,
            rep.dim,
            (2, 1),
            np.column_stack([rep.synthesis_map[:, :1], np.zeros((2, 1)), rep.synthesis_map[:, 1:]]),
            None,
        )
        assert not check_minimality(padded)

    def test_frame_dilation_blocks_are_single_coordinates(self, repeated_frame):
        rep = minimal_dilation(povm_from_frame(repeated_frame))
        assert check_minimality(rep)


class TestAnalysisSynthesis:
    def test_orthonormal_norms(self, ons_frame):
        rep = minimal_dilation(povm_from_frame(ons_frame))
        values = analysis_measure(rep, [3.0, 4.0]).values
        norms = [np.linalg.norm(v) for v in values]
        np.testing.assert_allclose(norms, [3.0, 4.0], atol=1e-12)

    def test_repeated_magnitudes(self, repeated_frame):
        rep = minimal_dilation(povm_from_frame(repeated_frame))
        values = analysis_measure(rep, [1.0, 2.0]).values
        norms = [np.linalg.norm(v) for v in values]
        np.testing.assert_allclose(norms, [1.0, 1.0, 2.0], atol=1e-12)

    def test_zero_signal(self, ons_frame):
        rep = minimal_dilation(povm_from_frame(ons_frame))
        values = analysis_measure(rep, [0.0, 0.0]).values
        for value in values:
            np.testing.assert_array_equal(value, np.zeros(2, dtype=complex))

    def test_round_trip_is_total_effect(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        rep = minimal_dilation(povm)
        f = np.array([1.0, 2.0], dtype=complex)
        result = synthesize_measure(rep, analysis_measure(rep, f))
        np.testing.assert_allclose(result, np.diag([2.0, 1.0]) @ f, atol=1e-12)

    def test_unitary_round_trip(self, ons_frame):
        rep = minimal_dilation(povm_from_frame(ons_frame))
        f = np.array([3.0, 4.0], dtype=complex)
        np.testing.assert_allclose(
            synthesize_measure(rep, analysis_measure(rep, f)), f, atol=1e-12
        )

    def test_zero_measure(self, ons_frame):
        rep = minimal_dilation(povm_from_frame(ons_frame))
        rho = VectorValuedMeasure(
            rep.space, tuple(np.zeros(rep.sharp_dim, dtype=complex) for _ in range(2))
        )
        np.testing.assert_array_equal(synthesize_measure(rep, rho), np.zeros(2, dtype=complex))


class TestTransport:
    def test_identity(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        result = transport(np.eye(2), povm)
        np.testing.assert_allclose(result.intertwiner, np.eye(3), atol=1e-12)
        for original, moved in zip(povm.effects, result.povm.effects):
            np.testing.assert_allclose(moved.matrix, original.matrix, atol=1e-14)
        assert result.diagram_residual <= 1e-12

    def test_coordinate_swap(self):
        povm = FramedPOVM(2, [np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        result = transport(swap, povm)
        np.testing.assert_allclose(
            result.povm.effects[0].matrix, np.diag([0.0, 1.0]), atol=1e-14
        )
        np.testing.assert_allclose(
            result.povm.effects[1].matrix, np.diag([1.0, 0.0]), atol=1e-14
        )
        # blocks stay atom-indexed, so the induced block map is the identity
        np.testing.assert_allclose(result.intertwiner, np.eye(2), atol=1e-12)
        assert result.diagram_residual <= 1e-12

    def test_random_conjugation(self, gen, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        for _ in range(5):
            u = gen.unitary(2)
            result = transport(u, povm)
            assert result.diagram_residual <= 1e-9
            assert result.spectral_residual <= 1e-9

    def test_rejects_non_unitary(self, ons_frame):
        povm = povm_from_frame(ons_frame)
        with pytest.raises(InvalidIsometryError):
            transport(np.array([[1.0, 0.0], [0.0, 2.0]]), povm)

    def test_uniqueness_of_minimal_representations(self, gen):
        for _ in range(5):
            povm = gen.povm()
            canonical = minimal_dilation(povm)
            alternative = shuffled_dilation(povm, gen.rng)
            report = verify_dilation(povm, alternative)
            assert report.ok and report.minimal
            inter = intertwining_unitary(canonical, alternative)
            residual = np.linalg.norm(
                canonical.synthesis_map - alternative.synthesis_map @ inter, 2
            )
            assert residual <= 1e-9
            eye = np.eye(canonical.sharp_dim)
            assert np.linalg.norm(inter @ inter.conj().T - eye, 2) <= 1e-10
