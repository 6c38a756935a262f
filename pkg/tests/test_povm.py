"""Framed POVMs: constructions, axiom checks, induced measures."""

import numpy as np
import pytest

from framepovm import (
    DimensionMismatchError,
    Frame,
    FramedPOVM,
    FusionFrame,
    PovmReport,
    SampledGeneralizedFrame,
    Tolerances,
    ValidationError,
    effect,
    frame_bounds,
    induced_scalar_measure,
    is_spectral,
    measure_of,
    povm_from_frame,
    povm_from_fusion_frame,
    povm_from_sampled_generalized_frame,
    total_effect,
    validate,
)

E11 = np.diag([1.0, 0.0]).astype(complex)
E22 = np.diag([0.0, 1.0]).astype(complex)


@pytest.fixture
def coordinate_povm():
    return FramedPOVM(2, [E11, E22])


class TestConstructions:
    def test_frame_povm_orthonormal(self, ons_frame):
        povm = povm_from_frame(ons_frame)
        np.testing.assert_allclose(povm.effects[0].matrix, E11, atol=1e-14)
        np.testing.assert_allclose(povm.effects[1].matrix, E22, atol=1e-14)
        np.testing.assert_allclose(total_effect(povm), np.eye(2), atol=1e-14)

    def test_frame_povm_repeated(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        np.testing.assert_allclose(povm.effects[0].matrix, E11, atol=1e-14)
        np.testing.assert_allclose(povm.effects[1].matrix, E11, atol=1e-14)
        np.testing.assert_allclose(povm.effects[2].matrix, E22, atol=1e-14)
        np.testing.assert_allclose(total_effect(povm), np.diag([2.0, 1.0]), atol=1e-14)

    def test_frame_povm_mercedes_is_tight(self, mercedes_frame):
        povm = povm_from_frame(mercedes_frame)
        np.testing.assert_allclose(total_effect(povm), 1.5 * np.eye(2), atol=1e-12)
        assert validate(povm).tight

    def test_fusion_whole_space(self):
        fusion = FusionFrame(2, [(np.eye(2), 1.0)])
        povm = povm_from_fusion_frame(fusion)
        np.testing.assert_allclose(povm.effects[0].matrix, np.eye(2), atol=1e-14)

    def test_fusion_example(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        np.testing.assert_allclose(povm.effects[0].matrix, np.diag([1.0, 1.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(povm.effects[1].matrix, np.diag([0.0, 0.0, 4.0]), atol=1e-14)

    def test_fusion_zero_weights_not_framed(self):
        fusion = FusionFrame(2, [(np.eye(2), 0.0), (E11[:, :1], 0.0)])
        povm = povm_from_fusion_frame(fusion)
        report = validate(povm)
        assert report.is_povm
        assert not report.framed
        assert report.bounds is None

    def test_sampled_single(self):
        sampled = SampledGeneralizedFrame(2, [[1.0, 0.0]], [1.0])
        povm = povm_from_sampled_generalized_frame(sampled)
        np.testing.assert_allclose(povm.effects[0].matrix, E11, atol=1e-14)

    def test_sampled_tight_half(self):
        sampled = SampledGeneralizedFrame(2, [[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5])
        report = validate(povm_from_sampled_generalized_frame(sampled))
        assert report.tight
        assert abs(report.bounds.lower - 0.5) <= 1e-12

    def test_sampled_counting_probability(self):
        sampled = SampledGeneralizedFrame(2, [[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])
        assert validate(povm_from_sampled_generalized_frame(sampled)).probability

    def test_rejects_non_psd_effect(self):
        with pytest.raises(ValidationError, match="positivity"):
            FramedPOVM(2, [np.diag([1.0, -1.0]).astype(complex)])


class TestEffect:
    def test_empty_event_is_zero(self, coordinate_povm):
        result = effect(coordinate_povm, coordinate_povm.space.empty())
        np.testing.assert_array_equal(result, np.zeros((2, 2)))

    def test_first_two_atoms(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        event = povm.space.event(("0", "1"))
        np.testing.assert_allclose(effect(povm, event), 2.0 * E11, atol=1e-14)

    def test_trailing_split_is_exactly_additive(self, gen):
        povm = gen.povm(count=5)
        atoms = povm.space.atoms
        head = povm.space.event(atoms[:-1])
        tail = povm.space.event(atoms[-1:])
        combined = effect(povm, head) + effect(povm, tail)
        np.testing.assert_array_equal(effect(povm, povm.space.whole()), combined)


class TestValidate:
    def test_orthonormal_probability(self, ons_frame):
        report = validate(povm_from_frame(ons_frame))
        assert report.is_povm and report.framed and report.tight and report.probability
        assert abs(report.bounds.lower - 1.0) <= 1e-12
        assert abs(report.bounds.upper - 1.0) <= 1e-12

    def test_repeated_bounds(self, repeated_frame):
        report = validate(povm_from_frame(repeated_frame))
        assert report.framed and not report.tight
        assert (report.bounds.lower, report.bounds.upper) == (1.0, 2.0)

    def test_all_zero_effects(self):
        povm = FramedPOVM(2, [np.zeros((2, 2), dtype=complex)] * 3)
        report = validate(povm)
        assert report.is_povm
        assert not report.framed and not report.tight and not report.probability

    def test_report_invariants_enforced(self):
        with pytest.raises(ValidationError):
            PovmReport(
                is_povm=True, framed=False, bounds=None, tight=True,
                probability=False, spectral=None, residuals={},
            )
        with pytest.raises(ValidationError):
            PovmReport(
                is_povm=True, framed=True, bounds=None, tight=False,
                probability=True, spectral=None, residuals={},
            )

    def test_bound_transport_from_frames(self, gen):
        for _ in range(10):
            frame = gen.frame()
            bounds = frame_bounds(frame)
            report = validate(povm_from_frame(frame))
            assert abs(report.bounds.lower - bounds.lower) <= 1e-10 * bounds.upper
            assert abs(report.bounds.upper - bounds.upper) <= 1e-10 * bounds.upper


class TestSpectral:
    def test_coordinate_povm_is_spectral(self, coordinate_povm):
        check = is_spectral(coordinate_povm)
        assert check.is_spectral
        assert check.residual <= 1e-12

    def test_repeated_frame_not_spectral(self, repeated_frame):
        check = is_spectral(povm_from_frame(repeated_frame))
        assert not check.is_spectral
        # atoms 0 and 1 carry the same rank-1 projector: product has norm 1
        assert abs(check.residual - 1.0) <= 1e-12

    def test_scaled_mercedes_probability_but_not_spectral(self, mercedes_frame):
        scaled = Frame(2, [np.sqrt(2.0 / 3.0) * v for v in mercedes_frame.vectors])
        povm = povm_from_frame(scaled)
        report = validate(povm)
        assert report.probability
        assert not is_spectral(povm).is_spectral

    def test_spectral_implies_probability(self, gen):
        for _ in range(10):
            dim = int(gen.rng.integers(2, 6))
            u = gen.unitary(dim)
            cut = int(gen.rng.integers(1, dim))
            first = u[:, :cut] @ u[:, :cut].conj().T
            second = u[:, cut:] @ u[:, cut:].conj().T
            povm = FramedPOVM(dim, [first, second])
            assert is_spectral(povm).is_spectral
            report = validate(povm)
            assert report.probability
            assert abs(report.bounds.lower - 1.0) <= 1e-9


class TestInducedMeasure:
    def test_probability_weights_sum_to_one(self, ons_frame, gen):
        povm = povm_from_frame(ons_frame)
        f = gen.vector(2)
        f = f / np.linalg.norm(f)
        weights = induced_scalar_measure(povm, f).weights
        assert abs(sum(weights) - 1.0) <= 1e-10

    def test_repeated_quadratic_forms(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        weights = induced_scalar_measure(povm, [1.0, 2.0]).weights
        np.testing.assert_allclose(weights, (1.0, 1.0, 4.0), atol=1e-14)

    def test_zero_signal(self, coordinate_povm):
        weights = induced_scalar_measure(coordinate_povm, [0.0, 0.0]).weights
        assert weights == (0.0, 0.0)

    def test_dimension_mismatch(self, coordinate_povm):
        with pytest.raises(DimensionMismatchError):
            induced_scalar_measure(coordinate_povm, [1.0, 2.0, 3.0])

    def test_consistency_with_effect_over_all_events(self, gen):
        povm = gen.povm(count=6)
        f = gen.vector(povm.dim)
        induced = induced_scalar_measure(povm, f)
        atoms = povm.space.atoms
        for mask in range(1 << len(atoms)):
            event = povm.space.event(
                tuple(a for i, a in enumerate(atoms) if mask >> i & 1)
            )
            lhs = measure_of(induced, event)
            rhs = float(np.vdot(f, effect(povm, event) @ f).real)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
