"""Generators and exhaustive oracles."""

import numpy as np
import pytest

from framepovm import (
    EventSpaceTooLargeError,
    FramedPOVM,
    InstanceGenerator,
    brute_force_frame_operator,
    exhaustive_event_check,
    frame_operator,
    minimal_dilation,
    povm_from_frame,
    shuffled_dilation,
    verify_dilation,
)


class TestGenerator:
    def test_deterministic_given_seed(self):
        first = InstanceGenerator(seed=99).frame()
        second = InstanceGenerator(seed=99).frame()
        assert first.space.atoms == second.space.atoms
        for a, b in zip(first.vectors, second.vectors):
            np.testing.assert_array_equal(a, b)

    def test_conditioning_floor(self):
        gen = InstanceGenerator(seed=5, conditioning_floor=0.05)
        for _ in range(10):
            frame = gen.frame()
            smallest = np.linalg.eigvalsh(frame_operator(frame).matrix)[0]
            assert smallest >= 0.05 * (1 - 1e-12)

    def test_unitary_is_unitary(self, gen):
        u = gen.unitary(5)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)

    def test_povm_kinds(self, gen):
        for kind in ("frame", "fusion", "sampled"):
            povm = gen.povm(kind=kind)
            assert povm.space.size >= 2


class TestBruteForceOperator:
    def test_orthonormal_basis(self, ons_frame):
        np.testing.assert_allclose(brute_force_frame_operator(ons_frame), np.eye(2), atol=1e-14)

    def test_mercedes(self, mercedes_frame):
        np.testing.assert_allclose(
            brute_force_frame_operator(mercedes_frame), 1.5 * np.eye(2), atol=1e-12
        )

    def test_repeated(self, repeated_frame):
        np.testing.assert_allclose(
            brute_force_frame_operator(repeated_frame), np.diag([2.0, 1.0]), atol=1e-14
        )


class TestExhaustiveChecks:
    def test_additivity_is_exactly_zero(self, gen):
        povm = gen.povm(count=4)
        report = exhaustive_event_check(povm, "additivity")
        assert report.worst_residual == 0.0
        assert report.events_checked > 0

    def test_mu_f_additivity_is_exactly_zero(self, gen):
        povm = gen.povm(count=4)
        report = exhaustive_event_check(povm, "mu_f_additivity", signal=gen.vector(povm.dim))
        assert report.worst_residual == 0.0

    def test_multiplicativity_of_coordinate_povm(self):
        povm = FramedPOVM(2, [np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        report = exhaustive_event_check(povm, "multiplicativity")
        assert report.worst_residual <= 1e-12

    def test_multiplicativity_fails_on_mercedes_with_witness(self, mercedes_frame):
        povm = povm_from_frame(mercedes_frame)
        report = exhaustive_event_check(povm, "multiplicativity")
        assert report.worst_residual > 1e-3
        assert report.witness is not None
        left, right = report.witness
        assert left or right

    def test_spectral_measure_multiplicativity_exact(self, gen):
        povm = gen.povm(count=5)
        rep = minimal_dilation(povm)
        report = exhaustive_event_check(rep, "multiplicativity")
        assert report.worst_residual == 0.0

    def test_refuses_large_spaces(self, gen):
        povm = gen.povm(kind="frame", dim=2, count=13)
        with pytest.raises(EventSpaceTooLargeError):
            exhaustive_event_check(povm, "additivity")


class TestShuffledDilation:
    def test_is_a_valid_dilation_of_the_same_povm(self, gen):
        for _ in range(5):
            povm = gen.povm()
            alternative = shuffled_dilation(povm, gen.rng)
            report = verify_dilation(povm, alternative)
            assert report.ok and report.minimal

    def test_differs_from_canonical(self, gen):
        povm = gen.povm(kind="fusion")
        canonical = minimal_dilation(povm)
        alternative = shuffled_dilation(povm, gen.rng)
        assert not np.allclose(canonical.synthesis_map, alternative.synthesis_map)
