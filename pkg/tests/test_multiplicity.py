"""Uniform-multiplicity decomposition and the canonical signature."""

import numpy as np
import pytest

from framepovm import (
    FramedPOVM,
    canonical_signature,
    decompose,
    measure_of,
    povm_from_frame,
    povm_from_fusion_frame,
    transport,
    validate,
    verify_decomposition,
)


class TestDecompose:
    def test_frame_povm_single_component(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        components = decompose(povm)
        assert len(components) == 1
        assert components[0].multiplicity == 1
        assert components[0].atom_support == ("0", "1", "2")

    def test_fusion_two_components(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        components = decompose(povm)
        assert [c.multiplicity for c in components] == [1, 2]
        assert components[0].atom_support == ("1",)
        assert components[1].atom_support == ("0",)

    def test_coordinate_probability_povm(self):
        povm = FramedPOVM(2, [np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        components = decompose(povm)
        assert len(components) == 1
        assert components[0].multiplicity == 1

    def test_counting_measure_on_support(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        components = decompose(povm)
        rank_one = components[0]
        assert measure_of(rank_one.support_measure, povm.space.whole()) == 1.0
        assert rank_one.support_measure.weight("1") == 1.0
        assert rank_one.support_measure.weight("0") == 0.0

    def test_component_structure(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        rep_total = 0
        for component in decompose(povm):
            diag = component.projection.matrix.diagonal().real
            assert set(np.flatnonzero(diag > 0.5)) == set(component.coordinates)
            rep_total += len(component.coordinates)
        assert rep_total == 3

    def test_components_need_not_be_framed(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        for component in decompose(povm):
            report = validate(component.component_povm)
            assert report.is_povm
            assert not report.framed  # each lives on a proper subspace of C^3


class TestVerifyDecomposition:
    def test_self_consistency(self, gen):
        for _ in range(10):
            povm = gen.povm()
            report = verify_decomposition(povm, decompose(povm))
            assert report.ok
            assert report.max_reassembly_residual <= 1e-9 * report.scale
            assert report.max_cross_orthogonality <= 1e-9 * report.scale
            assert report.bounds_violation <= 1e-9 * report.scale

    def test_fusion_sum_bounds(self, fusion_c3):
        povm = povm_from_fusion_frame(fusion_c3)
        report = verify_decomposition(povm, decompose(povm))
        assert abs(report.sum_bounds[0] - 1.0) <= 1e-12
        assert abs(report.sum_bounds[1] - 4.0) <= 1e-12

    def test_single_component_orthogonality_vacuous(self, repeated_frame):
        povm = povm_from_frame(repeated_frame)
        report = verify_decomposition(povm, decompose(povm))
        assert report.max_cross_orthogonality == 0.0
        assert report.max_reassembly_residual <= 1e-12

    def test_zero_effect_atoms_are_reported(self):
        povm = FramedPOVM(
            2,
            [
                np.diag([1.0, 0.0]).astype(complex),
                np.zeros((2, 2), dtype=complex),
                np.diag([0.0, 1.0]).astype(complex),
            ],
        )
        components = decompose(povm)
        assert all("1" not in c.atom_support for c in components)
        report = verify_decomposition(povm, components)
        assert report.zero_atoms == ("1",)
        assert report.ok


class TestSignature:
    def test_fusion_signature(self, fusion_c3):
        signature = canonical_signature(povm_from_fusion_frame(fusion_c3))
        assert signature.entries == ((1, ("1",)), (2, ("0",)))

    def test_all_rank_one(self, gen):
        frame = gen.frame()
        signature = canonical_signature(povm_from_frame(frame))
        assert signature.entries == ((1, frame.space.atoms),)

    def test_invariant_under_conjugation(self, gen):
        for _ in range(10):
            povm = gen.povm(count=5)
            signature = canonical_signature(povm)
            moved = transport(gen.unitary(povm.dim), povm).povm
            assert canonical_signature(moved).entries == signature.entries
