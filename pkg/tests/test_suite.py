import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iohbench import suite
from iohbench.suite import (
    InstancedProblem,
    SeededGenerator,
    generate_instance_spec,
    get_problem,
    jump,
    leading_ones,
    linear,
    linear_weights,
    make_instance,
    onemax,
    permute,
    register_problem,
    scale_and_shift,
    xor_shift,
)

bit_vectors = st.lists(st.integers(0, 1), min_size=1, max_size=32)


def all_bit_vectors(n):
    return (np.array(bits) for bits in itertools.product((0, 1), repeat=n))


class TestBaseProblems:
    def test_onemax(self):
        assert onemax([1, 1, 1, 1]) == 4
        assert onemax([0, 0, 0]) == 0
        assert onemax([1, 0, 1, 1, 0]) == 3

    def test_leading_ones(self):
        assert leading_ones([1, 1, 0, 1]) == 2
        assert leading_ones([0, 1, 1, 1]) == 0
        assert leading_ones([1, 1, 1]) == 3

    def test_jump(self):
        assert jump([1, 1, 1, 1], 1) == 5
        assert jump([0, 0, 0, 0], 1) == 1
        assert jump([1, 1, 1, 1, 0], 2) == 1

    def test_jump_k1_is_onemax_plus_one(self):
        for x in all_bit_vectors(6):
            assert jump(x, 1) == onemax(x) + 1

    def test_jump_k_out_of_range(self):
        with pytest.raises(ValueError):
            jump([0, 1], 0)
        with pytest.raises(ValueError):
            jump([0, 1], 3)

    def test_linear(self):
        assert linear([1, 0, 1], [1, 1, 1]) == 2
        assert linear([0, 0, 0], [3.3, 1.2, 0.4]) == 0
        assert linear([1, 0, 1], [0.5, 2.0, 4.9]) == pytest.approx(5.4)

    def test_linear_length_mismatch(self):
        with pytest.raises(ValueError):
            linear([1, 0], [1.0])

    def test_bad_entries_rejected(self):
        with pytest.raises(ValueError):
            onemax([0, 2, 1])

    def test_builtin_maxima_exhaustive(self):
        for n in (1, 4, 8):
            one = get_problem(1, n)
            lead = get_problem(2, n)
            lin = get_problem(4, n)
            assert max(one.evaluate_raw(x) for x in all_bit_vectors(n)) == one.optimum_value == n
            assert max(lead.evaluate_raw(x) for x in all_bit_vectors(n)) == lead.optimum_value == n
            lin_max = max(lin.evaluate_raw(x) for x in all_bit_vectors(n))
            assert lin_max == pytest.approx(lin.optimum_value)
            assert lin.optimum_value == pytest.approx(linear_weights(n).sum())


class TestTransformations:
    def test_xor_shift(self):
        assert list(xor_shift([1, 0, 1], [1, 1, 0])) == [0, 1, 1]
        assert list(xor_shift([1, 0, 1], [0, 0, 0])) == [1, 0, 1]

    @given(bit_vectors)
    def test_xor_involution(self, x):
        z = [(i * 7 + 3) % 2 for i in range(len(x))]
        assert list(xor_shift(xor_shift(x, z), z)) == list(x)

    def test_permute(self):
        assert list(permute([7, 8, 9], [2, 0, 1])) == [9, 7, 8]
        assert list(permute([7, 8, 9], [0, 1, 2])) == [7, 8, 9]

    def test_permute_inverse_roundtrip(self):
        x = [5, 6, 7, 8]
        sigma = [3, 0, 2, 1]
        inverse = [sigma.index(i) for i in range(4)]
        assert list(permute(permute(x, sigma), inverse)) == x

    def test_permute_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            permute([1, 2, 3], [0, 0, 2])

    def test_scale_and_shift(self):
        assert scale_and_shift(10, 2, 3) == 23
        assert scale_and_shift(4.5, 1, 0) == 4.5
        assert scale_and_shift(0, 5, -7) == -7


class TestSeededGenerator:
    def test_reproducible(self):
        a = SeededGenerator(12345).uniforms(50)
        b = SeededGenerator(12345).uniforms(50)
        assert a == b

    def test_range_and_variation(self):
        draws = SeededGenerator(7).uniforms(1000)
        assert all(0.0 <= u < 1.0 for u in draws)
        assert len(set(draws)) > 990

    def test_different_seeds_differ(self):
        assert SeededGenerator(1).uniforms(10) != SeededGenerator(2).uniforms(10)

    def test_normal_moments(self):
        gen = SeededGenerator(99)
        draws = [gen.next_normal() for _ in range(4000)]
        assert abs(np.mean(draws)) < 0.05
        assert abs(np.std(draws) - 1.0) < 0.05


class TestInstances:
    def test_instance_one_is_identity(self):
        spec = generate_instance_spec(1, 1, 100)
        assert spec.is_identity()
        assert spec.scale == 1.0 and spec.shift == 0.0

    def test_parameter_ranges(self):
        for fid in (1, 2, 3, 4):
            for iid in range(2, 101):
                spec = generate_instance_spec(fid, iid, 16)
                assert 0.2 <= spec.scale <= 5.0
                assert -1000.0 <= spec.shift <= 1000.0

    def test_deterministic(self):
        first = generate_instance_spec(3, 17, 40)
        second = generate_instance_spec(3, 17, 40)
        assert first == second

    def test_bands(self):
        xor_spec = generate_instance_spec(1, 2, 12)
        assert any(xor_spec.xor_mask)
        assert xor_spec.permutation == tuple(range(12))
        perm_spec = generate_instance_spec(1, 51, 12)
        assert not any(perm_spec.xor_mask)
        assert sorted(perm_spec.permutation) == list(range(12))

    def test_permutation_valid_for_many_instances(self):
        for iid in range(51, 101):
            spec = generate_instance_spec(2, iid, 23)
            assert sorted(spec.permutation) == list(range(23))

    def test_instance_id_bounds(self):
        with pytest.raises(ValueError):
            make_instance(1, 0, 8)
        with pytest.raises(ValueError):
            make_instance(1, 101, 8)

    def test_unknown_function(self):
        with pytest.raises(LookupError):
            make_instance(999, 1, 8)

    def test_identity_instance_evaluates_plain(self):
        ip = make_instance(1, 1, 6)
        raw, transformed = ip.evaluate([1, 0, 1, 1, 0, 0])
        assert raw == transformed == 3

    def test_xor_moves_optimum(self):
        problem = get_problem(1, 3)
        spec = suite.InstanceSpec(2, (1, 1, 1), (0, 1, 2), 1.0, 0.0)
        ip = InstancedProblem(problem, spec)
        raw, _ = ip.evaluate([1, 1, 1])
        assert raw == 0

    def test_composition_exhaustive(self):
        # transformed == a*f(sigma(x xor z)) + b on every point of the cube
        for fid, iid in ((1, 2), (2, 55), (3, 30), (4, 77)):
            ip = make_instance(fid, iid, 8)
            spec = ip.spec
            base = get_problem(fid, 8)
            for x in all_bit_vectors(8):
                shifted = [x[i] ^ spec.xor_mask[i] for i in range(8)]
                reordered = np.array([shifted[spec.permutation[i]] for i in range(8)])
                expected_raw = base.evaluate_raw(reordered)
                raw, transformed = ip.evaluate(x)
                assert raw == expected_raw
                assert transformed == pytest.approx(
                    spec.scale * expected_raw + spec.shift, rel=1e-12
                )

    def test_landscape_isomorphism(self):
        base = get_problem(2, 8)
        base_values = Counter(base.evaluate_raw(x) for x in all_bit_vectors(8))
        for iid in (2, 25, 51, 99):
            ip = make_instance(2, iid, 8)
            values = Counter(ip.evaluate(x)[0] for x in all_bit_vectors(8))
            assert values == base_values

    def test_dimension_mismatch(self):
        ip = make_instance(1, 1, 5)
        with pytest.raises(ValueError):
            ip.evaluate([1, 0])

    def test_degenerate_dimension_one(self):
        for iid in (1, 2, 51):
            ip = make_instance(1, iid, 1)
            raw0, _ = ip.evaluate([0])
            raw1, _ = ip.evaluate([1])
            assert sorted((raw0, raw1)) == [0.0, 1.0]


class TestRegistry:
    def test_register_and_instance(self):
        fid = 901

        def two_blocks(x):
            return float(sum(x[: len(x) // 2]) + 2 * sum(x[len(x) // 2:]))

        register_problem(fid, "TwoBlocks", two_blocks)
        try:
            ip = make_instance(fid, 1, 6)
            raw, transformed = ip.evaluate([1, 1, 1, 0, 0, 1])
            assert raw == transformed == 5.0
            # transformed instances compose like the built-ins
            ip2 = make_instance(fid, 2, 6)
            spec = ip2.spec
            x = np.array([1, 0, 1, 1, 0, 0])
            shifted = np.bitwise_xor(x, np.array(spec.xor_mask))
            assert ip2.evaluate(x)[1] == pytest.approx(
                spec.scale * two_blocks(shifted) + spec.shift
            )
        finally:
            with suite._registry_lock:
                del suite._PROBLEM_FACTORIES[fid]

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError):
            register_problem(1, "Clash", onemax)

    def test_weights_fixed_per_dimension(self):
        assert np.array_equal(linear_weights(30), linear_weights(30))
        assert (linear_weights(30) >= 0).all() and (linear_weights(30) <= 5).all()
