import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legarray.arrays import TernaryArray
from legarray.images import GrayImage
from legarray.legendre import LegendreParams, legendre_array
from legarray.family import build_family
from legarray.watermark import (
    EmbedConfig,
    Payload,
    embed,
    extract,
    flatten,
    tile_dims,
    unflatten,
    _flatten_values,
)

from reference_data import FLATTENED_S1


def flat_gray(size, value=128):
    return GrayImage(np.full((size, size), value, dtype=np.uint8))


class TestFlatten:
    def test_reference_9x9(self, family_3_2):
        flat = flatten(family_3_2[1].arr)
        assert np.array_equal(flat.values, FLATTENED_S1)

    def test_top_left_block_is_zero_slice(self, family_3_2):
        flat = flatten(family_3_2[1].arr)
        assert (flat.values[:3, :3] == 0).all()
        assert np.array_equal(flat.values[:3, 3:6], family_3_2[1].arr.values[0, 1])

    def test_rank_two_identity(self):
        rng = np.random.default_rng(61)
        arr = TernaryArray(rng.integers(-1, 2, size=(4, 5)))
        assert flatten(arr) == arr

    def test_odd_rank_rejected(self):
        with pytest.raises(ValueError):
            flatten(TernaryArray(np.zeros((2, 2, 2), dtype=np.int8)))

    def test_pairing_formula(self):
        # out[q0*d2 + r0, q1*d3 + r1] == S[q0, q1, r0, r1]
        dims = (2, 3, 4, 5)
        cells = np.arange(np.prod(dims), dtype=np.int64).reshape(dims)
        flat = _flatten_values(cells)
        assert flat.shape == (2 * 4, 3 * 5)
        for q0 in range(2):
            for q1 in range(3):
                for r0 in range(4):
                    for r1 in range(5):
                        assert flat[q0 * 4 + r0, q1 * 5 + r1] == cells[q0, q1, r0, r1]

    def test_is_bijection_on_cells(self):
        for dims in [(3, 3, 3, 3), (2, 3, 4, 5), (2,) * 6, (3,) * 6]:
            cells = np.arange(np.prod(dims), dtype=np.int64).reshape(dims)
            flat = _flatten_values(cells)
            assert flat.ndim == 2
            assert sorted(flat.reshape(-1).tolist()) == list(range(cells.size))

    def test_tile_dims(self, family_3_2):
        assert tile_dims(family_3_2[1].arr.dims) == (9, 9)
        assert tile_dims((3,) * 6) == (81, 9)  # odd middle axis carried, paired last


class TestUnflatten:
    def test_round_trip_reference_member(self, family_3_2):
        s1 = family_3_2[1].arr
        assert unflatten(flatten(s1), s1.dims) == s1

    @pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3)])
    def test_round_trip_family_members(self, p, n):
        params = LegendreParams(p=p, n=n).resolve()
        family = build_family(legendre_array(params), params)
        for member in family:
            assert unflatten(flatten(member.arr), member.arr.dims) == member.arr

    def test_round_trip_random(self):
        rng = np.random.default_rng(67)
        for _ in range(100):
            rank = 4 if rng.integers(2) else 6
            dims = tuple(int(d) for d in rng.integers(1, 4, size=rank))
            arr = TernaryArray(rng.integers(-1, 2, size=dims))
            assert unflatten(flatten(arr), dims) == arr

    @given(st.lists(st.integers(1, 3), min_size=4, max_size=4))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_hypothesis(self, dims):
        rng = np.random.default_rng(71)
        arr = TernaryArray(rng.integers(-1, 2, size=tuple(dims)))
        assert unflatten(flatten(arr), tuple(dims)) == arr

    def test_inconsistent_dims_rejected(self):
        flat = TernaryArray(np.zeros((9, 9), dtype=np.int8))
        with pytest.raises(ValueError):
            unflatten(flat, (3, 3, 3))
        with pytest.raises(ValueError):
            unflatten(flat, (3, 3, 3, 4))
        with pytest.raises(ValueError):
            unflatten(TernaryArray(np.zeros((3, 27), dtype=np.int8)), (3, 3, 3, 3))


class TestEmbed:
    def test_strength_zero_is_identity(self, family_3_2):
        img = flat_gray(27)
        payload = Payload(m=1, shifts=(0, 0, 0, 0))
        out = embed(img, family_3_2[1], payload, EmbedConfig(0))
        assert out == img

    def test_mid_gray_value_set(self, family_3_2):
        img = flat_gray(81)
        out = embed(img, family_3_2[1], Payload(m=1, shifts=(1, 2, 0, 1)), EmbedConfig(3))
        assert set(np.unique(out.pixels).tolist()) <= {125, 128, 131}

    def test_difference_is_tiled_watermark(self, family_3_2):
        img = flat_gray(45, value=100)
        payload = Payload(m=2, shifts=(2, 1, 1, 0))
        strength = 4
        out = embed(img, family_3_2[2], payload, EmbedConfig(strength))
        diff = out.pixels.astype(np.int16) - img.pixels.astype(np.int16)
        w = flatten(family_3_2[2].arr.cyclic_shift(payload.shifts)).values
        expected = strength * np.tile(w, (5, 5))
        assert np.array_equal(diff, expected)

    def test_validation(self, family_3_2):
        member = family_3_2[1]
        with pytest.raises(ValueError):
            embed(flat_gray(8), member, Payload(m=1, shifts=(0, 0, 0, 0)))
        with pytest.raises(ValueError):
            embed(flat_gray(27), member, Payload(m=2, shifts=(0, 0, 0, 0)))
        with pytest.raises(ValueError):
            embed(flat_gray(27), member, Payload(m=1, shifts=(0, 0)))
        with pytest.raises(ValueError):
            embed(flat_gray(27), member, Payload(m=1, shifts=(0, 0, 0, 3)))
        with pytest.raises(ValueError):
            Payload(m=-1, shifts=(0, 0, 0, 0))
        with pytest.raises(ValueError):
            EmbedConfig(-1)


class TestExtract:
    def test_end_to_end_exact_on_flat_carrier(self, family_3_2):
        img = flat_gray(27)
        for m, shifts in [(0, (1, 0, 2, 1)), (1, (1, 2, 0, 1)), (2, (2, 2, 2, 2))]:
            marked = embed(img, family_3_2[m], Payload(m=m, shifts=shifts), EmbedConfig(3))
            result = extract(marked, family_3_2)
            assert result.payload == Payload(m=m, shifts=shifts)
            assert result.confident
            assert result.score > 0

    def test_zero_shift_round_trip(self, family_3_2):
        marked = embed(flat_gray(27), family_3_2[1], Payload(m=1, shifts=(0, 0, 0, 0)))
        result = extract(marked, family_3_2)
        assert result.payload == Payload(m=1, shifts=(0, 0, 0, 0))

    def test_unmarked_constant_image_is_flagged(self, family_3_2):
        result = extract(flat_gray(27), family_3_2)
        assert not result.confident
        assert result.snr == 0.0
        assert result.score == 0.0

    def test_partial_tiles_are_cropped(self, family_3_2):
        img = GrayImage(np.full((31, 29), 128, dtype=np.uint8))
        marked = embed(img, family_3_2[1], Payload(m=1, shifts=(1, 1, 0, 2)))
        result = extract(marked, family_3_2)
        assert result.payload == Payload(m=1, shifts=(1, 1, 0, 2))

    def test_image_smaller_than_tile_rejected(self, family_3_2):
        with pytest.raises(ValueError):
            extract(flat_gray(8), family_3_2)

    def test_flat_carrier_exact_at_p5(self, family_5_2):
        img = flat_gray(75)
        rng = np.random.default_rng(79)
        for _ in range(40):
            m = int(rng.integers(5))
            shifts = tuple(int(s) for s in rng.integers(0, 5, size=4))
            marked = embed(img, family_5_2[m], Payload(m=m, shifts=shifts), EmbedConfig(3))
            result = extract(marked, family_5_2)
            assert result.payload == Payload(m=m, shifts=shifts)
            assert result.confident

    def test_noise_robustness_smoke(self, family_5_2):
        rng = np.random.default_rng(73)
        strength = 3
        ok = 0
        for _ in range(20):
            noise = rng.integers(-strength, strength + 1, size=(75, 75))
            img = GrayImage(np.clip(128 + noise, 0, 255).astype(np.uint8))
            m = int(rng.integers(5))
            shifts = tuple(int(s) for s in rng.integers(0, 5, size=4))
            marked = embed(img, family_5_2[m], Payload(m=m, shifts=shifts), EmbedConfig(strength))
            result = extract(marked, family_5_2)
            ok += result.payload == Payload(m=m, shifts=shifts)
        assert ok == 20

    def test_result_json_shape(self, family_3_2):
        marked = embed(flat_gray(27), family_3_2[1], Payload(m=1, shifts=(1, 0, 1, 0)))
        d = extract(marked, family_3_2).to_json_dict()
        assert set(d) == {"m", "shifts", "score", "snr", "confident"}
        assert d["m"] == 1 and d["shifts"] == [1, 0, 1, 0]
