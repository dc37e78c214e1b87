"""Tests for the random number policy"""

import numpy as np
import pytest

from minids.core.rng import MAX_SEED, check_seed, derive_seed, make_rng, split_rng


def test_make_rng_is_reproducible():
    """Test identical seeds give identical streams"""
    first = make_rng(42).integers(0, 1000, size=20)
    second = make_rng(42).integers(0, 1000, size=20)

    assert np.array_equal(first, second)
    assert not np.array_equal(first, make_rng(43).integers(0, 1000, size=20))


def test_make_rng_uses_pcg64():
    """Test the bit generator is fixed"""
    assert isinstance(make_rng(0).bit_generator, np.random.PCG64)


def test_split_rng_streams_differ_and_repeat():
    """Test child streams differ from each other and repeat per seed"""
    init_rng, kick_rng = split_rng(5, 2)
    again_init, again_kick = split_rng(5, 2)

    a = init_rng.random(10)
    b = kick_rng.random(10)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, again_init.random(10))
    assert np.array_equal(b, again_kick.random(10))


@pytest.mark.parametrize("seed", [0, 1, MAX_SEED])
def test_check_seed_accepts_unsigned_64_bit(seed):
    assert check_seed(seed) == seed


@pytest.mark.parametrize("seed", [-1, MAX_SEED + 1])
def test_check_seed_rejects_out_of_range(seed):
    with pytest.raises(ValueError, match="64-bit"):
        check_seed(seed)


def test_derive_seed():
    """Test run seeds are base + index, wrapping at 2**64"""
    assert derive_seed(10, 3) == 13
    assert derive_seed(MAX_SEED, 1) == 0
