"""
Random number policy.

Every random decision in the package (graph generation, random initial solutions,
Kick) draws from a numpy ``Generator`` backed by PCG64, seeded with an unsigned
64-bit integer. PCG64 is fixed here rather than relying on ``default_rng``'s
choice so that runs stay reproducible across numpy releases. Independent streams
are obtained with ``split_rng`` (``SeedSequence.spawn``).
"""

import numpy as np

SEED_BITS = 64
MAX_SEED = (1 << SEED_BITS) - 1


def check_seed(seed: int) -> int:
    """
    Validate a seed

    Args:
        seed: Candidate seed

    Returns:
        The seed unchanged

    Raises:
        ValueError: If the seed is not an unsigned 64-bit integer
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"Seed must be an unsigned {SEED_BITS}-bit integer, got {seed}")
    return seed


def make_rng(seed: int) -> np.random.Generator:
    """
    Create the package's random generator for a seed

    Args:
        seed: Unsigned 64-bit seed

    Returns:
        PCG64-backed numpy Generator
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))


def split_rng(seed: int, count: int) -> list[np.random.Generator]:
    """
    Derive independent generators from one seed

    Args:
        seed: Unsigned 64-bit seed
        count: Number of child streams

    Returns:
        List of PCG64 generators with non-overlapping streams
    """
    children = np.random.SeedSequence(check_seed(seed)).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def derive_seed(base_seed: int, index: int) -> int:
    """Seed of the index-th run of a batch (base_seed + index, wrapped to 64 bits)."""
    return (check_seed(base_seed) + index) & MAX_SEED
