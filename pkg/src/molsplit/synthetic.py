"""
Seeded synthetic fingerprint datasets with planted similarity structure.

Each island has a random base fingerprint; members toggle a few bits of it,
so members are similar to each other and dissimilar to other islands.
Bridges are short chains between consecutive islands built from nested
prefixes of both bases, so neighbouring chain links stay above 0.4 and
the chain joins the two islands into one component. Noise molecules are
independent random fingerprints.
"""

from __future__ import annotations

import numpy as np

from molsplit.molio.dataset import FINGERPRINT_CSV, Dataset, Record
from molsplit.molio.fingerprint import Fingerprint


def _random_bits(rng: np.random.Generator, nbits: int, count: int) -> np.ndarray:
    return rng.choice(nbits, size=count, replace=False)


def make_island_dataset(
    n_islands: int = 5,
    island_size: int | tuple[int, int] = (10, 30),
    n_noise: int = 10,
    bridge_prob: float = 0.0,
    bridge_length: int = 3,
    nbits: int = 1024,
    base_bits: int = 60,
    flip_bits: int = 5,
    value_spread: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Build a dataset of islands, bridges and noise.

    Every record carries a continuous value (island mean in [5.5, 8.5] plus
    Gaussian noise of ``value_spread``) and the binary label value > 6.
    ``island_size`` is either a fixed size or an inclusive (low, high) range.
    Ids are ``isl<i>_<j>``, ``brg<i>_<t>`` and ``noise<j>``.
    """
    rng = np.random.default_rng(seed)
    bases = [_random_bits(rng, nbits, base_bits) for _ in range(n_islands)]
    means = rng.uniform(5.5, 8.5, size=n_islands)
    entries: list[tuple[str, np.ndarray, float]] = []

    for i, base in enumerate(bases):
        size = island_size if isinstance(island_size, int) else int(rng.integers(island_size[0], island_size[1] + 1))
        for j in range(size):
            bits = np.zeros(nbits, dtype=bool)
            bits[base] = True
            flips = _random_bits(rng, nbits, flip_bits)
            bits[flips] = ~bits[flips]
            entries.append((f"isl{i}_{j}", bits, float(rng.normal(means[i], value_spread))))

    for i in range(n_islands - 1):
        if rng.random() >= bridge_prob:
            continue
        a, b = bases[i], bases[i + 1]
        for t in range(1, bridge_length + 1):
            alpha = t / (bridge_length + 1)
            bits = np.zeros(nbits, dtype=bool)
            bits[a[: int(round((1 - alpha) * base_bits))]] = True
            bits[b[: int(round(alpha * base_bits))]] = True
            value = float((1 - alpha) * means[i] + alpha * means[i + 1] + rng.normal(0, value_spread))
            entries.append((f"brg{i}_{t}", bits, value))

    for j in range(n_noise):
        bits = np.zeros(nbits, dtype=bool)
        bits[_random_bits(rng, nbits, base_bits)] = True
        entries.append((f"noise{j}", bits, float(rng.uniform(5.0, 9.0))))

    records = tuple(
        Record(id=rid, fingerprint=Fingerprint(bits), value=value, label=int(value > 6.0))
        for rid, bits, value in entries
    )
    return Dataset(records, source_format=FINGERPRINT_CSV, radius=None)
