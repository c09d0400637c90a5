"""Shared helpers for the test suite."""

import numpy as np
import pytest

from qpms.model import Sequence, validate_instance


def make_random_instance(rng, *, n=None, m=None, l=None, d=None, q=None, sigma=4):
    """Draw a small random instance (uniform i.i.d. sequences)."""
    n = int(rng.integers(3, 9)) if n is None else n
    m = int(rng.integers(10, 31)) if m is None else m
    l = int(rng.integers(3, 8)) if l is None else l
    l = min(l, m)
    d = int(rng.integers(0, 3)) if d is None else d
    d = min(d, l)
    q = int(rng.integers(2, n + 1)) if q is None else q
    seqs = [
        Sequence(tuple(int(c) for c in rng.integers(0, sigma, m)), id=f"s{i}")
        for i in range(n)
    ]
    return validate_instance(seqs, l, d, q)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
