import random

import pytest
from hypothesis import strategies as st

from prym_census.involution import block_form
from prym_census.linalg import IntegerMatrix, random_unimodular, unimodular_inverse


def conjugated(a, b, c, seed):
    """U diag(trivial^a, sign^b, perm^c) U^-1 for a seeded random unimodular U."""
    rng = random.Random(seed)
    n = a + b + 2 * c
    U = random_unimodular(n, rng)
    return U @ block_form(a, b, c) @ unimodular_inverse(U)


@st.composite
def multiplicities(draw, min_rank=1, max_rank=12):
    a = draw(st.integers(0, max_rank))
    b = draw(st.integers(0, max_rank - a))
    c = draw(st.integers(0, (max_rank - a - b) // 2))
    if a + b + 2 * c < min_rank:
        b = min_rank
    return a, b, c


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, bound=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=c,
                                  max_size=c), min_size=r, max_size=r))
    return IntegerMatrix.from_rows(rows, cols=c)


@pytest.fixture
def rng():
    return random.Random(12345)
