import numpy as np
import pytest
from hypothesis import strategies as st

from loqc.pauli import PauliProduct

LETTERS = "IXYZ"


def labels(n_min=1, n_max=3, signed=True):
    """Hypothesis strategy for Pauli labels such as ``-iXZY``."""
    body = st.integers(n_min, n_max).flatmap(
        lambda n: st.text(alphabet=LETTERS, min_size=n, max_size=n)
    )
    prefix = st.sampled_from(["+", "-", "+i", "-i"] if signed else ["+"])
    return st.tuples(prefix, body).map(lambda t: t[0] + t[1])


def random_label(rng, n, phase=True):
    body = "".join(rng.choice(list(LETTERS), size=n))
    prefix = rng.choice(["+", "-", "+i", "-i"]) if phase else "+"
    return prefix + body


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def p():
    return PauliProduct.from_label
