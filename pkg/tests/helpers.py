"""Shared hypothesis strategies and constructors for the test suite."""
import numpy as np
from hypothesis import strategies as st

from grassgap.halmos import synthetic_pair
from grassgap.projection import projection_from_basis, random_projection

fields = st.sampled_from(["real", "complex"])
seeds = st.integers(0, 2**32 - 1)


@st.composite
def random_pairs(draw, max_n=16, min_n=1):
    n = draw(st.integers(min_n, max_n))
    r1, r2 = draw(st.integers(0, n)), draw(st.integers(0, n))
    fld, seed = draw(fields), draw(seeds)
    rng = np.random.default_rng(seed)
    return random_projection(n, r1, rng, fld), random_projection(n, r2, rng, fld)


@st.composite
def planted_dims(draw, max_block=3, max_k=3):
    dims = [draw(st.integers(0, max_block)) for _ in range(4)] + [draw(st.integers(0, max_k))]
    if sum(dims[:4]) + 2 * dims[4] == 0:
        dims[2] = 1
    return tuple(dims)


@st.composite
def planted_pairs(draw, max_block=3, max_k=3):
    dims = draw(planted_dims(max_block, max_k))
    p, q = synthetic_pair(dims, field=draw(fields), seed=draw(seeds))
    return dims, p, q


def rotated_line(theta):
    """``(diag(1, 0), projection onto (cos t, sin t))``."""
    c, s = np.cos(theta), np.sin(theta)
    return (projection_from_basis(np.array([[1.0], [0.0]])),
            projection_from_basis(np.array([[c], [s]])))


def coord(n, idx):
    """Projection onto the span of the given standard basis vectors."""
    return projection_from_basis(np.eye(n)[:, list(idx)])
