import numpy as np
import pytest
from hypothesis import given, strategies as st

from grassgap.errors import BadConfig, BadRank, CapacityExhausted, DimensionMismatch
from grassgap.halmos import synthetic_pair
from grassgap.projection import (
    complement,
    identity,
    opnorm,
    projection_from_basis,
    random_basis,
    random_projection,
    random_unitary,
)
from grassgap.relations import (
    AdmissibilityModel,
    Relation,
    is_le,
    is_orthogonal,
    is_sharp,
    is_sim,
    le_counterexamples,
    perp_chain,
    sharp_chain,
    validate_chain,
)

from helpers import coord, fields, seeds


def test_model_validation():
    with pytest.raises(BadConfig):
        AdmissibilityModel(5, 3)
    with pytest.raises(BadConfig):
        AdmissibilityModel(5, 0)
    m = AdmissibilityModel(12, 3)
    assert m.admissible_rank(3) and m.admissible_rank(9) and not m.admissible_rank(10)


def test_orthogonal_examples():
    assert is_orthogonal(coord(3, [0]), coord(3, [1]))
    p = coord(3, [0])
    assert not is_orthogonal(p, p)
    with pytest.raises(DimensionMismatch):
        is_orthogonal(coord(3, [0]), coord(4, [0]))


def test_block_counterexample_relations():
    p, q = coord(3, [0]), coord(3, [1])
    assert is_orthogonal(p, q)
    assert not is_orthogonal(complement(p), complement(q))
    assert is_sim(p, q)


def test_sim_through_complements():
    # images overlap, but the kernels are orthogonal
    p, q = coord(6, [0, 1, 2, 3]), coord(6, [2, 3, 4, 5])
    assert not is_orthogonal(p, q)
    assert is_sim(p, q)


@given(st.integers(2, 10), fields, seeds)
def test_random_pair_not_sim(n, fld, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, n))
    p, q = random_projection(n, r, rng, fld), random_projection(n, r, rng, fld)
    assert not is_sim(p, q)


def test_sharp_examples():
    assert is_sharp(coord(9, range(3)), coord(9, range(3, 6)), AdmissibilityModel(9, 3))
    assert not is_sharp(coord(6, range(3)), coord(6, range(3, 6)), AdmissibilityModel(6, 3))
    rng = np.random.default_rng(4)
    u = random_unitary(12, rng)
    p = projection_from_basis(u[:, :4])
    q = projection_from_basis(u[:, 4:8])
    assert is_sharp(p, q, AdmissibilityModel(12, 3))


@given(st.integers(6, 14), seeds)
def test_sharp_implies_orthogonal(n, seed):
    rng = np.random.default_rng(seed)
    model = AdmissibilityModel(n, 2)
    u = random_unitary(n, rng)
    a, b = int(rng.integers(1, n // 2)), int(rng.integers(1, n // 2))
    p = projection_from_basis(u[:, :a])
    q = projection_from_basis(u[:, a:a + b]) if rng.random() < 0.5 else random_projection(n, b, rng)
    if is_sharp(p, q, model):
        assert is_orthogonal(p, q)


def test_le_examples():
    p = random_projection(5, 2, seed=3)
    assert is_le(p, identity(5))
    big = coord(4, [0, 1])
    small = coord(4, [0])
    assert is_le(small, big) and not is_le(big, small)


@given(fields, seeds)
def test_le_partial_order(fld, seed):
    rng = np.random.default_rng(seed)
    n = 8
    b = random_basis(n, 5, rng, fld).columns
    a, mid, top = (projection_from_basis(b[:, :k]) for k in (2, 3, 5))
    assert is_le(a, a)
    assert is_le(a, mid) and is_le(mid, top) and is_le(a, top)
    assert not is_le(top, a)
    twin = projection_from_basis(b[:, :3] @ random_unitary(3, rng, fld))
    assert is_le(mid, twin) and is_le(twin, mid)
    assert opnorm(mid.matrix - twin.matrix) <= 1e-9


def test_le_characterization_by_sampling():
    model = AdmissibilityModel(12, 2)
    rng = np.random.default_rng(10)
    checked = 0
    for _ in range(100):
        b = random_basis(12, 6, rng).columns
        s_rank = int(rng.integers(2, 5))
        s, t = projection_from_basis(b[:, :s_rank]), projection_from_basis(b[:, :5])
        assert is_le(s, t)
        assert le_counterexamples(s, t, model, samples=200, seed=rng) == []
        checked += 1
    assert checked == 100
    # a non-comparable pair is refuted quickly
    s, t = random_projection(12, 3, seed=1), random_projection(12, 5, seed=2)
    assert le_counterexamples(s, t, model, samples=20, seed=0)


def test_perp_chain_orthogonal_pair():
    model = AdmissibilityModel(9, 3)
    p, q = coord(9, range(3)), coord(9, range(3, 6))
    c = perp_chain(p, q, model)
    assert c.j == 1 and c.nodes[0] is p and c.nodes[-1] is q


def test_perp_chain_equal_pair_routes_through_complement():
    model = AdmissibilityModel(9, 3)
    p = coord(9, range(3))
    c = perp_chain(p, p, model)
    assert c.j == 2 and c.case == "H4"
    assert np.allclose(c.nodes[1].matrix, coord(9, range(3, 6)).matrix, atol=1e-12)
    assert validate_chain(c, model)


@pytest.mark.parametrize("dims, case", [
    ((0, 0, 4, 5, 1), "H4"),
    ((0, 0, 2, 0, 8), "generic"),
    ((4, 4, 0, 0, 2), "H1H2"),
    ((0, 0, 0, 2, 6), "mixed"),
    ((2, 2, 2, 2, 2), "mixed"),
])
def test_perp_chain_cases(dims, case):
    p, q = synthetic_pair(dims, seed=11)
    model = AdmissibilityModel(p.dim, 4)
    c = perp_chain(p, q, model)
    assert c.case == case
    assert validate_chain(c, model)
    assert c.nodes[0] is p and c.nodes[-1] is q
    assert max(c.residuals) <= 1e-9


def test_perp_chain_capacity_exhausted():
    p, q = synthetic_pair((0, 0, 4, 0, 6), seed=1)
    with pytest.raises(CapacityExhausted) as err:
        perp_chain(p, q, AdmissibilityModel(16, 4))
    assert err.value.case == "mixed" and err.value.deficit == 2


def test_perp_chain_requires_admissible():
    with pytest.raises(BadRank):
        perp_chain(coord(8, [0]), coord(8, [1]), AdmissibilityModel(8, 2))


def feasible_pair(rng, n, m, fld):
    # both ranks small enough that Ker P & Ker Q has dimension >= m
    r1, r2 = (int(x) for x in rng.integers(m, (n - m) // 2 + 1, 2))
    return random_projection(n, r1, rng, fld), random_projection(n, r2, rng, fld)


@given(fields, seeds)
def test_chains_validate_in_feasible_regime(fld, seed):
    rng = np.random.default_rng(seed)
    model = AdmissibilityModel(16, 4)
    p, q = feasible_pair(rng, 16, 4, fld)
    for build, rel in ((perp_chain, Relation.PERP), (sharp_chain, Relation.SHARP)):
        c = build(p, q, model)
        assert c.relation is rel and c.j <= 3
        assert validate_chain(c, model)


def test_sharp_chain_orthogonal_examples():
    model = AdmissibilityModel(12, 3)
    c = sharp_chain(coord(12, range(3)), coord(12, range(3, 6)), model)
    assert c.j == 1
    c = sharp_chain(coord(12, range(6)), coord(12, range(6, 9)), model)
    assert c.j == 1
    # rank 7 > N - 2m leaves no room for any sharp partner
    with pytest.raises(CapacityExhausted) as err:
        sharp_chain(coord(12, range(7)), coord(12, range(7, 12)), model)
    assert err.value.case == "rank" and err.value.deficit == 1
    # both ranks at the limit: the extended route still fits
    c = sharp_chain(coord(12, range(6)), coord(12, range(6, 12)), model)
    assert c.j == 3 and validate_chain(c, model)


def test_sharp_chain_extends_orthogonal_pair():
    model = AdmissibilityModel(18, 3)
    p, q = coord(18, range(8)), coord(18, range(8, 16))
    assert is_orthogonal(p, q) and not is_sharp(p, q, model)
    c = sharp_chain(p, q, model)
    assert c.j == 3 and c.case == "orthogonal-extended"
    assert validate_chain(c, model)
    assert is_le(c.nodes[1], q) and is_le(c.nodes[2], p)


def test_sharp_chain_equal_pair():
    model = AdmissibilityModel(15, 3)
    p = random_projection(15, 3, seed=4)
    c = sharp_chain(p, p, model)
    assert c.j <= 2 and validate_chain(c, model)


def test_sharp_chain_small_space_exhausted():
    model = AdmissibilityModel(6, 3)
    with pytest.raises(CapacityExhausted):
        sharp_chain(random_projection(6, 3, seed=1), random_projection(6, 3, seed=2), model)
