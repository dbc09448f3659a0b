import numpy as np
import pytest
from hypothesis import given, strategies as st

from grassgap.errors import (
    BadConfig,
    BadReparam,
    DegeneratePair,
    DimensionMismatch,
    GapOneObstruction,
    HypothesisViolated,
    NotMidpoint,
    NotSimRelated,
)
from grassgap.geodesics import (
    IDENTITY,
    MidpointSpec,
    ReparamFunction,
    assemble_midpoint,
    branching_pair,
    edmon_extract,
    geodesic,
    identity_reparam,
    law_residual,
    midpoint_element,
    midpoint_feasible,
    perturbed_midpoint,
    pwl,
    three_point_geodesic,
    triangle,
    uniqueness_bound,
)
from grassgap.halmos import halmos_decompose, random_form, reconstruct, synthetic_pair
from grassgap.metric import gap_direct
from grassgap.projection import (
    Projection,
    complement,
    opnorm,
    projection_from_basis,
    random_projection,
    random_unitary,
    validate,
)

from helpers import coord, fields, rotated_line, seeds

HALF_PI, QUARTER_PI = np.pi / 2, np.pi / 4
ZERO = ReparamFunction(lambda t: 0.0, 0.0, kind="pwl", params=(0.0, HALF_PI, 0.0, 0.0))
WIGGLE = pwl([0, np.pi / 8, QUARTER_PI, 3 * np.pi / 8, HALF_PI],
             [0, np.pi / 8 + 0.3, QUARTER_PI, 3 * np.pi / 8 - 0.3, HALF_PI])


@st.composite
def generic_pairs(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    r = draw(st.integers(1, n // 2))
    rng = np.random.default_rng(draw(seeds))
    fld = draw(fields)
    return random_projection(n, r, rng, fld), random_projection(n, r, rng, fld)


@st.composite
def balanced_forms(draw):
    d = draw(st.integers(0, 2))
    dims = (d, d, draw(st.integers(0, 2)), draw(st.integers(0, 2)), draw(st.integers(0, 2)))
    if sum(dims) == 0:
        dims = (1, 1, 0, 0, 0)
    return random_form(dims, field=draw(fields), seed=draw(seeds))


# -- reparameterizations ---------------------------------------------------------------

def test_builtin_reparams():
    assert IDENTITY(0.3) == 0.3
    t = triangle(0, QUARTER_PI, np.pi / 8)
    assert t(np.pi / 8) == pytest.approx(np.pi / 8)
    assert t(0) == t(QUARTER_PI) == t(HALF_PI) == 0
    assert t.lipschitz_bound == pytest.approx(1.0)
    assert WIGGLE.lipschitz_bound == pytest.approx(0.3 / (np.pi / 8) + 1)


def test_reparam_check_rejects():
    anchors = ((0.0, 0.0), (QUARTER_PI, 0.0), (HALF_PI, 0.0))
    with pytest.raises(BadReparam):
        triangle(0, HALF_PI, 0.5).check(1.0, anchors)
    with pytest.raises(BadReparam):
        triangle(0, 0.2, 0.5).check(1.0, anchors)
    triangle(0, QUARTER_PI, np.pi / 8).check(1.0, anchors)


def test_reparam_json_roundtrip():
    for f in (identity_reparam(), triangle(0.1, 0.5, 0.2), WIGGLE):
        g = ReparamFunction.from_dict(f.to_dict())
        assert all(abs(f(t) - g(t)) <= 1e-15 for t in np.linspace(0, HALF_PI, 17))
    with pytest.raises(BadReparam):
        ReparamFunction.from_dict({"kind": "spline", "params": []})
    with pytest.raises(BadReparam):
        ReparamFunction(lambda t: t, 1.0).to_dict()


# -- geodesic ------------------------------------------------------------------------------

def test_geodesic_endpoints_rotated_line():
    p, q = rotated_line(np.pi / 6)
    path = geodesic(p, q)
    assert opnorm(path.eval(HALF_PI).matrix - q.matrix) <= 1e-10
    assert opnorm(path.eval(0.0).matrix - p.matrix) <= 1e-10
    assert path.psi == pytest.approx(np.pi / 6)


def test_geodesic_errors():
    with pytest.raises(GapOneObstruction):
        geodesic(coord(2, [0]), coord(2, [1]))
    p = random_projection(4, 2, seed=0)
    with pytest.raises(DegeneratePair):
        geodesic(p, p)


def test_geodesic_law_random_n12():
    rng = np.random.default_rng(12)
    p, q = random_projection(12, 5, rng, "complex"), random_projection(12, 5, rng, "complex")
    path = geodesic(p, q)
    for _ in range(50):
        a, b = rng.uniform(0, HALF_PI, 2)
        g = gap_direct(path.eval(a), path.eval(b))
        assert abs(g - path.distance_law(a, b)) <= 1e-8


@given(generic_pairs())
def test_geodesic_law_and_rank(pair):
    p, q = pair
    path = geodesic(p, q)
    assert law_residual(path, 16) <= 1e-8
    assert opnorm(path.eval(0).matrix - p.matrix) <= 1e-9
    assert opnorm(path.eval(HALF_PI).matrix - q.matrix) <= 1e-9
    for t in np.linspace(0, HALF_PI, 64):
        m = path.eval(t).matrix
        assert abs(np.trace(m).real - p.rank) <= 1e-9
        assert opnorm(m @ m - m) <= 1e-10


@given(generic_pairs(max_n=8))
def test_distance_depends_only_on_difference(pair):
    path = geodesic(*pair)
    grid = np.linspace(0, HALF_PI, 64)
    mats = [path.eval(t) for t in grid]
    for shift in (3, 17, 40):
        vals = [gap_direct(mats[i], mats[i + shift]) for i in range(0, 64 - shift, 5)]
        assert max(vals) - min(vals) <= 1e-9


def test_eval_outside_domain():
    path = geodesic(*rotated_line(0.3))
    with pytest.raises(ValueError):
        path.eval(2.0)


# -- midpoints -------------------------------------------------------------------------------

def test_midpoint_canonical_examples():
    p, q = coord(2, [0]), coord(2, [1])
    r = midpoint_element(p, q, QUARTER_PI, [[1.0]])
    assert np.allclose(r.matrix, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    assert gap_direct(r, p) == pytest.approx(2 ** -0.5) and gap_direct(r, q) == pytest.approx(2 ** -0.5)
    r = midpoint_element(p, q, QUARTER_PI, [[-1.0]])
    assert np.allclose(r.matrix, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    r = midpoint_element(p, q, np.pi / 3, None)
    assert gap_direct(r, p) == pytest.approx(np.sin(np.pi / 3), abs=1e-12)


def test_midpoint_errors():
    p, q = synthetic_pair((1, 2, 1, 1, 1), seed=3)
    with pytest.raises(DimensionMismatch):
        midpoint_element(p, q, 0.5, np.eye(1))
    p, q = synthetic_pair((2, 2, 0, 1, 1), seed=3)
    with pytest.raises(DimensionMismatch):
        midpoint_element(p, q, 0.5, np.eye(3))
    with pytest.raises(HypothesisViolated):
        midpoint_element(p, q, 0.5, 2 * np.eye(2))
    with pytest.raises(HypothesisViolated):
        midpoint_element(p, q, HALF_PI, np.eye(2))


def test_midpoint_feasible():
    assert not midpoint_feasible(*synthetic_pair((1, 2, 1, 1, 1), seed=0))
    assert midpoint_feasible(coord(2, [0]), coord(2, [1]))
    p, q = random_projection(8, 3, seed=1), random_projection(8, 3, seed=2)
    assert midpoint_feasible(p, q)
    path = geodesic(p, q)
    r = path.eval(0.4)
    assert abs(gap_direct(r, p) - np.sin(0.4 * 2 * path.psi / np.pi)) <= 1e-9


@given(balanced_forms(), st.floats(0.05, HALF_PI - 0.05), seeds)
def test_midpoint_distances(form, theta, seed):
    p, q = reconstruct(form)
    d1 = form.dims[0]
    u = random_unitary(d1, seed, form.field) if d1 else np.zeros((0, 0))
    canon = halmos_decompose(p, q)
    r = assemble_midpoint(canon, MidpointSpec(theta, u))
    if d1:
        assert abs(gap_direct(r, p) - np.sin(theta)) <= 1e-8
        assert abs(gap_direct(r, q) - np.cos(theta)) <= 1e-8
    else:
        assert gap_direct(r, p) <= np.sin(theta) + 1e-9
        assert gap_direct(r, q) <= np.cos(theta) + 1e-9


def test_midpoint_custom_tail():
    p, q = synthetic_pair((1, 1, 1, 1, 0), seed=4)
    tail = Projection(np.diag([1.0, 0.0]), 1)
    r = midpoint_element(p, q, 0.6, np.eye(1), tail)
    assert r.rank == 2
    assert abs(gap_direct(r, p) - np.sin(0.6)) <= 1e-9


# -- three-point geodesic -------------------------------------------------------------------

def perp_triple(d, extra, fld, seed):
    rng = np.random.default_rng(seed)
    p, q = synthetic_pair((d, d, 0, extra, 0), field=fld, seed=rng)
    u = random_unitary(d, rng, fld)
    return p, q, midpoint_element(p, q, QUARTER_PI, u)


def test_three_point_canonical():
    p, q = coord(2, [0]), coord(2, [1])
    r = validate(np.full((2, 2), 0.5))
    path = three_point_geodesic(p, q, r)
    assert opnorm(path.eval(QUARTER_PI).matrix - r.matrix) <= 1e-10
    assert law_residual(path, 32) <= 1e-8


@given(st.integers(1, 3), st.integers(0, 2), fields, seeds)
def test_three_point_random(d, extra, fld, seed):
    p, q, r = perp_triple(d, extra, fld, seed)
    path = three_point_geodesic(p, q, r)
    for t, x in ((0, p), (QUARTER_PI, r), (HALF_PI, q)):
        assert opnorm(path.eval(t).matrix - x.matrix) <= 1e-8
    assert law_residual(path, 16) <= 1e-8


@given(st.integers(1, 3), st.integers(0, 2), fields, seeds)
def test_three_point_through_complements(d, extra, fld, seed):
    p, q, r = perp_triple(d, extra, fld, seed)
    cp, cq, cr = complement(p), complement(q), complement(r)
    path = three_point_geodesic(cp, cq, cr)
    assert path.complemented == (opnorm(cp.matrix @ cq.matrix) > 1e-8)
    for t, x in ((0, cp), (QUARTER_PI, cr), (HALF_PI, cq)):
        assert opnorm(path.eval(t).matrix - x.matrix) <= 1e-8
    assert law_residual(path, 16) <= 1e-8


def test_three_point_errors():
    p, q = rotated_line(0.4)
    with pytest.raises(NotSimRelated):
        three_point_geodesic(p, q, p)
    p, q = coord(2, [0]), coord(2, [1])
    with pytest.raises(NotMidpoint) as err:
        three_point_geodesic(p, q, p)
    assert "R-Q" in str(err.value) or "R-P" in str(err.value)
    # a midpoint-distance projection that is not of the midpoint form
    p, q = coord(3, [0]), coord(3, [1])
    r = projection_from_basis(np.array([[1.0], [1.0], [0.0]]) / np.sqrt(2))
    r2 = validate(r.matrix + np.diag([0, 0, 1.0]))
    with pytest.raises(NotMidpoint):
        three_point_geodesic(p, q, r2)


def test_uniqueness_inequality_example():
    p, q = coord(4, [0, 1]), coord(4, [2, 3])
    r = midpoint_element(p, q, QUARTER_PI, np.eye(2).astype(complex))
    p, q = p.as_field("complex"), q.as_field("complex")
    path = three_point_geodesic(p, q, r)
    theta = np.pi / 3
    s = perturbed_midpoint(path, theta, np.diag([1, np.exp(1j * np.pi / 3)]))
    assert opnorm(path.eval(theta).matrix - s.matrix) > np.sin(abs(QUARTER_PI - theta)) + 1e-3
    assert opnorm(s.matrix - r.matrix) > uniqueness_bound(theta) + 1e-3


@given(st.floats(0.05, HALF_PI - 0.05))
def test_unperturbed_midpoint_meets_bound(theta):
    p, q, r = perp_triple(2, 1, "complex", 0)
    path = three_point_geodesic(p, q, r)
    s = perturbed_midpoint(path, theta, np.eye(2))
    assert opnorm(s.matrix - path.eval(theta).matrix) <= 1e-12
    assert abs(opnorm(s.matrix - r.matrix) - uniqueness_bound(theta)) <= 1e-9


def test_uniqueness_bound_identity():
    for t in np.linspace(0, HALF_PI, 11):
        assert uniqueness_bound(t) == pytest.approx(np.sin(abs(QUARTER_PI - t)), abs=1e-12)


# -- branching ------------------------------------------------------------------------------------

def check_branching(pair):
    for path in (pair.first, pair.second):
        assert law_residual(path, 24) <= 1e-8
        assert opnorm(path.eval(QUARTER_PI).matrix - pair.midpoint.matrix) <= 1e-8
    for t in (0.0, HALF_PI):
        assert opnorm(pair.first.eval(t).matrix - pair.second.eval(t).matrix) <= 1e-8


def test_branching_extra_blocks():
    pair = branching_pair("ExtraBlocks", {"l": 1, "h3": 2, "h4": 2}, ZERO, triangle(0, QUARTER_PI, np.pi / 8))
    assert pair.first.dim == 6
    check_branching(pair)
    assert pair.separation > 0.05


def test_branching_generic_subcritical():
    pair = branching_pair("GenericSubcritical", {"sines": [0.5]}, IDENTITY, WIGGLE)
    check_branching(pair)
    assert pair.separation == pytest.approx(np.sin(0.1), abs=1e-3)


def test_branching_critical_sine_conjugated():
    pair = branching_pair("CriticalSine", {"critical": 1, "sines": [0.3, 0.5], "seed": 4, "field": "complex"},
                          IDENTITY, WIGGLE)
    check_branching(pair)
    assert pair.separation > 0.05


def test_branching_rejects_bad_reparams_and_configs():
    with pytest.raises(BadReparam):
        branching_pair("ExtraBlocks", {}, ZERO, triangle(0, HALF_PI, 0.5))
    with pytest.raises(BadReparam):
        # slope 3.2 exceeds pi / (2 psi) = 3 at psi = pi/6
        steep = pwl([0, 0.1, QUARTER_PI, HALF_PI], [0, 0.32, QUARTER_PI, HALF_PI])
        branching_pair("GenericSubcritical", {"sines": [0.5]}, IDENTITY, steep)
    with pytest.raises(BadConfig):
        branching_pair("ExtraBlocks", {"h4": 0}, ZERO, ZERO)
    with pytest.raises(BadConfig):
        branching_pair("GenericSubcritical", {"sines": [1.0]}, IDENTITY, IDENTITY)
    with pytest.raises(ValueError):
        branching_pair("Nonsense", {}, IDENTITY, IDENTITY)


# -- single-vector extraction -----------------------------------------------------------------

def test_edmon_canonical():
    p, q = coord(2, [0]), coord(2, [1])
    r = validate(np.full((2, 2), 0.5))
    cert = edmon_extract(p, q, r, [1.0, 0.0], QUARTER_PI)
    assert np.allclose(cert.y, [0, 1], atol=1e-12)
    assert cert.max_residual <= 1e-12


def test_edmon_with_extra_blocks():
    # x spans H1; the rest of P and Q is a generic plane
    theta = np.pi / 3
    p, q = synthetic_pair((1, 1, 0, 0, 1), sines=[0.4], seed=6)
    form = halmos_decompose(p, q)
    x = form.block("H1")[:, 0]
    r = midpoint_element(p, q, theta, np.eye(1))
    cert = edmon_extract(p, q, r, x, theta)
    assert abs(cert.residuals["r1 - cos^2"]) <= 1e-9
    assert np.real(np.vdot(x, r.matrix @ x)) == pytest.approx(0.25, abs=1e-9)
    assert cert.ok(1e-8)
    assert abs(np.linalg.norm(cert.y) - 1) <= 1e-10 and abs(np.vdot(x, cert.y)) <= 1e-10


def test_edmon_hypothesis_checks():
    p, q = coord(2, [0]), coord(2, [1])
    r = validate(np.full((2, 2), 0.5))
    with pytest.raises(HypothesisViolated) as err:
        edmon_extract(p, q, p, [1.0, 0.0], np.pi / 3)
    assert "R - Q" in err.value.condition
    with pytest.raises(HypothesisViolated):
        edmon_extract(p, q, r, [0.0, 1.0], QUARTER_PI)
    with pytest.raises(HypothesisViolated):
        edmon_extract(p, q, r, [1.0, 0.0], 0.0)
