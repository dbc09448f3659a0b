"""Geodesic curves, midpoint sets and branching geodesics in the Grassmannian.

Every curve here has the same shape: a fixed unitary frame ``W`` and a model
matrix that is diagonal 0/1 except on a set of coordinate planes ``(i, j)``,
where it is the rank-one projection onto ``cos t e_i + sin t e_j``.  The angle
on each plane is ``scale * f(theta)`` for a reparameterization ``f`` shared by
a group of planes.  The frame is diagonalized once; evaluation at any
``theta`` is then a diagonal update plus one conjugation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadConfig,
    BadReparam,
    DegeneratePair,
    DimensionMismatch,
    GapOneObstruction,
    HypothesisViolated,
    NotMidpoint,
    NotSimRelated,
    PreconditionError,
)
from .halmos import HalmosForm, halmos_decompose
from .metric import gap_direct
from .projection import (
    Projection,
    ScalarField,
    adjoint,
    check_pair,
    complement,
    opnorm,
    random_unitary,
)

HALF_PI = np.pi / 2
QUARTER_PI = np.pi / 4
GRID_STEP = 1e-3
_SLACK = 1e-12


# -- reparameterizations -------------------------------------------------------

@dataclass(frozen=True)
class ReparamFunction:
    """A map ``[0, pi/2] -> R`` with a declared Lipschitz constant.

    ``kind``/``params`` give the JSON description; ``fn`` is what gets called.
    """

    fn: Callable[[float], float]
    lipschitz_bound: float
    anchors: tuple = ()
    kind: str = "custom"
    params: tuple = ()

    def __call__(self, theta):
        return self.fn(theta)

    def check(self, lipschitz_bound=None, anchors=None, value_range=None):
        """Validate on a ``1e-3`` grid of ``[0, pi/2]``.

        Raises :class:`BadReparam` on a Lipschitz, anchor or range violation.
        """
        bound = self.lipschitz_bound if lipschitz_bound is None else lipschitz_bound
        anchors = self.anchors if anchors is None else anchors
        grid = np.unique(np.r_[np.arange(0.0, HALF_PI, GRID_STEP), HALF_PI,
                               [a for a, _ in anchors]])
        vals = np.array([self.fn(t) for t in grid], dtype=float)
        slopes = np.abs(np.diff(vals)) / np.diff(grid)
        if slopes.size and slopes.max() > bound * (1 + 1e-9) + 1e-12:
            raise BadReparam(f"Lipschitz constant {slopes.max():.6g} exceeds {bound:.6g}")
        for a, v in anchors:
            if abs(self.fn(a) - v) > _SLACK:
                raise BadReparam(f"anchor f({a:.6g}) = {self.fn(a):.6g}, required {v:.6g}")
        if value_range is not None:
            lo, hi = value_range
            if vals.min() < lo - _SLACK or vals.max() > hi + _SLACK:
                raise BadReparam(f"values leave [{lo:.6g}, {hi:.6g}]")
        return self

    def to_dict(self):
        if self.kind == "custom":
            raise BadReparam("custom reparameterizations have no JSON form")
        return {"kind": self.kind, "params": [float(p) for p in self.params]}

    @classmethod
    def from_dict(cls, d) -> "ReparamFunction":
        kind, params = d["kind"], list(d.get("params", []))
        if kind == "identity":
            return identity_reparam()
        if kind == "triangle":
            return triangle(*params)
        if kind == "pwl":
            if len(params) % 2:
                raise BadReparam("pwl params are knots followed by values (even count)")
            h = len(params) // 2
            return pwl(params[:h], params[h:])
        raise BadReparam(f"unknown reparameterization kind {kind!r}")


def identity_reparam() -> ReparamFunction:
    return ReparamFunction(lambda t: float(t), 1.0, kind="identity")


def triangle(start: float, end: float, height: float) -> ReparamFunction:
    """Tent of the given height on ``[start, end]``, zero elsewhere."""
    if not end > start:
        raise BadReparam("triangle needs start < end")
    mid, half = 0.5 * (start + end), 0.5 * (end - start)

    def fn(t):
        return float(height * max(0.0, 1.0 - abs(t - mid) / half))

    return ReparamFunction(fn, abs(height) / half, kind="triangle", params=(start, end, height))


def pwl(knots: Sequence[float], values: Sequence[float]) -> ReparamFunction:
    """Piecewise-linear interpolant, held constant outside the knots."""
    x, y = np.asarray(knots, float), np.asarray(values, float)
    if x.shape != y.shape or x.size < 2 or np.any(np.diff(x) <= 0):
        raise BadReparam("pwl needs at least two strictly increasing knots with matching values")
    lip = float(np.max(np.abs(np.diff(y) / np.diff(x))))
    return ReparamFunction(lambda t: float(np.interp(t, x, y)), lip, kind="pwl",
                           params=tuple(x) + tuple(y))


IDENTITY = identity_reparam()


# -- paths ---------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicPath:
    """Curve ``theta -> W M(theta) W*`` on ``[0, pi/2]``.

    ``base`` holds the 0/1 diagonal of ``M`` away from the planes;
    ``planes[i] = (a, b)`` rotates ``e_a`` towards ``e_b`` by
    ``scales[i] * reparams[groups[i]](theta)``.  With ``complemented`` the
    curve is ``I - W M W*``.
    """

    frame: np.ndarray
    base: np.ndarray
    planes: np.ndarray
    scales: np.ndarray
    groups: np.ndarray
    reparams: tuple
    psi: float
    form: HalmosForm | None = None
    complemented: bool = False
    domain: tuple = (0.0, HALF_PI)

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    @property
    def rank(self) -> int:
        r = int(round(self.base.sum())) + len(self.planes)
        return self.dim - r if self.complemented else r

    def angles(self, theta: float) -> np.ndarray:
        return np.array([s * self.reparams[g](theta) for s, g in zip(self.scales, self.groups)])

    def model(self, theta: float) -> np.ndarray:
        lo, hi = self.domain
        if theta < lo - _SLACK or theta > hi + _SLACK:
            raise PreconditionError(f"theta = {theta!r} outside [{lo}, {hi}]")
        m = np.diag(self.base.astype(float))
        if len(self.planes):
            t = self.angles(theta)
            c, s = np.cos(t), np.sin(t)
            a, b = self.planes[:, 0], self.planes[:, 1]
            m[a, a] = c * c
            m[b, b] = s * s
            m[a, b] = c * s
            m[b, a] = c * s
        return m

    def eval(self, theta: float) -> Projection:
        m = self.frame @ self.model(theta) @ adjoint(self.frame)
        m = 0.5 * (m + adjoint(m))
        if self.complemented:
            m = np.eye(self.dim) - m
        return Projection(m, self.rank)

    __call__ = eval

    def distance_law(self, theta1: float, theta2: float) -> float:
        return float(np.sin(2.0 * abs(theta1 - theta2) * self.psi / np.pi))

    def sample(self, n: int):
        thetas = np.linspace(*self.domain, n)
        return thetas, [self.eval(t) for t in thetas]

    def with_reparam(self, group: int, f: ReparamFunction) -> "GeodesicPath":
        reps = list(self.reparams)
        reps[group] = f
        return GeodesicPath(self.frame, self.base, self.planes, self.scales, self.groups,
                            tuple(reps), self.psi, self.form, self.complemented, self.domain)


def law_residual(path: GeodesicPath, grid: int | Sequence[float] = 64) -> float:
    """``max |gap(path(a), path(b)) - law(a, b)|`` over all grid pairs."""
    thetas = np.linspace(*path.domain, grid) if np.isscalar(grid) else np.asarray(grid, float)
    mats = [path.eval(t).matrix for t in thetas]
    worst = 0.0
    for i in range(len(thetas)):
        for j in range(i + 1, len(thetas)):
            g = opnorm(mats[i] - mats[j])
            worst = max(worst, abs(g - path.distance_law(thetas[i], thetas[j])))
    return worst


def separation(first: GeodesicPath, second: GeodesicPath, grid: int = 129) -> float:
    """``max_theta gap(first(theta), second(theta))`` on a uniform grid."""
    return max(gap_direct(first.eval(t), second.eval(t))
               for t in np.linspace(*first.domain, grid))


def _plane_path(frame, base, planes, scales, groups, reparams, psi, form=None, complemented=False):
    planes = np.asarray(planes, dtype=int).reshape(-1, 2)
    return GeodesicPath(np.asarray(frame), np.asarray(base, dtype=float), planes,
                        np.asarray(scales, float), np.asarray(groups, dtype=int),
                        tuple(reparams), float(psi), form, complemented)


def _generic_planes(form: HalmosForm):
    a, e = form.block_slice("Ka"), form.block_slice("Ke")
    return np.stack([np.arange(a.start, a.stop), np.arange(e.start, e.stop)], axis=1)


def geodesic(p: Projection, q: Projection) -> GeodesicPath:
    """Curve from ``P`` to ``Q`` with ``gap = sin(2 |t1 - t2| psi / pi)``.

    Identity on ``H3``, zero on ``H4``, and on each generic plane the
    rotation by ``(2 theta / pi) arcsin s_i``.
    """
    form = halmos_decompose(p, q)
    d1, d2, d3, d4, k = form.dims
    if d1 or d2:
        raise GapOneObstruction(f"Im P & Ker Q or Ker P & Im Q is nonzero (d1={d1}, d2={d2})")
    if k == 0:
        raise DegeneratePair("P = Q: no curve to build")
    phi = form.angles
    base = np.zeros(form.dim)
    base[form.block_slice("H3")] = 1.0
    return _plane_path(form.W, base, _generic_planes(form), 2 * phi / np.pi,
                       np.zeros(k, int), (IDENTITY,), phi.max(), form)


# -- midpoints -------------------------------------------------------------------

@dataclass(frozen=True)
class MidpointSpec:
    """Parameters of one element of ``P^{<= sin theta} & Q^{<= cos theta}``.

    ``U`` maps ``H1`` onto ``H2``.  ``tail`` is a projection on the remaining
    summands ``H3 + H4 + K + K`` in the order of the canonical frame; ``None``
    uses the geodesic point at ``theta``.
    """

    theta: float
    U: np.ndarray
    tail: Projection | None = None


def midpoint_feasible(p: Projection, q: Projection, theta: float = QUARTER_PI) -> bool:
    """False exactly when ``dim H1 != dim H2`` (the midpoint set is empty)."""
    d1, d2 = halmos_decompose(p, q).dims[:2]
    return d1 == d2


def _default_tail(form: HalmosForm, theta: float) -> np.ndarray:
    d1, d2, d3, d4, k = form.dims
    off = d1 + d2
    m = np.zeros((form.dim - off, form.dim - off))
    m[:d3, :d3] = np.eye(d3)
    if k:
        t = (2 * theta / np.pi) * form.angles
        c, s = np.cos(t), np.sin(t)
        a = np.arange(d3 + d4, d3 + d4 + k)
        b = a + k
        m[a, a], m[b, b], m[a, b], m[b, a] = c * c, s * s, c * s, c * s
    return m


def assemble_midpoint(form: HalmosForm, spec: MidpointSpec) -> Projection:
    d1, d2 = form.dims[:2]
    if d1 != d2:
        raise DimensionMismatch(f"dim H1 = {d1} != dim H2 = {d2}: the midpoint set is empty")
    theta = float(spec.theta)
    if not 0.0 < theta < HALF_PI:
        raise HypothesisViolated("theta in (0, pi/2)", min(abs(theta), abs(theta - HALF_PI)))
    u = np.atleast_2d(np.asarray(spec.U)) if d1 else np.zeros((0, 0))
    if u.shape != (d1, d1):
        raise DimensionMismatch(f"U must be {d1}x{d1}, got {np.shape(spec.U)}")
    resid = opnorm(adjoint(u) @ u - np.eye(d1))
    if resid > 1e-10:
        raise HypothesisViolated("U unitary", resid)
    rest = form.dim - 2 * d1
    if spec.tail is None:
        tail = _default_tail(form, theta)
        tail_rank = int(round(np.trace(tail)))
    else:
        if spec.tail.dim != rest:
            raise DimensionMismatch(f"tail must act on {rest} dimensions, got {spec.tail.dim}")
        tail, tail_rank = spec.tail.matrix, spec.tail.rank
    c, s = np.cos(theta), np.sin(theta)
    dtype = np.result_type(form.W, u, tail, np.float64)
    m = np.zeros((form.dim, form.dim), dtype=dtype)
    h1, h2 = slice(0, d1), slice(d1, 2 * d1)
    m[h1, h1] = c * c * np.eye(d1)
    m[h2, h2] = s * s * np.eye(d1)
    m[h2, h1] = s * c * u
    m[h1, h2] = s * c * adjoint(u)
    m[2 * d1:, 2 * d1:] = tail
    r = form.W @ m @ adjoint(form.W)
    return Projection(0.5 * (r + adjoint(r)), d1 + tail_rank)


def midpoint_element(p: Projection, q: Projection, theta: float, U=None,
                     tail: Projection | None = None) -> Projection:
    """Element of ``P^{<= sin theta} & Q^{<= cos theta}`` with ``H1 -> H2`` part ``U``.

    ``U`` and ``tail`` are expressed in the canonical frame of
    :func:`halmos_decompose`; ``U`` defaults to the identity.
    """
    check_pair(p, q)
    form = halmos_decompose(p, q)
    d1 = form.dims[0]
    if U is None and form.dims[0] == form.dims[1]:
        U = np.eye(d1)
    return assemble_midpoint(form, MidpointSpec(theta, U if U is not None else np.eye(d1), tail))


# -- three-point geodesics -------------------------------------------------------

def _orthogonal(p, q, tol):
    return opnorm(p.matrix @ q.matrix) <= tol


def _polar(a):
    u, _, vh = np.linalg.svd(a)
    return u @ vh


def three_point_geodesic(p: Projection, q: Projection, r: Projection,
                         tol: float = 1e-8) -> GeodesicPath:
    """The curve through ``P, R, Q`` at ``0, pi/4, pi/2`` with ``gap = sin |t1 - t2|``.

    Requires ``P`` orthogonal to ``Q`` or ``I - P`` orthogonal to ``I - Q``; in
    the second case everything is computed for the complements.
    """
    check_pair(p, q)
    check_pair(p, r)
    if _orthogonal(p, q, tol):
        flip = False
    elif _orthogonal(complement(p), complement(q), tol):
        flip = True
        p, q, r = complement(p), complement(q), complement(r)
    else:
        raise NotSimRelated("neither P Q = 0 nor (I - P)(I - Q) = 0")

    dist = {"R-P": gap_direct(r, p), "R-Q": gap_direct(r, q)}
    bad = {key: v for key, v in dist.items() if abs(v - np.sqrt(0.5)) > tol}
    if bad:
        raise NotMidpoint("distance " + ", ".join(f"||{key}|| = {v:.12g}" for key, v in bad.items())
                          + " differs from 1/sqrt(2)", dist)

    form = halmos_decompose(p, q)
    d1, d2 = form.dims[:2]
    if d1 != d2:
        raise NotMidpoint(f"dim H1 = {d1} != dim H2 = {d2}", dist)
    h1, h2 = form.block("H1"), form.block("H2")
    u = 2.0 * adjoint(h2) @ r.matrix @ h1
    up = _polar(u)
    if opnorm(u - up) > tol:
        raise NotMidpoint(f"off-diagonal block of R is not a multiple of a unitary "
                          f"(deviation {opnorm(u - up):.3e})", dist)
    frame = np.hstack([h1, h2 @ up, form.W[:, 2 * d1:]])
    planes = np.stack([np.arange(d1), d1 + np.arange(d1)], axis=1)
    path = _plane_path(frame, np.zeros(form.dim), planes, np.ones(d1), np.zeros(d1, int),
                       (IDENTITY,), HALF_PI, form, complemented=flip)
    miss = opnorm(path.eval(QUARTER_PI).matrix - (complement(r) if flip else r).matrix)
    if miss > tol:
        raise NotMidpoint(f"R has a nonzero component outside H1 + H2 ({miss:.3e})", dist)
    return path


def perturbed_midpoint(path: GeodesicPath, theta: float, V) -> Projection:
    """``S(V)``: the midpoint-set element at ``theta`` whose ``H1 -> H2`` block is
    ``V`` relative to the frame of a three-point path (``V = I`` gives ``path(theta)``)."""
    v = np.atleast_2d(np.asarray(V))
    a, b = path.planes[:, 0], path.planes[:, 1]
    if v.shape != (len(a), len(a)):
        raise DimensionMismatch(f"V must be {len(a)}x{len(a)}")
    c, s = np.cos(theta), np.sin(theta)
    m = np.zeros((path.dim, path.dim), dtype=np.result_type(path.frame, v, np.float64))
    m[np.ix_(a, a)] = c * c * np.eye(len(a))
    m[np.ix_(b, b)] = s * s * np.eye(len(a))
    m[np.ix_(b, a)] = c * s * v
    m[np.ix_(a, b)] = c * s * adjoint(v)
    out = path.frame @ m @ adjoint(path.frame)
    out = 0.5 * (out + adjoint(out))
    if path.complemented:
        out = np.eye(path.dim) - out
    return Projection(out, path.rank)


def uniqueness_bound(theta: float) -> float:
    """``sqrt(1/2 - cos theta sin theta)``, equal to ``sin |pi/4 - theta|``."""
    return float(np.sqrt(max(0.5 - np.cos(theta) * np.sin(theta), 0.0)))


# -- branching geodesics -------------------------------------------------------------

class BranchConfig(str, Enum):
    EXTRA_BLOCKS = "ExtraBlocks"
    GENERIC_SUBCRITICAL = "GenericSubcritical"
    CRITICAL_SINE = "CriticalSine"


@dataclass(frozen=True)
class BranchingPair:
    first: GeodesicPath
    second: GeodesicPath
    midpoint: Projection
    separation: float

    def __iter__(self):
        return iter((self.first, self.second, self.midpoint))


def _frame(n, params):
    seed = params.get("seed")
    if seed is None:
        return np.eye(n)
    return random_unitary(n, seed, params.get("field", "real"))


def _count(params, key, default, minimum, config):
    v = int(params.get(key, default))
    if v < minimum:
        raise BadConfig(f"{config.value}: {key} = {v} must be at least {minimum}")
    return v


def _sines(params, config, key="sines"):
    s = np.sort(np.asarray(params.get(key, [0.5]), dtype=float).reshape(-1))
    if s.size == 0 or np.any(s <= 0) or np.any(s >= 1):
        raise BadConfig(f"{config.value}: {key} must be a nonempty list in (0, 1)")
    return s


def branching_pair(config, params: dict | None, f1: ReparamFunction,
                   f2: ReparamFunction) -> BranchingPair:
    """Two distinct curves through the same ``(P, R, Q)``, both with
    ``gap = sin |t1 - t2|``.

    ``ExtraBlocks``
        ``P = L + H3``, ``Q = L' + H3`` with ``H4 != 0``; ``f`` rotates one
        ``H3`` direction into ``H4``.  Needs ``f(0) = f(pi/4) = f(pi/2) = 0``,
        Lipschitz 1.  params: ``l, h3, h4``.
    ``GenericSubcritical``
        as above plus a generic block with sines ``< 1``, run at speed
        ``f``.  Needs ``f(0)=0, f(pi/4)=pi/4, f(pi/2)=pi/2``, Lipschitz
        ``pi / (2 psi)``.  params: ``l, h3, h4, sines``.
    ``CriticalSine``
        a generic block split into exact sine-1 planes (``critical`` of them,
        driven at unit speed) and a subcritical part driven by ``f``.
        params: ``l, h3, h4, critical, sines``.

    Optional params ``seed``/``field`` conjugate everything by a Haar unitary.
    """
    config = BranchConfig(config)
    params = dict(params or {})
    planes, scales, groups, base = [], [], [], []

    def add_fixed(count, value):
        base.extend([value] * count)

    if config is BranchConfig.EXTRA_BLOCKS:
        l = _count(params, "l", 1, 1, config)
        h3 = _count(params, "h3", 2, 1, config)
        h4 = _count(params, "h4", 2, 1, config)
        n = 2 * l + h3 + h4
        add_fixed(2 * l, 0.0)
        add_fixed(h3, 1.0)
        add_fixed(h4, 0.0)
        for i in range(l):
            planes.append((i, l + i)); scales.append(1.0); groups.append(0)
        x3, x4 = 2 * l, 2 * l + h3
        base[x3] = 0.0
        planes.append((x3, x4)); scales.append(1.0); groups.append(1)
        bound, anchors, vrange = 1.0, ((0.0, 0.0), (QUARTER_PI, 0.0), (HALF_PI, 0.0)), (0.0, HALF_PI)
    else:
        l_min = 1 if config is BranchConfig.GENERIC_SUBCRITICAL else 0
        l = _count(params, "l", 1, l_min, config)
        h3 = _count(params, "h3", 1, 0, config)
        h4 = _count(params, "h4", 1, 0, config)
        crit = 0
        if config is BranchConfig.CRITICAL_SINE:
            crit = _count(params, "critical", 1, 1, config)
        sub = _sines(params, config)
        phi = np.arcsin(sub)
        ks = len(sub)
        n = 2 * l + h3 + h4 + 2 * crit + 2 * ks
        add_fixed(2 * l, 0.0)
        add_fixed(h3, 1.0)
        add_fixed(h4, 0.0)
        add_fixed(2 * crit + 2 * ks, 0.0)
        for i in range(l):
            planes.append((i, l + i)); scales.append(1.0); groups.append(0)
        off = 2 * l + h3 + h4
        for i in range(crit):
            # arcsin(1) = pi/2, so the (2 theta / pi) arcsin S rotation runs at unit speed
            planes.append((off + i, off + crit + i)); scales.append(1.0); groups.append(0)
        off += 2 * crit
        for i in range(ks):
            planes.append((off + i, off + ks + i)); scales.append(2 * phi[i] / np.pi); groups.append(1)
        psi_sub = float(phi.max())
        bound = np.pi / (2 * psi_sub)
        anchors = ((0.0, 0.0), (QUARTER_PI, QUARTER_PI), (HALF_PI, HALF_PI))
        vrange = (0.0, HALF_PI)

    for f in (f1, f2):
        f.check(bound, anchors, vrange)

    w = _frame(n, params)
    make = lambda f: _plane_path(w, base, planes, scales, groups, (IDENTITY, f), HALF_PI)
    first, second = make(f1), make(f2)
    r = first.eval(QUARTER_PI)
    return BranchingPair(first, second, r, separation(first, second))


# -- single-vector extraction ------------------------------------------------------

@dataclass(frozen=True)
class EdmonCertificate:
    """Unit vector ``y`` orthogonal to ``x`` and the deviations of ``(P, Q, R)``
    from their block form on ``span{x} + span{y} + {x, y}^perp``."""

    y: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(abs(v) for v in self.residuals.values()) if self.residuals else 0.0

    def ok(self, tol: float = 1e-8) -> bool:
        return self.max_residual <= tol


def edmon_extract(p: Projection, q: Projection, r: Projection, x, theta: float,
                  tol: float = 1e-9) -> EdmonCertificate:
    """Recover ``y`` with ``R = [[cos^2, cos sin], [cos sin, sin^2]] + R_2`` on ``span{x, y}``.

    Preconditions: ``Px = x``, ``Qx = 0``, ``||R - P|| <= sin theta`` and
    ``||R - Q|| <= cos theta`` (each up to ``tol``).
    """
    check_pair(p, q)
    check_pair(p, r)
    x = np.asarray(x).reshape(-1)
    if x.shape[0] != p.dim:
        raise DimensionMismatch(f"x has length {x.shape[0]}, expected {p.dim}")
    if not 0.0 < theta < HALF_PI:
        raise HypothesisViolated("theta in (0, pi/2)", min(abs(theta), abs(theta - HALF_PI)))
    checks = {
        "||x|| = 1": abs(np.linalg.norm(x) - 1.0),
        "Px = x": np.linalg.norm(p.matrix @ x - x),
        "Qx = 0": np.linalg.norm(q.matrix @ x),
        "||R - P|| <= sin theta": gap_direct(r, p) - np.sin(theta),
        "||R - Q|| <= cos theta": gap_direct(r, q) - np.cos(theta),
    }
    for name, amount in checks.items():
        if amount > tol:
            raise HypothesisViolated(name, amount)

    c, s = np.cos(theta), np.sin(theta)
    rm, pm, qm = r.matrix, p.matrix, q.matrix
    rx = rm @ x
    r1 = float(np.real(np.vdot(x, rx)))
    u = rx - r1 * x
    y = u / (c * s)
    norm_y = np.linalg.norm(y)
    y = y / norm_y

    def off_block(m, v):
        # component of m v outside span{x, y}
        w = m @ v
        return np.linalg.norm(w - np.vdot(x, w) * x - np.vdot(y, w) * y)

    res = {
        "r1 - cos^2": r1 - c * c,
        "||u|| - cos sin": np.linalg.norm(u) - c * s,
        "||y|| - 1 (unnormalized)": norm_y - 1.0,
        "<x, y>": abs(np.vdot(x, y)),
        "r2 - sin^2": float(np.real(np.vdot(y, rm @ y))) - s * s,
        "z": off_block(rm, y),
        "p2": float(np.real(np.vdot(y, pm @ y))),
        "v": off_block(pm, y),
        "q2 - 1": float(np.real(np.vdot(y, qm @ y))) - 1.0,
        "w": off_block(qm, y),
        "||R - P|| - sin": gap_direct(r, p) - s,
        "||R - Q|| - cos": gap_direct(r, q) - c,
    }
    return EdmonCertificate(y, {k: float(v) for k, v in res.items()})
