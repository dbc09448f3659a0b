"""Gap isometries: application, verification, recovery and classification.

The four map kinds are ``P -> U P U*``, ``P -> U conj(P) U*`` and the same two
composed with ``P -> I - P``.  Antiunitary maps are stored as a unitary plus
entrywise conjugation; over the reals conjugation is trivial and the
antiunitary kinds fold into the unitary ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadConfig,
    DimensionMismatch,
    FieldMismatch,
    NoConvergence,
    NumericalInstability,
    RankMismatch,
    TooFewSamples,
    Unclassifiable,
)
from .geodesics import MidpointSpec, assemble_midpoint
from .halmos import halmos_decompose
from .metric import gap_direct
from .projection import (
    Projection,
    ScalarField,
    adjoint,
    check_pair,
    complement,
    opnorm,
    projection_from_basis,
    random_projection,
)
from .relations import AdmissibilityModel, is_orthogonal, is_sim

TOL_UNITARY = 1e-10
CLASSIFY_TOL = 1e-4
AMBIGUITY = 1e-6


class IsometryKind(str, Enum):
    UNITARY = "unitary"
    ANTIUNITARY = "antiunitary"
    UNITARY_COMPLEMENT = "unitary_complement"
    ANTIUNITARY_COMPLEMENT = "antiunitary_complement"

    @property
    def conjugates(self) -> bool:
        return self in (IsometryKind.ANTIUNITARY, IsometryKind.ANTIUNITARY_COMPLEMENT)

    @property
    def complements(self) -> bool:
        return self in (IsometryKind.UNITARY_COMPLEMENT, IsometryKind.ANTIUNITARY_COMPLEMENT)

    def linear(self) -> "IsometryKind":
        return IsometryKind.UNITARY_COMPLEMENT if self.complements else IsometryKind.UNITARY


def kinds_for(fld: ScalarField | str) -> tuple:
    if ScalarField(fld) is ScalarField.REAL:
        return (IsometryKind.UNITARY, IsometryKind.UNITARY_COMPLEMENT)
    return tuple(IsometryKind)


@dataclass(frozen=True)
class IsometrySpec:
    """Map kind plus its unitary.

    An antiunitary kind with a real ``U`` is folded into the matching unitary
    kind and ``normalized`` is set.
    """

    kind: IsometryKind
    U: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        kind = IsometryKind(self.kind)
        u = np.asarray(self.U)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionMismatch(f"U must be square, got shape {u.shape}")
        resid = opnorm(adjoint(u) @ u - np.eye(u.shape[0]))
        if resid > TOL_UNITARY:
            raise BadConfig(f"U is not unitary (residual {resid:.3e})")
        normalized = self.normalized
        if kind.conjugates and not np.iscomplexobj(u):
            kind, normalized = kind.linear(), True
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "normalized", normalized)

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    @property
    def field(self) -> ScalarField:
        return ScalarField.of(self.U)


def transform(kind: IsometryKind, p: Projection) -> Projection:
    """The non-unitary part of a kind: optional complement, optional conjugation."""
    kind = IsometryKind(kind)
    out = complement(p) if kind.complements else p
    if kind.conjugates:
        out = Projection(out.matrix.conj(), out.rank)
    return out


def apply_isometry(spec: IsometrySpec, p: Projection) -> Projection:
    if p.dim != spec.dim:
        raise DimensionMismatch(f"projection acts on {p.dim} dimensions, map on {spec.dim}")
    if spec.field is ScalarField.COMPLEX and p.field is ScalarField.REAL:
        raise FieldMismatch("complex map applied to a real projection; convert with as_field first")
    base = transform(spec.kind, p)
    m = spec.U @ base.matrix @ adjoint(spec.U)
    return Projection(0.5 * (m + adjoint(m)), base.rank)


def isometry_residual(mapped_pairs: Sequence) -> float:
    """``max |gap(phi P_i, phi P_j) - gap(P_i, P_j)|`` over all index pairs."""
    pairs = list(mapped_pairs)
    if len(pairs) < 2:
        raise TooFewSamples(f"need at least 2 mapped pairs, got {len(pairs)}")
    worst = 0.0
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            (a, fa), (b, fb) = pairs[i], pairs[j]
            worst = max(worst, abs(gap_direct(fa, fb) - gap_direct(a, b)))
    return worst


# -- recovery --------------------------------------------------------------------

@dataclass(frozen=True)
class UnitaryFit:
    """Result of :func:`recover_unitary`.

    ``residual`` is ``max_i ||U P_i U* - Q_i||``; ``ambiguous`` flags a
    solution space of dimension above one (a nontrivial common commutant).
    """

    U: np.ndarray
    residual: float
    iterations: int
    ambiguous: bool = False


def _polar(a):
    u, _, vh = np.linalg.svd(a)
    return u @ vh


def _gauge(u):
    idx = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    x = u[idx]
    return u * (abs(x) / x) if abs(x) > 0 else u


def _objective(u, ps, qs):
    return sum(np.linalg.norm(u @ p - q @ u) ** 2 for p, q in zip(ps, qs))


def _fit_residual(u, ps, qs):
    return max(opnorm(u @ p @ adjoint(u) - q) for p, q in zip(ps, qs))


def recover_unitary(pairs: Sequence, max_iter: int = 200, tol: float = 1e-10) -> UnitaryFit:
    """Unitary ``U`` with ``U P_i U* ~ Q_i``.

    Minimizes ``sum_i ||U P_i - Q_i U||_F^2`` over unitaries.  The start is the
    least-squares solution of the linear system ``Z P_i = Q_i Z`` (smallest
    right singular vectors), projected to the unitary group; then alternating
    polar steps ``U <- polar(sum_i Q_i U P_i + (I - Q_i) U (I - P_i))``, each
    of which does not increase the objective.

    Raises
    ------
    NoConvergence
        After ``max_iter`` sweeps; the last fit is attached as ``fit``.
    """
    pairs = list(pairs)
    if not pairs:
        raise BadConfig("recover_unitary needs at least one pair")
    for p, q in pairs:
        check_pair(p, q)
        check_pair(p, pairs[0][0])
    n = pairs[0][0].dim
    ps = [p.matrix for p, _ in pairs]
    qs = [q.matrix for _, q in pairs]
    dtype = np.result_type(*ps, *qs, np.float64)
    eye = np.eye(n)

    # column-major vec: vec(Z P) = (P^T kron I) vec Z, vec(Q Z) = (I kron Q) vec Z
    gram = np.zeros((n * n, n * n), dtype=dtype)
    for p, q in zip(ps, qs):
        a = np.kron(p.T, eye) - np.kron(eye, q)
        gram += adjoint(a) @ a
    w, v = np.linalg.eigh(0.5 * (gram + adjoint(gram)))
    sv = np.sqrt(np.clip(w, 0.0, None))
    null = sv <= AMBIGUITY * max(sv[-1], 1.0)
    ambiguous = int(null.sum()) > 1
    if ambiguous:
        # among exact solutions take the one closest to the identity
        basis = v[:, null]
        z = basis @ (adjoint(basis) @ eye.reshape(-1, order="F").astype(dtype))
        if np.linalg.norm(z) < 1e-8:
            z = basis[:, 0]
    else:
        z = v[:, 0]
    u = _polar(z.reshape(n, n, order="F"))

    f_old = _objective(u, ps, qs)
    it = 0
    for it in range(1, max_iter + 1):
        if f_old <= tol * tol:
            break
        m = sum(q @ u @ p + (eye - q) @ u @ (eye - p) for p, q in zip(ps, qs))
        u = _polar(m)
        f_new = _objective(u, ps, qs)
        done = abs(f_old - f_new) <= tol * max(1.0, f_old)
        f_old = f_new
        if done:
            break
    else:
        fit = UnitaryFit(_gauge(u), _fit_residual(u, ps, qs), max_iter, ambiguous)
        raise NoConvergence(f"no convergence after {max_iter} sweeps "
                            f"(residual {fit.residual:.3e})", fit)
    u = _gauge(u)
    return UnitaryFit(u, _fit_residual(u, ps, qs), it, ambiguous)


# -- classification ----------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationReport:
    spec: IsometrySpec
    residual: float
    residuals: dict = field(default_factory=dict)
    ambiguous: bool = False


def sample_projections(n: int, samples: int, seed=None, field="real", margin: int = 1) -> list:
    """Random projections with ranks uniform in ``[margin, n - margin]``."""
    rng = np.random.default_rng(seed)
    return [random_projection(n, int(rng.integers(margin, n - margin + 1)), rng, field)
            for _ in range(samples)]


def classify_map(oracle: Callable[[Projection], Projection], N: int, field="complex",
                 samples: int = 8, seed=None, margin: int = 1,
                 tol: float = CLASSIFY_TOL) -> ClassificationReport:
    """Fit every map kind to sampled oracle outputs and keep the best.

    For each kind the inputs are pushed through that kind's complement and
    conjugation first, so only a unitary remains to be recovered.

    Raises
    ------
    Unclassifiable
        If no kind fits to ``tol``.
    """
    fld = ScalarField(field)
    inputs = sample_projections(N, samples, seed, fld, margin)
    outputs = [oracle(p) for p in inputs]
    residuals, fits = {}, {}
    for kind in kinds_for(fld):
        pairs = [(transform(kind, p), q) for p, q in zip(inputs, outputs)]
        try:
            fit = recover_unitary(pairs)
        except NoConvergence as exc:
            fit = exc.fit
        residuals[kind.value], fits[kind] = fit.residual, fit
    best = min(fits, key=lambda k: fits[k].residual)
    if fits[best].residual > tol:
        raise Unclassifiable(f"best fit {best.value} has residual {fits[best].residual:.3e} > {tol:.1e}",
                             residuals)
    return ClassificationReport(IsometrySpec(best, fits[best].U), fits[best].residual,
                                residuals, fits[best].ambiguous)


def action_error(a: IsometrySpec, b: IsometrySpec, probes: Sequence[Projection]) -> float:
    """``max ||a(P) - b(P)||`` over probe projections."""
    return max(opnorm(apply_isometry(a, p).matrix - apply_isometry(b, p).matrix) for p in probes)


# -- counterexample, strata, connectivity ----------------------------------------------

@dataclass(frozen=True)
class CounterexampleReport:
    P: Projection
    Q: Projection
    phiP: Projection
    phiQ: Projection
    pq_norm: float
    phi_product_norm: float
    orthogonal_before: bool
    orthogonal_after: bool
    sim_before: bool
    sim_after: bool
    gap_before: float
    gap_after: float


def orthogonality_counterexample(k: int = 1) -> CounterexampleReport:
    """``P = diag(I, 0, 0)``, ``Q = diag(0, I, 0)`` on three copies of a
    ``k``-dimensional space, mapped by ``P -> I - P``: the images are not
    orthogonal although the gap is preserved."""
    if k < 1:
        raise BadConfig(f"block dimension must be positive, got {k}")
    eye = np.eye(3 * k)
    p = projection_from_basis(eye[:, :k])
    q = projection_from_basis(eye[:, k:2 * k])
    fp, fq = complement(p), complement(q)
    return CounterexampleReport(
        p, q, fp, fq,
        pq_norm=opnorm(p.matrix @ q.matrix),
        phi_product_norm=opnorm(fp.matrix @ fq.matrix),
        orthogonal_before=is_orthogonal(p, q),
        orthogonal_after=is_orthogonal(fp, fq),
        sim_before=is_sim(p, q),
        sim_after=is_sim(fp, fq),
        gap_before=gap_direct(p, q),
        gap_after=gap_direct(fp, fq),
    )


class StratumKind(str, Enum):
    RANK_N = "rank_n"
    CORANK_N = "corank_n"
    MIDDLE = "middle"


@dataclass(frozen=True)
class StratumLabel:
    kind: StratumKind
    n: int | None = None

    def __str__(self):
        return self.kind.value if self.n is None else f"{self.kind.value}({self.n})"


def stratum(p: Projection, model: AdmissibilityModel) -> StratumLabel:
    if p.dim != model.N:
        raise DimensionMismatch(f"projection acts on {p.dim} dimensions, model has N = {model.N}")
    if p.rank < model.margin:
        return StratumLabel(StratumKind.RANK_N, p.rank)
    if p.corank < model.margin:
        return StratumLabel(StratumKind.CORANK_N, p.corank)
    return StratumLabel(StratumKind.MIDDLE)


@dataclass(frozen=True)
class ConnectingChain:
    nodes: tuple
    links: tuple
    delta: float


def connect_chain_lt1(p: Projection, q: Projection) -> ConnectingChain:
    """Equal-rank projections joined by links of gap strictly below one.

    If the gap is already below one the chain is ``[P, Q]``; otherwise it
    passes through the ``pi/4`` midpoint, whose links are ``1/sqrt 2``.
    """
    check_pair(p, q)
    if p.rank != q.rank:
        raise RankMismatch(f"ranks differ ({p.rank} vs {q.rank}): the gap is 1 across strata")
    form = halmos_decompose(p, q)
    d1, d2 = form.dims[:2]
    if d1 == 0 and d2 == 0:
        nodes = (p, q)
    elif d1 == d2:
        r = assemble_midpoint(form, MidpointSpec(np.pi / 4, np.eye(d1)))
        nodes = (p, r, q)
    else:
        # rank P - rank Q = d1 - d2, so this needs a miscounted decomposition
        raise NumericalInstability(f"equal ranks but dim H1 = {d1} != dim H2 = {d2}")
    links = tuple(gap_direct(a, b) for a, b in zip(nodes[:-1], nodes[1:]))
    return ConnectingChain(nodes, links, 1.0 - max(links))
