"""Orthogonality-type relations and short chains between projections.

Infinite rank and corank are emulated by a margin ``m``: a projection is
admissible when both its rank and corank are at least ``m``.  Chains connect
two admissible projections through at most two intermediate admissible ones,
each consecutive pair orthogonal (or orthogonal with admissible sum).  Where
the finite dimension leaves no room, the constructors raise
:class:`CapacityExhausted` instead of returning something weaker.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BadConfig, BadRank, CapacityExhausted, DimensionMismatch
from .halmos import halmos_decompose
from .projection import (
    Projection,
    adjoint,
    canonical_subbasis,
    check_pair,
    complement,
    opnorm,
    projection_from_basis,
    random_basis,
)

TOL_REL = 1e-9


@dataclass(frozen=True)
class AdmissibilityModel:
    """Finite stand-in for projections with infinite rank and corank."""

    N: int
    margin: int = 3

    def __post_init__(self):
        if self.margin < 1:
            raise BadConfig(f"margin must be positive, got {self.margin}")
        if 2 * self.margin > self.N:
            raise BadConfig(f"2 * margin = {2 * self.margin} exceeds N = {self.N}")

    def admissible_rank(self, r: int) -> bool:
        return self.margin <= r <= self.N - self.margin

    def admissible(self, p: Projection) -> bool:
        return p.dim == self.N and self.admissible_rank(p.rank)

    def require(self, *ps: Projection) -> None:
        for p in ps:
            if p.dim != self.N:
                raise DimensionMismatch(f"projection acts on {p.dim} dimensions, model has N = {self.N}")
            if not self.admissible_rank(p.rank):
                raise BadRank(f"rank {p.rank} is not admissible for N = {self.N}, margin {self.margin}")


class Relation(str, Enum):
    PERP = "perp"
    SHARP = "sharp"


def is_orthogonal(p: Projection, q: Projection, tol: float = TOL_REL) -> bool:
    check_pair(p, q)
    return opnorm(p.matrix @ q.matrix) <= tol


def is_sim(p: Projection, q: Projection, tol: float = TOL_REL) -> bool:
    """``P`` orthogonal to ``Q`` or ``I - P`` orthogonal to ``I - Q``."""
    return is_orthogonal(p, q, tol) or is_orthogonal(complement(p), complement(q), tol)


def is_sharp(p: Projection, q: Projection, model: AdmissibilityModel, tol: float = TOL_REL) -> bool:
    """Orthogonal, both admissible, and ``P + Q`` admissible.

    ``P + Q`` is a projection once orthogonality holds, so its rank is the
    rounded trace ``rank P + rank Q``.
    """
    check_pair(p, q)
    if p.dim != model.N:
        raise DimensionMismatch(f"projection acts on {p.dim} dimensions, model has N = {model.N}")
    if not is_orthogonal(p, q, tol):
        return False
    sum_rank = int(round(float(np.real(np.trace(p.matrix + q.matrix)))))
    return model.admissible(p) and model.admissible(q) and model.admissible_rank(sum_rank)


def is_le(p: Projection, q: Projection, tol: float = TOL_REL) -> bool:
    """``Im P`` contained in ``Im Q``, tested as ``||P - QP|| <= tol``."""
    check_pair(p, q)
    return opnorm(p.matrix - q.matrix @ p.matrix) <= tol


@dataclass(frozen=True)
class Chain:
    """``P = nodes[0], ..., nodes[j] = Q`` with the relation on each link.

    ``residuals[i]`` is ``||nodes[i] nodes[i+1]||``.
    """

    nodes: tuple
    relation: Relation
    case: str
    residuals: tuple

    @property
    def j(self) -> int:
        return len(self.nodes) - 1


def _chain(nodes, relation, case):
    res = tuple(opnorm(a.matrix @ b.matrix) for a, b in zip(nodes[:-1], nodes[1:]))
    return Chain(tuple(nodes), Relation(relation), case, res)


def validate_chain(chain: Chain, model: AdmissibilityModel, tol: float = TOL_REL) -> bool:
    if not 1 <= chain.j <= 3:
        return False
    if not all(model.admissible(p) for p in chain.nodes):
        return False
    rel = is_orthogonal if chain.relation is Relation.PERP else (
        lambda a, b, t: is_sharp(a, b, model, t))
    return all(rel(a, b, tol) for a, b in zip(chain.nodes[:-1], chain.nodes[1:]))


def _proj(cols) -> Projection:
    return projection_from_basis(cols, tol=1e-8)


def perp_chain(p: Projection, q: Projection, model: AdmissibilityModel,
               tol: float = TOL_REL) -> Chain:
    """Chain of at most three orthogonal links from ``P`` to ``Q``.

    Cases, tried in order:

    ``orthogonal``  ``P`` already orthogonal to ``Q``.
    ``H4``          ``dim(Ker P & Ker Q) >= m``: one node inside it.
    ``generic``     at least ``2m`` generic planes: ``m`` of the ``Ker P``
                    directions, then ``m`` directions of other planes inside
                    ``Ker Q``.
    ``H1H2``        both ``Im P & Ker Q`` and ``Ker P & Im Q`` have dimension
                    ``>= m``: route ``P -> H2 -> H1 -> Q``.
    ``mixed``       assemble the two nodes from ``H2``/``H1``, shared ``H4``
                    directions and whole generic planes.

    Two orthogonal nodes ``A`` in ``Ker P`` and ``B`` in ``Ker Q`` can use each
    generic plane only once, so the mixed case is the last resort; if it does
    not fit either, :class:`CapacityExhausted` reports the missing dimensions.
    """
    check_pair(p, q)
    model.require(p, q)
    if is_orthogonal(p, q, tol):
        return _chain([p, q], Relation.PERP, "orthogonal")

    m = model.margin
    form = halmos_decompose(p, q)
    d1, d2, d3, d4, k = form.dims
    h4 = form.block("H4")

    if d4 >= m:
        mid = _proj(canonical_subbasis(h4, m))
        return _chain([p, mid, q], Relation.PERP, "H4")

    ka, ke = form.block("Ka"), form.block("Ke")
    s, c = form.sines, form.cosines
    # Ker Q direction inside generic plane i
    kq = ka * s[None, :] - ke * c[None, :]

    if k >= 2 * m:
        a = _proj(ke[:, :m])
        b = _proj(kq[:, m:2 * m])
        return _chain([p, a, b, q], Relation.PERP, "generic")

    h1, h2 = form.block("H1"), form.block("H2")
    if d1 >= m and d2 >= m:
        return _chain([p, _proj(h2), _proj(h1), q], Relation.PERP, "H1H2")

    need_a, need_b = max(0, m - d2), max(0, m - d1)
    deficit = need_a + need_b - (d4 + k)
    if deficit > 0:
        raise CapacityExhausted(
            "mixed", deficit,
            f"no chain with at most three orthogonal links: needs {need_a + need_b} directions "
            f"from Ker P & Ker Q and the generic part, only {d4 + k} available "
            f"(dims {form.dims}, margin {m})")
    h4c = canonical_subbasis(h4, d4)
    a4 = min(need_a, d4)
    b4 = min(need_b, d4 - a4)
    ak = need_a - a4
    bk = need_b - b4
    a_cols = np.hstack([h2, h4c[:, :a4], ke[:, :ak]])
    b_cols = np.hstack([h1, h4c[:, a4:a4 + b4], kq[:, ak:ak + bk]])
    return _chain([p, _proj(a_cols), _proj(b_cols), q], Relation.PERP, "mixed")


def _shrink(node: Projection, m: int) -> Projection:
    return _proj(canonical_subbasis(node.range_basis(), m))


def sharp_chain(p: Projection, q: Projection, model: AdmissibilityModel,
                tol: float = TOL_REL) -> Chain:
    """Chain of at most three links, each orthogonal with admissible sum.

    Intermediate nodes of :func:`perp_chain` are shrunk to rank ``m``
    sub-projections.  An orthogonal pair whose sum is too large is
    routed ``P -> (part of Q) -> (part of P) -> Q``.
    """
    check_pair(p, q)
    model.require(p, q)
    if is_sharp(p, q, model, tol):
        return _chain([p, q], Relation.SHARP, "sharp")

    n, m = model.N, model.margin
    # any sharp partner has rank >= m, and the sum must keep corank >= m
    deficit = max(p.rank, q.rank) - (n - 2 * m)
    if deficit > 0:
        raise CapacityExhausted(
            "rank", deficit,
            f"rank {max(p.rank, q.rank)} leaves no room for a sharp partner "
            f"(needs rank <= N - 2m = {n - 2 * m})")

    perp = perp_chain(p, q, model, tol)
    if perp.j == 1:
        mid_q = _shrink(q, m)
        mid_p = _shrink(p, m)
        nodes = [p, mid_q, mid_p, q]
        case = "orthogonal-extended"
    else:
        nodes = [p] + [_shrink(x, m) for x in perp.nodes[1:-1]] + [q]
        case = perp.case
    chain = _chain(nodes, Relation.SHARP, case)
    if not validate_chain(chain, model, tol):
        raise CapacityExhausted(case, 1, f"shrunk chain in case {case!r} does not validate")
    return chain


def le_counterexamples(s: Projection, t: Projection, model: AdmissibilityModel,
                       samples: int = 200, seed=None, tol: float = TOL_REL) -> list:
    """Sampled ``M`` with ``T # M`` but not ``S # M``.

    If ``S <= T`` the list must come back empty; a nonempty list refutes it.
    ``M`` is drawn as a random subspace of ``Ker T`` of admissible size.
    """
    check_pair(s, t)
    rng = np.random.default_rng(seed)
    kt = t.kernel_basis()
    hi = model.N - model.margin - t.rank
    if hi < model.margin:
        return []
    found = []
    for _ in range(samples):
        r = int(rng.integers(model.margin, hi + 1))
        inner = random_basis(kt.shape[1], r, rng, t.field).columns
        mm = _proj(kt @ inner)
        if is_sharp(t, mm, model, tol) and not is_sharp(s, mm, model, tol):
            found.append(mm)
    return found
