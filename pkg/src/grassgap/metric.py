"""Gap metric ``||P - Q||`` and its closed forms."""
from __future__ import annotations

import numpy as np

from .errors import BadRank, NumericalInstability
from .halmos import HalmosForm, halmos_decompose
from .projection import Projection, check_pair, opnorm

CLAMP = 1e-12


def _clamp_unit(x: float, what: str) -> float:
    if x < -CLAMP or x > 1.0 + CLAMP:
        raise NumericalInstability(f"{what} = {x!r} lies outside [0, 1] beyond roundoff")
    return min(max(x, 0.0), 1.0)


def gap_direct(p: Projection, q: Projection) -> float:
    """Largest singular value of ``P - Q``."""
    check_pair(p, q)
    # LAPACK does not return bit-identical norms for A and -A; fix an order
    a, b = p.matrix, q.matrix
    if a.tobytes() > b.tobytes():
        a, b = b, a
    return _clamp_unit(opnorm(a - b), "gap")


def gap_from_form(form: HalmosForm) -> float:
    d1, d2 = form.dims[:2]
    if d1 > 0 or d2 > 0:
        return 1.0
    return float(form.sines.max()) if form.k else 0.0


def gap_formula(p: Projection, q: Projection) -> float:
    """Gap read off the canonical form: 1 if ``H1`` or ``H2`` is nonzero,
    otherwise the largest generic sine."""
    return gap_from_form(halmos_decompose(p, q))


def gap_lower_bound(p: Projection, q: Projection) -> float:
    """``sqrt(||(I - P) Q (I - P)||)``, never larger than the gap.

    Evaluated as ``||Q (I - P)||``, which is equal; taking the square root of
    the compressed norm would inflate roundoff near zero to ``1e-8``.
    """
    check_pair(p, q)
    comp = np.eye(p.dim) - p.matrix
    return _clamp_unit(opnorm(q.matrix @ comp), "lower bound")


def gap_rank1(p: Projection, q: Projection) -> float:
    """``sqrt(1 - tr PQ)`` for rank-one projections."""
    check_pair(p, q)
    if p.rank != 1 or q.rank != 1:
        raise BadRank(f"rank-one formula needs rank 1, got {p.rank} and {q.rank}")
    t = float(np.real(np.trace(p.matrix @ q.matrix)))
    return float(np.sqrt(min(max(1.0 - t, 0.0), 1.0)))
