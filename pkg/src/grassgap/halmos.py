"""Canonical form of a pair of orthogonal projections.

Any pair ``(P, Q)`` is unitarily similar to a block-diagonal model on
``H1 + H2 + H3 + H4 + K + K`` where

* ``H1 = Im P & Ker Q``, ``H2 = Ker P & Im Q``,
* ``H3 = Im P & Im Q``,  ``H4 = Ker P & Ker Q``,
* on ``K + K`` the pair reads ``P = [[I, 0], [0, 0]]`` and
  ``Q = [[C^2, SC], [SC, S^2]]`` with commuting diagonal ``0 < S, C < 1``.

The fixed blocks are found from the two anticommuting Hermitian matrices
``P - Q`` (kernel ``H3 + H4``) and ``P + Q - I`` (kernel ``H1 + H2``), whose
eigenvalues on the generic part are ``+-s`` and ``+-c``.  Both thresholds are
therefore linear in the angle, which keeps small principal angles out of the
fixed blocks.  The generic block is split by a CS decomposition, which returns
sines and cosines to full relative accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BadConfig, DecompositionFailed, DimensionMismatch
from .projection import (
    Projection,
    ScalarField,
    adjoint,
    check_pair,
    opnorm,
    random_unitary,
)

TOL_GEN = 1e-8
TOL_RECON = 1e-7

BLOCKS = ("H1", "H2", "H3", "H4", "Ka", "Ke")


@dataclass(frozen=True)
class HalmosForm:
    """Unitary frame ``W`` plus block sizes and generic sines.

    Columns of ``W`` are ordered ``H1, H2, H3, H4, Ka, Ke`` where ``Ka`` (in
    ``Im P``) and ``Ke`` (in ``Ker P``) are paired column by column: the i-th
    ``Ka`` and ``Ke`` columns span one generic plane carrying sine ``sines[i]``.
    """

    W: np.ndarray
    dims: tuple
    sines: np.ndarray
    cosines: np.ndarray = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 5 or min(dims) < 0:
            raise BadConfig(f"dims must be five nonnegative integers, got {self.dims}")
        w = np.asarray(self.W)
        n = sum(dims[:4]) + 2 * dims[4]
        if w.shape != (n, n):
            raise DimensionMismatch(f"W has shape {w.shape}, dims {dims} need ({n}, {n})")
        s = np.asarray(self.sines, dtype=np.float64).reshape(-1)
        if len(s) != dims[4]:
            raise BadConfig(f"{len(s)} sines given for k = {dims[4]}")
        if np.any(s <= 0) or np.any(s >= 1):
            raise BadConfig("generic sines must lie in the open interval (0, 1)")
        c = np.sqrt(1.0 - s * s) if self.cosines is None else np.asarray(self.cosines, dtype=np.float64)
        object.__setattr__(self, "W", w)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "sines", s)
        object.__setattr__(self, "cosines", c)

    @property
    def dim(self) -> int:
        return self.W.shape[0]

    @property
    def k(self) -> int:
        return self.dims[4]

    @property
    def field(self) -> ScalarField:
        return ScalarField.of(self.W)

    @property
    def angles(self) -> np.ndarray:
        return np.arctan2(self.sines, self.cosines)

    def block_slice(self, name: str) -> slice:
        d1, d2, d3, d4, k = self.dims
        starts = np.cumsum([0, d1, d2, d3, d4, k, k])
        i = BLOCKS.index(name)
        return slice(int(starts[i]), int(starts[i + 1]))

    def block(self, name: str) -> np.ndarray:
        """Columns of ``W`` spanning the named summand."""
        return self.W[:, self.block_slice(name)]

    def model_pair(self):
        """``(P, Q)`` in the adapted basis (real block matrices)."""
        d1, d2, d3, d4, k = self.dims
        p = np.diag(np.r_[np.ones(d1), np.zeros(d2), np.ones(d3), np.zeros(d4), np.ones(k), np.zeros(k)])
        q = np.diag(np.r_[np.zeros(d1), np.ones(d2), np.ones(d3), np.zeros(d4), np.zeros(2 * k)])
        a, e = self.block_slice("Ka"), self.block_slice("Ke")
        s, c = self.sines, self.cosines
        q[a, a] = np.diag(c * c)
        q[a, e] = np.diag(s * c)
        q[e, a] = np.diag(s * c)
        q[e, e] = np.diag(s * s)
        return p, q

    @property
    def ranks(self):
        d1, d2, d3, d4, k = self.dims
        return d1 + d3 + k, d2 + d3 + k


def _conjugate(w, m):
    out = w @ m @ adjoint(w)
    return 0.5 * (out + adjoint(out))


def reconstruct(form: HalmosForm):
    """Rebuild ``(P, Q)`` from a canonical form."""
    pm, qm = form.model_pair()
    rp, rq = form.ranks
    return Projection(_conjugate(form.W, pm), rp), Projection(_conjugate(form.W, qm), rq)


def _split(m, basis, what):
    """Split ``span(basis)`` into the 1- and 0-eigenspaces of ``m`` restricted to it."""
    if basis.shape[1] == 0:
        return basis, basis
    r = adjoint(basis) @ m @ basis
    w, v = np.linalg.eigh(0.5 * (r + adjoint(r)))
    dev = np.max(np.minimum(np.abs(w), np.abs(w - 1.0)))
    if dev > 1e-6:
        raise DecompositionFailed(f"{what} is not invariant (eigenvalue deviation {dev:.2e})", dev)
    one = w > 0.5
    return basis @ v[:, one], basis @ v[:, ~one]


def _first_significant(col):
    idx = int(np.argmax(np.abs(col) > 1e-6))
    return idx, col[idx]


def _phase(col):
    _, x = _first_significant(col)
    return x / abs(x) if abs(x) > 0 else 1.0


def _gauge(cols):
    if cols.shape[1] == 0:
        return cols
    ph = np.array([_phase(cols[:, j]) for j in range(cols.shape[1])])
    return cols / ph[None, :]


def halmos_decompose(p: Projection, q: Projection, tol: float = TOL_GEN,
                     tol_recon: float = TOL_RECON) -> HalmosForm:
    """Canonical two-projection form of ``(p, q)``.

    Parameters
    ----------
    tol : float
        Generic-part guard.  Generic sines or cosines at or below ``tol`` are
        moved into the fixed blocks.
    tol_recon : float
        Largest accepted reconstruction residual (operator norm).

    Raises
    ------
    DecompositionFailed
        If the frame does not reproduce the pair to ``tol_recon``.
    """
    check_pair(p, q)
    n = p.dim
    pm, qm = p.matrix, q.matrix
    dtype = np.result_type(pm, qm, np.float64)

    d = pm - qm
    wd, vd = np.linalg.eigh(0.5 * (d + adjoint(d)))
    small = np.abs(wd) <= tol
    x34, rest = vd[:, small], vd[:, ~small]

    e = adjoint(rest) @ (pm + qm - np.eye(n)) @ rest
    we, ve = np.linalg.eigh(0.5 * (e + adjoint(e)))
    small = np.abs(we) <= tol
    x12, g = rest @ ve[:, small], rest @ ve[:, ~small]

    h1, h2 = _split(pm, x12, "Im P & Ker Q")
    h3, h4 = _split(pm, x34, "Im P & Im Q")

    if g.shape[1] % 2:
        raise DecompositionFailed(f"generic part has odd dimension {g.shape[1]}")
    k = g.shape[1] // 2
    ka = ke = np.zeros((n, 0), dtype=dtype)
    s = c = np.zeros(0)
    if k:
        a, a_perp = _split(pm, g, "generic part (P)")
        b, b_perp = _split(qm, g, "generic part (Q)")
        if a.shape[1] != k or b.shape[1] != k:
            raise DecompositionFailed(
                f"generic part is not balanced: rank P = {a.shape[1]}, rank Q = {b.shape[1]}, k = {k}")
        frame = np.hstack([a, a_perp])
        cross = adjoint(frame) @ np.hstack([b, b_perp])
        (u1, u2), theta, _ = scipy.linalg.cossin(cross, p=k, q=k, separate=True)
        ka, ke = a @ u1, a_perp @ u2
        s, c = np.sin(theta), np.cos(theta)

        low, high = s <= tol, c <= tol
        if np.any(low):
            h3 = np.hstack([h3, ka[:, low]])
            h4 = np.hstack([h4, ke[:, low]])
        if np.any(high):
            h1 = np.hstack([h1, ka[:, high]])
            h2 = np.hstack([h2, ke[:, high]])
        keep = ~(low | high)
        ka, ke, s, c = ka[:, keep], ke[:, keep], s[keep], c[keep]

        if len(s):
            ph = np.array([_phase(ka[:, j]) for j in range(ka.shape[1])])
            ka, ke = ka / ph[None, :], ke / ph[None, :]
            firsts = [_first_significant(ka[:, j]) for j in range(ka.shape[1])]
            order = np.lexsort((
                [-abs(v) for _, v in firsts],
                [i for i, _ in firsts],
                np.round(s, 12),
            ))
            ka, ke, s, c = ka[:, order], ke[:, order], s[order], c[order]

    blocks = [_gauge(h) for h in (h1, h2, h3, h4)]
    w = np.hstack(blocks + [ka, ke]).astype(dtype, copy=False)
    dims = tuple(h.shape[1] for h in blocks) + (len(s),)
    form = HalmosForm(w, dims, s, c)

    rp, rq = reconstruct(form)
    resid = max(opnorm(rp.matrix - pm), opnorm(rq.matrix - qm),
                opnorm(adjoint(w) @ w - np.eye(n)))
    if resid > tol_recon:
        raise DecompositionFailed(f"reconstruction residual {resid:.3e} exceeds {tol_recon:.1e}", resid)
    return form


def principal_angles_from_form(form: HalmosForm) -> np.ndarray:
    d1, d2, d3, _, _ = form.dims
    return np.sort(np.r_[np.zeros(d3), form.angles, np.full(min(d1, d2), np.pi / 2)])


def principal_angles(p: Projection, q: Projection) -> np.ndarray:
    """Ascending principal angles between ``Im P`` and ``Im Q``.

    ``min(rank P, rank Q)`` values: zeros for ``H3``, the generic angles, and
    ``pi/2`` for the unmatched part of ``H1``/``H2``.
    """
    return principal_angles_from_form(halmos_decompose(p, q))


def random_form(dims, sines=None, field="real", seed=None) -> HalmosForm:
    """Canonical form with a Haar-random frame; sines drawn uniformly if omitted."""
    dims = tuple(int(x) for x in dims)
    rng = np.random.default_rng(seed)
    if sines is None:
        sines = np.sort(rng.uniform(0.05, 0.95, size=dims[4]))
    n = sum(dims[:4]) + 2 * dims[4]
    return HalmosForm(random_unitary(n, rng, field), dims, sines)


def synthetic_pair(dims, sines=None, field="real", seed=None):
    """A pair ``(P, Q)`` with prescribed block sizes and generic sines."""
    return reconstruct(random_form(dims, sines, field, seed))
