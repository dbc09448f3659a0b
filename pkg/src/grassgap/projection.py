"""Orthogonal projections and subspace bases at finite dimension.

A projection is stored as its dense matrix together with its rank (the rounded
real trace).  Everything here is a pure function of its inputs; randomness is
driven by an explicit seed or ``numpy.random.Generator``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import (
    BadRank,
    DimensionMismatch,
    FieldMismatch,
    NonOrthonormalBasis,
    NotHermitian,
    NotIdempotent,
)

TOL_PROJ = 1e-10
# |trace - round(trace)| above this makes the rank ambiguous
TOL_TRACE = 1e-6
TOL_INTERSECT = 1e-8


class ScalarField(str, Enum):
    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def of(cls, a) -> "ScalarField":
        return cls.COMPLEX if np.iscomplexobj(a) else cls.REAL

    @property
    def dtype(self):
        return np.complex128 if self is ScalarField.COMPLEX else np.float64


def opnorm(a: np.ndarray) -> float:
    """Operator (spectral) norm; 0 for empty matrices."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Projection:
    """Hermitian idempotent matrix with its rank.

    Construct through :func:`validate`, :func:`projection_from_basis` or
    :func:`random_projection`; the bare constructor trusts its inputs.
    """

    matrix: np.ndarray
    rank: int
    # set by complement() so that complementing twice returns the original object
    _complement_of: "Projection | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if not np.iscomplexobj(m):
            m = m.astype(np.float64)
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "rank", int(self.rank))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def corank(self) -> int:
        return self.dim - self.rank

    @property
    def field(self) -> ScalarField:
        return ScalarField.of(self.matrix)

    def range_basis(self) -> np.ndarray:
        """Orthonormal basis of the image (N x rank)."""
        return self._split()[0]

    def kernel_basis(self) -> np.ndarray:
        """Orthonormal basis of the kernel (N x corank)."""
        return self._split()[1]

    def _split(self):
        w, v = np.linalg.eigh(self.matrix)
        # eigh sorts ascending: kernel first, image last
        k = self.dim - self.rank
        return v[:, k:][:, ::-1], v[:, :k]

    def as_field(self, fld: ScalarField | str) -> "Projection":
        fld = ScalarField(fld)
        if fld is self.field:
            return self
        if fld is ScalarField.COMPLEX:
            return Projection(self.matrix.astype(np.complex128), self.rank)
        raise FieldMismatch("cannot narrow a complex projection to the real field")

    def __eq__(self, other):
        if not isinstance(other, Projection):
            return NotImplemented
        return self.rank == other.rank and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.rank, self.matrix.tobytes()))


@dataclass(frozen=True)
class SubspaceBasis:
    """N x k matrix with orthonormal columns."""

    columns: np.ndarray
    tol: float = field(default=TOL_PROJ, compare=False, repr=False)

    def __post_init__(self):
        b = np.asarray(self.columns)
        if b.ndim != 2:
            raise DimensionMismatch(f"basis must be a 2-d array, got shape {b.shape}")
        if not np.iscomplexobj(b):
            b = b.astype(np.float64)
        resid = opnorm(adjoint(b) @ b - np.eye(b.shape[1]))
        if resid > self.tol:
            raise NonOrthonormalBasis(f"columns are not orthonormal (residual {resid:.3e})")
        object.__setattr__(self, "columns", _frozen(b))

    @property
    def parent_dim(self) -> int:
        return self.columns.shape[0]

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    @classmethod
    def orthonormalize(cls, m, tol: float = 1e-12) -> "SubspaceBasis":
        """Orthonormal basis of the column span of ``m`` (rank-revealing SVD)."""
        m = np.asarray(m)
        if m.shape[1] == 0:
            return cls(m.reshape(m.shape[0], 0))
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        r = int(np.sum(s > tol * max(1.0, s[0])))
        return cls(u[:, :r])


def _as_columns(b) -> np.ndarray:
    return b.columns if isinstance(b, SubspaceBasis) else np.asarray(b)


def validate(m, tol: float = TOL_PROJ) -> Projection:
    """Check that ``m`` is an orthogonal projection and wrap it.

    Raises
    ------
    NotHermitian, NotIdempotent
        With the offending residual attached.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"projection must be square, got shape {m.shape}")
    herm = opnorm(m - adjoint(m))
    if herm > tol:
        raise NotHermitian(herm)
    idem = opnorm(m @ m - m)
    if idem > tol:
        raise NotIdempotent(idem)
    tr = float(np.real(np.trace(m)))
    rank = int(round(tr))
    if abs(tr - rank) > TOL_TRACE:
        raise NotIdempotent(abs(tr - rank), f"trace {tr!r} is not an integer")
    return Projection(m, rank)


def projection_from_basis(b, tol: float = TOL_PROJ) -> Projection:
    cols = _as_columns(b)
    if cols.ndim != 2:
        raise DimensionMismatch(f"basis must be 2-d, got shape {cols.shape}")
    resid = opnorm(adjoint(cols) @ cols - np.eye(cols.shape[1]))
    if resid > tol:
        raise NonOrthonormalBasis(f"columns are not orthonormal (residual {resid:.3e})")
    m = cols @ adjoint(cols)
    m = 0.5 * (m + adjoint(m))
    return Projection(m, cols.shape[1])


def _gaussian(rng, shape, fld: ScalarField):
    g = rng.standard_normal(shape)
    if fld is ScalarField.COMPLEX:
        g = (g + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return g


def random_unitary(n: int, seed=None, field: ScalarField | str = "real") -> np.ndarray:
    """Haar-distributed orthogonal/unitary matrix (QR with phase correction)."""
    fld = ScalarField(field)
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(_gaussian(rng, (n, n), fld))
    d = np.diag(r)
    ph = d / np.where(np.abs(d) == 0, 1, np.abs(d))
    return q * ph[None, :]


def random_basis(n: int, k: int, seed=None, field: ScalarField | str = "real") -> SubspaceBasis:
    fld = ScalarField(field)
    rng = np.random.default_rng(seed)
    if k == 0:
        return SubspaceBasis(np.zeros((n, 0), dtype=fld.dtype))
    q, _ = np.linalg.qr(_gaussian(rng, (n, k), fld))
    return SubspaceBasis(q)


def random_projection(n: int, r: int, seed=None, field: ScalarField | str = "real") -> Projection:
    """Haar-distributed rank-``r`` projection on an ``n``-dimensional space."""
    if r < 0 or r > n:
        raise BadRank(f"rank {r} outside [0, {n}]")
    return projection_from_basis(random_basis(n, r, seed, field))


def complement(p: Projection) -> Projection:
    """``I - P``.  Applying it twice returns ``P`` exactly."""
    if p._complement_of is not None:
        return p._complement_of
    m = p.matrix
    return Projection(np.eye(p.dim, dtype=m.dtype) - m, p.dim - p.rank, _complement_of=p)


def identity(n: int, field: ScalarField | str = "real") -> Projection:
    return Projection(np.eye(n, dtype=ScalarField(field).dtype), n)


def zero(n: int, field: ScalarField | str = "real") -> Projection:
    return Projection(np.zeros((n, n), dtype=ScalarField(field).dtype), 0)


def check_pair(p: Projection, q: Projection) -> None:
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {q.dim}")
    if p.field is not q.field:
        raise FieldMismatch(f"fields differ: {p.field.value} vs {q.field.value}")


def subspace_intersect(a, b, tol: float = TOL_INTERSECT) -> SubspaceBasis:
    """Numerical intersection of two subspaces.

    Left singular vectors of ``A* B`` whose singular value (cosine of the
    principal angle) is at least ``1 - tol``, mapped back into the parent space.
    """
    ca, cb = _as_columns(a), _as_columns(b)
    if ca.shape[0] != cb.shape[0]:
        raise DimensionMismatch(f"parent dimensions differ: {ca.shape[0]} vs {cb.shape[0]}")
    dtype = np.result_type(ca, cb, np.float64)
    if ca.shape[1] == 0 or cb.shape[1] == 0:
        return SubspaceBasis(np.zeros((ca.shape[0], 0), dtype=dtype))
    u, s, _ = np.linalg.svd(adjoint(ca) @ cb)
    keep = s >= 1.0 - tol
    return SubspaceBasis.orthonormalize(ca @ u[:, : len(s)][:, keep])


def canonical_subbasis(basis, k: int) -> np.ndarray:
    """Deterministic ``k``-dimensional subspace of ``span(basis)``.

    Column-pivoted QR of the projector picks the coordinate directions best
    represented in the subspace first, so coordinate subspaces come back as
    spans of standard basis vectors.
    """
    cols = _as_columns(basis)
    if k > cols.shape[1]:
        raise BadRank(f"requested {k} dimensions from a {cols.shape[1]}-dimensional subspace")
    if k == 0:
        return np.zeros((cols.shape[0], 0), dtype=cols.dtype)
    proj = cols @ adjoint(cols)
    q, _, _ = scipy.linalg.qr(proj, pivoting=True)
    return q[:, :k]
