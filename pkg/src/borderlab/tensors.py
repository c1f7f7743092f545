"""Dense order-d tensors over exact scalars or series, group actions, and
one-parameter-subgroup limits.

Positions are 1-based index tuples ``(j1, ..., jd)`` throughout, matching
the combinatorial conventions of the weight and pyramid machinery; constant
matrices remain ordinary 0-based lists of lists.

Limits at ``t -> 0`` and ``t -> infinity`` are computed by sign analysis of
integer weight sums, never by series expansion, so weights may be
astronomically large (the degeneration construction uses weights ``2^j``
with ``j`` up to the ambient dimension).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence

from . import linalg
from .errors import NoLimitError, ShapeError
from .fields import FieldContext
from .series import LaurentSeries, SeriesMatrix


def _strides(dims: Sequence[int]) -> tuple:
    out = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        out[i] = out[i + 1] * dims[i + 1]
    return tuple(out)


class Tensor:
    """Dense tensor with exact scalar entries and 1-based positions."""

    __slots__ = ("field", "dims", "data", "_strides")

    def __init__(self, field: FieldContext, dims: Sequence[int], data: Sequence):
        dims = tuple(int(n) for n in dims)
        if len(dims) < 1 or any(n < 0 for n in dims):
            raise ShapeError(f"bad tensor dims {dims}")
        size = math.prod(dims)
        data = tuple(data)
        if len(data) != size:
            raise ShapeError(f"expected {size} entries for dims {dims}, got {len(data)}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_strides", _strides(dims))

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    @classmethod
    def zeros(cls, field: FieldContext, dims: Sequence[int]) -> "Tensor":
        return cls(field, dims, [field.zero()] * math.prod(tuple(dims)))

    @classmethod
    def from_entries(cls, field: FieldContext, dims: Sequence[int], entries: Dict[tuple, object]) -> "Tensor":
        dims = tuple(dims)
        data = [field.zero()] * math.prod(dims)
        strides = _strides(dims)
        for pos, value in entries.items():
            data[_flat(pos, dims, strides)] = value
        return cls(field, dims, data)

    @property
    def order(self) -> int:
        return len(self.dims)

    def _flat(self, pos: Sequence[int]) -> int:
        return _flat(pos, self.dims, self._strides)

    def get(self, pos: Sequence[int]):
        return self.data[self._flat(pos)]

    def support(self) -> Iterable[tuple]:
        """Yield ``(position, value)`` for the nonzero entries."""
        field = self.field
        for flat, v in enumerate(self.data):
            if not field.is_zero(v):
                yield _unflat(flat, self.dims, self._strides), v

    def is_zero(self) -> bool:
        return all(self.field.is_zero(v) for v in self.data)

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        f = self.field
        return Tensor(f, self.dims, [f.add(a, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        f = self.field
        return Tensor(f, self.dims, [f.sub(a, b) for a, b in zip(self.data, other.data)])

    def scale(self, c) -> "Tensor":
        f = self.field
        return Tensor(f, self.dims, [f.mul(c, v) for v in self.data])

    def _check_compatible(self, other: "Tensor") -> None:
        if not isinstance(other, Tensor):
            raise TypeError("expected Tensor")
        self.field.ensure_same(other.field)
        if self.dims != other.dims:
            raise ShapeError(f"tensor dims differ: {self.dims} vs {other.dims}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tensor)
            and self.field == other.field
            and self.dims == other.dims
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.dims, self.data))

    def __repr__(self) -> str:
        nnz = sum(1 for _ in self.support())
        return f"Tensor(dims={self.dims}, nnz={nnz})"


def _flat(pos: Sequence[int], dims: Sequence[int], strides: Sequence[int]) -> int:
    if len(pos) != len(dims):
        raise ShapeError(f"position {tuple(pos)} has wrong arity for dims {tuple(dims)}")
    flat = 0
    for p, n, s in zip(pos, dims, strides):
        if not 1 <= p <= n:
            raise ShapeError(f"position {tuple(pos)} out of range for dims {tuple(dims)}")
        flat += (p - 1) * s
    return flat


def _unflat(flat: int, dims: Sequence[int], strides: Sequence[int]) -> tuple:
    pos = []
    for s in strides:
        pos.append(flat // s + 1)
        flat %= s
    return tuple(pos)


class SeriesTensor:
    """Dense tensor whose entries are Laurent series (uniformly truncated)."""

    __slots__ = ("field", "dims", "data", "_strides")

    def __init__(self, field: FieldContext, dims: Sequence[int], data: Sequence[LaurentSeries]):
        dims = tuple(int(n) for n in dims)
        data = list(data)
        if len(data) != math.prod(dims):
            raise ShapeError("entry count does not match dims")
        trunc = None
        for e in data:
            field.ensure_same(e.field)
            if e.trunc is not None and (trunc is None or e.trunc < trunc):
                trunc = e.trunc
        if trunc is not None:
            data = [e.truncate(trunc) for e in data]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", tuple(data))
        object.__setattr__(self, "_strides", _strides(dims))

    def __setattr__(self, name, value):
        raise AttributeError("SeriesTensor is immutable")

    @classmethod
    def from_tensor(cls, t: Tensor) -> "SeriesTensor":
        return cls(t.field, t.dims, [LaurentSeries.constant(t.field, v) for v in t.data])

    def get(self, pos: Sequence[int]) -> LaurentSeries:
        return self.data[_flat(pos, self.dims, self._strides)]

    def support(self) -> Iterable[tuple]:
        for flat, e in enumerate(self.data):
            if e.coeffs:
                yield _unflat(flat, self.dims, self._strides), e

    def negative_valuation_entry(self) -> Optional[tuple]:
        """First entry (row-major) with certified negative valuation, or None.

        Raises PrecisionError via ``valuation_lower_bound`` semantics only
        implicitly: entries that are zero to nonnegative precision are fine.
        """
        for flat, e in enumerate(self.data):
            v = e.valuation_lower_bound()
            if v is not None and v < 0:
                if e.coeffs:
                    return _unflat(flat, self.dims, self._strides), e.val
                return _unflat(flat, self.dims, self._strides), v
        return None

    def constant_terms(self) -> Tensor:
        return Tensor(self.field, self.dims, [e.coefficient(0) for e in self.data])

    def equals_mod(self, other: "SeriesTensor", n: int) -> bool:
        if self.dims != other.dims:
            raise ShapeError("tensor dims differ")
        return all(a.equals_mod(b, n) for a, b in zip(self.data, other.data))

    def __repr__(self) -> str:
        return f"SeriesTensor(dims={self.dims})"


# ---------------------------------------------------------------------------
# multilinear action
# ---------------------------------------------------------------------------

def _mode_apply(dims, data, axis, mat, zero, add, mul, is_zero):
    """Apply ``mat`` (m x dims[axis]) along ``axis`` (0-based) of flat data."""
    n = dims[axis]
    m = len(mat)
    if any(len(row) != n for row in mat):
        raise ShapeError(f"matrix for axis {axis} must have {n} columns")
    inner = math.prod(dims[axis + 1 :]) if axis + 1 < len(dims) else 1
    new_dims = dims[:axis] + (m,) + dims[axis + 1 :]
    out = [zero] * math.prod(new_dims)
    src_block = n * inner
    dst_block = m * inner
    for flat, v in enumerate(data):
        if is_zero(v):
            continue
        outer, rem = divmod(flat, src_block)
        b, off = divmod(rem, inner)
        base = outer * dst_block + off
        for a in range(m):
            c = mat[a][b]
            if is_zero(c):
                continue
            idx = base + a * inner
            out[idx] = add(out[idx], mul(c, v))
    return new_dims, out


def act(mats: Sequence[Sequence[Sequence]], t: Tensor) -> Tensor:
    """Apply constant matrices factor-by-factor: ``(M1 ⊗ ... ⊗ Md) · T``.

    Rectangular matrices are allowed, so this also expresses projections
    onto smaller spaces.
    """
    if len(mats) != t.order:
        raise ShapeError(f"expected {t.order} matrices, got {len(mats)}")
    field = t.field
    dims, data = t.dims, list(t.data)
    for axis, mat in enumerate(mats):
        dims, data = _mode_apply(
            dims, data, axis, mat, field.zero(), field.add, field.mul, field.is_zero
        )
    return Tensor(field, dims, data)


def act_series(mats: Sequence[SeriesMatrix], t: Tensor) -> SeriesTensor:
    """Apply series matrices factor-by-factor to a constant tensor."""
    if len(mats) != t.order:
        raise ShapeError(f"expected {t.order} matrices, got {len(mats)}")
    field = t.field
    zero = LaurentSeries.zero(field)
    dims = t.dims
    data = [LaurentSeries.constant(field, v) for v in t.data]
    for axis, mat in enumerate(mats):
        field.ensure_same(mat.field)
        dims, data = _mode_apply(
            dims,
            data,
            axis,
            mat.entries,
            zero,
            lambda a, b: a + b,
            lambda a, b: a * b,
            lambda e: e.is_exactly_zero(),
        )
    return SeriesTensor(field, dims, data)


# ---------------------------------------------------------------------------
# one-parameter subgroups and limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupFactor:
    """One tensor factor of a subgroup: optional basis matrix plus weights.

    ``basis is None`` means the standard basis; otherwise it is an
    invertible constant matrix ``h`` and the factor acts as
    ``h · diag(t^weights) · h^{-1}``.
    """

    weights: tuple
    basis: Optional[tuple] = None  # tuple of tuples of scalars

    @property
    def dim(self) -> int:
        return len(self.weights)


class OneParamSubgroup:
    """A conjugated-diagonal one-parameter subgroup per tensor factor."""

    __slots__ = ("field", "factors")

    def __init__(self, field: FieldContext, factors: Sequence[SubgroupFactor]):
        factors = tuple(factors)
        for fac in factors:
            if fac.basis is not None:
                if len(fac.basis) != fac.dim or any(len(r) != fac.dim for r in fac.basis):
                    raise ShapeError("basis matrix shape does not match the weight count")
                if not linalg.is_invertible(field, [list(r) for r in fac.basis]):
                    raise SingularBasisError("subgroup basis matrix is singular")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "factors", factors)

    def __setattr__(self, name, value):
        raise AttributeError("OneParamSubgroup is immutable")

    @classmethod
    def from_weights(cls, field: FieldContext, weights_per_factor: Sequence[Sequence[int]]) -> "OneParamSubgroup":
        return cls(field, [SubgroupFactor(weights=tuple(int(w) for w in ws)) for ws in weights_per_factor])

    @classmethod
    def trivial(cls, field: FieldContext, dims: Sequence[int]) -> "OneParamSubgroup":
        return cls.from_weights(field, [[0] * n for n in dims])

    @property
    def dims(self) -> tuple:
        return tuple(fac.dim for fac in self.factors)

    @property
    def order(self) -> int:
        return len(self.factors)

    def inverted(self) -> "OneParamSubgroup":
        """The subgroup ``t -> lambda(t^{-1})`` (all weights negated)."""
        return OneParamSubgroup(
            self.field,
            [SubgroupFactor(weights=tuple(-w for w in f.weights), basis=f.basis) for f in self.factors],
        )

    def weight_of(self, pos: Sequence[int]) -> int:
        """Total weight of an eigenbasis position (1-based)."""
        return sum(f.weights[p - 1] for f, p in zip(self.factors, pos))

    def _basis_mats(self) -> list:
        return [None if f.basis is None else [list(r) for r in f.basis] for f in self.factors]

    def to_eigen(self, t: Tensor) -> Tensor:
        """Coordinates of ``t`` in the subgroup's eigenbasis."""
        mats = self._basis_mats()
        if all(m is None for m in mats):
            return t
        full = [
            linalg.identity(self.field, n) if m is None else linalg.mat_inv(self.field, m)
            for m, n in zip(mats, self.dims)
        ]
        return act(full, t)

    def from_eigen(self, t: Tensor) -> Tensor:
        """Map eigenbasis coordinates back to the ambient coordinates."""
        mats = self._basis_mats()
        if all(m is None for m in mats):
            return t
        full = [linalg.identity(self.field, n) if m is None else m for m, n in zip(mats, self.dims)]
        return act(full, t)

    def series_matrices(self, clamp: int = 64) -> tuple:
        """The factors as exact series matrices ``h · diag(t^w) · h^{-1}``.

        Only sensible for small weights (guarded by |w| <= clamp); limits
        of big-weight subgroups go through sign analysis instead.
        """
        out = []
        for fac in self.factors:
            if any(abs(w) > clamp for w in fac.weights):
                raise ValueError("weights too large to expand as series; use limit analysis")
            d = SeriesMatrix.diag_powers(self.field, list(fac.weights))
            if fac.basis is None:
                out.append(d)
            else:
                h = SeriesMatrix.from_scalar_matrix(self.field, [list(r) for r in fac.basis])
                hinv = SeriesMatrix.from_scalar_matrix(
                    self.field, linalg.mat_inv(self.field, [list(r) for r in fac.basis])
                )
                out.append(h @ d @ hinv)
        return tuple(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OneParamSubgroup)
            and self.field == other.field
            and self.factors == other.factors
        )

    def __repr__(self) -> str:
        return f"OneParamSubgroup(dims={self.dims})"


class SingularBasisError(ShapeError):
    """Raised when a subgroup basis matrix is not invertible."""


@dataclass(frozen=True)
class WeightDecomposition:
    """Split of a tensor into weight components of a one-parameter subgroup.

    ``components`` maps each realized weight to the component tensor in the
    subgroup's eigenbasis; mapping the sum back through the basis recovers
    the decomposed tensor exactly.
    """

    base: OneParamSubgroup
    components: dict  # weight -> Tensor (eigenbasis coordinates)
    dims: tuple

    def weights(self) -> list:
        return sorted(self.components)

    def component(self, weight: int) -> Tensor:
        got = self.components.get(weight)
        if got is None:
            return Tensor.zeros(self.base.field, self.dims)
        return got

    def reconstruct(self) -> Tensor:
        total = Tensor.zeros(self.base.field, self.dims)
        for comp in self.components.values():
            total = total + comp
        return self.base.from_eigen(total)


def weight_decompose(t: Tensor, subgroup: OneParamSubgroup) -> WeightDecomposition:
    """Decompose ``t`` into eigen-components of the subgroup's weights."""
    if t.dims != subgroup.dims:
        raise ShapeError(f"tensor dims {t.dims} do not match subgroup dims {subgroup.dims}")
    eigen = subgroup.to_eigen(t)
    buckets: dict = {}
    for pos, v in eigen.support():
        w = subgroup.weight_of(pos)
        buckets.setdefault(w, {})[pos] = v
    components = {
        w: Tensor.from_entries(t.field, t.dims, entries) for w, entries in buckets.items()
    }
    return WeightDecomposition(base=subgroup, components=components, dims=t.dims)


def limit_at_zero(subgroup: OneParamSubgroup, t: Tensor) -> Tensor:
    """``lim_{t->0} lambda(t) · T``: exists iff no negative-weight component.

    Computed by weight-sign analysis over the eigen-support; the value is
    the weight-zero component mapped back through the bases.  Raises
    :class:`NoLimitError` with a witnessing position and weight otherwise.
    """
    if t.dims != subgroup.dims:
        raise ShapeError(f"tensor dims {t.dims} do not match subgroup dims {subgroup.dims}")
    eigen = subgroup.to_eigen(t)
    kept: dict = {}
    for pos, v in eigen.support():
        w = subgroup.weight_of(pos)
        if w < 0:
            raise NoLimitError(
                f"no limit at t->0: eigen-position {pos} has negative weight {w}",
                position=pos,
                weight=w,
            )
        if w == 0:
            kept[pos] = v
    return subgroup.from_eigen(Tensor.from_entries(t.field, t.dims, kept))


def limit_at_infinity(subgroup: OneParamSubgroup, t: Tensor) -> Tensor:
    """``lim_{t->inf} lambda(t) · T`` as the ``t->0`` limit of the inverse."""
    return limit_at_zero(subgroup.inverted(), t)


# ---------------------------------------------------------------------------
# unit tensors
# ---------------------------------------------------------------------------

def unit_tensor(field: FieldContext, r: int, d: int) -> Tensor:
    """The size-``r`` unit tensor: ones on the full diagonal of ``(K^r)^{⊗d}``."""
    if r < 0 or d < 2:
        raise ValueError("unit tensor needs r >= 0 and d >= 2")
    return Tensor.from_entries(field, (r,) * d, {(i,) * d: field.one() for i in range(1, r + 1)})


def recognize_unit_tensor(t: Tensor) -> Optional[int]:
    """Size ``r`` if the support is a diagonal-type witness, else ``None``.

    A tensor whose ``r`` nonzero entries have pairwise distinct
    coordinates in every factor maps to the size-``r`` unit tensor by
    coordinate injections and diagonal scaling, so it lies in the orbit of
    the unit tensor.  Tensors with any other support shape are rejected
    (general orbit membership is not decided here).
    """
    support = [pos for pos, _ in t.support()]
    r = len(support)
    for axis in range(t.order):
        coords = {pos[axis] for pos in support}
        if len(coords) != r:
            return None
    return r
