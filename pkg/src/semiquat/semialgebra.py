"""Semi-real quaternion algebra with a configurable metric signature.

A semi-real quaternion is ``q = q1 e1 + q2 e2 + q3 e3 + q4`` where ``q4`` is the
scalar part.  The ambient space carries an index-2 metric (two negative signs);
the basis products are

    e_i e_i = -eps_i,    e_i e_j = -eps_i eps_j e_k  for (ijk) cyclic,

with ``eps_i`` the metric sign of ``e_i`` measured relative to the scalar unit.
With the default signature (-, -, +, +) this is the split-quaternion algebra
(e3^2 = -1, e1^2 = e2^2 = +1), and ``q * conj(q) = h(q, q)``.

Vectors are passed around either as :class:`SemiQuaternion` values or as plain
numpy arrays of shape ``(4,)``; every public function accepts both.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import kernels as K
from .errors import MetricError, NonSpatialInput, NullVectorError

DEFAULT_NULL_TOL = 1e-9


class SemiQuaternion(NamedTuple):
    """Immutable quaternion ``q1 e1 + q2 e2 + q3 e3 + q4``."""

    q1: float
    q2: float
    q3: float
    q4: float

    # keep numpy scalars from hijacking the arithmetic operators below
    __array_ufunc__ = None

    @classmethod
    def from_array(cls, arr) -> "SemiQuaternion":
        a = np.asarray(arr, dtype=float).reshape(4)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def scalar_unit(cls) -> "SemiQuaternion":
        return cls(0.0, 0.0, 0.0, 1.0)

    @classmethod
    def basis(cls, i: int) -> "SemiQuaternion":
        """Basis element ``e_i`` for ``i`` in 1..3; ``i == 4`` is the scalar unit."""
        a = [0.0, 0.0, 0.0, 0.0]
        a[i - 1] = 1.0
        return cls(*a)

    @property
    def scalar(self) -> float:
        return self.q4

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.q1, self.q2, self.q3)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def __add__(self, other):
        return SemiQuaternion.from_array(np.asarray(self) + np.asarray(other, dtype=float))

    def __sub__(self, other):
        return SemiQuaternion.from_array(np.asarray(self) - np.asarray(other, dtype=float))

    def __neg__(self):
        return SemiQuaternion(-self.q1, -self.q2, -self.q3, -self.q4)

    def __mul__(self, alpha):
        if isinstance(alpha, (SemiQuaternion, tuple, list, np.ndarray)):
            raise TypeError("use quat_mul(p, q, ctx) for quaternion products")
        a = float(alpha)
        return SemiQuaternion(a * self.q1, a * self.q2, a * self.q3, a * self.q4)

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1.0 / float(alpha))


class Causality(enum.Enum):
    SPACELIKE = 1
    TIMELIKE = -1
    NULL = 0


def _signed_perm_ok(axes) -> bool:
    return len(axes) == 3 and sorted(abs(int(a)) for a in axes) == [1, 2, 3]


@dataclass(frozen=True)
class MetricContext:
    """Metric signature and orientation conventions.

    ``spatial_axes`` maps the vector part of a quaternion onto the coordinates
    of the associated E^3_1 space: coordinate ``j`` of the spatial vector is
    ``sign(a_j) * q[|a_j|]``.  It must be an isometry from the vector-part form
    (the scalar part of ``u * v``) onto ``spatial_signs``.
    """

    ambient_signs: tuple[int, int, int, int] = (-1, -1, 1, 1)
    spatial_signs: tuple[int, int, int] = (-1, 1, 1)
    orientation: int = 1
    spatial_axes: tuple[int, int, int] = (3, 2, -1)
    null_tol: float = DEFAULT_NULL_TOL

    def __post_init__(self):
        amb = tuple(int(x) for x in self.ambient_signs)
        spa = tuple(int(x) for x in self.spatial_signs)
        axes = tuple(int(x) for x in self.spatial_axes)
        object.__setattr__(self, "ambient_signs", amb)
        object.__setattr__(self, "spatial_signs", spa)
        object.__setattr__(self, "spatial_axes", axes)
        object.__setattr__(self, "orientation", int(self.orientation))
        if len(amb) != 4 or any(x not in (-1, 1) for x in amb) or sum(amb) != 0:
            raise MetricError(f"ambient_signs must hold two +1 and two -1, got {amb}")
        if len(spa) != 3 or any(x not in (-1, 1) for x in spa) or abs(sum(spa)) != 1:
            raise MetricError(f"spatial_signs must have index 1 (mixed signs), got {spa}")
        if self.orientation not in (-1, 1):
            raise MetricError(f"orientation must be +1 or -1, got {self.orientation}")
        if not _signed_perm_ok(axes):
            raise MetricError(f"spatial_axes must be a signed permutation of 1..3, got {axes}")
        if not self.null_tol > 0:
            raise MetricError("null_tol must be positive")
        weights = self.vector_form_signs
        for j, a in enumerate(axes):
            if weights[abs(a) - 1] != spa[j]:
                raise MetricError(
                    f"spatial_axes {axes} do not carry the vector-part form {tuple(weights)} "
                    f"onto spatial_signs {spa}"
                )

    @classmethod
    def default(cls) -> "MetricContext":
        return cls()

    @classmethod
    def paper24(cls) -> "MetricContext":
        """The literal (+, +, -, -) reading of the norm formula."""
        return cls(ambient_signs=(1, 1, -1, -1))

    @classmethod
    def named(cls, name: str) -> "MetricContext":
        if name == "default":
            return cls.default()
        if name == "paper24":
            return cls.paper24()
        raise MetricError(f"unknown metric preset {name!r} (expected default|paper24)")

    @cached_property
    def h_signs(self) -> np.ndarray:
        return np.array(self.ambient_signs, dtype=float)

    @cached_property
    def basis_signs(self) -> np.ndarray:
        """eps_i of e1, e2, e3 relative to the scalar unit (enter the product table)."""
        return np.array(self.ambient_signs[:3], dtype=float) * self.ambient_signs[3]

    @property
    def scalar_sign(self) -> int:
        return self.ambient_signs[3]

    @cached_property
    def vector_form_signs(self) -> np.ndarray:
        """Weights of g(u, v) = scalar part of u * v for spatial u, v."""
        return -self.basis_signs

    @cached_property
    def axes_matrix(self) -> np.ndarray:
        """3x3 matrix taking quaternion vector parts to E^3_1 coordinates."""
        m = np.zeros((3, 3))
        for j, a in enumerate(self.spatial_axes):
            m[j, abs(a) - 1] = 1.0 if a > 0 else -1.0
        return m

    def to_dict(self) -> dict:
        return {
            "ambient_signs": list(self.ambient_signs),
            "spatial_signs": list(self.spatial_signs),
            "orientation": self.orientation,
            "spatial_axes": list(self.spatial_axes),
            "null_tol": self.null_tol,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricContext":
        if "preset" in d:
            base = cls.named(d["preset"]).to_dict()
            base.update({k: v for k, v in d.items() if k != "preset"})
            d = base
        known = {"ambient_signs", "spatial_signs", "orientation", "spatial_axes", "null_tol"}
        unknown = set(d) - known
        if unknown:
            raise MetricError(f"unknown metric fields: {sorted(unknown)}")
        kw = dict(d)
        for key in ("ambient_signs", "spatial_signs", "spatial_axes"):
            if key in kw:
                kw[key] = tuple(kw[key])
        return cls(**kw)


DEFAULT_CONTEXT = MetricContext()


def _arr(q) -> np.ndarray:
    return np.asarray(q, dtype=float)


def quat_mul(p, q, ctx: MetricContext = DEFAULT_CONTEXT) -> SemiQuaternion:
    return SemiQuaternion.from_array(K.qmul(_arr(p), _arr(q), ctx.basis_signs))


def conjugate(q) -> SemiQuaternion:
    a = _arr(q)
    return SemiQuaternion(-a[0], -a[1], -a[2], a[3])


def inner_h(p, q, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
    """The semi-real inner product, sum of ambient_signs[i] * p_i * q_i."""
    return float(K.hdot(_arr(p), _arr(q), ctx.h_signs))


def norm_N(q, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
    return float(np.sqrt(abs(K.hdot(_arr(q), _arr(q), ctx.h_signs))))


def _null_threshold(a: np.ndarray, tol: float) -> float:
    return tol * float(np.max(np.abs(a))) ** 2


def is_null(q, ctx: MetricContext = DEFAULT_CONTEXT, tol: float | None = None) -> bool:
    a = _arr(q)
    tol = ctx.null_tol if tol is None else tol
    return abs(float(K.hdot(a, a, ctx.h_signs))) <= _null_threshold(a, tol)


def classify(q, ctx: MetricContext = DEFAULT_CONTEXT, tol: float | None = None) -> Causality:
    """Spacelike when h(q, q) > 0, timelike when < 0, null within ``tol``.

    ``tol`` is relative to the largest squared component.
    """
    tol = ctx.null_tol if tol is None else tol
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = _arr(q)
    val = float(K.hdot(a, a, ctx.h_signs))
    if abs(val) <= _null_threshold(a, tol):
        return Causality.NULL
    return Causality.SPACELIKE if val > 0 else Causality.TIMELIKE


def causal_sign(q, ctx: MetricContext = DEFAULT_CONTEXT, tol: float | None = None) -> int:
    """The sign eps_q of h(q, q); raises :class:`NullVectorError` for null q."""
    c = classify(q, ctx, tol)
    if c is Causality.NULL:
        raise NullVectorError("causal sign undefined for a null vector", quantity="h(q,q)")
    return c.value


def decompose(q) -> tuple[SemiQuaternion, SemiQuaternion]:
    """Split q into (temporal, spatial) = (q + conj q)/2, (q - conj q)/2."""
    a = _arr(q)
    return SemiQuaternion(0.0, 0.0, 0.0, a[3]), SemiQuaternion(a[0], a[1], a[2], 0.0)


def _require_spatial(u: np.ndarray, tol: float, name: str):
    scale = max(float(np.max(np.abs(u[:3]))), 1.0)
    if abs(u[3]) > tol * scale:
        raise NonSpatialInput(f"{name} has scalar part {u[3]!r}", quantity="scalar part")


def spatial_form(u, v, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
    """g(u, v): the scalar part of ``u * v`` for spatial quaternions."""
    a, b = _arr(u), _arr(v)
    return float(np.dot(ctx.vector_form_signs * a[:3], b[:3]))


def cross3(u, v, ctx: MetricContext = DEFAULT_CONTEXT, tol: float = 1e-9) -> SemiQuaternion:
    """Lorentzian cross product of spatial quaternions: the vector part of u * v."""
    a, b = _arr(u), _arr(v)
    _require_spatial(a, tol, "u")
    _require_spatial(b, tol, "v")
    a = a.copy()
    b = b.copy()
    a[3] = b[3] = 0.0
    prod = K.qmul(a, b, ctx.basis_signs)
    prod[3] = 0.0
    return SemiQuaternion.from_array(prod)


def wedge4(a, b, c, ctx: MetricContext = DEFAULT_CONTEXT) -> SemiQuaternion:
    """Triple wedge X with h(X, w) = orientation * det(a, b, c, w) for all w."""
    return SemiQuaternion.from_array(
        K.wedge4(_arr(a), _arr(b), _arr(c), ctx.h_signs, float(ctx.orientation))
    )


def det4(a, b, c, d) -> float:
    return float(K.det4(_arr(a), _arr(b), _arr(c), _arr(d)))


def quat_norm_form(q, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
    """q * conj(q), which is always scalar (equals h(q, q) times the scalar sign)."""
    a = _arr(q)
    return float(K.qmul(a, np.array([-a[0], -a[1], -a[2], a[3]]), ctx.basis_signs)[3])


def quat_inverse(q, ctx: MetricContext = DEFAULT_CONTEXT) -> SemiQuaternion:
    n = quat_norm_form(q, ctx)
    if abs(n) <= _null_threshold(_arr(q), ctx.null_tol):
        raise NullVectorError("null quaternion has no inverse", quantity="q*conj(q)")
    return conjugate(q) / n
