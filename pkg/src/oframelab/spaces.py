"""Finite-dimensional Banach-space models.

Two kinds of model space are supported:

* ``lp``: R^n under the l_p norm, 1 <= p <= inf.
* ``l1grid``: step functions on a dyadic partition of [0, 1] into
  2**levels cells, normed by the mean of absolute cell values (the
  discrete integral of |v|).

Vectors and functionals are thin immutable wrappers around coordinate
arrays.  A functional stores raw pairing coefficients; for grid spaces
the cell weight enters the pairing, not the storage, so one coordinate
representation serves both kinds of space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SpaceMismatchError

__all__ = [
    "SpaceSpec",
    "Vec",
    "Functional",
    "norm",
    "dual_norm",
    "pairing",
    "haar_system",
    "dual_space",
    "functional_as_vector",
    "vector_as_functional",
    "functional_from_linear_form",
    "linear_form",
    "norming_vector",
    "norming_functional",
    "unit_ball_extreme_points",
    "dual_ball_extreme_points",
    "random_unit_vector",
    "random_unit_functional",
    "space_to_json",
    "space_from_json",
    "vec_to_json",
    "vec_from_json",
    "functional_to_json",
    "functional_from_json",
]

_INF = float("inf")


@dataclass(frozen=True)
class SpaceSpec:
    """A finite-dimensional norm model: either lp(p, dim) or l1grid(levels)."""

    kind: str
    p: float = 0.0
    n: int = 0
    levels: int = 0

    def __post_init__(self):
        if self.kind == "lp":
            if not (self.p >= 1.0):
                raise ValueError(f"p must satisfy p >= 1, got {self.p}")
            if self.n < 1:
                raise ValueError(f"dim must be positive, got {self.n}")
        elif self.kind == "l1grid":
            if self.levels < 0:
                raise ValueError(f"levels must be nonnegative, got {self.levels}")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @staticmethod
    def lp(p: float, dim: int) -> "SpaceSpec":
        return SpaceSpec(kind="lp", p=float(p), n=int(dim))

    @staticmethod
    def l1grid(levels: int) -> "SpaceSpec":
        return SpaceSpec(kind="l1grid", levels=int(levels))

    @property
    def dim(self) -> int:
        return 2**self.levels if self.kind == "l1grid" else self.n

    @property
    def is_grid(self) -> bool:
        return self.kind == "l1grid"

    @property
    def weight(self) -> float:
        """Scalar weight of the canonical pairing <f, x> = weight * f.c."""
        return 2.0 ** (-self.levels) if self.is_grid else 1.0

    @property
    def dual_exponent(self) -> float:
        """Conjugate exponent governing the dual norm (grid dual is sup)."""
        if self.is_grid:
            return _INF
        return _conj(self.p)

    def __repr__(self):
        if self.is_grid:
            return f"l1grid(levels={self.levels})"
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"lp(p={p}, dim={self.n})"


def _conj(p: float) -> float:
    if p == 1.0:
        return _INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _coords(values) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"coordinates must be one-dimensional, got shape {a.shape}")
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Vec:
    """An element of a model space."""

    space: SpaceSpec
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", _coords(self.coords))
        if len(self.coords) != self.space.dim:
            raise SpaceMismatchError(
                f"vector has {len(self.coords)} coordinates, space {self.space} has dim {self.space.dim}"
            )

    def __repr__(self):
        return f"Vec({self.space}, {np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True)
class Functional:
    """A functional on a model space (the stored space is the predual)."""

    space: SpaceSpec
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", _coords(self.coords))
        if len(self.coords) != self.space.dim:
            raise SpaceMismatchError(
                f"functional has {len(self.coords)} coordinates, space {self.space} has dim {self.space.dim}"
            )

    def __repr__(self):
        return f"Functional({self.space}, {np.array2string(self.coords, precision=6)})"


def norm_of(space: SpaceSpec, coords: np.ndarray) -> float:
    """Norm of a raw coordinate array in the given space."""
    a = np.abs(np.asarray(coords, dtype=float))
    if space.is_grid:
        return float(np.sum(a) * space.weight)
    if math.isinf(space.p):
        return float(np.max(a)) if a.size else 0.0
    if space.p == 1.0:
        return float(np.sum(a))
    if space.p == 2.0:
        return float(np.linalg.norm(a))
    return float(np.sum(a**space.p) ** (1.0 / space.p))


def dual_norm_of(space: SpaceSpec, coords: np.ndarray) -> float:
    """Dual norm of raw pairing coefficients against the given space."""
    a = np.abs(np.asarray(coords, dtype=float))
    if space.is_grid:
        return float(np.max(a)) if a.size else 0.0
    q = space.dual_exponent
    if math.isinf(q):
        return float(np.max(a)) if a.size else 0.0
    if q == 1.0:
        return float(np.sum(a))
    if q == 2.0:
        return float(np.linalg.norm(a))
    return float(np.sum(a**q) ** (1.0 / q))


def norm(space: SpaceSpec, v: Vec) -> float:
    """Norm of ``v`` in ``space``; rejects vectors from other spaces."""
    if v.space != space:
        raise SpaceMismatchError(f"vector lives in {v.space}, not {space}")
    return norm_of(space, v.coords)


def dual_norm(space: SpaceSpec, f: Functional) -> float:
    """Exact dual norm sup{<f, x> : ||x|| <= 1} via the conjugate formula."""
    if f.space != space:
        raise SpaceMismatchError(f"functional pairs against {f.space}, not {space}")
    return dual_norm_of(space, f.coords)


def pairing(f: Functional, x: Vec) -> float:
    """Bilinear pairing <f, x>; grid spaces integrate with cell weight."""
    if f.space != x.space:
        raise SpaceMismatchError(f"pairing mismatch: {f.space} vs {x.space}")
    return float(f.space.weight * (f.coords @ x.coords))


def linear_form(f: Functional) -> np.ndarray:
    """Row r with <f, x> = r @ x.coords (weight folded in)."""
    return f.space.weight * f.coords


def functional_from_linear_form(space: SpaceSpec, row: np.ndarray) -> Functional:
    """Inverse of :func:`linear_form`: build the functional with a given raw row."""
    return Functional(space, np.asarray(row, dtype=float) / space.weight)


def haar_system(levels: int) -> list[Vec]:
    """The 2**levels sup-normalized Haar step functions, constant first.

    Values lie in {-1, 0, +1} and the system is pairwise orthogonal under
    the discrete integral pairing of the grid space.
    """
    if levels < 0:
        raise ValueError("levels must be nonnegative")
    space = SpaceSpec.l1grid(levels)
    n = space.dim
    out = [Vec(space, np.ones(n))]
    for lev in range(levels):
        width = n // 2**lev
        for k in range(2**lev):
            h = np.zeros(n)
            lo = k * width
            h[lo : lo + width // 2] = 1.0
            h[lo + width // 2 : lo + width] = -1.0
            out.append(Vec(space, h))
    return out


# -- duality -----------------------------------------------------------------

def dual_space(space: SpaceSpec) -> SpaceSpec:
    """The model of the dual: lp(q) for lp(p), sup-norm coordinates for the grid."""
    if space.is_grid:
        return SpaceSpec.lp(_INF, space.dim)
    return SpaceSpec.lp(space.dual_exponent, space.n)


def functional_as_vector(f: Functional) -> Vec:
    """View a functional as an element of the dual model (an isometry)."""
    return Vec(dual_space(f.space), f.coords)


def vector_as_functional(v: Vec) -> Functional:
    """Canonical embedding of a vector into the dual of the dual model.

    Returns the functional on dual_space(v.space) that evaluates dual
    elements at ``v``; this is an isometry onto its image.
    """
    return Functional(dual_space(v.space), v.space.weight * v.coords)


# -- extremal elements -------------------------------------------------------

def norming_vector(space: SpaceSpec, f: Functional) -> Vec:
    """A unit vector x with <f, x> = dual_norm(f), exact for the closed forms."""
    c = f.coords
    if f.space != space:
        raise SpaceMismatchError(f"functional pairs against {f.space}, not {space}")
    if not np.any(c):
        e = np.zeros(space.dim)
        e[0] = 1.0 / space.weight if space.is_grid else 1.0
        return Vec(space, e)
    if space.is_grid or space.p == 1.0:
        i = int(np.argmax(np.abs(c)))
        e = np.zeros(space.dim)
        e[i] = math.copysign(1.0 / space.weight, c[i])
        return Vec(space, e)
    if math.isinf(space.p):
        return Vec(space, np.where(c >= 0.0, 1.0, -1.0))
    if space.p == 2.0:
        return Vec(space, c / np.linalg.norm(c))
    q = space.dual_exponent
    x = np.sign(c) * np.abs(c) ** (q - 1.0)
    return Vec(space, x / norm_of(space, x))


def norming_functional(space: SpaceSpec, v: Vec) -> Functional:
    """A dual-unit functional attaining <f, v> = norm(v) (the duality map)."""
    c = v.coords
    if v.space != space:
        raise SpaceMismatchError(f"vector lives in {v.space}, not {space}")
    if not np.any(c):
        e = np.zeros(space.dim)
        e[0] = 1.0
        return Functional(space, e)
    if space.is_grid or space.p == 1.0:
        return Functional(space, np.where(c >= 0.0, 1.0, -1.0))
    if math.isinf(space.p):
        i = int(np.argmax(np.abs(c)))
        e = np.zeros(space.dim)
        e[i] = math.copysign(1.0, c[i])
        return Functional(space, e)
    if space.p == 2.0:
        return Functional(space, c / np.linalg.norm(c))
    nv = norm_of(space, c)
    f = np.sign(c) * np.abs(c) ** (space.p - 1.0) / nv ** (space.p - 1.0)
    return Functional(space, f)


def unit_ball_extreme_points(space: SpaceSpec, max_dim: int = 12) -> np.ndarray | None:
    """Extreme points of the unit ball when they form a small finite set.

    Sign vectors for sup-norm spaces, scaled coordinate spikes for
    l1-type spaces; ``None`` when the ball is smooth or the set too big.
    """
    d = space.dim
    if space.is_grid or space.p == 1.0:
        pts = np.zeros((2 * d, d))
        s = 1.0 / space.weight
        for i in range(d):
            pts[2 * i, i] = s
            pts[2 * i + 1, i] = -s
        return pts
    if math.isinf(space.p):
        if d > max_dim:
            return None
        # global sign flip halves the enumeration
        k = np.arange(2 ** (d - 1))[:, None]
        bits = (k >> np.arange(d - 1)[None, :]) & 1
        pts = np.ones((2 ** (d - 1), d))
        pts[:, 1:] = 1.0 - 2.0 * bits
        return pts
    return None


def dual_ball_extreme_points(space: SpaceSpec, max_dim: int = 12) -> np.ndarray | None:
    """Extreme points of the dual unit ball, as functional coordinate rows."""
    d = space.dim
    if space.is_grid or space.p == 1.0:
        # dual is sup-norm on coefficients
        if d > max_dim:
            return None
        k = np.arange(2 ** (d - 1))[:, None]
        bits = (k >> np.arange(d - 1)[None, :]) & 1
        pts = np.ones((2 ** (d - 1), d))
        pts[:, 1:] = 1.0 - 2.0 * bits
        return pts
    if math.isinf(space.p):
        return np.eye(d)
    return None


def random_unit_vector(space: SpaceSpec, rng: np.random.Generator) -> Vec:
    c = rng.standard_normal(space.dim)
    while not np.any(c):
        c = rng.standard_normal(space.dim)
    return Vec(space, c / norm_of(space, c))


def random_unit_functional(space: SpaceSpec, rng: np.random.Generator) -> Functional:
    c = rng.standard_normal(space.dim)
    while not np.any(c):
        c = rng.standard_normal(space.dim)
    return Functional(space, c / dual_norm_of(space, c))


# -- JSON --------------------------------------------------------------------

def space_to_json(space: SpaceSpec) -> dict:
    if space.is_grid:
        return {"kind": "l1grid", "levels": space.levels}
    p = "inf" if math.isinf(space.p) else space.p
    return {"kind": "lp", "p": p, "dim": space.n}


def space_from_json(obj: dict) -> SpaceSpec:
    kind = obj.get("kind")
    if kind == "l1grid":
        return SpaceSpec.l1grid(int(obj["levels"]))
    if kind == "lp":
        raw = obj["p"]
        p = _INF if raw == "inf" else float(raw)
        return SpaceSpec.lp(p, int(obj["dim"]))
    raise ValueError(f"unknown space kind {kind!r}")


def vec_to_json(v: Vec) -> dict:
    return {"space": space_to_json(v.space), "coords": list(map(float, v.coords))}


def vec_from_json(obj: dict) -> Vec:
    return Vec(space_from_json(obj["space"]), np.asarray(obj["coords"], dtype=float))


def functional_to_json(f: Functional) -> dict:
    return {"space": space_to_json(f.space), "coords": list(map(float, f.coords))}


def functional_from_json(obj: dict) -> Functional:
    return Functional(space_from_json(obj["space"]), np.asarray(obj["coords"], dtype=float))
