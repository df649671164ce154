"""Dense matrix operators between space models.

Operator norms are exact where closed formulas exist:

* source is l1 or a grid space: max over columns of the target norm of
  the column image of an extreme source vector;
* target is sup-norm: max over rows of the source dual norm;
* l2 to l2: the largest singular value.

Every other configuration gets a reproducible projected-ascent lower
bound (a nonlinear power iteration over the unit sphere), flagged as
uncertified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_SEED
from .errors import SpaceMismatchError
from .spaces import (
    Functional,
    SpaceSpec,
    Vec,
    dual_norm_of,
    dual_space,
    functional_from_linear_form,
    linear_form,
    norm_of,
    norming_functional,
    norming_vector,
    space_from_json,
    space_to_json,
    vec_from_json,
    vec_to_json,
)

__all__ = [
    "MatOperator",
    "RankOneOperator",
    "NormResult",
    "identity_operator",
    "zero_operator",
    "apply",
    "compose",
    "sum_operators",
    "as_matrix",
    "rank_one_norm",
    "adjoint",
    "op_norm",
    "image_basis",
    "operator_to_json",
    "operator_from_json",
    "norm_result_to_json",
]


def _matrix(values) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    if a.ndim != 2:
        raise SpaceMismatchError(f"operator matrix must be 2-D, got shape {a.shape}")
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MatOperator:
    """A dense operator; rows index the target, columns the source."""

    matrix: np.ndarray = field(repr=False)
    source: SpaceSpec
    target: SpaceSpec

    def __post_init__(self):
        object.__setattr__(self, "matrix", _matrix(self.matrix))
        rows, cols = self.matrix.shape
        if cols != self.source.dim or rows != self.target.dim:
            raise SpaceMismatchError(
                f"matrix shape {self.matrix.shape} does not map {self.source} -> {self.target}"
            )

    @property
    def shape(self):
        return self.matrix.shape

    def __repr__(self):
        return f"MatOperator({self.source} -> {self.target}, shape {self.matrix.shape})"


@dataclass(frozen=True)
class RankOneOperator:
    """functional (x) vector: acts as x -> <functional, x> * vector."""

    functional: Functional
    vector: Vec


@dataclass(frozen=True)
class NormResult:
    value: float
    certified: bool
    witness: Vec


def identity_operator(space: SpaceSpec) -> MatOperator:
    return MatOperator(np.eye(space.dim), space, space)


def zero_operator(source: SpaceSpec, target: SpaceSpec) -> MatOperator:
    return MatOperator(np.zeros((target.dim, source.dim)), source, target)


def apply(M: MatOperator, x: Vec) -> Vec:
    if x.space != M.source:
        raise SpaceMismatchError(f"operand lives in {x.space}, operator expects {M.source}")
    return Vec(M.target, M.matrix @ x.coords)


def compose(A: MatOperator, B: MatOperator) -> MatOperator:
    """The operator acting as A after B."""
    if B.target != A.source:
        raise SpaceMismatchError(f"cannot compose {A.source}->{A.target} after {B.source}->{B.target}")
    return MatOperator(A.matrix @ B.matrix, B.source, A.target)


def sum_operators(ops) -> MatOperator:
    ops = list(ops)
    if not ops:
        raise ValueError("empty operator sum")
    first = ops[0]
    total = np.zeros_like(first.matrix)
    for op in ops:
        if op.source != first.source or op.target != first.target:
            raise SpaceMismatchError("operator sum requires identical source and target spaces")
        total = total + op.matrix
    return MatOperator(total, first.source, first.target)


def as_matrix(r: RankOneOperator) -> MatOperator:
    row = linear_form(r.functional)
    return MatOperator(np.outer(r.vector.coords, row), r.functional.space, r.vector.space)


def rank_one_norm(r: RankOneOperator) -> float:
    return dual_norm_of(r.functional.space, r.functional.coords) * norm_of(
        r.vector.space, r.vector.coords
    )


def adjoint(M: MatOperator) -> MatOperator:
    """The transpose operator between the dual space models.

    With pairing weights w_s, w_t the matrix is (w_t / w_s) * M^T, so
    that functional composition commutes with the coordinate view.
    """
    scale = M.target.weight / M.source.weight
    return MatOperator(scale * M.matrix.T, dual_space(M.target), dual_space(M.source))


# -- operator norm -----------------------------------------------------------

def op_norm(M: MatOperator, restarts: int = 32, iters: int = 200, seed: int = DEFAULT_SEED) -> NormResult:
    """Operator norm with a witness; certified only on closed-form routes."""
    src, tgt = M.source, M.target
    if src.is_grid or (not src.is_grid and src.p == 1.0):
        return _norm_by_columns(M)
    if not tgt.is_grid and math.isinf(tgt.p):
        return _norm_by_rows(M)
    if (not src.is_grid and src.p == 2.0) and (not tgt.is_grid and tgt.p == 2.0):
        return _norm_spectral(M)
    return _norm_estimate(M, restarts=restarts, iters=iters, seed=seed)


def _norm_by_columns(M: MatOperator) -> NormResult:
    scale = 1.0 / M.source.weight
    values = [norm_of(M.target, scale * M.matrix[:, j]) for j in range(M.source.dim)]
    j = int(np.argmax(values)) if values else 0
    w = np.zeros(M.source.dim)
    w[j] = scale
    return NormResult(float(values[j]), True, Vec(M.source, w))


def _norm_by_rows(M: MatOperator) -> NormResult:
    best_val, best_row = 0.0, 0
    for i in range(M.target.dim):
        f = functional_from_linear_form(M.source, M.matrix[i])
        v = dual_norm_of(M.source, f.coords)
        if v > best_val:
            best_val, best_row = v, i
    f = functional_from_linear_form(M.source, M.matrix[best_row])
    witness = norming_vector(M.source, f)
    return NormResult(float(best_val), True, witness)


def _norm_spectral(M: MatOperator) -> NormResult:
    u, s, vt = np.linalg.svd(M.matrix)
    if s.size == 0 or s[0] == 0.0:
        w = np.zeros(M.source.dim)
        w[0] = 1.0
        return NormResult(0.0, True, Vec(M.source, w))
    return NormResult(float(s[0]), True, Vec(M.source, vt[0]))


def _ascend(M: MatOperator, x: np.ndarray, iters: int) -> tuple[float, np.ndarray]:
    """Monotone power steps: pull back the norming functional of the image."""
    src, tgt = M.source, M.target
    best = norm_of(tgt, M.matrix @ x)
    for _ in range(iters):
        y = M.matrix @ x
        phi = norming_functional(tgt, Vec(tgt, y))
        pulled = functional_from_linear_form(src, linear_form(phi) @ M.matrix)
        x_new = norming_vector(src, pulled).coords
        val = norm_of(tgt, M.matrix @ x_new)
        if val <= best * (1.0 + 1e-13):
            x = x_new
            break
        best, x = val, x_new
    return best, x


def _norm_estimate(M: MatOperator, restarts: int, iters: int, seed: int) -> NormResult:
    rng = np.random.default_rng(seed)
    if not np.any(M.matrix):
        w = np.zeros(M.source.dim)
        w[0] = 1.0 / M.source.weight if M.source.is_grid else 1.0
        return NormResult(0.0, False, Vec(M.source, w))
    starts = []
    # the top right-singular direction is a strong deterministic start
    _, _, vt = np.linalg.svd(M.matrix)
    starts.append(vt[0])
    for _ in range(restarts):
        starts.append(rng.standard_normal(M.source.dim))
    best_val, best_x = -1.0, None
    for s in starts:
        nrm = norm_of(M.source, s)
        if nrm == 0.0:
            continue
        val, x = _ascend(M, s / nrm, iters)
        if val > best_val:
            best_val, best_x = val, x
    return NormResult(float(best_val), False, Vec(M.source, best_x))


def image_basis(M: MatOperator, tol: float = 1e-10) -> tuple[np.ndarray, int]:
    """Euclidean-orthonormal basis of the image and its numerical rank.

    Rank counts singular values above ``tol`` times the largest; the zero
    operator yields rank 0 and an empty basis.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    u, s, _ = np.linalg.svd(M.matrix, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.target.dim, 0)), 0
    m = int(np.sum(s > tol * s[0]))
    return u[:, :m].copy(), m


# -- JSON --------------------------------------------------------------------

def operator_to_json(M: MatOperator) -> dict:
    return {
        "source": space_to_json(M.source),
        "target": space_to_json(M.target),
        "matrix": [[float(v) for v in row] for row in M.matrix],
    }


def operator_from_json(obj: dict) -> MatOperator:
    return MatOperator(
        np.asarray(obj["matrix"], dtype=float),
        space_from_json(obj["source"]),
        space_from_json(obj["target"]),
    )


def norm_result_to_json(r: NormResult) -> dict:
    return {"value": r.value, "certified": r.certified, "witness": vec_to_json(r.witness)}
