"""Auerbach bases of subspaces by cyclic determinant ascent.

Given a basis matrix V of an m-dimensional subspace, the routine keeps
m unit vectors of the subspace and cyclically replaces one at a time by
a unit vector maximizing |det| of their coordinate matrix with the
others held fixed.  Each replacement is a norm-constrained linear
maximization (det is linear in one column), solved exactly for the
l1/l2/sup-norm/grid balls, so the ascent is monotone and terminates.

The functionals are the rows of the inverse coordinate matrix.  At any
stationary point of the ascent the maximum of the cofactor functional
over the ball equals the current determinant, which makes every
functional's dual norm on the subspace exactly one; the reported gap
(max dual norm minus one) is certified by direct evaluation and
quantifies how far a truncated run ended from that ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_SEED
from .sections import max_linear
from .spaces import SpaceSpec, Vec, norm_of, space_to_json

__all__ = ["AuerbachBasis", "auerbach_basis", "auerbach_to_json"]


@dataclass(frozen=True)
class AuerbachBasis:
    """Unit vectors with biorthogonal functionals of dual norm <= 1 + gap.

    ``coeff`` holds the coordinates of the basis vectors in the input
    subspace basis (column j for vector j); ``inv_coeff`` rows evaluate
    the functionals on those coordinates.  The functionals are never
    extended beyond the subspace.
    """

    space: SpaceSpec
    subspace: np.ndarray = field(repr=False)
    vectors: list[Vec] = field(repr=False)
    coeff: np.ndarray = field(repr=False)
    inv_coeff: np.ndarray = field(repr=False)
    det: float
    gap: float
    converged: bool

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def coords_in_subspace(self, w: np.ndarray) -> np.ndarray:
        """Least-squares coordinates of an ambient vector in the input basis."""
        sol, *_ = np.linalg.lstsq(self.subspace, np.asarray(w, dtype=float), rcond=None)
        return sol

    def functional_values(self, w: np.ndarray) -> np.ndarray:
        """All functionals evaluated at an ambient vector of the subspace."""
        return self.inv_coeff @ self.coords_in_subspace(w)


def _cofactor_column(C: np.ndarray, j: int) -> np.ndarray:
    m = C.shape[0]
    if m == 1:
        return np.ones(1)
    g = np.empty(m)
    for i in range(m):
        minor = np.delete(np.delete(C, i, axis=0), j, axis=1)
        g[i] = (-1.0) ** (i + j) * np.linalg.det(minor)
    return g


def _ascend(space: SpaceSpec, V: np.ndarray, C0: np.ndarray, budget: int):
    C = C0.copy()
    m = C.shape[0]
    det = abs(np.linalg.det(C))
    converged = False
    for _ in range(budget):
        improved = False
        for j in range(m):
            g = _cofactor_column(C, j)
            if not np.any(g):
                continue
            _, c = max_linear(space, V, g)
            val = abs(float(g @ c))
            if val > det * (1.0 + 1e-12) or det == 0.0 and val > 0.0:
                C[:, j] = c
                det = val
                improved = True
        if not improved:
            converged = True
            break
    return C, det, converged


def auerbach_basis(
    subspace: np.ndarray,
    space: SpaceSpec,
    budget: int = 200,
    restarts: int = 4,
    seed: int = DEFAULT_SEED,
) -> AuerbachBasis:
    """Auerbach basis of span(subspace) with a certified optimality gap.

    Parameters
    ----------
    subspace : (n, m) array with linearly independent columns.
    space : the ambient norm model (n must equal its dimension).
    budget : maximum number of full ascent sweeps per start.
    restarts : seeded random starts tried besides the normalized input
        columns; the best |det| wins, ties broken lexicographically.
    """
    V = np.asarray(subspace, dtype=float)
    if V.ndim != 2 or V.shape[0] != space.dim:
        raise ValueError(f"subspace must be {space.dim} x m, got shape {V.shape}")
    n, m = V.shape
    if m < 1:
        raise ValueError("subspace must have at least one column")
    s = np.linalg.svd(V, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise ValueError("subspace basis is rank-deficient")

    rng = np.random.default_rng(seed)
    starts = [np.eye(m)]
    for _ in range(restarts):
        starts.append(rng.standard_normal((m, m)))
    for C0 in starts:
        for j in range(m):
            C0[:, j] /= norm_of(space, V @ C0[:, j])

    best = None
    for C0 in starts:
        C, det, conv = _ascend(space, V, C0, budget)
        key = tuple(np.round((V @ C).T.ravel(), 9))
        if best is None or det > best[0] * (1.0 + 1e-9) or (
            abs(det - best[0]) <= 1e-9 * max(det, 1.0) and key < best[1]
        ):
            best = (det, key, C, conv)
    det, _, C, converged = best

    # deterministic sign convention: first significant ambient coordinate >= 0
    for j in range(m):
        e = V @ C[:, j]
        nz = np.nonzero(np.abs(e) > 1e-12)[0]
        if len(nz) and e[nz[0]] < 0.0:
            C[:, j] = -C[:, j]
        C[:, j] /= norm_of(space, V @ C[:, j])
    det = abs(np.linalg.det(C))

    inv_coeff = np.linalg.inv(C)
    gap = 0.0
    for j in range(m):
        val, _ = max_linear(space, V, inv_coeff[j])
        gap = max(gap, val - 1.0)
    gap = max(gap, 0.0)

    vectors = [Vec(space, V @ C[:, j]) for j in range(m)]
    return AuerbachBasis(
        space=space,
        subspace=V,
        vectors=vectors,
        coeff=C,
        inv_coeff=inv_coeff,
        det=float(det),
        gap=float(gap),
        converged=converged,
    )


def auerbach_to_json(basis: AuerbachBasis) -> dict:
    return {
        "space": space_to_json(basis.space),
        "vectors": [[float(v) for v in e.coords] for e in basis.vectors],
        "functionals": [[float(v) for v in row] for row in basis.inv_coeff],
        "det": basis.det,
        "gap": basis.gap,
        "converged": basis.converged,
    }
