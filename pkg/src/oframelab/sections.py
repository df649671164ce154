"""Exact optimization over sections of model-space unit balls.

A section ball is {c in R^m : ||V c|| <= 1} for a full-column-rank V.
Three primitives are provided:

* ``max_linear``: maximize a linear functional over the section ball —
  closed form for l2, a linear program for the polytope norms (l1,
  sup-norm, grid), iterative polish otherwise;
* ``section_vertices``: the extreme points of the section ball for the
  polytope norms (facet enumeration; the l1-type ball is treated
  through its polar, a zonotope);
* ``section_operator_norm``: the norm of an operator acting on the
  subspace span(V), measured in the ambient norm on both sides.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linprog, minimize

from .spaces import SpaceSpec, norm_of

__all__ = ["max_linear", "section_vertices", "section_operator_norm", "ball_kind"]


def ball_kind(space: SpaceSpec) -> str:
    """Classify the unit ball: 'l1' (weighted), 'linf', 'l2', or 'smooth'."""
    if space.is_grid or space.p == 1.0:
        return "l1"
    if math.isinf(space.p):
        return "linf"
    if space.p == 2.0:
        return "l2"
    return "smooth"


def _weights(space: SpaceSpec) -> np.ndarray:
    return np.full(space.dim, space.weight)


def max_linear(space: SpaceSpec, V: np.ndarray, g: np.ndarray) -> tuple[float, np.ndarray]:
    """Maximize g.c over the section ball {c : ||Vc|| <= 1}.

    Returns (value, c) with ||Vc|| = 1 whenever g is nonzero.  Exact for
    l1/l2/sup-norm/grid; other exponents fall back to a seeded polish
    and the result is a valid lower bound.
    """
    n, m = V.shape
    g = np.asarray(g, dtype=float)
    if not np.any(g):
        c = np.zeros(m)
        c[0] = 1.0
        return 0.0, c / norm_of(space, V @ c)
    kind = ball_kind(space)
    if kind == "l2":
        G = V.T @ V
        y = np.linalg.solve(G, g)
        val = math.sqrt(float(g @ y))
        c = y / val
        return val, c / norm_of(space, V @ c)
    if kind == "linf":
        A = np.vstack([V, -V])
        b = np.ones(2 * n)
        res = linprog(-g, A_ub=A, b_ub=b, bounds=[(None, None)] * m, method="highs-ds")
        if not res.success:
            raise RuntimeError(f"section LP failed: {res.message}")
        c = res.x
        return float(g @ c), c / norm_of(space, V @ c)
    if kind == "l1":
        w = _weights(space)
        # variables (c, t): t_i >= |(Vc)_i|, sum w_i t_i <= 1
        A = np.zeros((2 * n + 1, m + n))
        A[:n, :m] = V
        A[:n, m:] = -np.eye(n)
        A[n : 2 * n, :m] = -V
        A[n : 2 * n, m:] = -np.eye(n)
        A[2 * n, m:] = w
        b = np.zeros(2 * n + 1)
        b[2 * n] = 1.0
        cost = np.zeros(m + n)
        cost[:m] = -g
        bounds = [(None, None)] * m + [(0.0, None)] * n
        res = linprog(cost, A_ub=A, b_ub=b, bounds=bounds, method="highs-ds")
        if not res.success:
            raise RuntimeError(f"section LP failed: {res.message}")
        c = res.x[:m]
        return float(g @ c), c / norm_of(space, V @ c)
    return _max_linear_polish(space, V, g)


def _max_linear_polish(space: SpaceSpec, V: np.ndarray, g: np.ndarray) -> tuple[float, np.ndarray]:
    """Grid of candidate starts plus an SLSQP polish; lower bound only."""
    m = V.shape[1]
    G = V.T @ V
    starts = [np.linalg.solve(G, g)]
    rng = np.random.default_rng(7)
    starts += [rng.standard_normal(m) for _ in range(8)]
    best_val, best_c = -np.inf, None
    for s in starts:
        nrm = norm_of(space, V @ s)
        if nrm == 0.0:
            continue
        s = s / nrm
        res = minimize(
            lambda c: -float(g @ c),
            s,
            constraints=[{"type": "ineq", "fun": lambda c: 1.0 - norm_of(space, V @ c)}],
            method="SLSQP",
            options={"maxiter": 200, "ftol": 1e-12},
        )
        c = res.x / norm_of(space, V @ res.x)
        val = float(g @ c)
        if val > best_val:
            best_val, best_c = val, c
    return best_val, best_c


def section_vertices(space: SpaceSpec, V: np.ndarray) -> np.ndarray:
    """Extreme points of {c : ||Vc|| <= 1} for the polytope ball kinds.

    sup-norm: solve every m-subset of active facet rows; l1-type: the
    polar ball is the zonotope spanned by the weighted rows of V, whose
    facet normals (null vectors of (m-1)-subsets of generators) scale to
    the vertices.
    """
    kind = ball_kind(space)
    n, m = V.shape
    if kind == "linf":
        verts = []
        for rows in itertools.combinations(range(n), m):
            sub = V[list(rows)]
            if np.linalg.matrix_rank(sub, tol=1e-12) < m:
                continue
            for signs in itertools.product((1.0, -1.0), repeat=m):
                c = np.linalg.solve(sub, np.asarray(signs))
                if np.max(np.abs(V @ c)) <= 1.0 + 1e-9:
                    verts.append(c)
        return _dedupe(verts, m)
    if kind == "l1":
        G = V * _weights(space)[:, None]
        if m == 1:
            h = float(np.sum(np.abs(G[:, 0])))
            return np.array([[1.0 / h], [-1.0 / h]])
        verts = []
        for rows in itertools.combinations(range(n), m - 1):
            sub = G[list(rows)]
            _, s, vt = np.linalg.svd(sub)
            if s.size == 0 or s[-1] <= 1e-12 * s[0]:
                continue  # generators span < m-1 dims, not a facet normal
            normal = vt[-1]
            h = float(np.sum(np.abs(G @ normal)))
            if h <= 0.0:
                continue
            verts.append(normal / h)
            verts.append(-normal / h)
        return _dedupe(verts, m)
    raise ValueError(f"section ball of {space} is not a polytope")


def _dedupe(rows, m) -> np.ndarray:
    out: list[np.ndarray] = []
    seen = set()
    for r in rows:
        key = tuple(np.round(r, 9))
        if key not in seen:
            seen.add(key)
            out.append(np.asarray(r, dtype=float))
    if not out:
        return np.zeros((0, m))
    return np.array(out)


def section_operator_norm(
    space: SpaceSpec,
    V: np.ndarray,
    coeff_matrix: np.ndarray,
    vertices: np.ndarray | None = None,
) -> tuple[float, bool]:
    """Norm of the map span(V) -> span(V) given by an m-by-m coordinate matrix.

    The supremum of a norm over a polytope ball is attained at a vertex,
    so vertex enumeration gives exact values for l1/sup-norm/grid; the
    Euclidean case reduces to a conjugated spectral norm.
    """
    kind = ball_kind(space)
    if kind in ("l1", "linf"):
        if vertices is None:
            vertices = section_vertices(space, V)
        images = vertices @ coeff_matrix.T @ V.T
        if space.is_grid or space.p == 1.0:
            vals = np.sum(np.abs(images), axis=1) * space.weight
        else:
            vals = np.max(np.abs(images), axis=1)
        return float(np.max(vals)) if len(vals) else 0.0, True
    if kind == "l2":
        R = np.linalg.cholesky(V.T @ V).T
        conj = R @ coeff_matrix @ np.linalg.inv(R)
        return float(np.linalg.svd(conj, compute_uv=False)[0]), True
    # smooth non-Euclidean exponents: sampled ascent, lower bound only
    rng = np.random.default_rng(11)
    best = 0.0
    for _ in range(64):
        c = rng.standard_normal(V.shape[1])
        nrm = norm_of(space, V @ c)
        if nrm == 0.0:
            continue
        c /= nrm
        best = max(best, norm_of(space, V @ (coeff_matrix @ c)))
    return best, False
