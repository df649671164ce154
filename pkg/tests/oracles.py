"""Independent oracles used to freeze expected values.

Everything in this file is deliberately written from first principles
(brute force, enumeration, direct formulas) and must stay decoupled from
the package implementation it checks.
"""

import itertools

import numpy as np


def haar_matrix(levels):
    """Columns are the sup-normalized Haar step functions on 2**levels cells."""
    n = 2**levels
    cols = [np.ones(n)]
    for lev in range(levels):
        width = n // 2**lev
        for k in range(2**lev):
            h = np.zeros(n)
            lo = k * width
            h[lo : lo + width // 2] = 1.0
            h[lo + width // 2 : lo + width] = -1.0
            cols.append(h)
    return np.column_stack(cols)


def grid_opnorm_by_extreme_points(matrix, levels):
    """Norm of a grid-to-grid operator evaluated on the ball's extreme points.

    The unit ball of the mean-absolute norm on 2**levels cells is the convex
    hull of +-2**levels * e_i, and x -> |Mx| is convex, so the supremum over
    the ball is attained there.
    """
    n = 2**levels
    scale = float(2**levels)
    best = 0.0
    for i in range(n):
        image = matrix[:, i] * scale
        value = np.sum(np.abs(image)) / n
        best = max(best, value)
    return best


def haar_unconditional_constant_exhaustive(levels):
    """Max over all sign patterns of the sign-multiplier operator norm.

    Patterns are enumerated exhaustively modulo the global flip (the flip
    negates the operator and leaves its norm unchanged).
    """
    V = haar_matrix(levels)
    Vinv = np.linalg.inv(V)
    n = V.shape[0]
    best = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=n - 1):
        eps = np.array((1.0,) + signs)
        M = (V * eps) @ Vinv
        best = max(best, grid_opnorm_by_extreme_points(M, levels))
    return best


def lp_norm_direct(v, p):
    if np.isinf(p):
        return float(np.max(np.abs(v))) if len(v) else 0.0
    return float(np.sum(np.abs(v) ** p) ** (1.0 / p))


def spectral_norm_by_gram(matrix):
    """Largest singular value via the Gram matrix eigenvalues (not SVD)."""
    gram = matrix.T @ matrix
    eigs = np.linalg.eigvalsh(gram)
    return float(np.sqrt(max(eigs[-1], 0.0)))


def section_vertices_linf_bruteforce(V, tol=1e-9):
    """Vertices of {c : |(Vc)_i| <= 1} by solving all m-subsets of active rows."""
    n, m = V.shape
    found = []
    for rows in itertools.combinations(range(n), m):
        sub = V[list(rows)]
        if np.linalg.matrix_rank(sub, tol=1e-12) < m:
            continue
        for signs in itertools.product((1.0, -1.0), repeat=m):
            c = np.linalg.solve(sub, np.array(signs))
            if np.max(np.abs(V @ c)) <= 1.0 + tol:
                found.append(c)
    return _dedupe_rows(found)


def section_vertices_l1_bruteforce(V, weights=None, tol=1e-9):
    """Vertices of {c : sum_i w_i |(Vc)_i| <= 1} by facet/zero-pattern search."""
    n, m = V.shape
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    G = V * w[:, None]
    found = []
    if m == 1:
        h = np.sum(np.abs(G[:, 0]))
        return np.array([[1.0 / h], [-1.0 / h]])
    for signs in itertools.product((1.0, -1.0), repeat=n):
        s = np.array(signs)
        for zero_rows in itertools.combinations(range(n), m - 1):
            rows = [s @ G]
            rows.extend(V[r] for r in zero_rows)
            A = np.vstack(rows)
            if np.linalg.matrix_rank(A, tol=1e-12) < m:
                continue
            rhs = np.zeros(m)
            rhs[0] = 1.0
            try:
                c = np.linalg.solve(A, rhs)
            except np.linalg.LinAlgError:
                continue
            if np.sum(w * np.abs(V @ c)) <= 1.0 + tol:
                found.append(c)
    return _dedupe_rows(found)


def _dedupe_rows(rows):
    if not len(rows):
        return np.zeros((0, 0))
    out = []
    for r in rows:
        if not any(np.allclose(r, q, atol=1e-9) for q in out):
            out.append(np.asarray(r, dtype=float))
    return np.array(out)


def max_abs_det_over_vertices(vertices, m):
    """Exhaustive max of |det| over m-tuples of candidate extreme points."""
    best = 0.0
    arg = None
    for combo in itertools.combinations(range(len(vertices)), m):
        d = abs(np.linalg.det(vertices[list(combo)].T))
        if d > best:
            best = d
            arg = combo
    return best, arg


def euclidean_section_max_det(V):
    """Closed form max |det| over the Euclidean section ball of span(V).

    With R the Cholesky factor of V^T V the ball is R^{-1} times the unit
    ball, and orthonormal tuples maximize |det| there with value one.
    """
    G = V.T @ V
    return float(1.0 / np.sqrt(np.linalg.det(G)))


if __name__ == "__main__":
    for lev in range(1, 5):
        val = haar_unconditional_constant_exhaustive(lev)
        print(f"haar level {lev}: {val!r}")
