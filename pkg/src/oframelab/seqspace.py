"""Coefficient sequence norms and the frame factorization through them.

For a frame with vectors (w_k), the ``t`` norm of a coefficient vector
is the largest prefix-sum norm sup_N || sum_{k<=N} a_k w_k ||, and the
``u`` norm is the supremum of || sum_k b_k a_k w_k || over multiplier
sequences bounded by one.  Both make the coordinate vectors a monotone
(respectively unconditional) basis of the coefficient space, the
summation map j has norm at most one, and the analysis map A built from
the frame functionals factors the operator as T = j A.

The multiplier supremum is taken over sign vectors only: the map
b -> || sum b_k a_k w_k || is convex in each b_k, so the maximum over
the cube sits at a vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_SEED
from .errors import CertificationError, SpaceMismatchError
from .frames import OFrame
from .operators import MatOperator, op_norm
from .sections import ball_kind, section_operator_norm, section_vertices
from .spaces import SpaceSpec, Vec, linear_form, norm_of

__all__ = [
    "SeqNorm",
    "Factorization",
    "t_norm",
    "u_norm",
    "factorize",
    "unconditional_constant",
]


@dataclass(frozen=True)
class SeqNorm:
    """Generators (all nonzero) and the mode, 't' or 'u'."""

    generators: tuple
    mode: str

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.mode not in ("t", "u"):
            raise ValueError(f"mode must be 't' or 'u', got {self.mode!r}")
        if not self.generators:
            raise ValueError("at least one generator is required")
        space = self.generators[0].space
        for k, w in enumerate(self.generators):
            if w.space != space:
                raise SpaceMismatchError("generators must share one target space")
            if not np.any(w.coords):
                raise ValueError(f"generator {k} is zero; zero vectors are excluded")

    @property
    def space(self) -> SpaceSpec:
        return self.generators[0].space

    def matrix(self) -> np.ndarray:
        return np.column_stack([w.coords for w in self.generators])


def _check_length(S: SeqNorm, a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (len(S.generators),):
        raise ValueError(f"expected {len(S.generators)} coefficients, got shape {a.shape}")
    return a


def t_norm(S: SeqNorm, a) -> float:
    """max over N of || sum_{k<=N} a_k w_k ||."""
    a = _check_length(S, a)
    prefix = np.cumsum(S.matrix() * a[None, :], axis=1)
    return max(norm_of(S.space, prefix[:, j]) for j in range(prefix.shape[1]))


def _sign_chunks(length: int, chunk: int = 4096):
    """All sign vectors with leading +1, in blocks (global flip halves the count)."""
    total = 2 ** (length - 1)
    for lo in range(0, total, chunk):
        k = np.arange(lo, min(lo + chunk, total))[:, None]
        bits = (k >> np.arange(length - 1)[None, :]) & 1
        block = np.ones((len(k), length))
        block[:, 1:] = 1.0 - 2.0 * bits
        yield block


def u_norm(S: SeqNorm, a, max_exact: int = 20, samples: int = 256, seed: int = DEFAULT_SEED):
    """sup over |b_k| <= 1 of || sum_k b_k a_k w_k ||, with a certified flag.

    Exact sign enumeration up to ``max_exact`` coefficients; beyond that
    a randomized search with greedy single flips reports a lower bound.
    Prefix indicators and the all-ones multiplier are always candidates,
    so the result dominates both the plain sum and the t norm.
    """
    a = _check_length(S, a)
    L = len(a)
    W = S.matrix() * a[None, :]
    if L <= max_exact:
        best = 0.0
        for block in _sign_chunks(L):
            vals = np.array([norm_of(S.space, row) for row in block @ W.T])
            best = max(best, float(np.max(vals)))
        return best, True

    def value(b):
        return norm_of(S.space, W @ b)

    rng = np.random.default_rng(seed)
    candidates = [np.ones(L)]
    for n in range(1, L):
        pref = np.zeros(L)
        pref[:n] = 1.0
        candidates.append(pref)
    candidates.extend(np.where(rng.random(L) < 0.5, 1.0, -1.0) for _ in range(samples))
    best_val, best_b = 0.0, np.ones(L)
    for b in candidates:
        v = value(b)
        if v > best_val:
            best_val, best_b = v, b.copy()
    b = np.where(best_b >= 0.0, 1.0, -1.0)
    improved = True
    while improved:
        improved = False
        for k in range(L):
            b[k] = -b[k]
            v = value(b)
            if v > best_val * (1.0 + 1e-12):
                best_val = v
                improved = True
            else:
                b[k] = -b[k]
    return float(best_val), False


@dataclass(frozen=True)
class Factorization:
    """T = j A through the coefficient space of the frame vectors."""

    mode: str
    seqnorm: SeqNorm
    a_matrix: np.ndarray = field(repr=False)
    j_matrix: np.ndarray = field(repr=False)
    norm_a: float = 0.0
    norm_a_certified: bool = True
    norm_j: float = 0.0
    composition_residual: float = 0.0

    @property
    def length(self) -> int:
        return self.a_matrix.shape[0]


def factorize(
    F: OFrame,
    mode: str = "t",
    max_exact: int = 16,
    samples: int = 1000,
    seed: int = DEFAULT_SEED,
    allow_estimates: bool = False,
) -> Factorization:
    """Factor the frame's operator through its coefficient space.

    Pairs with zero vector are dropped first (they contribute nothing to
    any sum).  The analysis map has rows <x'_k, .>, the summation map
    sends coefficients to sum a_k w_k; their composition equals the
    operator exactly.  norm_a is the exact prefix-sum supremum in mode t
    and the sign-multiplier supremum in mode u; norm_j is the largest
    sampled ratio ||j a|| / |||a|||, which the prefix argument keeps
    at most one.
    """
    kept = [(f, w) for f, w in F.pairs if np.any(w.coords)]
    if not kept:
        raise ValueError("frame has no nonzero vectors; nothing to factorize")
    S = SeqNorm(tuple(w for _, w in kept), mode)
    A = np.array([linear_form(f) for f, _ in kept])
    J = S.matrix()
    composed = J @ A
    residual = float(np.max(np.abs(composed - F.operator.matrix)))

    L = len(kept)
    if mode == "t":
        norm_a, cert = 0.0, True
        run = np.zeros_like(F.operator.matrix)
        for f, w in kept:
            run = run + np.outer(w.coords, linear_form(f))
            res = op_norm(MatOperator(run, F.source, F.target))
            norm_a = max(norm_a, res.value)
            cert = cert and res.certified
    else:
        pieces = np.array([np.outer(w.coords, linear_form(f)) for f, w in kept])

        def signed_norm(b):
            return op_norm(MatOperator(np.tensordot(b, pieces, axes=1), F.source, F.target))

        if L <= max_exact:
            norm_a, cert = 0.0, True
            for block in _sign_chunks(L):
                for b in block:
                    res = signed_norm(b)
                    norm_a = max(norm_a, res.value)
                    cert = cert and res.certified
        else:
            rng = np.random.default_rng(seed)
            norm_a, cert = 0.0, False
            candidates = [np.ones(L)]
            candidates.extend(np.where(rng.random(L) < 0.5, 1.0, -1.0) for _ in range(64))
            for b in candidates:
                norm_a = max(norm_a, signed_norm(b).value)
    if not cert and not allow_estimates:
        raise CertificationError(
            f"norm_a in mode {mode!r} is not certified for {F.source} -> {F.target}; "
            "pass allow_estimates=True"
        )

    rng = np.random.default_rng(seed)
    norm_j = 0.0
    for _ in range(samples):
        a = rng.standard_normal(L)
        if not np.any(a):
            continue
        denom = t_norm(S, a) if mode == "t" else u_norm(S, a, max_exact=max_exact, seed=seed)[0]
        if denom == 0.0:
            continue
        norm_j = max(norm_j, norm_of(F.target, J @ a) / denom)

    return Factorization(
        mode=mode,
        seqnorm=S,
        a_matrix=A,
        j_matrix=J,
        norm_a=float(norm_a),
        norm_a_certified=cert,
        norm_j=float(norm_j),
        composition_residual=residual,
    )


def unconditional_constant(
    system,
    space: SpaceSpec,
    max_exact: int = 16,
    samples: int = 256,
    seed: int = DEFAULT_SEED,
    allow_estimates: bool = False,
):
    """Largest norm of a sign-change multiplier with respect to the system.

    The multiplier sends sum a_k v_k to sum eps_k a_k v_k on the span of
    the system.  Sign patterns are enumerated modulo the global flip up
    to ``max_exact`` vectors, randomized with greedy flips beyond; the
    flag reports whether the value is an exact maximum.
    """
    vecs = list(system)
    if not vecs:
        raise ValueError("empty system")
    for v in vecs:
        if v.space != space:
            raise SpaceMismatchError("system vectors must live in the given space")
    V = np.column_stack([v.coords for v in vecs])
    L = V.shape[1]
    s = np.linalg.svd(V, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise ValueError("system is linearly dependent")

    square = L == space.dim
    if square:
        Vinv = np.linalg.inv(V)

        def multiplier_norm(eps):
            M = MatOperator((V * eps) @ Vinv, space, space)
            res = op_norm(M)
            return res.value, res.certified
    else:
        kind = ball_kind(space)
        vertices = section_vertices(space, V) if kind in ("l1", "linf") else None

        def multiplier_norm(eps):
            return section_operator_norm(space, V, np.diag(eps), vertices)

    if L <= max_exact:
        best, cert = 0.0, True
        for block in _sign_chunks(L):
            for eps in block:
                val, c = multiplier_norm(eps)
                best = max(best, val)
                cert = cert and c
        if not cert and not allow_estimates:
            raise CertificationError(
                f"sign-multiplier norms are not certified on {space}; pass allow_estimates=True"
            )
        return float(best), cert

    rng = np.random.default_rng(seed)
    best, best_eps = 0.0, np.ones(L)
    candidates = [np.ones(L)]
    candidates.extend(np.where(rng.random(L) < 0.5, 1.0, -1.0) for _ in range(samples))
    for eps in candidates:
        val, _ = multiplier_norm(eps)
        if val > best:
            best, best_eps = val, eps.copy()
    improved = True
    while improved:
        improved = False
        for k in range(L):
            best_eps[k] = -best_eps[k]
            val, _ = multiplier_norm(best_eps)
            if val > best * (1.0 + 1e-12):
                best = val
                improved = True
            else:
                best_eps[k] = -best_eps[k]
    return float(best), False
