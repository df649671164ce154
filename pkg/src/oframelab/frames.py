"""Operator frames: ordered (functional, vector) pairs representing an
operator through the identity  T x = sum_k <x'_k, x> w_k.

Besides evaluation and algebra (composition, duality), this module
implements the rank-one splitting of a finite-rank block through an
Auerbach basis of its image, the telescoping of a pointwise
approximating chain into summable blocks, tail/window diagnostics for
the shrinking and boundedly-complete properties, and finite-rank
bounded-approximation certificates with epsilon-net expansion.

All bound checks are reported against exact norms; configurations
without a closed-form operator norm require an explicit opt-in to
estimates and are flagged as uncertified.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .auerbach import AuerbachBasis, auerbach_basis
from .config import DEFAULT_SEED
from .errors import CertificationError, InfeasibleApproximation, SpaceMismatchError
from .operators import (
    MatOperator,
    RankOneOperator,
    adjoint,
    as_matrix,
    image_basis,
    op_norm,
)
from .sections import ball_kind, section_operator_norm, section_vertices
from .spaces import (
    Functional,
    SpaceSpec,
    Vec,
    dual_ball_extreme_points,
    dual_norm_of,
    dual_space,
    functional_as_vector,
    functional_from_linear_form,
    functional_from_json,
    functional_to_json,
    linear_form,
    norm_of,
    random_unit_functional,
    random_unit_vector,
    space_from_json,
    space_to_json,
    unit_ball_extreme_points,
    vec_from_json,
    vec_to_json,
    vector_as_functional,
)
from .operators import operator_from_json, operator_to_json

__all__ = [
    "OFrame",
    "SplitResult",
    "BuildInfo",
    "TailProfile",
    "TelescopeResult",
    "BapCertificate",
    "basis_frame",
    "frame_partial_sum",
    "partial_sum_operator",
    "frame_constant",
    "reconstruction_residual",
    "compose_frame",
    "dual_frame",
    "shrinking_profile",
    "bc_profile",
    "telescope",
    "split_rank_one",
    "build_oframe",
    "bap_certificate",
    "net_margin",
    "net_expansion_check",
    "frame_to_json",
    "frame_from_json",
]


@dataclass(frozen=True)
class BuildInfo:
    """Diagnostics recorded while assembling a frame from blocks."""

    k_input: float
    k_input_certified: bool
    block_norms: list[float]
    block_ranks: list[int]
    block_gaps: list[float]
    block_partial_sum_norms: list[np.ndarray]
    block_partial_sums_certified: list[bool]


@dataclass(frozen=True)
class OFrame:
    """A frame for ``operator``: pairs (functional on source, vector in target).

    ``K`` is the frame constant sup over N of the norm of the partial-sum
    operators; ``None`` means it has not been computed for this instance.
    """

    pairs: tuple
    source: SpaceSpec
    target: SpaceSpec
    operator: MatOperator
    K: float | None = None
    k_certified: bool = True
    gap: float = 0.0
    info: BuildInfo | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        for f, w in self.pairs:
            if f.space != self.source or w.space != self.target:
                raise SpaceMismatchError("frame pair does not match source/target spaces")
        if self.operator.source != self.source or self.operator.target != self.target:
            raise SpaceMismatchError("frame operator does not match source/target spaces")

    def __len__(self):
        return len(self.pairs)

    def analysis_matrix(self) -> np.ndarray:
        """Rows evaluate the frame functionals: (Ax)_k = <x'_k, x>."""
        if not self.pairs:
            return np.zeros((0, self.source.dim))
        return np.array([linear_form(f) for f, _ in self.pairs])

    def synthesis_matrix(self) -> np.ndarray:
        """Columns are the frame vectors."""
        if not self.pairs:
            return np.zeros((self.target.dim, 0))
        return np.column_stack([w.coords for _, w in self.pairs])


def basis_frame(T: MatOperator) -> OFrame:
    """The coordinate-expansion frame (e'_k, T e_k) of a given operator."""
    src, tgt = T.source, T.target
    pairs = []
    for k in range(src.dim):
        coords = np.zeros(src.dim)
        coords[k] = 1.0 / src.weight
        pairs.append((Functional(src, coords), Vec(tgt, T.matrix[:, k])))
    return OFrame(tuple(pairs), src, tgt, T)


def frame_partial_sum(F: OFrame, x: Vec, N: int) -> Vec:
    """sum_{k<=N} <x'_k, x> w_k."""
    if x.space != F.source:
        raise SpaceMismatchError(f"vector lives in {x.space}, frame source is {F.source}")
    if not 0 <= N <= len(F):
        raise ValueError(f"N must lie in [0, {len(F)}], got {N}")
    out = np.zeros(F.target.dim)
    for f, w in F.pairs[:N]:
        out += (F.source.weight * (f.coords @ x.coords)) * w.coords
    return Vec(F.target, out)


def partial_sum_operator(F: OFrame, N: int) -> MatOperator:
    total = np.zeros((F.target.dim, F.source.dim))
    for f, w in F.pairs[:N]:
        total += np.outer(w.coords, linear_form(f))
    return MatOperator(total, F.source, F.target)


def _frame_constant(F: OFrame, allow_estimates: bool, seed: int = DEFAULT_SEED):
    if not F.pairs:
        return 0.0, True
    best, certified = 0.0, True
    total = np.zeros((F.target.dim, F.source.dim))
    for f, w in F.pairs:
        total = total + np.outer(w.coords, linear_form(f))
        res = op_norm(MatOperator(total, F.source, F.target), seed=seed)
        certified = certified and res.certified
        best = max(best, res.value)
    if not certified and not allow_estimates:
        raise CertificationError(
            f"no exact operator-norm formula for {F.source} -> {F.target}; "
            "pass allow_estimates=True to accept a lower-bound estimate"
        )
    return best, certified


def frame_constant(F: OFrame, allow_estimates: bool = False) -> float:
    """max over N of the partial-sum operator norm (the frame constant)."""
    value, _ = _frame_constant(F, allow_estimates)
    return value


def with_frame_constant(F: OFrame, allow_estimates: bool = True) -> OFrame:
    """A copy of the frame with K filled in (flagged if estimated)."""
    if F.K is not None:
        return F
    value, certified = _frame_constant(F, allow_estimates)
    return OFrame(F.pairs, F.source, F.target, F.operator, value, certified, F.gap, F.info)


def reconstruction_residual(F: OFrame, x: Vec) -> float:
    full = frame_partial_sum(F, x, len(F))
    target_image = F.operator.matrix @ x.coords
    return norm_of(F.target, full.coords - target_image)


def compose_frame(A: MatOperator, F: OFrame, B: MatOperator) -> OFrame:
    """The frame ((B* x'_k), (A w_k)) for the composition A after T after B."""
    if B.target != F.source or A.source != F.target:
        raise SpaceMismatchError("composition shapes do not conform with the frame")
    pairs = []
    for f, w in F.pairs:
        pulled = functional_from_linear_form(B.source, linear_form(f) @ B.matrix)
        pairs.append((pulled, Vec(A.target, A.matrix @ w.coords)))
    op = MatOperator(A.matrix @ F.operator.matrix @ B.matrix, B.source, A.target)
    return OFrame(tuple(pairs), B.source, A.target, op, None, False, F.gap)


def dual_frame(F: OFrame) -> OFrame:
    """The dual system ((w_k), (x'_k)) as a frame for the transpose operator.

    Partial sums of the dual are adjoints of the primal partial sums, so
    the frame constant carries over unchanged.
    """
    pairs = []
    for f, w in F.pairs:
        pairs.append((vector_as_functional(w), functional_as_vector(f)))
    op = adjoint(F.operator)
    return OFrame(tuple(pairs), dual_space(F.target), dual_space(F.source), op, F.K, F.k_certified, F.gap)


# -- diagnostics ---------------------------------------------------------------


@dataclass(frozen=True)
class TailProfile:
    """Tail or window norms of a frame; kind is 'shrinking' or 'boundedly_complete'."""

    kind: str
    indices: tuple
    values: np.ndarray = field(repr=False)
    partial_sum_sup: np.ndarray | None = field(default=None, repr=False)


def _default_dual_samples(F: OFrame, nsamples: int, seed: int, max_enum_dim: int):
    pts = dual_ball_extreme_points(F.target, max_dim=max_enum_dim)
    if pts is not None:
        return [Functional(F.target, row) for row in pts]
    rng = np.random.default_rng(seed)
    return [random_unit_functional(F.target, rng) for _ in range(nsamples)]


def shrinking_profile(
    F: OFrame,
    samples=None,
    ns=None,
    nsamples: int = 100,
    seed: int = DEFAULT_SEED,
    max_enum_dim: int = 12,
) -> TailProfile:
    """Tail norms tau_n = max over dual-unit w' of || sum_{k>n} <w',w_k> x'_k ||.

    The maximum runs over the extreme points of the dual ball of the
    target when that set is small, otherwise over seeded random samples.
    The tail at n = len(F) is exactly zero.
    """
    if samples is None:
        samples = _default_dual_samples(F, nsamples, seed, max_enum_dim)
    if ns is None:
        ns = list(range(len(F) + 1))
    coeff_rows = np.array(
        [[F.target.weight * (s.coords @ w.coords) for _, w in F.pairs] for s in samples]
    ).reshape(len(samples), len(F.pairs))
    func_rows = np.array([f.coords for f, _ in F.pairs]).reshape(len(F.pairs), F.source.dim)
    values = []
    for n in ns:
        best = 0.0
        for srow in coeff_rows:
            tail = srow[n:] @ func_rows[n:] if n < len(F.pairs) else np.zeros(F.source.dim)
            best = max(best, dual_norm_of(F.source, tail))
        values.append(best)
    return TailProfile("shrinking", tuple(ns), np.array(values))


def _default_primal_samples(F: OFrame, nsamples: int, seed: int, max_enum_dim: int):
    pts = unit_ball_extreme_points(F.source, max_dim=max_enum_dim)
    if pts is not None and len(pts) <= 2 ** (max_enum_dim - 1):
        return [Vec(F.source, row) for row in pts]
    rng = np.random.default_rng(seed)
    out = []
    for i in range(F.source.dim):
        e = np.zeros(F.source.dim)
        e[i] = 1.0
        out.append(Vec(F.source, e / norm_of(F.source, e)))
    out.extend(random_unit_vector(F.source, rng) for _ in range(nsamples))
    return out


def bc_profile(
    F: OFrame,
    samples=None,
    windows=None,
    nsamples: int = 100,
    seed: int = DEFAULT_SEED,
    max_enum_dim: int = 12,
) -> TailProfile:
    """Cauchy window moduli max over unit x'' of || sum_{n<k<=m} <x'',x'_k> w_k ||.

    Finite bidual elements are identified with source vectors.  Also
    reports, per sample, the supremum over N of the partial-sum norms.
    """
    if samples is None:
        samples = _default_primal_samples(F, nsamples, seed, max_enum_dim)
    if windows is None:
        windows = [(n, n + 1) for n in range(len(F))]
    analysis = F.analysis_matrix()
    synthesis = F.synthesis_matrix()
    coeffs = np.array([analysis @ s.coords for s in samples])
    values = []
    for (n, m) in windows:
        if not (0 <= n < m <= len(F)):
            raise ValueError(f"bad window ({n}, {m}) for frame of length {len(F)}")
        best = 0.0
        for crow in coeffs:
            chunk = synthesis[:, n:m] @ crow[n:m]
            best = max(best, norm_of(F.target, chunk))
        values.append(best)
    sups = []
    for crow in coeffs:
        run = np.zeros(F.target.dim)
        peak = 0.0
        for k in range(len(F)):
            run = run + synthesis[:, k] * crow[k]
            peak = max(peak, norm_of(F.target, run))
        sups.append(peak)
    return TailProfile("boundedly_complete", tuple(windows), np.array(values), np.array(sups))


# -- telescoping and splitting -------------------------------------------------


@dataclass(frozen=True)
class TelescopeResult:
    blocks: list[MatOperator]
    partial_sum_sup: float
    certified: bool


def telescope(S, T: MatOperator, allow_estimates: bool = False) -> TelescopeResult:
    """Difference blocks Q_1 = S_1, Q_l = S_l - S_{l-1} of an approximating chain.

    Partial sums of the blocks rebuild S_N exactly, so the reported
    supremum of partial-sum norms is the supremum of the chain norms.
    """
    S = list(S)
    if not S:
        raise ValueError("telescoping requires at least one operator")
    for op in S:
        if op.source != T.source or op.target != T.target:
            raise SpaceMismatchError("chain operators must share the target operator's spaces")
    blocks = [S[0]]
    for prev, cur in zip(S, S[1:]):
        blocks.append(MatOperator(cur.matrix - prev.matrix, T.source, T.target))
    sup, certified = 0.0, True
    run = np.zeros_like(T.matrix)
    for q in blocks:
        run = run + q.matrix
        res = op_norm(MatOperator(run, T.source, T.target))
        sup = max(sup, res.value)
        certified = certified and res.certified
    if not certified and not allow_estimates:
        raise CertificationError(
            "chain norms have no exact formula here; pass allow_estimates=True"
        )
    return TelescopeResult(blocks, sup, certified)


@dataclass(frozen=True)
class SplitResult:
    """Rank-one pieces of one finite-rank block, with certified bound data."""

    pieces: list[RankOneOperator]
    rank: int
    basis: AuerbachBasis
    gap: float
    partial_sum_norms: np.ndarray = field(repr=False)
    partial_sums_certified: bool = True
    reconstruction_residual: float = 0.0


def split_rank_one(
    A: MatOperator,
    tol: float = 1e-10,
    budget: int = 200,
    restarts: int = 1,
    seed: int = DEFAULT_SEED,
    gap_ceiling: float = 1e-6,
) -> SplitResult:
    """Split a nonzero finite-rank block into rank(A)**2 rank-one pieces.

    With (e_j, f_j) an Auerbach basis of the image E = A(X) and m its
    dimension, the pieces are x -> (1/m) f_j(A x) e_j, cycled m times.
    Their sum reconstructs A, and every partial sum, as an operator on E
    in the ambient norm, has norm at most 2 (1 + gap): whole cycles sum
    to multiples of the identity on E while a trailing partial cycle is
    controlled by the functional norms.
    """
    if not np.any(A.matrix):
        raise ValueError("cannot split the zero operator; skip zero blocks")
    U, m = image_basis(A, tol)
    if m == 0:
        raise ValueError("numerical rank is zero at this tolerance; loosen tol")
    basis = auerbach_basis(U, A.target, budget=budget, restarts=restarts, seed=seed)
    if basis.gap > gap_ceiling:
        warnings.warn(
            f"Auerbach gap {basis.gap:.3e} above ceiling {gap_ceiling:.1e}; "
            "bounds are reported with the (1+gap) inflation",
            RuntimeWarning,
            stacklevel=2,
        )
    coords_of_A = U.T @ A.matrix  # image coordinates of A x in the basis U
    pieces = []
    for _ in range(m):
        for j in range(m):
            row = (basis.inv_coeff[j] @ coords_of_A) / m
            f = functional_from_linear_form(A.source, row)
            pieces.append(RankOneOperator(f, basis.vectors[j]))

    # partial sums as operators on E, in U-coordinates
    kind = ball_kind(A.target)
    vertices = section_vertices(A.target, U) if kind in ("l1", "linf") else None
    run = np.zeros((m, m))
    norms = np.empty(m * m)
    certified = True
    for i in range(m * m):
        j = i % m
        run = run + np.outer(basis.coeff[:, j], basis.inv_coeff[j]) / m
        val, cert = section_operator_norm(A.target, U, run, vertices)
        norms[i] = val
        certified = certified and cert

    total = np.zeros_like(A.matrix)
    for piece in pieces:
        total = total + as_matrix(piece).matrix
    sigma1 = float(np.linalg.svd(A.matrix, compute_uv=False)[0])
    residual = float(np.linalg.svd(total - A.matrix, compute_uv=False)[0])
    if residual > max(10.0 * tol, 1e-9) * sigma1:
        raise ValueError(
            f"splitting failed to reconstruct the block (residual {residual:.3e}); "
            "the rank tolerance is likely too tight"
        )
    return SplitResult(pieces, m, basis, basis.gap, norms, certified, residual)


def build_oframe(
    blocks,
    T: MatOperator,
    tol: float = 1e-9,
    budget: int = 200,
    K: float | None = None,
    allow_estimates: bool = False,
    rank_tol: float = 1e-10,
    restarts: int = 1,
    seed: int = DEFAULT_SEED,
) -> OFrame:
    """Assemble a rank-one frame for T from blocks summing to T.

    Blocks are split one by one and the pieces concatenated in block
    order.  With K the supremum of the block partial-sum norms and gap
    the largest Auerbach gap, the resulting frame constant is at most
    5 K (1 + gap) up to round-off.  Zero blocks contribute no pairs.
    """
    blocks = list(blocks)
    for b in blocks:
        if b.source != T.source or b.target != T.target:
            raise SpaceMismatchError("blocks must share the target operator's spaces")
    total = np.zeros_like(T.matrix)
    for b in blocks:
        total = total + b.matrix
    scale = float(np.linalg.svd(T.matrix, compute_uv=False)[0]) if np.any(T.matrix) else 0.0
    residual = float(np.linalg.svd(total - T.matrix, compute_uv=False)[0]) if blocks else scale
    if residual > tol * (1.0 + scale):
        raise ValueError(
            f"blocks do not sum to the target operator: residual {residual:.3e} "
            f"exceeds {tol:.1e} * (1 + ||T||)"
        )
    if not blocks:
        if np.any(T.matrix):
            raise ValueError("empty block list is only valid for the zero operator")
        return OFrame((), T.source, T.target, T, 0.0, True, 0.0)

    k_certified = True
    if K is None:
        run = np.zeros_like(T.matrix)
        K = 0.0
        for b in blocks:
            run = run + b.matrix
            res = op_norm(MatOperator(run, T.source, T.target))
            K = max(K, res.value)
            k_certified = k_certified and res.certified
        if not k_certified and not allow_estimates:
            raise CertificationError(
                "block partial sums have no exact norm formula here; "
                "pass allow_estimates=True or supply K"
            )

    pairs = []
    block_norms, block_ranks, block_gaps = [], [], []
    block_ps_norms, block_ps_cert = [], []
    for b in blocks:
        if not np.any(b.matrix):
            continue  # zero block: no pairs, index bookkeeping unaffected
        split = split_rank_one(b, tol=rank_tol, budget=budget, restarts=restarts, seed=seed)
        for piece in split.pieces:
            pairs.append((piece.functional, piece.vector))
        block_norms.append(op_norm(b).value)
        block_ranks.append(split.rank)
        block_gaps.append(split.gap)
        block_ps_norms.append(split.partial_sum_norms)
        block_ps_cert.append(split.partial_sums_certified)

    gap = max(block_gaps, default=0.0)
    info = BuildInfo(
        k_input=float(K),
        k_input_certified=k_certified,
        block_norms=block_norms,
        block_ranks=block_ranks,
        block_gaps=block_gaps,
        block_partial_sum_norms=block_ps_norms,
        block_partial_sums_certified=block_ps_cert,
    )
    frame = OFrame(tuple(pairs), T.source, T.target, T, None, True, gap, info)
    k_value, k_cert = _frame_constant(frame, allow_estimates)
    frame = OFrame(tuple(pairs), T.source, T.target, T, k_value, k_cert, gap, info)

    rng = np.random.default_rng(seed)
    tnorm = op_norm(T).value if ball_kind(T.source) != "smooth" else scale
    for _ in range(8):
        x = random_unit_vector(T.source, rng)
        if reconstruction_residual(frame, x) > 1e-9 * (1.0 + tnorm):
            raise ValueError("assembled frame fails the reconstruction identity")
    return frame


# -- bounded approximation certificates -----------------------------------------


@dataclass(frozen=True)
class BapCertificate:
    """Finite-rank witnesses R with ||R|| <= C ||T|| and family deviations."""

    C: float
    t_norm: float
    witnesses: list[MatOperator]
    errors: list[float]


def bap_certificate(
    T: MatOperator,
    family,
    eps: float,
    C: float,
    rank: int | None = None,
    allow_estimates: bool = False,
) -> BapCertificate:
    """A finite-rank R approximating T on a finite family within eps.

    R is the rank-truncated singular expansion of T, rescaled when
    needed so that ||R|| <= C ||T||.  If the deviation on the family
    exceeds eps the request is rejected outright.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if C < 1.0:
        raise ValueError("C must be at least 1")
    family = list(family)
    for x in family:
        if x.space != T.source:
            raise SpaceMismatchError("family vectors must live in the source space")
    t_res = op_norm(T)
    if not t_res.certified and not allow_estimates:
        raise CertificationError("||T|| has no exact formula here; pass allow_estimates=True")
    full = min(T.matrix.shape)
    if rank is None or rank >= full:
        R = T
    else:
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        u, s, vt = np.linalg.svd(T.matrix, full_matrices=False)
        R = MatOperator(u[:, :rank] @ np.diag(s[:rank]) @ vt[:rank], T.source, T.target)
    r_res = op_norm(R)
    if r_res.value > C * t_res.value and r_res.value > 0.0:
        R = MatOperator(R.matrix * (C * t_res.value / r_res.value), T.source, T.target)
    deviation = 0.0
    for x in family:
        deviation = max(deviation, norm_of(T.target, (R.matrix - T.matrix) @ x.coords))
    if deviation > eps:
        raise InfeasibleApproximation(
            f"rank-{rank} approximation misses the family by {deviation:.6g} > eps={eps:g}"
        )
    return BapCertificate(C=float(C), t_norm=t_res.value, witnesses=[R], errors=[deviation])


def net_margin(eps: float, C: float, t_norm: float = 1.0) -> float:
    """The net resolution eps0 with eps0 * (||T|| + 1 + C ||T||) = eps."""
    return eps / (t_norm + 1.0 + C * t_norm)


def net_expansion_check(
    T: MatOperator,
    R: MatOperator,
    net,
    eps: float,
    C: float,
    probes,
) -> dict:
    """Certify the compact-set bound from a net bound.

    Given R with ||R|| <= C ||T|| and deviation at most eps0 on the net,
    any point within eps0 of the net satisfies ||Tx - Rx|| <= eps by the
    three-term chain through the nearest net point.  Returns the
    measured quantities; all pass flags must hold for the certificate.
    """
    t_norm = op_norm(T).value
    r_norm = op_norm(R).value
    eps0 = net_margin(eps, C, t_norm)
    net = list(net)
    net_dev = 0.0
    for x in net:
        net_dev = max(net_dev, norm_of(T.target, (R.matrix - T.matrix) @ x.coords))
    worst_probe, worst_dist = 0.0, 0.0
    for x in probes:
        dist = min(norm_of(T.source, x.coords - y.coords) for y in net)
        dev = norm_of(T.target, (R.matrix - T.matrix) @ x.coords)
        worst_probe = max(worst_probe, dev)
        worst_dist = max(worst_dist, dist)
    slack = 1e-12 * (1.0 + eps)
    return {
        "eps": eps,
        "eps0": eps0,
        "t_norm": t_norm,
        "reconstructed_eps": eps0 * (t_norm + 1.0 + C * t_norm),
        "r_norm_ok": bool(r_norm <= C * t_norm + 1e-9),
        "net_deviation": net_dev,
        "net_ok": bool(net_dev <= eps0 + slack),
        "probe_distance": worst_dist,
        "probes_in_reach": bool(worst_dist <= eps0 + slack),
        "probe_deviation": worst_probe,
        "probe_ok": bool(worst_probe <= eps + slack),
    }


# -- JSON ------------------------------------------------------------------------


def frame_to_json(F: OFrame) -> dict:
    return {
        "source": space_to_json(F.source),
        "target": space_to_json(F.target),
        "operator": operator_to_json(F.operator),
        "pairs": [
            {"functional": [float(v) for v in f.coords], "vector": [float(v) for v in w.coords]}
            for f, w in F.pairs
        ],
        "K": F.K,
        "k_certified": F.k_certified,
        "gap": F.gap,
    }


def frame_from_json(obj: dict) -> OFrame:
    source = space_from_json(obj["source"])
    target = space_from_json(obj["target"])
    op = operator_from_json(obj["operator"])
    pairs = tuple(
        (Functional(source, np.asarray(p["functional"], dtype=float)),
         Vec(target, np.asarray(p["vector"], dtype=float)))
        for p in obj["pairs"]
    )
    k = obj.get("K")
    return OFrame(
        pairs,
        source,
        target,
        op,
        None if k is None else float(k),
        bool(obj.get("k_certified", True)),
        float(obj.get("gap", 0.0)),
    )
