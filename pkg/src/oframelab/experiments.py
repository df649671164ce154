"""Seeded experiment corpora and the canned demo runs.

The corpus generator produces random operators on certified-norm space
configurations together with pointwise-approximating chains (nested
column projections or progressive damping), telescoped into blocks
whose partial sums stay bounded.  The demos exercise the headline
bounds: frame constants after splitting, the growth of the grid Haar
unconditional constants, and the shrinking dichotomy between the l1 and
l2 coordinate families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_SEED
from .frames import (
    OFrame,
    basis_frame,
    build_oframe,
    shrinking_profile,
    telescope,
)
from .operators import MatOperator, identity_operator, op_norm
from .seqspace import unconditional_constant
from .spaces import Functional, SpaceSpec, Vec, dual_norm_of, haar_system

__all__ = [
    "CorpusItem",
    "corpus",
    "certified_space_pairs",
    "haar_growth_rows",
    "shrinking_rows",
    "split_stress_rows",
]

_INF = float("inf")


def certified_space_pairs(dim: int) -> list[tuple[SpaceSpec, SpaceSpec]]:
    """Source/target combinations with exact operator-norm formulas."""
    pairs = [
        (SpaceSpec.lp(1, dim), SpaceSpec.lp(1, dim)),
        (SpaceSpec.lp(1, dim), SpaceSpec.lp(2, dim)),
        (SpaceSpec.lp(1, dim), SpaceSpec.lp(_INF, dim)),
        (SpaceSpec.lp(2, dim), SpaceSpec.lp(2, dim)),
        (SpaceSpec.lp(2, dim), SpaceSpec.lp(_INF, dim)),
        (SpaceSpec.lp(_INF, dim), SpaceSpec.lp(_INF, dim)),
    ]
    if dim in (2, 4, 8):
        levels = dim.bit_length() - 1
        pairs.append((SpaceSpec.l1grid(levels), SpaceSpec.lp(2, dim)))
        pairs.append((SpaceSpec.lp(1, dim), SpaceSpec.l1grid(levels)))
    return pairs


@dataclass(frozen=True)
class CorpusItem:
    operator: MatOperator
    chain: list[MatOperator]
    blocks: list[MatOperator]
    K: float


def _projection_chain(T: MatOperator, rng: np.random.Generator) -> list[MatOperator]:
    dim = T.source.dim
    n_blocks = int(rng.integers(2, min(4, dim) + 1))
    cuts = sorted(rng.choice(np.arange(1, dim), size=n_blocks - 1, replace=False).tolist())
    cuts.append(dim)
    chain = []
    for cut in cuts:
        m = T.matrix.copy()
        m[:, cut:] = 0.0
        chain.append(MatOperator(m, T.source, T.target))
    return chain


def _damped_chain(T: MatOperator, rng: np.random.Generator) -> list[MatOperator]:
    n_blocks = int(rng.integers(2, 5))
    alphas = np.sort(rng.uniform(0.2, 0.95, size=n_blocks - 1))
    chain = [MatOperator(a * T.matrix, T.source, T.target) for a in alphas]
    chain.append(T)
    return chain


def corpus(seed: int = DEFAULT_SEED, count: int = 50, dims=(2, 8)) -> list[CorpusItem]:
    """Seeded random operators with telescoped approximating chains."""
    rng = np.random.default_rng(seed)
    items = []
    while len(items) < count:
        dim = int(rng.integers(dims[0], dims[1] + 1))
        options = certified_space_pairs(dim)
        source, target = options[int(rng.integers(len(options)))]
        matrix = rng.standard_normal((target.dim, source.dim))
        T = MatOperator(matrix, source, target)
        chain = _projection_chain(T, rng) if rng.random() < 0.6 else _damped_chain(T, rng)
        tele = telescope(chain, T)
        items.append(CorpusItem(T, chain, tele.blocks, tele.partial_sum_sup))
    return items


# -- demo rows (CSV-shaped tuples: index, value, certified, bound, passed) ------


def haar_growth_rows(levels: int = 4, max_exact: int = 16):
    """Grid Haar unconditional constants for levels 1..levels."""
    rows = []
    prev = 0.0
    for lev in range(1, levels + 1):
        system = haar_system(lev)
        value, certified = unconditional_constant(system, system[0].space, max_exact=max_exact)
        rows.append((lev, value, certified, prev, value >= prev - 1e-12))
        prev = value
    return rows


def shrinking_rows(sizes=range(4, 13)):
    """Tail norms discriminating the l1 family from the l2 family.

    For each size, the l1 row reports the smallest tail norm over all
    proper truncation points against the all-ones dual witness (it stays
    at one); the l2 row reports the tail just past the support of a
    fixed low-dimensional dual vector (it is exactly zero).
    """
    rows = []
    for n in sizes:
        l1 = SpaceSpec.lp(1, n)
        F1 = basis_frame(identity_operator(l1))
        ones = Functional(l1, np.ones(n))  # the all-ones dual witness
        prof1 = shrinking_profile(F1, samples=[ones], ns=list(range(n)))
        val1 = float(np.min(prof1.values))
        rows.append((f"l1/{n}", val1, True, 1.0 - 1e-9, val1 >= 1.0 - 1e-9))

        l2 = SpaceSpec.lp(2, n)
        F2 = basis_frame(identity_operator(l2))
        fixed = np.zeros(n)
        fixed[:2] = 1.0
        w = Functional(l2, fixed / dual_norm_of(l2, fixed))
        prof2 = shrinking_profile(F2, samples=[w], ns=[2, n])
        val2 = float(prof2.values[0])
        rows.append((f"l2/{n}", val2, True, 1e-9, val2 <= 1e-9))
    return rows


def split_stress_rows(seed: int = DEFAULT_SEED, count: int = 20):
    """Frame constants of built frames against five times the chain bound."""
    rows = []
    for idx, item in enumerate(corpus(seed=seed, count=count)):
        frame = build_oframe(item.blocks, item.operator, K=item.K)
        gap = frame.gap
        bound = 5.0 * item.K * (1.0 + gap) + 1e-6
        rows.append((idx, frame.K, frame.k_certified, bound, frame.K <= bound))
        info = frame.info
        for bn in info.block_norms:
            rows.append((idx, bn, True, 2.0 * item.K + 1e-9, bn <= 2.0 * item.K + 1e-9))
    return rows
