"""
Greedy Builder - Column-by-column construction of rate-compatible code families

Every step computes the nearest-neighbor set U of the current prefix, scores every
admissible column against U and appends one of the best columns, drawn with a
seeded PCG64 generator. Over Z2 a column is scored by how many words of U it
lifts; over Z4 by how many words of U it leaves at weight zero, then by how many
it only lifts by one.

Words spanned by the constraint rows (the rotation words of an RI family, the four
words of the two nc4 rows) are left out of U and of d_min, so milestones describe
the derived code used for non-coherent detection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .config import DEFAULT_CONFIG
from .exceptions import ConfigurationError, PreconditionError
from .ring_codes import (
    DEFAULT_ENUMERATION_CAP,
    GeneratorMatrix,
    InfoWord,
    NCDistanceReport,
    RingId,
    _check_cap,
    codeword_weights,
    drop_leading_rows,
    info_word_count,
    info_word_matrix,
    nc_min_distance,
    prefix,
)
from .run_pool import RunPool

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


class Constraint(str, Enum):
    """Row constraints imposed during construction"""

    NONE = "none"
    RI = "ri"
    BINARY_NC4 = "nc4"


class BuildStatus(str, Enum):
    TARGET_REACHED = "target_reached"
    MAX_LENGTH = "max_length"
    CANDIDATES_EXHAUSTED = "candidates_exhausted"


class BuildConfig(BaseModel):
    """Inputs of one greedy construction (or of a best-of-R batch)"""

    model_config = ConfigDict(frozen=True)

    ring: int = 2
    k1: int = 0
    k2: int = 0
    target_d_min: Optional[int] = None
    max_n_sym: int = 256
    constraint: Constraint = Constraint.NONE
    enforce_distinct_columns: bool = False
    rng_seed: int = DEFAULT_CONFIG.default_seed
    runs: int = 1

    @model_validator(mode="after")
    def _check_consistency(self) -> "BuildConfig":
        if self.ring not in (2, 4):
            raise ConfigurationError(f"ring must be 2 or 4, got {self.ring}")
        if self.k1 < 0 or self.k2 < 0 or self.k1 + self.k2 == 0:
            raise ConfigurationError("the generator needs at least one row")
        if self.ring == 2 and self.k1:
            raise ConfigurationError("codes over Z2 have k1 = 0")
        if self.target_d_min is not None and self.target_d_min < 1:
            raise ConfigurationError("target_d_min must be at least 1")
        if self.max_n_sym < 1:
            raise ConfigurationError("max_n_sym must be at least 1")
        if self.runs < 1:
            raise ConfigurationError("runs must be at least 1")
        if not 0 <= self.rng_seed <= _MASK64:
            raise ConfigurationError("rng_seed must be an unsigned 64-bit integer")
        if self.constraint is Constraint.BINARY_NC4:
            if self.ring != 2 or self.k2 < 2:
                raise ConfigurationError("nc4 construction needs ring 2 and k2 >= 2")
        if self.constraint is Constraint.RI:
            if self.ring == 4 and self.k1 < 1:
                raise ConfigurationError("RI over Z4 needs k1 >= 1")
        if self.n_rows <= self.fixed_rows:
            raise ConfigurationError("the derived code needs at least one free row")
        return self

    @property
    def ring_id(self) -> RingId:
        return RingId(self.ring)

    @property
    def n_rows(self) -> int:
        return self.k1 + self.k2

    @property
    def fixed_rows(self) -> int:
        return self._extra_rows(self.constraint)

    @classmethod
    def for_table(
        cls, ring: int, K: int, constraint: Constraint = Constraint.NONE, **kwargs
    ) -> "BuildConfig":
        """Generator dimensions for a table row K (the dimension of the derived code)"""
        constraint = Constraint(constraint)
        if ring == 2:
            extra = cls._extra_rows(constraint)
            return cls(ring=2, k1=0, k2=K + extra, constraint=constraint, **kwargs)
        k1, k2 = K // 2, K % 2
        if constraint is Constraint.RI:
            k1 += 1
        elif constraint is Constraint.BINARY_NC4:
            raise ConfigurationError("nc4 construction is binary")
        return cls(ring=4, k1=k1, k2=k2, constraint=constraint, **kwargs)

    @staticmethod
    def _extra_rows(constraint: Constraint) -> int:
        return {Constraint.NONE: 0, Constraint.RI: 1, Constraint.BINARY_NC4: 2}[
            constraint
        ]


@dataclass(frozen=True)
class CodeFamily:
    """A maximal-length generator plus the lengths at which each d_min was first met"""

    generator: GeneratorMatrix
    milestones: Tuple[Tuple[int, int], ...]
    constraint: Constraint = Constraint.NONE
    seed: int = 0
    status: BuildStatus = BuildStatus.TARGET_REACHED
    enforce_distinct_columns: bool = False
    run_index: int = 0

    @property
    def fixed_rows(self) -> int:
        return BuildConfig._extra_rows(self.constraint)

    @property
    def final_d_min(self) -> int:
        return self.milestones[-1][0] if self.milestones else 0

    def length_for(self, d_min: int) -> Optional[int]:
        """Shortest prefix length (symbols) reaching at least d_min"""
        for value, n_sym in self.milestones:
            if value >= d_min:
                return n_sym
        return None

    def bits_for(self, d_min: int) -> Optional[int]:
        n_sym = self.length_for(d_min)
        return None if n_sym is None else n_sym * self.generator.ring.bits_per_symbol

    def prefix_for(self, d_min: int) -> Optional[GeneratorMatrix]:
        n_sym = self.length_for(d_min)
        return None if n_sym is None else prefix(self.generator, n_sym)


# ---------------------------------------------------------------------------
# Candidate columns and scoring
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _free_columns(k1: int, k2: int) -> np.ndarray:
    columns = info_word_matrix(k1, k2)
    columns.setflags(write=False)
    return columns


def _fixed_entries(config: BuildConfig, column_index: int) -> List[int]:
    if config.constraint is Constraint.RI:
        return [1]
    if config.constraint is Constraint.BINARY_NC4:
        return [1, column_index % 2]
    return []


def column_keys(config: BuildConfig, columns: np.ndarray) -> np.ndarray:
    """Integer identity of each column (same indexing as info words)"""
    shape = (4,) * config.k1 + (2,) * config.k2
    return np.ravel_multi_index(tuple(np.asarray(columns).T), shape)


def admissible_candidates(
    config: BuildConfig, column_index: int, used_keys: Iterable[int] = ()
) -> np.ndarray:
    """Columns the greedy may append at position column_index"""
    fixed = _fixed_entries(config, column_index)
    free_k1 = config.k1 - (1 if fixed and config.ring == 4 else 0)
    free_k2 = config.k2 - (len(fixed) if config.ring == 2 else 0)
    free = _free_columns(free_k1, free_k2)
    if fixed:
        columns = np.hstack([np.tile(fixed, (free.shape[0], 1)), free])
    else:
        columns = free[1:]
    used = np.fromiter(used_keys, dtype=np.int64)
    if config.enforce_distinct_columns and used.size and columns.size:
        columns = columns[~np.isin(column_keys(config, columns), used)]
    return columns


def column_products(
    ring: int, k1: int, columns: np.ndarray, words: np.ndarray
) -> np.ndarray:
    """Symbol g^T u for every (column, word) pair, shape (n_columns, n_words)"""
    columns = np.asarray(columns, dtype=np.int64)
    words = np.asarray(words, dtype=np.int64)
    if ring == 2:
        return (columns @ words.T) % 2
    z4 = columns[:, :k1] @ words[:, :k1].T
    z2 = columns[:, k1:] @ words[:, k1:].T
    return (z4 + 2 * z2) % 4


def _as_word_matrix(U: Iterable) -> np.ndarray:
    rows = [u.as_array() if isinstance(u, InfoWord) else np.asarray(u) for u in U]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return np.vstack(rows).astype(np.int64)


def score_column_binary(g: Sequence[int], U: Iterable) -> int:
    """Number of nearest neighbors whose weight the column increments"""
    words = _as_word_matrix(U)
    if words.size == 0:
        return 0
    return int(column_products(2, 0, np.asarray(g)[None, :], words).sum())


def score_column_z4(g: Sequence[int], U: Iterable, k1: Optional[int] = None) -> Tuple[int, int]:
    """(words of U left at weight 0, words of U raised by weight 1)"""
    U = list(U)
    if not U:
        return 0, 0
    if k1 is None:
        k1 = len(U[0].z4_part) if isinstance(U[0], InfoWord) else len(g)
    products = column_products(4, k1, np.asarray(g)[None, :], _as_word_matrix(U))[0]
    w = RingId(4).weight_table[products]
    return int(np.sum(w == 0)), int(np.sum(w == 1))


def selection_scores(
    ring: int, k1: int, columns: np.ndarray, words: np.ndarray
) -> np.ndarray:
    """One score per candidate column; the greedy picks among the maximal ones"""
    products = column_products(ring, k1, columns, words)
    if ring == 2:
        return products.sum(axis=1)
    w = RingId(4).weight_table[products]
    zeros = np.sum(w == 0, axis=1)
    ones = np.sum(w == 1, axis=1)
    return -(zeros * (words.shape[0] + 1) + ones)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _generator_from_columns(config: BuildConfig, columns: List[np.ndarray]) -> GeneratorMatrix:
    if not columns:
        return GeneratorMatrix.empty(config.ring_id, config.k1, config.k2)
    stacked = np.vstack(columns).T
    return GeneratorMatrix(config.ring_id, stacked[: config.k1], stacked[config.k1 :])


def _free_word_indices(words: np.ndarray, fixed_rows: int) -> np.ndarray:
    """Indices of the info words outside the span of the constraint rows"""
    return np.flatnonzero(np.any(words[:, fixed_rows:] != 0, axis=1))


def greedy_construct(
    config: BuildConfig, cap: int = DEFAULT_ENUMERATION_CAP
) -> CodeFamily:
    """Run the greedy construction once with config.rng_seed"""
    _check_cap(info_word_count(config.k1, config.k2), cap)
    rng = np.random.Generator(np.random.PCG64(config.rng_seed))
    table = config.ring_id.weight_table
    words = info_word_matrix(config.k1, config.k2)
    weights = np.zeros(words.shape[0], dtype=np.int64)
    tracked = _free_word_indices(words, config.fixed_rows)

    columns: List[np.ndarray] = []
    used: set = set()
    milestones: List[Tuple[int, int]] = []
    status = BuildStatus.MAX_LENGTH
    d_min = 0

    while True:
        if config.target_d_min is not None and d_min >= config.target_d_min:
            status = BuildStatus.TARGET_REACHED
            break
        if len(columns) >= config.max_n_sym:
            status = BuildStatus.MAX_LENGTH
            break

        candidates = admissible_candidates(config, len(columns), used)
        if candidates.shape[0] == 0:
            status = BuildStatus.CANDIDATES_EXHAUSTED
            logger.warning(
                f"No admissible column left at n={len(columns)} (seed {config.rng_seed})"
            )
            break

        current = weights[tracked]
        neighbors = words[tracked[current == current.min()]]
        scores = selection_scores(config.ring, config.k1, candidates, neighbors)
        best = np.flatnonzero(scores == scores.max())
        column = candidates[best[rng.integers(best.size)]]

        columns.append(column)
        if config.enforce_distinct_columns:
            used.add(int(column_keys(config, column[None, :])[0]))
        products = column_products(config.ring, config.k1, column[None, :], words)[0]
        weights += table[products]

        new_d_min = int(weights[tracked].min())
        logger.debug(
            f"n={len(columns)} |U|={neighbors.shape[0]} candidates={candidates.shape[0]} "
            f"ties={best.size} column={column.tolist()} d_min={new_d_min}"
        )
        if new_d_min > d_min:
            milestones.append((new_d_min, len(columns)))
        d_min = new_d_min

    family = CodeFamily(
        generator=_generator_from_columns(config, columns),
        milestones=tuple(milestones),
        constraint=config.constraint,
        seed=config.rng_seed,
        status=status,
        enforce_distinct_columns=config.enforce_distinct_columns,
    )
    logger.info(
        f"Built {config.ring_id} family k1={config.k1} k2={config.k2} "
        f"constraint={config.constraint.value} seed={config.rng_seed}: "
        f"n_sym={family.generator.n_sym} d_min={d_min} status={status.value}"
    )
    return family


def distance_profile(
    G: GeneratorMatrix, cap: int = DEFAULT_ENUMERATION_CAP, fixed_rows: int = 0
) -> np.ndarray:
    """d_min of every prefix, entry n holding the value for prefix(G, n), n = 0..n_sym

    With fixed_rows > 0 the words spanned by the constraint rows are left out, which
    gives the distance of the derived non-coherent code.
    """
    _check_cap(G.info_count, cap)
    words = info_word_matrix(G.k1, G.k2)
    tracked = _free_word_indices(words, fixed_rows)
    weights = np.zeros(words.shape[0], dtype=np.int64)
    table = G.ring.weight_table

    def current() -> int:
        return int(weights[tracked].min()) if tracked.size else 0

    profile = [current()]
    for j in range(G.n_sym):
        products = column_products(G.ring.modulus, G.k1, G.column(j)[None, :], words)[0]
        weights += table[products]
        profile.append(current())
    return np.array(profile, dtype=np.int64)


def distance_milestones(
    G: GeneratorMatrix, cap: int = DEFAULT_ENUMERATION_CAP, fixed_rows: int = 0
) -> Tuple[Tuple[int, int], ...]:
    """(d_min, n_sym) each time the prefix minimum distance grows"""
    profile = distance_profile(G, cap, fixed_rows)
    milestones = []
    for n in range(1, profile.size):
        if profile[n] > profile[n - 1]:
            milestones.append((int(profile[n]), n))
    return tuple(milestones)


# ---------------------------------------------------------------------------
# Multiple runs
# ---------------------------------------------------------------------------


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_run_seed(base_seed: int, run_index: int) -> int:
    """Seed of run i: the base seed for run 0, splitmix64(base ^ i) afterwards"""
    if run_index == 0:
        return base_seed
    return splitmix64((base_seed ^ run_index) & _MASK64)


def run_families(
    config: BuildConfig,
    pool: Optional[RunPool] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[CodeFamily]:
    """All config.runs constructions, in run order"""
    configs = [
        config.model_copy(
            update={"rng_seed": derive_run_seed(config.rng_seed, i), "runs": 1}
        )
        for i in range(config.runs)
    ]

    def run(indexed):
        index, run_config = indexed
        return replace(greedy_construct(run_config, cap), run_index=index)

    items = list(enumerate(configs))
    if pool is not None:
        return pool.map(run, items, "greedy")
    return [run(item) for item in items]


def _length_key(family: CodeFamily, d_min: int) -> Tuple[float, int]:
    n_sym = family.length_for(d_min)
    return (float("inf") if n_sym is None else n_sym, family.run_index)


def best_per_target(
    families: Sequence[CodeFamily], targets: Iterable[int]
) -> Dict[int, CodeFamily]:
    """For each target the family reaching it soonest; ties go to the lower run index"""
    chosen = {}
    for d_min in targets:
        reaching = [f for f in families if f.length_for(d_min) is not None]
        if reaching:
            chosen[d_min] = min(reaching, key=lambda f: _length_key(f, d_min))
    return chosen


def multi_run_best(
    config: BuildConfig,
    pool: Optional[RunPool] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> CodeFamily:
    """Best family of config.runs constructions for config.target_d_min"""
    families = run_families(config, pool, cap)
    if config.target_d_min is not None:
        chosen = best_per_target(families, [config.target_d_min])
        if config.target_d_min in chosen:
            best = chosen[config.target_d_min]
            logger.info(
                f"Best of {config.runs} runs for d_min={config.target_d_min}: "
                f"run {best.run_index} n_sym={best.length_for(config.target_d_min)}"
            )
            return best
    return min(families, key=lambda f: (-f.final_d_min, f.generator.n_sym, f.run_index))


def multi_run_table(
    config: BuildConfig,
    targets: Iterable[int],
    pool: Optional[RunPool] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Dict[int, Tuple[int, int]]:
    """d_min -> (best n_sym, run index) across config.runs constructions"""
    targets = list(targets)
    if config.target_d_min is None and targets:
        config = config.model_copy(update={"target_d_min": max(targets)})
    chosen = best_per_target(run_families(config, pool, cap), targets)
    return {d: (f.length_for(d), f.run_index) for d, f in chosen.items()}


# ---------------------------------------------------------------------------
# Codes for non-coherent detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NCCode:
    """Derived code for non-coherent detection with the distance measured on its parent"""

    generator: GeneratorMatrix
    report: NCDistanceReport
    fixed_rows: int


def derive_nc_generator(parent: GeneratorMatrix, fixed_rows: int) -> GeneratorMatrix:
    """Remove the constraint rows of a parent generator"""
    if fixed_rows < 1:
        raise PreconditionError("the parent has no constraint rows to remove")
    return drop_leading_rows(parent, fixed_rows)


def constrained_distance(
    parent: GeneratorMatrix, fixed_rows: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> NCDistanceReport:
    """Minimum parent weight over info words outside the span of the constraint rows

    With one all-one row this is the non-coherent equivalent distance; with the
    nc4 rows it is the weight distance left after the four fixed-row words.
    """
    weights = codeword_weights(parent, cap)
    free = _free_word_indices(info_word_matrix(parent.k1, parent.k2), fixed_rows)
    if free.size == 0:
        return NCDistanceReport(d_eq_min=None, attained_by=None, detectable=False)
    best = int(free[np.argmin(weights[free])])
    d = int(weights[best])
    return NCDistanceReport(
        d_eq_min=d,
        attained_by=InfoWord.from_index(best, parent.k1, parent.k2),
        detectable=d > 0,
    )


def derive_nc_code(parent: CodeFamily, cap: int = DEFAULT_ENUMERATION_CAP) -> NCCode:
    """The code for non-coherent detection (parent rows minus the fixed rows) and its distance"""
    if parent.constraint is Constraint.NONE:
        raise PreconditionError(
            "derive_nc_code needs a family built with the ri or nc4 constraint"
        )
    fixed = parent.fixed_rows
    child = derive_nc_generator(parent.generator, fixed)
    if parent.constraint is Constraint.RI:
        report = nc_min_distance(parent.generator, cap)
    else:
        report = constrained_distance(parent.generator, fixed, cap)
    logger.info(
        f"Derived {child.ring} code k1={child.k1} k2={child.k2} n_sym={child.n_sym} "
        f"from {parent.constraint.value} parent: d_eq_min={report.d_eq_min}"
    )
    return NCCode(generator=child, report=report, fixed_rows=fixed)
