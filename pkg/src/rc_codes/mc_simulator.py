"""
MC Simulator - Frame error rate estimation over AWGN with an unknown constant phase

Detection is exhaustive correlation against the whole mapped codebook: the coherent
detector maximizes Re(y . s*), the non-coherent one |y . s*|. Frames are drawn in
blocks of ``frame_block``; each block owns a Philox stream keyed by the seed, the
SNR index and the block index, so the counts never depend on the worker count.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import norm

from .bounds import SnrPoint, euclid_scale
from .config import DEFAULT_CONFIG
from .exceptions import ConfigurationError, DimensionMismatchError, DomainError, PreconditionError
from .ring_codes import (
    Codeword,
    GeneratorMatrix,
    InfoWord,
    _check_cap,
    encode_many,
    info_word_matrix,
)
from .run_pool import RunPool

logger = logging.getLogger(__name__)

DEFAULT_CODEBOOK_CAP = 1 << 20

# Gray pairing (bit 2t, bit 2t+1) -> QPSK symbol, indexed by 2*b0 + b1:
# 00 -> 0, 01 -> 1, 10 -> 3, 11 -> 2
_GRAY_PAIRING = np.array([0, 1, 3, 2], dtype=np.int64)


class Detector(str, Enum):
    COHERENT = "coherent"
    NONCOHERENT = "noncoherent"


class PhaseModel(str, Enum):
    ZERO = "zero"
    UNIFORM_CONSTANT = "uniform"


@dataclass(frozen=True)
class ConstellationMap:
    """M-PSK points e^{j 2 pi m / M}, optionally fed bit pairs of a binary code"""

    M: int
    gray_binary_pairs: bool = False

    def __post_init__(self):
        if self.M not in (2, 4):
            raise DomainError(f"unsupported constellation order {self.M}")
        if self.gray_binary_pairs and self.M != 4:
            raise DomainError("bit-pair mapping is only defined for QPSK")

    @classmethod
    def natural(cls, M: int) -> "ConstellationMap":
        return cls(M)

    @classmethod
    def gray_qpsk_binary(cls) -> "ConstellationMap":
        return cls(4, gray_binary_pairs=True)

    @property
    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.M) / self.M)

    @property
    def name(self) -> str:
        base = "bpsk" if self.M == 2 else "qpsk"
        return f"{base}-gray-pairs" if self.gray_binary_pairs else base

    def symbol_indices(self, symbols: np.ndarray) -> np.ndarray:
        """Constellation indices for code symbols given along the last axis"""
        symbols = np.asarray(symbols, dtype=np.int64)
        if self.gray_binary_pairs:
            if symbols.shape[-1] % 2:
                raise DimensionMismatchError(
                    "binary codes on QPSK need an even number of bits"
                )
            if symbols.size and (symbols.min() < 0 or symbols.max() > 1):
                raise DomainError("bit-pair mapping expects binary symbols")
            pairs = symbols.reshape(symbols.shape[:-1] + (-1, 2))
            return _GRAY_PAIRING[2 * pairs[..., 0] + pairs[..., 1]]
        if symbols.size and (symbols.min() < 0 or symbols.max() >= self.M):
            raise DomainError(f"symbols must lie in 0..{self.M - 1}")
        return symbols


def default_constellation(G: GeneratorMatrix) -> ConstellationMap:
    return ConstellationMap.natural(G.ring.modulus)


def map_to_constellation(
    c: Union[Codeword, Sequence[int], np.ndarray], cmap: ConstellationMap
) -> np.ndarray:
    """Unit-energy complex symbols of a codeword (or of codewords stacked as rows)"""
    symbols = np.asarray(c.symbols if isinstance(c, Codeword) else c, dtype=np.int64)
    return cmap.points[cmap.symbol_indices(symbols)]


@dataclass(frozen=True, eq=False)
class Codebook:
    """All mapped codewords of a generator, row i holding the signal of info word i"""

    generator: GeneratorMatrix
    constellation: ConstellationMap
    signals: np.ndarray

    @property
    def size(self) -> int:
        return self.signals.shape[0]

    @property
    def length(self) -> int:
        return self.signals.shape[1]

    def info_word(self, index: int) -> InfoWord:
        return InfoWord.from_index(int(index), self.generator.k1, self.generator.k2)


def build_codebook(
    G: GeneratorMatrix,
    cmap: Optional[ConstellationMap] = None,
    cap: int = DEFAULT_CODEBOOK_CAP,
) -> Codebook:
    cmap = cmap or default_constellation(G)
    if cmap.gray_binary_pairs and G.ring.modulus != 2:
        raise DomainError("bit-pair mapping applies to binary codes only")
    if not cmap.gray_binary_pairs and cmap.M != G.ring.modulus:
        raise DomainError(f"{G.ring} codes map naturally onto {G.ring.modulus}-PSK only")
    _check_cap(G.info_count, cap)
    symbols = encode_many(G, info_word_matrix(G.k1, G.k2))
    signals = map_to_constellation(symbols, cmap)
    signals.setflags(write=False)
    return Codebook(G, cmap, signals)


def draw_phases(phase_model: PhaseModel, frames: Tuple[int, ...], rng: np.random.Generator):
    if PhaseModel(phase_model) is PhaseModel.UNIFORM_CONSTANT:
        return rng.uniform(0.0, 2.0 * np.pi, size=frames)
    return np.zeros(frames)


def transmit(
    s: np.ndarray,
    snr: SnrPoint,
    phase_model: PhaseModel,
    rng: np.random.Generator,
) -> np.ndarray:
    """y = s e^{j theta} + n, one theta per frame (row), noise variance N0 per symbol"""
    s = np.asarray(s, dtype=complex)
    theta = draw_phases(phase_model, s.shape[:-1], rng)
    sigma = math.sqrt(snr.n0 / 2.0)
    noise = sigma * (rng.standard_normal(s.shape) + 1j * rng.standard_normal(s.shape))
    return s * np.exp(1j * theta)[..., None] + noise


def _correlations(y: np.ndarray, codebook: Codebook) -> np.ndarray:
    y = np.asarray(y, dtype=complex)
    if y.shape[-1] != codebook.length:
        raise DimensionMismatchError(
            f"received length {y.shape[-1]} does not match codebook length {codebook.length}"
        )
    return y @ codebook.signals.conj().T


def detect_coherent_indices(Y: np.ndarray, codebook: Codebook) -> np.ndarray:
    """argmax Re(y . s*) per row; np.argmax keeps the lowest index on ties"""
    return np.argmax(_correlations(Y, codebook).real, axis=-1)


def detect_noncoherent_indices(Y: np.ndarray, codebook: Codebook) -> np.ndarray:
    """argmax |y . s*| per row"""
    return np.argmax(np.abs(_correlations(Y, codebook)), axis=-1)


def detect_coherent(y: np.ndarray, codebook: Codebook) -> InfoWord:
    return codebook.info_word(detect_coherent_indices(np.atleast_1d(y), codebook))


def detect_noncoherent(y: np.ndarray, codebook: Codebook) -> InfoWord:
    return codebook.info_word(detect_noncoherent_indices(np.atleast_1d(y), codebook))


def min_squared_distance(codebook: Codebook, rotations: int = 1) -> Optional[float]:
    """min over pairs a != b and r in the rotation group of ||s_a - r s_b||^2"""
    S = codebook.signals
    if S.shape[0] < 2:
        return None
    n = float(S.shape[1])
    phases = np.exp(-2j * np.pi * np.arange(rotations) / rotations)
    best = math.inf
    rows = max(1, (1 << 16) // S.shape[0])
    for start in range(0, S.shape[0], rows):
        gram = S[start : start + rows] @ S.conj().T
        aligned = np.max((gram[None, :, :] * phases[:, None, None]).real, axis=0)
        idx = np.arange(aligned.shape[0])
        aligned[idx, start + idx] = -math.inf
        best = min(best, 2.0 * n - 2.0 * float(aligned.max()))
    return max(best, 0.0)


def equivalent_distance(codebook: Codebook) -> Optional[float]:
    """Non-coherent equivalent distance of a mapped codebook in weight units"""
    M = codebook.constellation.M
    d2 = min_squared_distance(codebook, rotations=M)
    return None if d2 is None else round(d2 / euclid_scale(M), 9)


def wilson_interval(
    errors: int, trials: int, confidence: float = 0.95
) -> Tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p = errors / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SimConfig:
    """One Monte Carlo campaign over an SNR list"""

    code: GeneratorMatrix
    detector: Detector = Detector.COHERENT
    snr_db: Sequence[float] = (0.0,)
    max_trials: int = DEFAULT_CONFIG.max_trials
    max_frame_errors: int = DEFAULT_CONFIG.max_frame_errors
    rng_seed: int = DEFAULT_CONFIG.default_seed
    phase_model: PhaseModel = PhaseModel.ZERO
    constellation: Optional[ConstellationMap] = None
    allow_undetectable: bool = False
    frame_block: int = DEFAULT_CONFIG.frame_block
    workers: int = 1
    codebook_cap: int = DEFAULT_CODEBOOK_CAP

    def __post_init__(self):
        self.detector = Detector(self.detector)
        self.phase_model = PhaseModel(self.phase_model)
        if self.max_trials < 0 or self.max_frame_errors < 1:
            raise ConfigurationError("max_trials must be >= 0 and max_frame_errors >= 1")
        if self.frame_block < 1:
            raise ConfigurationError("frame_block must be positive")
        if not 0 <= self.rng_seed < (1 << 64):
            raise ConfigurationError("rng_seed must be an unsigned 64-bit integer")
        if self.constellation is None:
            self.constellation = default_constellation(self.code)


@dataclass(frozen=True)
class FERPoint:
    snr_db: float
    trials: int
    frame_errors: int
    fer: Optional[float]
    wilson_low: float
    wilson_high: float
    elapsed_s: float = 0.0

    @property
    def defined(self) -> bool:
        return self.fer is not None


@dataclass
class FERResult:
    points: List[FERPoint]
    seed: int
    detector: Detector
    phase_model: PhaseModel
    constellation: str
    max_trials: int
    max_frame_errors: int
    frame_block: int
    metadata: dict = field(default_factory=dict)

    def counts(self) -> List[Tuple[int, int]]:
        return [(p.trials, p.frame_errors) for p in self.points]


def _block_rng(seed: int, snr_index: int, block_index: int) -> np.random.Generator:
    key = (seed << 64) | (snr_index << 40) | block_index
    return np.random.Generator(np.random.Philox(key=key))


def _simulate_block(
    codebook: Codebook,
    config: SimConfig,
    snr: SnrPoint,
    snr_index: int,
    block_index: int,
    frames: int,
) -> int:
    """Frame errors among the frames of one block"""
    rng = _block_rng(config.rng_seed, snr_index, block_index)
    sent = rng.integers(0, codebook.size, size=frames)
    y = transmit(codebook.signals[sent], snr, config.phase_model, rng)
    if config.detector is Detector.COHERENT:
        decided = detect_coherent_indices(y, codebook)
    else:
        decided = detect_noncoherent_indices(y, codebook)
    return int(np.count_nonzero(decided != sent))


def _codeword_points(codebook: Codebook) -> np.ndarray:
    """Constellation index of every transmitted symbol, one row per codeword"""
    M = codebook.constellation.M
    points = np.empty(codebook.signals.shape, dtype=np.uint8)
    rows = max(1, (1 << 20) // max(codebook.length, 1))
    for start in range(0, codebook.size, rows):
        angles = np.angle(codebook.signals[start : start + rows]) * (M / (2.0 * np.pi))
        points[start : start + rows] = np.rint(angles).astype(np.int64) % M
    return points


def _distinct_rows(rows: np.ndarray) -> int:
    if rows.shape[0] == 0:
        return 0
    if rows.shape[1] == 0:
        return 1
    return int(np.unique(rows, axis=0).shape[0])


def ambiguous_rotations(codebook: Codebook) -> List[int]:
    """Rotations r (in steps of 2 pi / M) mapping some codeword onto another one

    0 is listed when two info words share a codeword. Any r lets the non-coherent
    detector confuse a codeword with its rotated image.
    """
    points = _codeword_points(codebook)
    if points.shape[0] < 2:
        return []
    M = codebook.constellation.M
    distinct = _distinct_rows(points)
    found = [0] if distinct < points.shape[0] else []
    for r in range(1, M):
        rotated = (points + r) % M
        if _distinct_rows(np.concatenate([points, rotated])) < 2 * distinct:
            found.append(r)
    return found


def check_detectable(codebook: Codebook, detector: Detector, allow_undetectable: bool) -> None:
    """Refuse codebooks whose codewords the detector cannot tell apart"""
    rotations = ambiguous_rotations(codebook)
    if detector is Detector.NONCOHERENT:
        ambiguous = bool(rotations)
        what = "non-coherent equivalent distance"
    else:
        ambiguous = 0 in rotations
        what = "minimum Euclidean distance"
    if ambiguous:
        if not allow_undetectable:
            raise PreconditionError(
                f"codebook has zero {what} (rotations {rotations}); detection is ambiguous"
            )
        logger.warning(f"Simulating a codebook with zero {what} (override)")


def _simulate_point(
    codebook: Codebook, config: SimConfig, snr_index: int, pool: RunPool
) -> FERPoint:
    snr = SnrPoint(float(config.snr_db[snr_index]))
    started = time.perf_counter()
    trials = 0
    errors = 0
    block_index = 0
    n_blocks = -(-config.max_trials // config.frame_block)
    while block_index < n_blocks and errors < config.max_frame_errors:
        wave = range(block_index, min(block_index + pool.workers, n_blocks))
        sizes = [
            min(config.frame_block, config.max_trials - b * config.frame_block) for b in wave
        ]
        counts = pool.map(
            lambda job: _simulate_block(codebook, config, snr, snr_index, *job),
            list(zip(wave, sizes)),
            "fer-block",
        )
        for size, count in zip(sizes, counts):
            trials += size
            errors += count
            block_index += 1
            if errors >= config.max_frame_errors:
                break

    low, high = wilson_interval(errors, trials)
    point = FERPoint(
        snr_db=snr.es_over_n0_db,
        trials=trials,
        frame_errors=errors,
        fer=errors / trials if trials else None,
        wilson_low=low,
        wilson_high=high,
        elapsed_s=time.perf_counter() - started,
    )
    if point.fer is None:
        logger.warning(f"No trials at {snr.es_over_n0_db} dB; FER undefined")
    else:
        logger.info(
            f"SNR {snr.es_over_n0_db} dB: {errors} errors in {trials} frames, "
            f"FER {point.fer:.3e} [{low:.3e}, {high:.3e}]"
        )
    return point


def estimate_fer(config: SimConfig) -> FERResult:
    """Simulated FER at every SNR point of config"""
    codebook = build_codebook(config.code, config.constellation, config.codebook_cap)
    check_detectable(codebook, config.detector, config.allow_undetectable)
    logger.info(
        f"Simulating {config.detector.value} detection of a {codebook.size}-word "
        f"{codebook.constellation.name} codebook, length {codebook.length}, seed {config.rng_seed}"
    )
    with RunPool(config.workers, name="fer") as pool:
        points = [
            _simulate_point(codebook, config, i, pool) for i in range(len(config.snr_db))
        ]
    return FERResult(
        points=points,
        seed=config.rng_seed,
        detector=config.detector,
        phase_model=config.phase_model,
        constellation=codebook.constellation.name,
        max_trials=config.max_trials,
        max_frame_errors=config.max_frame_errors,
        frame_block=config.frame_block,
        metadata={"n_sym": config.code.n_sym, "dimension": config.code.dimension},
    )
