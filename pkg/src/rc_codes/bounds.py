"""
Bounds - Analytic frame error rate bounds for codes over Z2/Z4 on BPSK/QPSK

Symbols have unit energy, so the squared Euclidean distance between two mapped
codewords at weight distance w is kappa_M * w * Es (kappa_2 = 4, kappa_4 = 2).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.special import erfc

from .exceptions import DomainError, PreconditionError
from .ring_codes import WeightSpectrum, rotation_info_words

logger = logging.getLogger(__name__)

_KAPPA = {2: 4.0, 4: 2.0}
CONSTELLATION_NAMES = {2: "bpsk", 4: "qpsk"}


@dataclass(frozen=True)
class SnrPoint:
    """Es/N0 with Es normalized to 1"""

    es_over_n0_db: float

    @property
    def es_over_n0_lin(self) -> float:
        return 10.0 ** (self.es_over_n0_db / 10.0)

    @property
    def n0(self) -> float:
        return 1.0 / self.es_over_n0_lin


def snr_grid(start_db: float, stop_db: float, step_db: float) -> List[SnrPoint]:
    """Points start, start+step, ... up to and including stop"""
    if step_db <= 0:
        raise DomainError("SNR step must be positive")
    count = int(math.floor((stop_db - start_db) / step_db + 1e-9)) + 1
    return [SnrPoint(round(start_db + i * step_db, 12)) for i in range(max(count, 0))]


def euclid_scale(M: int) -> float:
    """kappa_M: squared Euclidean distance per unit of weight"""
    if M not in _KAPPA:
        raise DomainError(f"unsupported constellation order {M}")
    return _KAPPA[M]


def amplitude_factor(M: int) -> float:
    """A = kappa_M / 4 (1 for BPSK, 1/2 for QPSK)"""
    return euclid_scale(M) / 4.0


def pep_exp(w: float, M: int, snr: SnrPoint) -> float:
    """Chernoff bound exp(-||s - s'||^2 / 4N0) on the pairwise error probability"""
    if w < 0:
        raise DomainError(f"weight must be non-negative, got {w}")
    return math.exp(-euclid_scale(M) * w * snr.es_over_n0_lin / 4.0)


def _spectrum_arrays(spectrum: WeightSpectrum):
    items = spectrum.items()
    weights = np.array([w for w, _ in items], dtype=float)
    mults = np.array([c for _, c in items], dtype=float)
    return weights, mults


def _exp_sum(spectrum: WeightSpectrum, snr: SnrPoint, M: int) -> float:
    weights, mults = _spectrum_arrays(spectrum)
    if weights.size == 0:
        return 0.0
    kappa = euclid_scale(M)
    return float(np.sum(mults * np.exp(-kappa * weights * snr.es_over_n0_lin / 4.0)))


def union_bound_coherent(
    spectrum: WeightSpectrum, snr: SnrPoint, M: Optional[int] = None
) -> float:
    """Sum over the nonzero codewords of the exponential PEP bound"""
    if spectrum.excludes_weights_of:
        raise PreconditionError("the coherent union bound needs a full spectrum")
    return _exp_sum(spectrum, snr, M or spectrum.ring.modulus)


def union_bound_noncoherent(
    spectrum: WeightSpectrum, snr: SnrPoint, M: Optional[int] = None
) -> float:
    """Asymptotic non-coherent bound: the parent sum without the M rotation words"""
    M = M or spectrum.ring.modulus
    excluded = spectrum.excludes_weights_of
    if excluded:
        shape = excluded[0]
        rotations = rotation_info_words(M, len(shape.z4_part), len(shape.z2_part))
        indices = {u.to_index() for u in excluded}
        covered = all(u.to_index() in indices for u in rotations[1:])
    else:
        covered = False
    if not covered:
        raise PreconditionError(
            "the non-coherent bound needs a parent spectrum with the rotation words excluded"
        )
    return _exp_sum(spectrum, snr, M)


def ub_simple(K: int, d_min: int, snr: SnrPoint, A: float) -> float:
    """(2^K - 1) * erfc(sqrt(A * d_min * Es/N0)) / 2"""
    if d_min < 1:
        raise DomainError(f"d_min must be at least 1, got {d_min}")
    return float((2**K - 1) * 0.5 * erfc(math.sqrt(A * d_min * snr.es_over_n0_lin)))


def union_bound_erfc(
    spectrum: WeightSpectrum, snr: SnrPoint, A: Optional[float] = None
) -> float:
    """Union bound with the exact coherent PEP erfc(sqrt(A w Es/N0)) / 2 per term"""
    if A is None:
        A = amplitude_factor(spectrum.ring.modulus)
    weights, mults = _spectrum_arrays(spectrum)
    if weights.size == 0:
        return 0.0
    return float(np.sum(mults * 0.5 * erfc(np.sqrt(A * weights * snr.es_over_n0_lin))))


def required_dmin(K: int, fer_target: float, snr: SnrPoint, A: float) -> int:
    """Smallest d_min whose ub_simple value meets fer_target"""
    if not 0.0 < fer_target <= 1.0:
        raise DomainError(f"FER target must lie in (0, 1], got {fer_target}")
    d = 1
    while ub_simple(K, d, snr, A) > fer_target:
        d += 1
    return d


@dataclass
class BoundReport:
    """Union bounds of one code over an SNR grid"""

    snr: List[SnrPoint]
    ub_coherent: List[float]
    ub_noncoherent: Optional[List[float]]
    ub_simple: List[float]
    ub_erfc: List[float]
    K: int
    d_min: int
    A: float
    constellation: str
    noncoherent_asymptotic: bool = True
    metadata: Dict[str, Any] = field(default_factory=dict)

    def rows(self) -> List[Dict[str, Optional[float]]]:
        rows = []
        for i, point in enumerate(self.snr):
            rows.append(
                {
                    "snr_db": point.es_over_n0_db,
                    "ub_coherent": self.ub_coherent[i],
                    "ub_noncoherent": (
                        self.ub_noncoherent[i] if self.ub_noncoherent is not None else None
                    ),
                    "ub_simple": self.ub_simple[i],
                    "ub_erfc": self.ub_erfc[i],
                }
            )
        return rows


def bound_report(
    spectrum: WeightSpectrum,
    snr_points: Sequence[SnrPoint],
    nc_spectrum: Optional[WeightSpectrum] = None,
    K: Optional[int] = None,
) -> BoundReport:
    """All bounds for a code (and, for an RI parent, its rotation-excluded spectrum)"""
    M = spectrum.ring.modulus
    A = amplitude_factor(M)
    K = spectrum.dimension if K is None else K
    if spectrum.d_min is None or spectrum.d_min < 1:
        raise PreconditionError("bounds need a code with d_min >= 1")
    report = BoundReport(
        snr=list(snr_points),
        ub_coherent=[union_bound_coherent(spectrum, p) for p in snr_points],
        ub_noncoherent=(
            [union_bound_noncoherent(nc_spectrum, p) for p in snr_points]
            if nc_spectrum is not None
            else None
        ),
        ub_simple=[ub_simple(K, spectrum.d_min, p, A) for p in snr_points],
        ub_erfc=[union_bound_erfc(spectrum, p, A) for p in snr_points],
        K=K,
        d_min=spectrum.d_min,
        A=A,
        constellation=CONSTELLATION_NAMES[M],
        metadata={"n_sym": spectrum.n_sym, "ring": str(spectrum.ring)},
    )
    logger.info(
        f"Bounds for {report.constellation} code K={K} d_min={report.d_min} "
        f"over {len(report.snr)} SNR points"
    )
    return report
