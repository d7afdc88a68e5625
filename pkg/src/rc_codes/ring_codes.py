"""
Ring Codes - Exact algebra for linear codes over Z2 and Z4

Generators over Z4 are kept in the split form G = [A; 2B]: ``a`` holds the k1 rows
over Z4 and ``b`` holds the k2 order-two rows as their Z2 values. Over Z2 every row
lives in ``b``. Info words are indexed lexicographically, first coordinate most
significant, so index 0 is always the all-zero word.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    DomainError,
    EnumerationCapError,
    PreconditionError,
)
from .run_pool import RunPool

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 1 << 24
DEFAULT_PAIR_CAP = 1 << 24

# Info words handled per enumeration chunk
_CHUNK = 1 << 14

_WEIGHT_TABLES = {
    2: np.array([0, 1], dtype=np.int64),
    4: np.array([0, 1, 2, 1], dtype=np.int64),
}


@dataclass(frozen=True)
class RingId:
    """The ring Z_M the code is defined over"""

    modulus: int

    def __post_init__(self):
        if self.modulus not in _WEIGHT_TABLES:
            raise DomainError(f"unsupported ring Z{self.modulus}; only Z2 and Z4")

    @property
    def bits_per_symbol(self) -> int:
        return 1 if self.modulus == 2 else 2

    @property
    def weight_table(self) -> np.ndarray:
        return _WEIGHT_TABLES[self.modulus]

    def __str__(self) -> str:
        return f"Z{self.modulus}"


Z2 = RingId(2)
Z4 = RingId(4)


def as_ring(ring: Union[RingId, int]) -> RingId:
    if isinstance(ring, RingId):
        return ring
    return RingId(int(ring))


def info_word_count(k1: int, k2: int) -> int:
    return (4**k1) * (2**k2)


def info_word_matrix(
    k1: int, k2: int, start: int = 0, stop: Optional[int] = None
) -> np.ndarray:
    """Info words with indices in [start, stop) as rows (Z4 coordinates first)"""
    total = info_word_count(k1, k2)
    stop = total if stop is None else min(stop, total)
    count = max(0, stop - start)
    if k1 + k2 == 0:
        return np.zeros((count, 0), dtype=np.int64)
    shape = (4,) * k1 + (2,) * k2
    coords = np.unravel_index(np.arange(start, stop, dtype=np.int64), shape)
    return np.stack(coords, axis=1).astype(np.int64)


@dataclass(frozen=True)
class InfoWord:
    """An information word u = (u1, u2) with u1 over Z4 and u2 over Z2"""

    z4_part: Tuple[int, ...] = ()
    z2_part: Tuple[int, ...] = ()

    def __post_init__(self):
        z4 = tuple(int(x) for x in self.z4_part)
        z2 = tuple(int(x) for x in self.z2_part)
        if any(x < 0 or x > 3 for x in z4):
            raise DomainError(f"Z4 info symbols must lie in 0..3, got {z4}")
        if any(x not in (0, 1) for x in z2):
            raise DomainError(f"Z2 info symbols must be 0 or 1, got {z2}")
        object.__setattr__(self, "z4_part", z4)
        object.__setattr__(self, "z2_part", z2)

    @property
    def dimension(self) -> int:
        """Dimension in bits, K = 2*k1 + k2"""
        return 2 * len(self.z4_part) + len(self.z2_part)

    def as_array(self) -> np.ndarray:
        return np.array(self.z4_part + self.z2_part, dtype=np.int64)

    def to_index(self) -> int:
        coords = self.z4_part + self.z2_part
        if not coords:
            return 0
        shape = (4,) * len(self.z4_part) + (2,) * len(self.z2_part)
        return int(np.ravel_multi_index(coords, shape))

    @classmethod
    def from_index(cls, index: int, k1: int, k2: int) -> "InfoWord":
        total = info_word_count(k1, k2)
        if not 0 <= index < total:
            raise DomainError(f"info word index {index} outside 0..{total - 1}")
        row = info_word_matrix(k1, k2, index, index + 1)[0]
        return cls(tuple(row[:k1]), tuple(row[k1:]))

    @classmethod
    def binary(cls, bits: Iterable[int]) -> "InfoWord":
        return cls((), tuple(bits))


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Generator matrix over Z_M in the [A; 2B] row split"""

    ring: RingId
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        ring = as_ring(self.ring)
        a = np.array(self.a, dtype=np.int64, copy=True)
        b = np.array(self.b, dtype=np.int64, copy=True)
        if a.ndim != 2 or b.ndim != 2:
            raise DimensionMismatchError("generator blocks must be 2-D arrays")
        if a.shape[1] != b.shape[1]:
            raise DimensionMismatchError(
                f"A and B blocks disagree on length: {a.shape[1]} != {b.shape[1]}"
            )
        if ring.modulus == 2 and a.shape[0] != 0:
            raise DomainError("generators over Z2 carry all rows in the B block")
        if a.size and (a.min() < 0 or a.max() > 3):
            raise DomainError("A-block entries must lie in 0..3")
        if b.size and (b.min() < 0 or b.max() > 1):
            raise DomainError("B-block entries must be 0 or 1")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def empty(cls, ring: Union[RingId, int], k1: int = 0, k2: int = 0) -> "GeneratorMatrix":
        return cls(
            as_ring(ring),
            np.zeros((k1, 0), dtype=np.int64),
            np.zeros((k2, 0), dtype=np.int64),
        )

    @classmethod
    def from_rows(
        cls,
        ring: Union[RingId, int],
        a_rows: Sequence[Sequence[int]] = (),
        b_rows: Sequence[Sequence[int]] = (),
        n_sym: Optional[int] = None,
    ) -> "GeneratorMatrix":
        rows = list(a_rows) + list(b_rows)
        if n_sym is None:
            n_sym = len(rows[0]) if rows else 0
        a = np.array(a_rows, dtype=np.int64).reshape(len(a_rows), n_sym)
        b = np.array(b_rows, dtype=np.int64).reshape(len(b_rows), n_sym)
        return cls(as_ring(ring), a, b)

    @classmethod
    def binary(cls, rows: Sequence[Sequence[int]], n_sym: Optional[int] = None):
        return cls.from_rows(Z2, (), rows, n_sym)

    @property
    def k1(self) -> int:
        return self.a.shape[0]

    @property
    def k2(self) -> int:
        return self.b.shape[0]

    @property
    def n_rows(self) -> int:
        return self.k1 + self.k2

    @property
    def n_sym(self) -> int:
        return self.b.shape[1]

    @property
    def n_bits(self) -> int:
        return self.n_sym * self.ring.bits_per_symbol

    @property
    def dimension(self) -> int:
        """K = 2*k1 + k2 over Z4, K = k2 over Z2"""
        return 2 * self.k1 + self.k2

    @property
    def info_count(self) -> int:
        return info_word_count(self.k1, self.k2)

    @property
    def rows(self) -> np.ndarray:
        """All rows as Z_M values (B rows doubled over Z4)"""
        scale = 2 if self.ring.modulus == 4 else 1
        return np.vstack([self.a, scale * self.b])

    def column(self, j: int) -> np.ndarray:
        return np.concatenate([self.a[:, j], self.b[:, j]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneratorMatrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
        )

    def __hash__(self) -> int:
        return hash(
            (self.ring, self.a.shape, self.b.shape, self.a.tobytes(), self.b.tobytes())
        )

    def __repr__(self) -> str:
        return (
            f"GeneratorMatrix(ring={self.ring}, k1={self.k1}, k2={self.k2}, "
            f"n_sym={self.n_sym})"
        )


@dataclass(frozen=True)
class Codeword:
    """A codeword over Z_M"""

    ring: RingId
    symbols: Tuple[int, ...]

    @property
    def weight(self) -> int:
        return int(self.ring.weight_table[list(self.symbols)].sum()) if self.symbols else 0

    def __len__(self) -> int:
        return len(self.symbols)

    def __add__(self, other: "Codeword") -> "Codeword":
        if self.ring != other.ring or len(self) != len(other):
            raise DimensionMismatchError("codewords differ in ring or length")
        m = self.ring.modulus
        return Codeword(
            self.ring, tuple((x + y) % m for x, y in zip(self.symbols, other.symbols))
        )


@dataclass(frozen=True)
class WeightSpectrum:
    """Weight -> multiplicity map counted over enumerated info words"""

    counts: Dict[int, int]
    d_min: Optional[int]
    d_min_multiplicity: int
    excludes_weights_of: Tuple[InfoWord, ...] = ()
    ring: RingId = Z2
    n_sym: int = 0
    dimension: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def items(self):
        return sorted(self.counts.items())


@dataclass(frozen=True)
class NCDistanceReport:
    """Non-coherent equivalent distance of the code derived from an RI parent"""

    d_eq_min: Optional[int]
    attained_by: Optional[InfoWord]
    detectable: bool


def weight(symbol: int, ring: Union[RingId, int]) -> int:
    """Euclidean-induced weight of one symbol: Hamming over Z2, (0,1,2,1) over Z4"""
    ring = as_ring(ring)
    if int(symbol) != symbol or not 0 <= symbol < ring.modulus:
        raise DomainError(f"symbol {symbol} is not an element of {ring}")
    return int(ring.weight_table[int(symbol)])


def encode_many(G: GeneratorMatrix, words: np.ndarray) -> np.ndarray:
    """Encode a batch of info words given as rows (k1 Z4 coordinates, then k2 Z2)"""
    words = np.asarray(words, dtype=np.int64)
    if words.ndim != 2 or words.shape[1] != G.n_rows:
        raise DimensionMismatchError(
            f"info words must have {G.n_rows} coordinates, got shape {words.shape}"
        )
    u1 = words[:, : G.k1]
    u2 = words[:, G.k1 :]
    if G.ring.modulus == 2:
        return (u2 @ G.b) % 2
    return (u1 @ G.a + 2 * (u2 @ G.b)) % 4


def encode(G: GeneratorMatrix, u: InfoWord) -> Codeword:
    """Codeword u^T G computed in Z_M"""
    if len(u.z4_part) != G.k1 or len(u.z2_part) != G.k2:
        raise DimensionMismatchError(
            f"info word ({len(u.z4_part)}, {len(u.z2_part)}) does not match "
            f"generator ({G.k1}, {G.k2})"
        )
    symbols = encode_many(G, u.as_array()[None, :])[0]
    return Codeword(G.ring, tuple(int(x) for x in symbols))


def _check_cap(size: int, cap: int) -> None:
    if size > cap:
        raise EnumerationCapError(size, cap)


def _chunk_weights(G: GeneratorMatrix, start: int, stop: int) -> np.ndarray:
    words = info_word_matrix(G.k1, G.k2, start, stop)
    symbols = encode_many(G, words)
    return G.ring.weight_table[symbols].sum(axis=1)


def codeword_weights(
    G: GeneratorMatrix,
    cap: int = DEFAULT_ENUMERATION_CAP,
    pool: Optional[RunPool] = None,
) -> np.ndarray:
    """Weight of encode(u) for every info word u, indexed by info-word index"""
    total = G.info_count
    _check_cap(total, cap)
    spans = [(s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)]

    def run(span):
        return _chunk_weights(G, *span)

    parts = pool.map(run, spans, "weights") if pool else [run(s) for s in spans]
    return np.concatenate(parts)


def _selection_mask(G: GeneratorMatrix, excluded: Iterable[InfoWord]) -> np.ndarray:
    mask = np.ones(G.info_count, dtype=bool)
    mask[0] = False
    for u in excluded:
        if len(u.z4_part) != G.k1 or len(u.z2_part) != G.k2:
            raise DimensionMismatchError(f"excluded word {u} does not match generator")
        mask[u.to_index()] = False
    return mask


def weight_spectrum(
    G: GeneratorMatrix,
    excluded: Iterable[InfoWord] = (),
    cap: int = DEFAULT_ENUMERATION_CAP,
    pool: Optional[RunPool] = None,
) -> WeightSpectrum:
    """Exhaustive weight spectrum over the nonzero, non-excluded info words"""
    excluded = tuple(sorted(set(excluded), key=lambda u: u.to_index()))
    weights = codeword_weights(G, cap, pool)
    selected = weights[_selection_mask(G, excluded)]
    values, counts = np.unique(selected, return_counts=True)
    spectrum = {int(w): int(c) for w, c in zip(values, counts)}
    return WeightSpectrum(
        counts=spectrum,
        d_min=int(values[0]) if len(values) else None,
        d_min_multiplicity=int(counts[0]) if len(counts) else 0,
        excludes_weights_of=excluded,
        ring=G.ring,
        n_sym=G.n_sym,
        dimension=G.dimension,
    )


def min_distance(
    G: GeneratorMatrix, cap: int = DEFAULT_ENUMERATION_CAP
) -> Tuple[Optional[int], int]:
    spectrum = weight_spectrum(G, cap=cap)
    return spectrum.d_min, spectrum.d_min_multiplicity


def nearest_neighbor_indices(weights: np.ndarray) -> np.ndarray:
    """Indices of the nonzero info words whose weight is minimal"""
    nonzero = weights[1:]
    if nonzero.size == 0:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(nonzero == nonzero.min()) + 1


def nearest_neighbors(
    G: GeneratorMatrix, cap: int = DEFAULT_ENUMERATION_CAP
) -> FrozenSet[InfoWord]:
    indices = nearest_neighbor_indices(codeword_weights(G, cap))
    return frozenset(InfoWord.from_index(int(i), G.k1, G.k2) for i in indices)


def is_rotationally_invariant(
    G: GeneratorMatrix, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """True iff the all-one word lies in the row span of G"""
    if G.n_sym == 0:
        return True
    total = G.info_count
    _check_cap(total, cap)
    for start in range(0, total, _CHUNK):
        words = info_word_matrix(G.k1, G.k2, start, start + _CHUNK)
        symbols = encode_many(G, words)
        if np.any(np.all(symbols == 1, axis=1)):
            return True
    return False


def has_all_one_first_row(G: GeneratorMatrix) -> bool:
    if G.ring.modulus == 4:
        return G.k1 >= 1 and bool(np.all(G.a[0] == 1))
    return G.k2 >= 1 and bool(np.all(G.b[0] == 1))


def rotation_info_words(ring: Union[RingId, int], k1: int, k2: int) -> Tuple[InfoWord, ...]:
    """Info words i*e_0, i = 0..M-1, for a (k1, k2) parent over the given ring"""
    m = as_ring(ring).modulus
    if m == 4:
        if k1 < 1:
            raise PreconditionError("a Z4 parent needs at least one order-4 row")
        rest4 = (0,) * (k1 - 1)
        return tuple(InfoWord((i,) + rest4, (0,) * k2) for i in range(m))
    if k1 or k2 < 1:
        raise PreconditionError("a Z2 parent needs at least one row and no order-4 rows")
    rest2 = (0,) * (k2 - 1)
    return tuple(InfoWord((), (i,) + rest2) for i in range(m))


def rotation_words(G: GeneratorMatrix) -> Tuple[InfoWord, ...]:
    """Info words i*e_0 selecting the rotation words i̅ of a parent with all-one first row"""
    return rotation_info_words(G.ring, G.k1, G.k2)


def rotation_spectrum(
    parent: GeneratorMatrix,
    cap: int = DEFAULT_ENUMERATION_CAP,
    pool: Optional[RunPool] = None,
) -> WeightSpectrum:
    """Parent spectrum with the M rotation words excluded"""
    if not has_all_one_first_row(parent):
        raise PreconditionError("parent generator must have an all-one first row")
    return weight_spectrum(parent, rotation_words(parent), cap, pool)


def nc_min_distance(
    parent: GeneratorMatrix, cap: int = DEFAULT_ENUMERATION_CAP
) -> NCDistanceReport:
    """Minimum weight over parent codewords that are not rotation words"""
    if not has_all_one_first_row(parent):
        raise PreconditionError(
            "non-coherent distance needs a rotationally invariant parent "
            "with all-one first row"
        )
    weights = codeword_weights(parent, cap)
    mask = _selection_mask(parent, rotation_words(parent))
    candidates = np.flatnonzero(mask)
    if candidates.size == 0:
        return NCDistanceReport(d_eq_min=None, attained_by=None, detectable=False)
    best = candidates[np.argmin(weights[candidates])]
    d_eq = int(weights[best])
    return NCDistanceReport(
        d_eq_min=d_eq,
        attained_by=InfoWord.from_index(int(best), parent.k1, parent.k2),
        detectable=d_eq > 0,
    )


def pairwise_nc_distance(
    child: GeneratorMatrix, cap: int = DEFAULT_PAIR_CAP
) -> Optional[int]:
    """min over info-word pairs u != u' and rotations i of w(c(u) - c(u') + i̅)

    Brute-force reference for nc_min_distance; None when the code has fewer than
    two info words.
    """
    m = child.ring.modulus
    count = child.info_count
    _check_cap(count * count * m, cap)
    if count < 2:
        return None
    codewords = encode_many(child, info_word_matrix(child.k1, child.k2))
    table = child.ring.weight_table
    best: Optional[int] = None
    rows = max(1, _CHUNK // max(1, count))
    for start in range(0, count, rows):
        block = codewords[start : start + rows]
        diff = block[:, None, :] - codewords[None, :, :]
        for i in range(m):
            w = table[(diff + i) % m].sum(axis=2)
            idx = np.arange(block.shape[0])
            w[idx, start + idx] = np.iinfo(np.int64).max
            low = int(w.min())
            best = low if best is None else min(best, low)
    return best


def append_column(G: GeneratorMatrix, g: Sequence[int]) -> GeneratorMatrix:
    """G with the column g appended; existing columns are untouched"""
    g = np.asarray(g, dtype=np.int64).reshape(-1)
    if g.size != G.n_rows:
        raise DimensionMismatchError(f"column needs {G.n_rows} entries, got {g.size}")
    ga, gb = g[: G.k1], g[G.k1 :]
    if ga.size and (ga.min() < 0 or ga.max() > 3):
        raise DomainError(f"A-block column entries must lie in 0..3, got {ga}")
    if gb.size and (gb.min() < 0 or gb.max() > 1):
        raise DomainError(f"B-block column entries must be 0 or 1, got {gb}")
    return GeneratorMatrix(
        G.ring, np.hstack([G.a, ga[:, None]]), np.hstack([G.b, gb[:, None]])
    )


def prefix(G: GeneratorMatrix, n: int) -> GeneratorMatrix:
    """The first n columns of G"""
    if not 0 <= n <= G.n_sym:
        raise DomainError(f"prefix length {n} outside 0..{G.n_sym}")
    return GeneratorMatrix(G.ring, G.a[:, :n], G.b[:, :n])


def drop_leading_rows(G: GeneratorMatrix, count: int) -> GeneratorMatrix:
    """Remove the first count rows (A rows first, then B rows)"""
    if not 0 <= count <= G.n_rows:
        raise DimensionMismatchError(f"cannot drop {count} of {G.n_rows} rows")
    from_a = min(count, G.k1)
    from_b = count - from_a
    return GeneratorMatrix(G.ring, G.a[from_a:], G.b[from_b:])
