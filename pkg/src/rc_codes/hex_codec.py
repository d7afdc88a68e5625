"""
Hex Codec - Generator matrices as 32-bit hexadecimal column groups

A document holds named sections:

    [bpsk-noncoherent]
    ring 2
    bits 256
    - FFFFFFFF FFFFFFFF ...
    1 F999750E F18E7072 ...

Group g of a row covers bit columns 32g .. 32g+31, and bit column 32g + j is bit j
of the group's value (LSB first). Over Z4, symbol t is bit 2t + 2 * bit 2t+1.
Labels: "-" marks a constraint row, "i-j" a Z4 row, "i" a Z2 row (or an order-two
row of a Z4 code, stored as its symbols 2b).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import HexFormatError
from .ring_codes import GeneratorMatrix, RingId, as_ring

logger = logging.getLogger(__name__)

GROUP_BITS = 32
APPENDIX_RESOURCE = "appendix_k8.hex"
APPENDIX_EXPECTED_RESOURCE = "appendix_k8_expected.csv"

_GROUP_RE = re.compile(r"^[0-9A-Fa-f]{8}$")
_Z4_LABEL_RE = re.compile(r"^\d+-\d+$")
_Z2_LABEL_RE = re.compile(r"^\d+$")
_SHIFTS = np.arange(GROUP_BITS, dtype=np.uint64)


def unpack_groups(groups: List[str], n_bits: int) -> np.ndarray:
    """Bit columns 0..n_bits-1 of one row"""
    for group in groups:
        if not _GROUP_RE.match(group):
            raise HexFormatError(f"invalid hex group {group!r}")
    if not groups:
        return np.zeros(0, dtype=np.int64)
    values = np.array([int(g, 16) for g in groups], dtype=np.uint64)
    bits = ((values[:, None] >> _SHIFTS) & np.uint64(1)).astype(np.int64).reshape(-1)
    if np.any(bits[n_bits:]):
        raise HexFormatError("padding bits beyond the declared length must be zero")
    return bits[:n_bits]


def pack_groups(bits: np.ndarray) -> List[str]:
    """Hex groups of one row of bits, the last group zero-padded"""
    bits = np.asarray(bits, dtype=np.uint64)
    padded = np.zeros(-(-bits.size // GROUP_BITS) * GROUP_BITS, dtype=np.uint64)
    padded[: bits.size] = bits
    values = (padded.reshape(-1, GROUP_BITS) << _SHIFTS).sum(axis=1)
    return [f"{int(v):08X}" for v in values]


def _symbols_to_bits(symbols: np.ndarray, ring: RingId) -> np.ndarray:
    if ring.modulus == 2:
        return symbols
    return np.stack([symbols & 1, symbols >> 1], axis=1).reshape(-1)


def _bits_to_symbols(bits: np.ndarray, ring: RingId) -> np.ndarray:
    if ring.modulus == 2:
        return bits
    return bits[0::2] + 2 * bits[1::2]


@dataclass
class HexSection:
    """One generator matrix of a hex document"""

    name: str
    ring: RingId
    n_bits: int
    labels: List[str] = field(default_factory=list)
    groups: List[List[str]] = field(default_factory=list)

    @property
    def fixed_row_flags(self) -> List[bool]:
        return [label == "-" for label in self.labels]

    @property
    def fixed_rows(self) -> int:
        return sum(self.fixed_row_flags)

    def generator(self) -> GeneratorMatrix:
        """Decode the section into a generator matrix"""
        if self.ring.modulus == 4 and self.n_bits % 2:
            raise HexFormatError(f"section {self.name}: Z4 rows need an even bit count")
        n_sym = self.n_bits // self.ring.bits_per_symbol
        a_rows, b_rows = [], []
        for label, groups in zip(self.labels, self.groups):
            symbols = _bits_to_symbols(unpack_groups(groups, self.n_bits), self.ring)
            if self.ring.modulus == 2 or label == "-" or _Z4_LABEL_RE.match(label):
                if self.ring.modulus == 4 and b_rows:
                    raise HexFormatError(
                        f"section {self.name}: Z4 rows must precede order-two rows"
                    )
                (b_rows if self.ring.modulus == 2 else a_rows).append(symbols)
            else:
                if np.any(symbols % 2):
                    raise HexFormatError(
                        f"section {self.name}: row {label} is not an order-two row"
                    )
                b_rows.append(symbols // 2)
        a = np.array(a_rows, dtype=np.int64).reshape(len(a_rows), n_sym)
        b = np.array(b_rows, dtype=np.int64).reshape(len(b_rows), n_sym)
        return GeneratorMatrix(self.ring, a, b)

    @classmethod
    def from_generator(
        cls, name: str, G: GeneratorMatrix, fixed_rows: int = 0
    ) -> "HexSection":
        ring = G.ring
        rows: List[Tuple[str, np.ndarray]] = []
        if ring.modulus == 2:
            for i, row in enumerate(G.b):
                label = "-" if i < fixed_rows else str(i - fixed_rows + 1)
                rows.append((label, row))
        else:
            for i, row in enumerate(G.a):
                r = i - fixed_rows
                rows.append(("-" if i < fixed_rows else f"{2 * r + 1}-{2 * r + 2}", row))
            base = 2 * (G.k1 - fixed_rows)
            for j, row in enumerate(G.b):
                rows.append((str(base + j + 1), 2 * row))
        return cls(
            name=name,
            ring=ring,
            n_bits=G.n_bits,
            labels=[label for label, _ in rows],
            groups=[pack_groups(_symbols_to_bits(np.asarray(r), ring)) for _, r in rows],
        )

    def emit(self) -> str:
        lines = [f"[{self.name}]", f"ring {self.ring.modulus}", f"bits {self.n_bits}"]
        for label, groups in zip(self.labels, self.groups):
            lines.append(" ".join([label] + [g.upper() for g in groups]))
        return "\n".join(lines) + "\n"


@dataclass
class HexMatrixDocument:
    sections: List[HexSection] = field(default_factory=list)

    @property
    def names(self) -> List[str]:
        return [s.name for s in self.sections]

    def get(self, name: str) -> HexSection:
        for section in self.sections:
            if section.name == name:
                return section
        raise KeyError(f"no section named {name!r}")


def _parse_header(lines: List[str], name: str, line_no: int) -> Tuple[RingId, int]:
    try:
        ring_key, ring_value = lines[0].split()
        bits_key, bits_value = lines[1].split()
    except (IndexError, ValueError):
        raise HexFormatError(f"section {name} (line {line_no}): expected 'ring' and 'bits' lines")
    if ring_key != "ring" or bits_key != "bits":
        raise HexFormatError(f"section {name} (line {line_no}): expected 'ring' and 'bits' lines")
    try:
        ring = as_ring(int(ring_value))
        n_bits = int(bits_value)
    except ValueError as e:
        raise HexFormatError(f"section {name}: {e}")
    if n_bits < 0:
        raise HexFormatError(f"section {name}: negative bit count")
    return ring, n_bits


def _parse_section(block: List[str], line_no: int) -> HexSection:
    name = ""
    if block and block[0].startswith("["):
        if not block[0].endswith("]"):
            raise HexFormatError(f"line {line_no}: malformed section header {block[0]!r}")
        name = block[0][1:-1].strip()
        block = block[1:]
        line_no += 1
    ring, n_bits = _parse_header(block, name, line_no)
    section = HexSection(name=name, ring=ring, n_bits=n_bits)
    expected_groups = -(-n_bits // GROUP_BITS)
    for offset, line in enumerate(block[2:]):
        tokens = line.split()
        label, groups = tokens[0], tokens[1:]
        if label != "-" and not (_Z2_LABEL_RE.match(label) or _Z4_LABEL_RE.match(label)):
            raise HexFormatError(f"line {line_no + 2 + offset}: invalid row label {label!r}")
        if ring.modulus == 2 and _Z4_LABEL_RE.match(label):
            raise HexFormatError(f"line {line_no + 2 + offset}: Z4 label in a Z2 section")
        if len(groups) != expected_groups:
            raise HexFormatError(
                f"line {line_no + 2 + offset}: row {label} has {len(groups)} groups, "
                f"expected {expected_groups}"
            )
        section.labels.append(label)
        section.groups.append([g.upper() for g in groups])
    if ring.modulus == 4 and n_bits % 2:
        raise HexFormatError(f"section {name}: Z4 rows need an even bit count")
    return section


def parse_hex_document(text: str) -> HexMatrixDocument:
    """All sections of a hex document; blank lines separate sections"""
    document = HexMatrixDocument()
    block: List[str] = []
    start = 1
    for number, raw in enumerate(text.splitlines() + [""], start=1):
        line = raw.strip()
        if line:
            if not block:
                start = number
            block.append(line)
        elif block:
            document.sections.append(_parse_section(block, start))
            block = []
    logger.debug(f"Parsed hex document with sections {document.names}")
    return document


def emit_hex_document(document: HexMatrixDocument) -> str:
    return "\n".join(section.emit() for section in document.sections)


def parse_hex_section(text: str) -> HexSection:
    document = parse_hex_document(text)
    if len(document.sections) != 1:
        raise HexFormatError(f"expected one section, found {len(document.sections)}")
    return document.sections[0]


def parse_hex_matrix(text: str) -> GeneratorMatrix:
    """Generator matrix of a single-section document"""
    return parse_hex_section(text).generator()


def emit_hex_matrix(G: GeneratorMatrix, fixed_rows: int = 0, name: str = "generator") -> str:
    return HexSection.from_generator(name, G, fixed_rows).emit()


def load_appendix() -> HexMatrixDocument:
    """The bundled K = 8 generator matrices"""
    text = resources.files("rc_codes.data").joinpath(APPENDIX_RESOURCE).read_text()
    return parse_hex_document(text)


def appendix_expected_path():
    return resources.files("rc_codes.data").joinpath(APPENDIX_EXPECTED_RESOURCE)
