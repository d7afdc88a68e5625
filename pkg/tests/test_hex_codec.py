"""
Tests for the hexadecimal generator-matrix format
"""

from importlib import resources

import numpy as np
import pytest

from rc_codes.exceptions import HexFormatError
from rc_codes.hex_codec import (
    emit_hex_document,
    emit_hex_matrix,
    pack_groups,
    parse_hex_document,
    parse_hex_matrix,
    parse_hex_section,
    unpack_groups,
)
from rc_codes.ring_codes import GeneratorMatrix


@pytest.mark.unit
class TestGroups:
    """32-bit groups, least significant bit first"""

    def test_all_ones(self):
        np.testing.assert_array_equal(unpack_groups(["FFFFFFFF"], 32), np.ones(32))

    def test_alternating(self):
        """0xAA.. puts the ones on odd columns"""
        bits = unpack_groups(["AAAAAAAA"], 32)
        np.testing.assert_array_equal(bits, np.arange(32) % 2)

    def test_pack(self):
        assert pack_groups(np.ones(32, dtype=int)) == ["FFFFFFFF"]
        assert pack_groups(np.arange(32) % 2) == ["AAAAAAAA"]

    def test_short_final_group(self):
        """The last group is zero-padded"""
        assert pack_groups(np.ones(40, dtype=int)) == ["FFFFFFFF", "000000FF"]

    def test_nonzero_padding(self):
        with pytest.raises(HexFormatError):
            unpack_groups(["000001FF"], 8)

    def test_bad_group(self):
        with pytest.raises(HexFormatError):
            unpack_groups(["FFFF"], 16)


@pytest.mark.unit
class TestSections:
    def test_z4_all_one_row(self):
        """0x55.. is the all-one Z4 row"""
        G = parse_hex_matrix("ring 4\nbits 32\n- 55555555\n")
        assert G.k1 == 1
        np.testing.assert_array_equal(G.a[0], np.ones(16))

    def test_z4_order_two_row(self):
        """A Z4 row with even symbols becomes a B row"""
        G = parse_hex_matrix("ring 4\nbits 32\n1-2 55555555\n3 AAAAAAAA\n")
        assert (G.k1, G.k2) == (1, 1)
        np.testing.assert_array_equal(G.b[0], np.ones(16))

    def test_odd_symbols_in_b_row(self):
        with pytest.raises(HexFormatError):
            parse_hex_matrix("ring 4\nbits 32\n1-2 55555555\n3 55555555\n")

    def test_b_row_before_a_row(self):
        with pytest.raises(HexFormatError):
            parse_hex_matrix("ring 4\nbits 32\n1 AAAAAAAA\n2-3 55555555\n")

    def test_group_count(self):
        with pytest.raises(HexFormatError):
            parse_hex_matrix("ring 2\nbits 64\n1 FFFFFFFF\n")

    def test_bad_label(self):
        with pytest.raises(HexFormatError):
            parse_hex_matrix("ring 2\nbits 32\nx FFFFFFFF\n")

    def test_missing_header(self):
        with pytest.raises(HexFormatError):
            parse_hex_matrix("1 FFFFFFFF\n")

    def test_fixed_rows_marked(self):
        section = parse_hex_section("[nc]\nring 2\nbits 32\n- FFFFFFFF\n1 0000FFFF\n")
        assert section.name == "nc"
        assert section.fixed_rows == 1

    def test_emit_binary(self):
        """All-one row over 32 columns"""
        G = GeneratorMatrix.binary([[1] * 32])
        assert emit_hex_matrix(G) == "[generator]\nring 2\nbits 32\n1 FFFFFFFF\n"

    def test_emit_labels(self):
        """Constraint rows are emitted as '-' and Z4 rows as pairs"""
        G = GeneratorMatrix.from_rows(
            4, a_rows=[[1] * 16, [1, 0] * 8], b_rows=[[0, 1] * 8]
        )
        text = emit_hex_matrix(G, fixed_rows=1, name="parent")
        labels = [line.split()[0] for line in text.splitlines()[3:]]
        assert labels == ["-", "1-2", "3"]
        assert parse_hex_matrix(text) == G

    def test_emit_padded(self):
        """Lengths that are not a multiple of 32 keep their true bit count"""
        G = GeneratorMatrix.binary([[1] * 40])
        text = emit_hex_matrix(G)
        assert "bits 40" in text
        assert parse_hex_matrix(text) == G


@pytest.mark.unit
class TestAppendix:
    def test_sections(self, appendix):
        assert appendix.names == [
            "bpsk-coherent",
            "bpsk-noncoherent",
            "qpsk-coherent",
            "qpsk-noncoherent",
            "qpsk-binary-noncoherent",
        ]

    def test_dimensions(self, appendix):
        """Every section describes a K = 8 code of 256 bits"""
        shapes = {}
        for section in appendix.sections:
            G = section.generator()
            shapes[section.name] = (G.k1, G.k2, section.fixed_rows)
        assert shapes["bpsk-coherent"] == (0, 8, 0)
        assert shapes["bpsk-noncoherent"] == (0, 9, 1)
        assert shapes["qpsk-coherent"] == (4, 0, 0)
        assert shapes["qpsk-noncoherent"] == (5, 0, 1)
        assert shapes["qpsk-binary-noncoherent"] == (0, 10, 2)
        assert all(s.n_bits == 256 for s in appendix.sections)

    def test_verbatim_round_trip(self, appendix):
        """Emitting the parsed document reproduces the bundled text"""
        text = resources.files("rc_codes.data").joinpath("appendix_k8.hex").read_text()
        assert emit_hex_document(appendix) == text
        assert emit_hex_document(parse_hex_document(text.lower())) == text

    def test_unknown_section(self, appendix):
        with pytest.raises(KeyError):
            appendix.get("8psk")
