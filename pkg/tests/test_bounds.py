"""
Tests for the analytic FER bounds
"""

import math

import pytest
from scipy.special import erfc

from rc_codes.bounds import (
    SnrPoint,
    amplitude_factor,
    bound_report,
    euclid_scale,
    pep_exp,
    required_dmin,
    snr_grid,
    ub_simple,
    union_bound_coherent,
    union_bound_erfc,
    union_bound_noncoherent,
)
from rc_codes.exceptions import DomainError, PreconditionError
from rc_codes.greedy_builder import BuildConfig, greedy_construct
from rc_codes.ring_codes import (
    GeneratorMatrix,
    InfoWord,
    WeightSpectrum,
    rotation_spectrum,
    weight_spectrum,
)


@pytest.fixture
def ri_parent():
    """Binary parent {111, 011}"""
    return GeneratorMatrix.binary([[1, 1, 1], [0, 1, 1]])


@pytest.mark.unit
class TestScales:
    def test_euclid_scale(self):
        """Antipodal BPSK gives 4, adjacent QPSK points 2"""
        assert euclid_scale(2) == 4.0
        assert euclid_scale(4) == 2.0

    def test_amplitude_factor(self):
        assert amplitude_factor(2) == 1.0
        assert amplitude_factor(4) == 0.5

    def test_unsupported_order(self):
        with pytest.raises(DomainError):
            euclid_scale(8)

    def test_snr_conversion(self):
        """10 dB is a linear ratio of 10"""
        assert SnrPoint(10.0).es_over_n0_lin == pytest.approx(10.0)
        assert SnrPoint(10.0).n0 == pytest.approx(0.1)

    def test_snr_grid_inclusive(self):
        """The stop value is part of the grid"""
        grid = snr_grid(0.0, 10.0, 2.5)
        assert [p.es_over_n0_db for p in grid] == [0.0, 2.5, 5.0, 7.5, 10.0]

    def test_snr_grid_step(self):
        with pytest.raises(DomainError):
            snr_grid(0.0, 1.0, 0.0)


@pytest.mark.unit
class TestPairwiseBound:
    def test_zero_weight(self):
        """Identical signals: the bound is 1"""
        assert pep_exp(0, 2, SnrPoint(3.0)) == 1.0

    def test_plug_in(self):
        """BPSK, w = 3 at 10 dB gives exp(-30)"""
        assert pep_exp(3, 2, SnrPoint(10.0)) == pytest.approx(math.exp(-30.0))

    def test_qpsk_half_distance(self):
        """QPSK weight units carry half the BPSK energy"""
        snr = SnrPoint(2.0)
        assert pep_exp(2, 4, snr) == pytest.approx(pep_exp(1, 2, snr))


@pytest.mark.unit
class TestUnionBounds:
    def test_empty_spectrum(self):
        """No codewords, no error events"""
        empty = WeightSpectrum(counts={}, d_min=None, d_min_multiplicity=0)
        assert union_bound_coherent(empty, SnrPoint(0.0)) == 0.0
        assert union_bound_erfc(empty, SnrPoint(0.0), 1.0) == 0.0

    def test_single_word(self, repetition3):
        """A single codeword contributes exactly one pairwise term"""
        snr = SnrPoint(1.0)
        spectrum = weight_spectrum(repetition3)
        assert union_bound_coherent(spectrum, snr) == pytest.approx(pep_exp(3, 2, snr))

    def test_erfc_toy_spectrum(self, simplex_k2):
        """{2: 3} at 0 dB"""
        value = union_bound_erfc(weight_spectrum(simplex_k2), SnrPoint(0.0), 1.0)
        assert value == pytest.approx(3 * 0.5 * erfc(math.sqrt(2.0)))

    def test_erfc_collapses_to_simple(self, simplex_k2):
        """One weight class holding every nonzero word equals ub_simple"""
        snr = SnrPoint(4.0)
        value = union_bound_erfc(weight_spectrum(simplex_k2), snr, 1.0)
        assert value == pytest.approx(ub_simple(2, 2, snr, 1.0))

    def test_coherent_needs_full_spectrum(self, ri_parent):
        with pytest.raises(PreconditionError):
            union_bound_coherent(rotation_spectrum(ri_parent), SnrPoint(0.0))

    def test_noncoherent_needs_exclusions(self, ri_parent):
        with pytest.raises(PreconditionError):
            union_bound_noncoherent(weight_spectrum(ri_parent), SnrPoint(0.0))

    def test_noncoherent_needs_rotation_words(self, ri_parent):
        """Excluding a word other than 100 does not make a non-coherent spectrum"""
        spectrum = weight_spectrum(ri_parent, [InfoWord.binary([0, 1])])
        with pytest.raises(PreconditionError):
            union_bound_noncoherent(spectrum, SnrPoint(0.0))

    def test_noncoherent_rotation_word_without_zero(self, ri_parent):
        """The zero word need not be listed among the exclusions"""
        snr = SnrPoint(1.0)
        spectrum = weight_spectrum(ri_parent, [InfoWord.binary([1, 0])])
        assert union_bound_noncoherent(spectrum, snr) == pytest.approx(
            union_bound_noncoherent(rotation_spectrum(ri_parent), snr)
        )

    def test_z4_noncoherent_needs_every_rotation(self):
        """Over Z4 all three nonzero multiples of the first row must be excluded"""
        parent = GeneratorMatrix.from_rows(4, a_rows=[[1, 1, 1, 1], [0, 1, 2, 3]])
        partial = weight_spectrum(parent, [InfoWord((1, 0)), InfoWord((2, 0)), InfoWord((0, 1))])
        with pytest.raises(PreconditionError):
            union_bound_noncoherent(partial, SnrPoint(0.0))
        assert union_bound_noncoherent(rotation_spectrum(parent), SnrPoint(0.0)) > 0.0

    def test_noncoherent_manual_sum(self, ri_parent):
        """Parent {111, 011} leaves the words 011 and 100"""
        snr = SnrPoint(3.0)
        expected = pep_exp(1, 2, snr) + pep_exp(2, 2, snr)
        assert union_bound_noncoherent(rotation_spectrum(ri_parent), snr) == pytest.approx(
            expected
        )

    def test_noncoherent_below_coherent(self, ri_parent):
        """Excluding rotation words only drops terms"""
        snr = SnrPoint(2.0)
        nc = union_bound_noncoherent(rotation_spectrum(ri_parent), snr)
        assert nc <= union_bound_coherent(weight_spectrum(ri_parent), snr)

    def test_rotations_only(self):
        """A parent of rotation words alone has nothing to bound"""
        parent = GeneratorMatrix.binary([[1, 1, 1, 1]])
        assert union_bound_noncoherent(rotation_spectrum(parent), SnrPoint(0.0)) == 0.0

    def test_bound_report(self, hamming74):
        snr = snr_grid(0.0, 4.0, 2.0)
        report = bound_report(weight_spectrum(hamming74), snr)
        assert report.K == 4
        assert report.d_min == 3
        assert report.ub_noncoherent is None
        rows = report.rows()
        assert len(rows) == 3
        assert rows[0]["ub_coherent"] > rows[-1]["ub_coherent"]


@pytest.mark.unit
class TestSimpleBound:
    def test_meets_target_at_d3(self):
        """K = 8, d_min 3 at 10 dB is below 1e-8"""
        assert ub_simple(8, 3, SnrPoint(10.0), 1.0) <= 1e-8

    def test_misses_target_at_d2(self):
        assert ub_simple(8, 2, SnrPoint(10.0), 1.0) > 1e-8

    def test_large_distance(self):
        assert ub_simple(8, 10_000, SnrPoint(0.0), 1.0) == 0.0

    def test_invalid_dmin(self):
        with pytest.raises(DomainError):
            ub_simple(8, 0, SnrPoint(0.0), 1.0)

    @pytest.mark.parametrize(
        "M, snr_db, expected",
        [(2, 0.0, 22), (2, 5.0, 7), (2, 10.0, 3), (4, 0.0, 43), (4, 5.0, 14), (4, 10.0, 5)],
    )
    def test_required_dmin(self, M, snr_db, expected):
        """d_min needed for FER 1e-8 with K = 8"""
        assert required_dmin(8, 1e-8, SnrPoint(snr_db), amplitude_factor(M)) == expected

    def test_loose_target(self):
        """Any code meets a loose target at high SNR"""
        assert required_dmin(8, 1.0, SnrPoint(20.0), 1.0) == 1

    def test_invalid_target(self):
        with pytest.raises(DomainError):
            required_dmin(8, 0.0, SnrPoint(0.0), 1.0)


@pytest.fixture(scope="module")
def k8_families():
    """Greedy K = 8 families: unconstrained and RI over Z2, RI over Z4"""
    configs = [
        BuildConfig.for_table(2, 8, target_d_min=10),
        BuildConfig.for_table(2, 8, "ri", target_d_min=10),
        BuildConfig.for_table(4, 8, "ri", target_d_min=10),
    ]
    return [greedy_construct(config).generator for config in configs]


@pytest.mark.integration
class TestFamilyBoundOrdering:
    """Relations between the bounds on constructed K = 8 families over 0 to 12 dB"""

    def test_erfc_between_simple_and_exponential(self, k8_families):
        """erfc form <= exponential form, and erfc form <= ub_simple at d_min"""
        for G in k8_families:
            spectrum = weight_spectrum(G)
            A = amplitude_factor(G.ring.modulus)
            for snr in snr_grid(0.0, 12.0, 1.0):
                erfc_bound = union_bound_erfc(spectrum, snr)
                assert erfc_bound <= union_bound_coherent(spectrum, snr) * (1 + 1e-12)
                assert erfc_bound <= ub_simple(G.dimension, spectrum.d_min, snr, A) * (1 + 1e-12)

    def test_noncoherent_below_coherent(self, k8_families):
        """Dropping the rotation words of an RI parent lowers the bound"""
        for G in k8_families[1:]:
            coherent = weight_spectrum(G)
            noncoherent = rotation_spectrum(G)
            for snr in snr_grid(0.0, 12.0, 1.0):
                assert union_bound_noncoherent(noncoherent, snr) <= union_bound_coherent(
                    coherent, snr
                )

    def test_bounds_decrease_with_snr(self, k8_families):
        grid = snr_grid(0.0, 12.0, 1.0)
        for G in k8_families:
            spectrum = weight_spectrum(G)
            values = [union_bound_erfc(spectrum, snr) for snr in grid]
            assert all(a > b for a, b in zip(values, values[1:]))
