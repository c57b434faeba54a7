"""4-wise independent sign family: field arithmetic, budgets, uniformity."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from spql.errors import DimensionError, InsufficientRandomness
from spql.kwise import (
    IRREDUCIBLE,
    SignSampler,
    field_bits_for,
    fresh_sampler,
    gf_mul,
    poly_eval,
    signs_budget,
)
from spql.randomness import BitSource

from support import all_seed_signs, masks_independent, pattern_counts, sampler_for_seed, sign_mask


class TestField:
    def test_table_polynomials_are_irreducible(self):
        # re-derive reducibility by trial division over GF(2)
        def divides(d, poly, deg_d, deg_p):
            r = poly
            while r.bit_length() - 1 >= deg_d:
                r ^= d << (r.bit_length() - 1 - deg_d)
            return r == 0

        for k, poly in IRREDUCIBLE.items():
            assert poly.bit_length() - 1 == k
            assert poly & 1, "constant term required"
            for deg in range(1, k // 2 + 1):
                for cand in range(1 << deg | 1, 1 << (deg + 1), 2):
                    assert not divides(cand, poly, deg, k), (k, cand)

    def test_gf8_known_products(self):
        # GF(8) with x^3 + x + 1: x * x^2 = x^3 = x + 1
        poly = IRREDUCIBLE[3]
        assert gf_mul(0b010, 0b100, 3, poly) == 0b011
        # (x+1)(x^2+1) = x^3 + x^2 + x + 1 = x^2 (after reduction)
        assert gf_mul(0b011, 0b101, 3, poly) == 0b100

    def test_field_axioms_small(self):
        k, poly = 4, IRREDUCIBLE[4]
        size = 1 << k
        for a in range(size):
            assert gf_mul(a, 1, k, poly) == a
        rng = np.random.default_rng(1)
        for _ in range(200):
            a, b, c = (int(x) for x in rng.integers(0, size, 3))
            assert gf_mul(a, b, k, poly) == gf_mul(b, a, k, poly)
            assert gf_mul(a, gf_mul(b, c, k, poly), k, poly) == gf_mul(gf_mul(a, b, k, poly), c, k, poly)
            assert gf_mul(a, b ^ c, k, poly) == gf_mul(a, b, k, poly) ^ gf_mul(a, c, k, poly)

    def test_nonzero_products_nonzero(self):
        k, poly = 5, IRREDUCIBLE[5]
        for a in range(1, 32):
            for b in range(1, 32):
                assert gf_mul(a, b, k, poly) != 0

    def test_poly_eval_horner(self):
        k, poly = 3, IRREDUCIBLE[3]
        coeffs = (0b001, 0b010, 0b000, 0b100)
        for x in range(8):
            x2 = gf_mul(x, x, k, poly)
            x3 = gf_mul(x2, x, k, poly)
            direct = coeffs[0] ^ gf_mul(coeffs[1], x, k, poly) ^ gf_mul(coeffs[2], x2, k, poly) ^ gf_mul(coeffs[3], x3, k, poly)
            assert poly_eval(coeffs, x, k, poly) == direct


class TestSamplerBasics:
    def test_zero_polynomial_all_plus(self):
        s = SignSampler(field_bits=3, coeffs=(0, 0, 0, 0), n=2, T=3)
        assert all(s.sample_sign(i, j) == 1 for i in (1, 2, 3) for j in (1, 2))

    def test_constant_one_all_minus(self):
        s = SignSampler(field_bits=3, coeffs=(1, 0, 0, 0), n=2, T=3)
        assert all(s.sample_sign(i, j) == -1 for i in (1, 2, 3) for j in (1, 2))

    def test_domain_validation(self):
        s = SignSampler(field_bits=3, coeffs=(0, 1, 0, 0), n=2, T=3)
        with pytest.raises(DimensionError):
            s.sample_sign(0, 1)
        with pytest.raises(DimensionError):
            s.sample_sign(4, 1)
        with pytest.raises(DimensionError):
            s.sample_sign(1, 3)

    def test_flat_index_injective(self):
        s = SignSampler(field_bits=4, coeffs=(0, 0, 0, 0), n=3, T=4)
        seen = {s.flat_index(i, j) for i in range(1, 5) for j in range(1, 4)}
        assert len(seen) == 12
        assert min(seen) == 1 and max(seen) == 12

    def test_sign_row_matches_scalar(self):
        s = SignSampler(field_bits=4, coeffs=(3, 7, 1, 9), n=5, T=2)
        row = s.sign_row(2)
        assert row.tolist() == [s.sample_sign(2, j) for j in range(1, 6)]

    def test_determinism(self):
        a = SignSampler(field_bits=5, coeffs=(10, 20, 3, 31), n=4, T=6)
        b = SignSampler(field_bits=5, coeffs=(10, 20, 3, 31), n=4, T=6)
        assert [a.sample_sign(2, 3)] * 5 == [b.sample_sign(2, 3) for _ in range(5)]


class TestBudget:
    def test_field_sizing(self):
        assert field_bits_for(2, 1) == 2
        assert field_bits_for(8, 8) == 7
        assert field_bits_for(1, 1) == 1
        with pytest.raises(DimensionError):
            field_bits_for(1 << 13, 1 << 12)  # nT beyond the table

    def test_fresh_sampler_consumes_exactly_4k(self):
        bits = BitSource(generator=np.random.default_rng(0))
        fresh_sampler(bits, 2, 1)
        assert bits.consumed == 8
        fresh_sampler(bits, 8, 8)
        assert bits.consumed == 8 + 28

    def test_budget_values(self):
        assert signs_budget(2, 1) == 88
        assert signs_budget(8, 8) == 11 * 28
        assert signs_budget(5, 0) == 0

    def test_exhausted_source_errors(self):
        bits = BitSource(bits="0" * 7)
        with pytest.raises(InsufficientRandomness):
            fresh_sampler(bits, 2, 1)  # needs 8

    def test_coefficient_order_and_endianness(self):
        # 8 bits: c0 = 01, c1 = 10, c2 = 11, c3 = 00 (big-endian per field element)
        bits = BitSource(bits="01101100")
        s = fresh_sampler(bits, 2, 1)
        assert s.coeffs == (0b01, 0b10, 0b11, 0b00)


class TestFourWise:
    def test_mask_representation_matches_sampler_exhaustively(self):
        # every seed, every index, k <= 3
        for k, n, T in ((2, 3, 1), (3, 7, 1)):
            table = all_seed_signs(k, n, T)
            for seed in range(1 << (4 * k)):
                s = sampler_for_seed(seed, k, n, T)
                got = [s.sample_sign(1, j) for j in range(1, n + 1)]
                assert got == table[seed].tolist(), (k, seed)

    def test_all_quadruples_uniform_k3_and_k4(self):
        for k, domain in ((3, 7), (4, 15)):
            table = all_seed_signs(k, domain, 1)
            expect = (1 << (4 * k)) // 16
            for quad in itertools.combinations(range(domain), 4):
                counts = pattern_counts(table, quad)
                assert np.all(counts == expect), (k, quad)

    def test_pairs_and_triples_uniform_k2(self):
        # k=2 admits only 3 indices; lower-order tuples must still be uniform
        table = all_seed_signs(2, 3, 1)
        for r in (1, 2, 3):
            for tup in itertools.combinations(range(3), r):
                counts = pattern_counts(table, tup)
                assert np.all(counts == 256 // (1 << r)), tup

    def test_rank_criterion_agrees_with_enumeration_k4(self):
        table = all_seed_signs(4, 15, 1)
        expect = (1 << 16) // 16
        for quad in itertools.combinations(range(15), 4):
            masks = [sign_mask(x + 1, 4) for x in quad]
            uniform = bool(np.all(pattern_counts(table, quad) == expect))
            assert uniform == masks_independent(masks)

    def test_second_moment_exact(self):
        # E[<a,w>^2] = ||w||^2 exactly, averaged over all seeds
        k, n, T = 3, 3, 2
        table = all_seed_signs(k, n, T).astype(np.int64)
        rng = np.random.default_rng(5)
        for _ in range(20):
            w = rng.integers(-4, 5, size=n * T)
            dots = table @ w
            lhs = Fraction(int(np.sum(dots * dots)), table.shape[0])
            assert lhs == int(np.dot(w, w)) ** 1

    def test_fourth_moment_bound(self):
        k, n, T = 3, 3, 2
        table = all_seed_signs(k, n, T).astype(np.int64)
        rng = np.random.default_rng(6)
        for _ in range(100):
            w = rng.integers(-5, 6, size=n * T)
            if not np.any(w):
                w[0] = 1
            dots = (table @ w).astype(object)
            fourth = Fraction(int(np.sum(dots**4)), table.shape[0])
            assert fourth <= 6 * Fraction(int(np.dot(w, w))) ** 2
