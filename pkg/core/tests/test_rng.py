import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConfigurationError
from core.rng import MAX_SEED, make_rng, validate_seed


class SeedValidationTests(SimpleTestCase):
    def test_accepts_full_64_bit_range(self):
        self.assertEqual(validate_seed(0), 0)
        self.assertEqual(validate_seed(MAX_SEED), MAX_SEED)
        self.assertEqual(validate_seed(np.uint64(12)), 12)

    def test_rejects_negative_and_too_large(self):
        for bad in (-1, MAX_SEED + 1):
            with self.assertRaises(ConfigurationError):
                validate_seed(bad)

    def test_rejects_non_integers(self):
        for bad in (1.5, '7', True, None):
            with self.assertRaises(ConfigurationError):
                validate_seed(bad)


class MakeRngTests(SimpleTestCase):
    def test_same_seed_same_stream(self):
        a = make_rng(7).permutation(100)
        b = make_rng(7).permutation(100)
        np.testing.assert_array_equal(a, b)

    def test_distinct_seeds_differ(self):
        self.assertFalse(np.array_equal(make_rng(7).permutation(100), make_rng(8).permutation(100)))

    def test_bit_generator_is_pcg64(self):
        self.assertIsInstance(make_rng(1).bit_generator, np.random.PCG64)
