import hashlib
import unittest

from elitenet.seeding import derive_seed


class TestDeriveSeed(unittest.TestCase):

    def test_value(self):
        digest = hashlib.sha256(b'7:chain-0').digest()
        self.assertEqual(int.from_bytes(digest[:8], 'big') & ((1 << 63) - 1), derive_seed(7, 'chain-0'))

    def test_stages_independent(self):
        seeds = {derive_seed(0, s) for s in ('init', 'chain-0', 'chain-1', 'layout', 'mixture-bic')}
        self.assertEqual(5, len(seeds))
        self.assertNotEqual(derive_seed(0, 'init'), derive_seed(1, 'init'))
        self.assertTrue(all(0 <= s < 2 ** 63 for s in seeds))
