import logging
import os
import unittest

import numpy as np
import pytest


def slow(f):
    f = pytest.mark.slow(f)
    return unittest.skipUnless(os.environ.get('RUN_SLOW_TESTS_TOO'), 'Slow tests disabled')(f)


class LocdiscTestCase(unittest.TestCase):
    """Base class to inherit test cases from for locdisc.

    It turns off logging to the terminal and offers assertAllClose for
    comparing arrays.
    """

    @classmethod
    def setUpClass(cls):
        # Shut up logging
        logging.disable(logging.ERROR)

    @classmethod
    def tearDownClass(cls):
        logging.disable(logging.NOTSET)

    def assertAllClose(self, actual, expected, atol=1e-10, msg=None):
        actual = np.asarray(actual.entries if hasattr(actual, 'entries') else actual)
        expected = np.asarray(expected.entries if hasattr(expected, 'entries') else expected)
        if not np.allclose(actual, expected, atol=atol, rtol=0):
            difference = np.max(np.abs(actual - expected)) if actual.shape == expected.shape else 'shape mismatch'
            self.fail(msg or f'Arrays differ (max deviation {difference}):\n{actual}\n{expected}')
