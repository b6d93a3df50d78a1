import io
import logging

from locdisc.logutils import ColorizingStreamHandler, setup_loghandlers
from tests import LocdiscTestCase


class TestLogutils(LocdiscTestCase):
    def setUp(self):
        self.logger = logging.getLogger('locdisc_test_logutils')
        # pytest attaches capture handlers to the root logger
        self.logger.parent = None

    def tearDown(self):
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
        self.logger.setLevel(logging.NOTSET)
        self.logger.parent = logging.getLogger()

    def test_installs_split_handlers_once(self):
        setup_loghandlers('debug', name=self.logger.name)
        self.assertEqual(len(self.logger.handlers), 2)
        self.assertEqual(self.logger.level, logging.DEBUG)
        stdout, stderr = self.logger.handlers
        warning = logging.LogRecord(self.logger.name, logging.WARNING, __file__, 1, 'stalled', None, None)
        error = logging.LogRecord(self.logger.name, logging.ERROR, __file__, 1, 'failed', None, None)
        self.assertTrue(stdout.filter(warning))
        self.assertFalse(stdout.filter(error))
        self.assertTrue(stderr.filter(error))

        setup_loghandlers(logging.WARNING, name=self.logger.name)
        self.assertEqual(len(self.logger.handlers), 2)
        self.assertEqual(self.logger.level, logging.WARNING)

    def test_existing_handler_is_respected(self):
        self.logger.addHandler(logging.NullHandler())
        setup_loghandlers('info', name=self.logger.name)
        self.assertEqual(len(self.logger.handlers), 1)
        self.assertEqual(self.logger.level, logging.INFO)

    def test_no_color_outside_a_terminal(self):
        handler = ColorizingStreamHandler(stream=io.StringIO())
        record = logging.LogRecord('locdisc', logging.WARNING, __file__, 1, 'max_iter reached', None, None)
        self.assertEqual(handler.format(record), 'max_iter reached')
