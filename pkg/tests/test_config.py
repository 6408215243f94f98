"""
Tests for the configuration module
"""
import os
import tempfile
import unittest

import yaml

from stinespring_dilator.config import Config
from stinespring_dilator.core.numerics import TolerancePolicy
from stinespring_dilator.errors import ConfigError


def _write_yaml(content):
    with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
        if isinstance(content, str):
            f.write(content)
        else:
            yaml.safe_dump(content, f)
        return f.name


class TestConfig(unittest.TestCase):
    """Tests for the Config class"""

    def test_default_configuration(self):
        """Default values are set"""
        config = Config()

        self.assertEqual(config.get('tolerance'),
                         {'atol': 1e-9, 'rank_rtol': 1e-10, 'psd_rtol': 1e-10})
        self.assertIs(config.get('human'), False)
        self.assertEqual(config.get('report_indent'), 2)
        self.assertIsNone(config.get('log_level'))
        self.assertEqual(config.get('gen'), {'n': 2, 'k': 1, 'h1': 2, 'h2': 4, 'r': 1, 'seed': 0})

    def test_get_with_default_value(self):
        """get() falls back to the given default"""
        config = Config()

        self.assertEqual(config.get('non_existent_key', 'default_value'), 'default_value')
        self.assertIsNone(config.get('non_existent_key'))

    def test_defaults_are_not_shared(self):
        """Mutating one instance leaves DEFAULT_CONFIG and other instances intact"""
        first = Config()
        first.get('tolerance')['atol'] = 1.0

        self.assertEqual(Config().get('tolerance')['atol'], 1e-9)
        self.assertEqual(Config.DEFAULT_CONFIG['tolerance']['atol'], 1e-9)

    def test_load_from_valid_yaml_file(self):
        """Top-level and nested values are read from YAML"""
        path = _write_yaml({'human': True, 'report_indent': 4, 'tolerance': {'atol': 1e-6}})
        try:
            config = Config(config_file=path)

            self.assertIs(config.get('human'), True)
            self.assertEqual(config.get('report_indent'), 4)
            self.assertEqual(config.get('tolerance')['atol'], 1e-6)
        finally:
            os.unlink(path)

    def test_nested_sections_are_merged(self):
        """A partial section keeps the defaults it does not mention"""
        path = _write_yaml({'tolerance': {'rank_rtol': 1e-8}, 'gen': {'seed': 7, 'h2': 9}})
        try:
            config = Config(config_file=path)

            self.assertEqual(config.get('tolerance'),
                             {'atol': 1e-9, 'rank_rtol': 1e-8, 'psd_rtol': 1e-10})
            self.assertEqual(config.get('gen')['seed'], 7)
            self.assertEqual(config.get('gen')['h2'], 9)
            self.assertEqual(config.get('gen')['n'], 2)
        finally:
            os.unlink(path)

    def test_load_from_nonexistent_file(self):
        """A missing file leaves the defaults in place"""
        config = Config(config_file='/path/to/nonexistent/dilator.yaml')

        self.assertEqual(config.get('tolerance')['atol'], 1e-9)

    def test_load_from_empty_yaml_file(self):
        """An empty file leaves the defaults in place"""
        path = _write_yaml('')
        try:
            config = Config(config_file=path)

            self.assertEqual(config.get('report_indent'), 2)
        finally:
            os.unlink(path)

    def test_load_from_invalid_yaml_file(self):
        """Invalid YAML raises ConfigError"""
        path = _write_yaml("invalid: yaml: content: [")
        try:
            with self.assertRaises(ConfigError) as context:
                Config(config_file=path)

            self.assertIn("Error loading the configuration file", str(context.exception))
        finally:
            os.unlink(path)

    def test_top_level_must_be_mapping(self):
        """A YAML list at the top level is rejected"""
        path = _write_yaml("- 1\n- 2\n")
        try:
            with self.assertRaises(ConfigError):
                Config(config_file=path)
        finally:
            os.unlink(path)

    def test_nested_section_must_be_mapping(self):
        """'tolerance: 1e-9' is a mistake, not a shorthand"""
        path = _write_yaml({'tolerance': 1e-9})
        try:
            with self.assertRaises(ConfigError) as context:
                Config(config_file=path)

            self.assertIn("tolerance", str(context.exception))
        finally:
            os.unlink(path)

    def test_unknown_keys_are_preserved(self):
        path = _write_yaml({'custom_key': 123})
        try:
            self.assertEqual(Config(config_file=path).get('custom_key'), 123)
        finally:
            os.unlink(path)

    def test_yaml_crlf_and_null_values(self):
        """CRLF line endings and explicit nulls are accepted"""
        path = _write_yaml('human: true\r\nlog_level: null\r\n')
        try:
            config = Config(config_file=path)

            self.assertIs(config.get('human'), True)
            self.assertIsNone(config.get('log_level'))
        finally:
            os.unlink(path)


class TestUpdateFromArgs(unittest.TestCase):
    """CLI arguments take precedence over the file"""

    def test_none_values_do_not_override(self):
        path = _write_yaml({'log_level': 'DEBUG', 'tolerance': {'atol': 1e-6}})
        try:
            config = Config(config_file=path)
            config.update_from_args({'log_level': None, 'tolerance.atol': None, 'human': True})

            self.assertEqual(config.get('log_level'), 'DEBUG')
            self.assertEqual(config.get('tolerance')['atol'], 1e-6)
            self.assertIs(config.get('human'), True)
        finally:
            os.unlink(path)

    def test_dotted_keys_address_sections(self):
        config = Config()
        config.update_from_args({'tolerance.psd_rtol': 1e-7, 'gen.seed': 11})

        self.assertEqual(config.get('tolerance')['psd_rtol'], 1e-7)
        self.assertEqual(config.get('tolerance')['atol'], 1e-9)
        self.assertEqual(config.get('gen')['seed'], 11)

    def test_configuration_precedence(self):
        """default < file < CLI"""
        path = _write_yaml({'tolerance': {'atol': 1e-6, 'rank_rtol': 1e-8}})
        try:
            config = Config(config_file=path)
            config.update_from_args({'tolerance.atol': 1e-5})

            tol = TolerancePolicy.from_config(config)
            self.assertEqual(tol.atol, 1e-5)
            self.assertEqual(tol.rank_rtol, 1e-8)
            self.assertEqual(tol.psd_rtol, 1e-10)
        finally:
            os.unlink(path)

    def test_negative_tolerance_rejected_downstream(self):
        config = Config()
        config.update_from_args({'tolerance.atol': -1.0})

        with self.assertRaises(ValueError):
            TolerancePolicy.from_config(config)


if __name__ == '__main__':
    unittest.main()
