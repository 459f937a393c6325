import logging

import pytest
import yaml
from pythonjsonlogger import jsonlogger

from src.core.settings import load_config, section, setup_logging


class TestLoadConfig:
    @pytest.fixture
    def config_file(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump({
            'app': {'log_level': 'INFO'},
            'order_analysis': {'node_budget': 500},
        }))
        return str(path)

    def test_explicit_path(self, config_file):
        config = load_config(config_file)
        assert section(config, 'order_analysis')['node_budget'] == 500

    def test_env_var_path_and_level(self, config_file, monkeypatch):
        monkeypatch.setenv('DICHOTOMY_LAB_CONFIG_PATH', config_file)
        monkeypatch.setenv('DICHOTOMY_LAB_LOG_LEVEL', 'DEBUG')
        config = load_config()
        assert config['app']['log_level'] == 'DEBUG'

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.yaml"))

    def test_missing_default_file_gives_defaults(self, tmp_path, monkeypatch):
        monkeypatch.delenv('DICHOTOMY_LAB_CONFIG_PATH', raising=False)
        monkeypatch.chdir(tmp_path)
        assert load_config() == {}

    def test_section_is_a_copy(self, test_config):
        classifier = section(test_config, 'classifier')
        classifier['workers'] = 99
        assert test_config['classifier']['workers'] == 2
        assert section(test_config, 'absent') == {}


class TestSetupLogging:
    def test_json_format(self):
        setup_logging({'log_level': 'info', 'log_format': 'json'})
        root = logging.getLogger()
        assert root.level == logging.INFO
        assert isinstance(root.handlers[0].formatter, jsonlogger.JsonFormatter)

    def test_text_format(self, test_config):
        setup_logging(test_config['app'])
        root = logging.getLogger()
        assert root.level == logging.DEBUG
        assert not isinstance(root.handlers[0].formatter, jsonlogger.JsonFormatter)
        assert len(root.handlers) == 1
