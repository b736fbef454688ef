import logging

from qtorus.operation_logger import LOGGER_NAME, get_logger, setup_logger
from qtorus.settings import Settings, load_settings


def test_missing_file_gives_defaults(tmp_path):
    assert load_settings(str(tmp_path / "absent.ini")) == Settings()


def test_values_override_defaults(tmp_path):
    path = tmp_path / "settings.ini"
    path.write_text(
        "[algebra]\nprune_threshold = 1e-14\n"
        "[theta]\ntolerance = 1e-12\nmax_terms = 400\n"
        "[cli]\noutput = JSON\nworkers = 4\n"
        "[logging]\nlevel = DEBUG\n",
        encoding="utf-8",
    )
    settings = load_settings(str(path))
    assert settings.prune_threshold == 1e-14
    assert settings.theta_tolerance == 1e-12
    assert settings.theta_max_terms == 400
    assert settings.output == "json"
    assert settings.workers == 4
    assert settings.log_level == "DEBUG"
    assert settings.grid == Settings().grid


def test_invalid_values_are_ignored(tmp_path):
    path = tmp_path / "settings.ini"
    path.write_text("[theta]\nmax_terms = many\n[cli]\noutput = xml\ntolerance = -1\n", encoding="utf-8")
    assert load_settings(str(path)) == Settings()


def test_setup_logger_writes_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    logger = setup_logger(str(log_file), "DEBUG")
    get_logger().debug("theta grid 4x4")
    assert logger is logging.getLogger(LOGGER_NAME)
    assert "theta grid 4x4" in log_file.read_text(encoding="utf-8")


def test_setup_logger_replaces_handlers(tmp_path):
    setup_logger(str(tmp_path / "first.log"))
    logger = setup_logger(str(tmp_path / "second.log"), console=True)
    assert len(logger.handlers) == 2
    assert logger.level == logging.INFO
