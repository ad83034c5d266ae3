import os

import yaml

from duhive.utils.registry import ConfigError
from duhive.utils.utils import PACKAGE_ROOT


def load_config(config=None, preset_config=None, jobs_config=None, logger_config=None):
    """Used to load the config of a run. The jobs and loggers of the main config file
    can be overridden by other config files.

    Args:
        config (str): Path to configuration file. Either this or :obj:`preset_config`
            must be passed.
        preset_config (str): Path to a preset duhive config. This path should be
            relative to :obj:`duhive/configs`. For example, the second-level qubit
            config is :obj:`qubit_l2.yml`.
        jobs_config (str): Path to a file holding a list of jobs. Replaces the jobs
            of the base config.
        logger_config (str): Path to logger configuration file. Overrides settings in
            base config.
    """
    if config is not None:
        with open(config) as f:
            yaml_config = yaml.safe_load(f)
    elif preset_config is not None:
        with open(os.path.join(PACKAGE_ROOT, "configs", preset_config)) as f:
            yaml_config = yaml.safe_load(f)
    else:
        raise ValueError("Config needs to be provided")
    if not isinstance(yaml_config, dict):
        raise ConfigError("config", "the top level must be a mapping")
    if jobs_config is not None:
        with open(jobs_config) as f:
            yaml_config["jobs"] = yaml.safe_load(f)
    if logger_config is not None:
        with open(logger_config) as f:
            yaml_config["loggers"] = yaml.safe_load(f)
    return yaml_config
