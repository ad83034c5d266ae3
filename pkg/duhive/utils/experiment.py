"""Implementation of a simple experiment class."""
import json
import logging
import os

import yaml

from duhive.gates.base import gate_to_spec
from duhive.utils.utils import create_folder

FLOAT_FORMAT = "%.17g"


class Experiment(object):
    """Output folder of a run.

    Every file is written to a temporary name first and moved into place, so a
    crashed job never leaves a half-written table behind.
    """

    def __init__(self, dir_name):
        """Initializes an experiment object.

        Args:
            dir_name (str): Absolute path to the directory to save the run in.
        """

        self._dir_name = dir_name
        create_folder(self._dir_name)

        self._config = None
        self._logger = None

    @property
    def dir_name(self):
        return self._dir_name

    def register_experiment(self, config=None, logger=None):
        """Registers all the components of an experiment.

        Args:
            config (Chomp): a config dictionary.
            logger (Logger): a logger object.
        """

        self._config = config
        self._logger = logger
        if self._logger is not None:
            self._logger.log_config(config)

    def _path(self, relative):
        path = os.path.join(self._dir_name, relative)
        create_folder(os.path.dirname(path))
        return path

    def _write(self, relative, write):
        path = self._path(relative)
        tmp = f"{path}.tmp"
        with open(tmp, "w", newline="") as f:
            write(f)
        os.replace(tmp, path)
        return path

    def save_table(self, relative, table):
        """Writes a DataFrame as CSV with 17 significant digits."""
        return self._write(
            relative, lambda f: table.to_csv(f, index=False, float_format=FLOAT_FORMAT)
        )

    def save_json(self, relative, data):
        return self._write(relative, lambda f: json.dump(data, f, indent=2, sort_keys=True))

    def save_gate(self, relative, gate):
        """Writes the gate spec with its recipe and matrix."""
        return self.save_json(relative, gate_to_spec(gate, include_matrix=True))

    def save(self):
        """Saves the config and the logger state."""
        logging.info("Saving the experiment at {}".format(self._dir_name))

        if self._config is not None:
            self._write("config.yml", lambda f: yaml.safe_dump(dict(self._config), f))

        if self._logger is not None:
            folder_name = os.path.join(self._dir_name, "logger")
            create_folder(folder_name)
            self._logger.save(folder_name)
