import os
import pickle
import random

import numpy as np

PACKAGE_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

MEMORY_BUDGET_ENV = "DUHIVE_MEMORY_BUDGET"
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
COMPLEX_ITEMSIZE = np.dtype(np.complex128).itemsize

_budget_override = None


def create_folder(folder):
    """Creates a folder.

    Args:
        folder (str): Folder to create.
    """
    if not os.path.exists(folder):
        os.makedirs(folder)


class BudgetExceededError(ValueError):
    """Raised when a dense tensor would not fit the configured memory budget."""

    def __init__(self, parameter, requested, budget):
        self.parameter = parameter
        self.requested = int(requested)
        self.budget = int(budget)
        super().__init__(
            f"{parameter} needs {self.requested} bytes, budget is {self.budget} bytes"
        )


def set_memory_budget(budget):
    """Overrides the memory budget for the current process.

    Args:
        budget (int | None): Budget in bytes. None restores the environment/default
            value.
    """
    global _budget_override
    if budget is not None and int(budget) <= 0:
        raise ValueError(f"memory budget must be positive, got {budget}")
    _budget_override = None if budget is None else int(budget)


def memory_budget():
    """Returns the memory budget in bytes.

    The value set with :py:func:`set_memory_budget` wins, then the
    `DUHIVE_MEMORY_BUDGET` environment variable, then 2 GiB.
    """
    if _budget_override is not None:
        return _budget_override
    value = os.environ.get(MEMORY_BUDGET_ENV)
    if value:
        return int(float(value))
    return DEFAULT_MEMORY_BUDGET


def check_budget(entries, parameter, itemsize=COMPLEX_ITEMSIZE):
    """Raises :py:class:`BudgetExceededError` if `entries` complex numbers do not fit.

    Args:
        entries (int): Number of tensor entries that would be allocated.
        parameter (str): Description of what is being allocated, used in the error.
        itemsize (int): Bytes per entry.
    """
    requested = int(entries) * itemsize
    budget = memory_budget()
    if requested > budget:
        raise BudgetExceededError(parameter, requested, budget)
    return requested


class Seeder:
    """Class used to manage seeding in duhive. It sets the seed for the random
    number generators of numpy and python, and deterministically hands out new seeds
    derived from the global seed for objects that need their own generator.
    """

    def __init__(self):
        self._seed = 0
        self._current_seed = 0

    def set_global_seed(self, seed):
        """Sets the global seed.

        Args:
            seed (int): Global seed.
        """
        self._seed = seed
        self._current_seed = seed
        random.seed(self._seed)
        np.random.seed(self._seed)

    def get_new_seed(self):
        """Each time it is called, it increments the current_seed and returns it."""
        self._current_seed += 1
        return self._current_seed


seeder = Seeder()


class Chomp(dict):
    """An extension of the dictionary class that allows for accessing through dot
    notation and easy saving/loading.
    """

    def __getattr__(self, k):
        if k not in self:
            raise AttributeError()
        return self.__getitem__(k)

    def __setattr__(self, k, v):
        self.__setitem__(k, v)

    def save(self, filename):
        """Saves the object using pickle.

        Args:
            filename (str): Filename to save object.
        """
        with open(filename, "wb") as f:
            pickle.dump(self, f)

    def load(self, filename):
        """Loads the object.

        Args:
            filename (str): Where to load object from.
        """

        self.clear()
        with open(filename, "rb") as f:
            self.update(pickle.load(f))
