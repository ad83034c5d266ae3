from duhive.utils import loggers, registry, utils
