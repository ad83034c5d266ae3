from duhive import analysis, core, gates, membrane, opdyn, quench, runners, utils
from duhive.utils.registry import Registrable, registry

__version__ = "0.1.0"
