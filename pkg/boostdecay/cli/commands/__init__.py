"""
Command handlers, keyed by CLI name
"""

from typing import Callable, Dict

from boostdecay.cli.commands import figures, fit, oracle, phi, transform, window
from boostdecay.models import RunConfig

Handler = Callable[[RunConfig], int]

COMMANDS: Dict[str, Handler] = {
    "fit": fit.run,
    "transform": transform.run,
    "window": window.run,
    "phi": phi.run,
    "oracle-compare": oracle.run,
    "figures": figures.run,
}
