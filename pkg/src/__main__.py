"""python -m src"""

import sys

from .cli import run

sys.exit(run())
