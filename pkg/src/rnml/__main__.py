"""Allow `python -m rnml`."""

import sys

from .cli import main

sys.exit(main())
