"""Runs the signet command line with python -m signet"""

import sys

from signet.cli.main import main

sys.exit(main())
