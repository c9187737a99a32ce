#!/usr/bin/env python3

import sys

from .cli import cli

sys.exit(cli())
