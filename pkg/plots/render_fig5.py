#!/usr/bin/env python3
"""Chart the fig5 CSV family (see render.py for the drawing rules)."""

import sys

from render import script_main

if __name__ == "__main__":
    sys.exit(script_main("fig5"))
