"""
Main entry point for the quantized torus diagnostics

Run this script from the project root:
    python run_cli.py mixing --n 8 --map cat:2,1,1,1 --a 1,0 --b -2,-1 --steps 10
"""

import sys

from qtorus.cli import main

if __name__ == "__main__":
    sys.exit(main())
