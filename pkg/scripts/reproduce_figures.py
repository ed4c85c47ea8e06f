"""
Figure data runner

Usage: python scripts/reproduce_figures.py [OUT_DIR] [extra figures flags]
"""

import sys

from boostdecay.main import main

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "figures"
    sys.exit(main(["figures", "--out-dir", out_dir, "--seed", "0", *sys.argv[2:]]))
