"""
python -m boostdecay
"""

import sys

from boostdecay.main import main

if __name__ == "__main__":
    sys.exit(main())
