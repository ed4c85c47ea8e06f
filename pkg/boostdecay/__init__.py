"""
boostdecay - decay laws of moving unstable systems
"""

__version__ = "1.0.0"
