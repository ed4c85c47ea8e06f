"""
Tests for boostdecay
"""
