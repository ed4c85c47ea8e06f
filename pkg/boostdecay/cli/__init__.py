"""
Command-line workflows
"""
