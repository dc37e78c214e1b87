"""Minimum independent dominating set solver"""

__version__ = "0.1.0"
