"""Verification lab for pseudo-telepathy games won with one NL-box or two ebits."""

__version__ = "0.1.0"
