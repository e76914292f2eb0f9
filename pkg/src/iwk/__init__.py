"""Executable non-commutative Iwasawa theory at finite level."""

__version__ = "0.1.0"
