"""Executable checks for Hlawka-type one-form/two-form relations."""

__version__ = "0.1.0"
