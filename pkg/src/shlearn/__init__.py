"""Learned syntax highlighting for MiniLang."""

__version__ = "0.1.0"
