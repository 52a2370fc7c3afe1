"""Lexical simplicity auditing and simplification tooling for children's stories."""

__version__ = "0.1.0"
