"""Ahead-of-time compiler for extended OpenQASM 3 with a pluggable runtime."""

__version__ = "0.1.0"
