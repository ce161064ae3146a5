"""Desk-scale social-media opinion trend pipeline."""

__version__ = "0.1.0"
