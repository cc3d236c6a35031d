"""Exact F2 engine for finite A-infinity categories and weak Calabi-Yau pairings."""

__version__ = "0.1.0"
