"""Exact valuative K-stability invariants for toric Q-Fano varieties and log pairs on P^1."""

__version__ = "0.1.0"
