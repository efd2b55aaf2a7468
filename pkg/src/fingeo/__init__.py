"""Induced matchings, Nikodym sets and minimal line covers over finite fields."""

__version__ = "0.1.0"
