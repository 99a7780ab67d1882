"""Twistsha - exact q-expansions, twisted L-value ratios and class-group certificates."""

__version__ = "0.1.0"
