"""Mod-2 ordinary and motivic cohomology of BO_n and BSO_n."""

__version__ = "0.1.0"
