"""Realizability workbench: a combinatory algebra, assemblies over it, and the
realizability universes of constructive set theory."""

__version__ = "0.1.0"
