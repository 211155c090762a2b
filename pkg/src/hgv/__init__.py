"""Hypersequent GV workbench: typing, semantics, process structures,
the HCP process calculus and the translation between them."""

__version__ = "0.1.0"
