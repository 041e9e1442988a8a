"""Exact computations with the JK-groups G_lambda^(p) and their endomorphism monoids."""

from .endo import CentralHom, Endo, compose, normalize, star
from .group import Element, GroupParams, Subgroup
from .report import Check

__version__ = "0.1.0"

__all__ = ["GroupParams", "Element", "Subgroup", "Endo", "CentralHom", "Check",
           "compose", "normalize", "star"]
