"""Lozi maps, max-type difference equations and the change of variables between them."""

from .maps import (DomainError, Formulation, GeneralizedLoziParams, LoziParams, MaxEqParams,
                   Orbit, Point, iterate)
from .analysis import detect_asymptotic_cycle, detect_period, equilibria

__all__ = ["DomainError", "Formulation", "GeneralizedLoziParams", "LoziParams", "MaxEqParams",
           "Orbit", "Point", "iterate", "detect_asymptotic_cycle", "detect_period", "equilibria"]
__version__ = "0.1.0"
