"""Continuous testing for ontology repositories organised the ACIMOV way."""

__version__ = "0.1.0"
