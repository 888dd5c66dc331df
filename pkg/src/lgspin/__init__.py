"""Leggett-Garg inequality violations for collective qubit ensembles."""

__version__ = "0.1.0"
