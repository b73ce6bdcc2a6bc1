"""
evit: expected value of information transfer for population-based SHM.

Simulates a population of mass-spring structures, learns how post-transfer
prediction quality depends on structural similarity, and picks the transfer
strategy (source subset + algorithm) that maximises EVIT plus transfer cost.
"""

__version__ = "0.1.0"
