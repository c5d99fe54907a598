"""Toric geometry: polytopes, potential function, Floer complexes."""
