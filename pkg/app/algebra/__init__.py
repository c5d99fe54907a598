"""Finite field tower and Novikov polynomial arithmetic."""
