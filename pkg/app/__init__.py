"""fanofloer - Floer cohomology of real Lagrangians and torus fibers in toric Fano manifolds over GF(2^m)."""

__version__ = "0.1.0"
