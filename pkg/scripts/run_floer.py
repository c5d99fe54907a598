#!/usr/bin/env python
"""
Entry point for the Floer cohomology tool.

Usage:
    python scripts/run_floer.py hf --polytope builtin:blowup_cp3 --rho search
    python scripts/run_floer.py selftest --format table

Commands:
- validate, energies: polytope checks and facet energies
- critical-points: exhaustive search over GF(2^m) layers
- hf, product-bound: Floer cohomology rank and intersection bounds
- example, selftest: worked reproductions and property suites
"""
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.cli import main


if __name__ == "__main__":
    sys.exit(main())
