#!/usr/bin/env python3
"""
phaseBits
Digital estimation of many phases: probes, covariant measurement densities,
mutual information, Heisenberg bounds and probe entanglement.
"""

from cli.commands import main


if __name__ == "__main__":
    main()
