"""
phaseBits - Test Suite
"""
