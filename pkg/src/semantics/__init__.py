"""
Semantics package for the IFCIL verifier
"""
