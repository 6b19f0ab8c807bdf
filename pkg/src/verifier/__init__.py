"""
Verifier package for the IFCIL verifier
"""
