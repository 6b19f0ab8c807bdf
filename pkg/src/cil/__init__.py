"""
CIL package for the IFCIL verifier
"""
