"""
NuSMV package for the IFCIL verifier
"""
