"""
Controllers package for the IFCIL verifier
"""
