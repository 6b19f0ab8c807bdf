"""
IFL package for the IFCIL verifier
"""
