"""
Ui package for the IFCIL verifier
"""
