"""
Utils package for the IFCIL verifier
"""
