"""
IFCIL verifier - Main Package
-----------------------------
Checks information-flow requirements written as ;IFL; annotations in CIL
configurations.
"""

__version__ = '0.1.0'
