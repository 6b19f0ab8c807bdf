#!/usr/bin/env python3
"""
Error types for the IFCIL verifier
----------------------------------
Every error raised by the pipeline derives from IfcilError and carries the
exit code the command line reports for it.
"""


class IfcilError(Exception):
    """Base class for all verifier errors."""

    exit_code = 10


class ConfigError(IfcilError):
    """Unreadable or malformed configuration file."""

    exit_code = 10


class CilSyntaxError(IfcilError):
    """Malformed CIL text."""

    exit_code = 10

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IflSyntaxError(CilSyntaxError):
    """Malformed ;IFL; annotation."""


class NormalizationError(IfcilError):
    exit_code = 11


class UnresolvedNameError(NormalizationError):
    """A mandatory name resolution yielded no declaration."""

    def __init__(self, namespace, kind, name):
        self.namespace = namespace
        self.kind = kind
        self.name = name
        super().__init__(f"cannot resolve {kind} '{name}' in namespace {namespace}")


class CyclicInheritanceError(NormalizationError):
    pass


class RefinementError(NormalizationError):
    """Unmatched refinement target or a meet that cannot be computed."""


class MacroCallError(NormalizationError):
    pass


class SemanticsError(IfcilError):
    exit_code = 12


class FlowTableError(IfcilError):
    exit_code = 13


class EmissionError(IfcilError):
    exit_code = 14


class ResponseError(IfcilError):
    exit_code = 14


class OracleRefusedError(IfcilError):
    exit_code = 15


class InputError(IfcilError):
    """Input file missing or unreadable."""

    exit_code = 15
