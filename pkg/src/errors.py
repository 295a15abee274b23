#!/usr/bin/env python3

class RopError(Exception):
    """Base class for all errors raised by the meta-analysis engine"""
    exit_code = 1

class ParseError(RopError):
    """Malformed input file; carries the file and, when known, line and column"""
    exit_code = 3

    def __init__(self, message: str, path: str = None, line: int = None, column: int = None):
        self.path = path
        self.line = line
        self.column = column
        location = []
        if path:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        prefix = ", ".join(location)
        super().__init__(f"{prefix}: {message}" if prefix else message)

class ValidationError(RopError):
    """Input violates a precondition of the requested operation"""
    exit_code = 4

class DomainError(ValidationError):
    """Argument outside the support of a distribution or test"""

class DegenerateInputError(ValidationError):
    """Test input has too few observations or zero variance"""

class TooFewPairsError(ValidationError):
    """Signed-rank test has fewer usable pairs than required"""

class CommitteeTooSmallError(ValidationError):
    """Not enough usable gene sets to form the pathway committee"""

class ComputeError(RopError):
    """Numerical failure during computation"""
    exit_code = 5

class ConvergenceError(ComputeError):
    """Iterative routine failed to converge"""

class GeneRowError(ComputeError):
    """Row-level failure re-raised with the gene identifier attached"""

    def __init__(self, gene: str, cause: Exception):
        self.gene = gene
        self.cause = cause
        super().__init__(f"gene {gene}: {cause}")
