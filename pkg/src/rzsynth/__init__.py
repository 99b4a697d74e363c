"""T-count optimal approximation of single-qubit Z rotations over Clifford+T."""

__version__ = "0.1.0"
