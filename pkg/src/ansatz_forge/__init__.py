"""Block-based ansatz architecture search: encoders, simulator, trainer,
search loop, and the run service."""

__version__ = "0.1.0"
