"""srhar: sampling-rate-robust human activity recognition toolkit."""

__version__ = "0.1.0"
