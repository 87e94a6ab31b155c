"""pqground - positive radial ground states of quasilinear equations, with certificates."""

__version__ = "0.1.0"
