"""varspec: variational-orthogonalization spectra for polynomial Hamiltonians."""

from . import cutoff, engine, models, quad, symcore

__version__ = "0.1.0"

__all__ = ["symcore", "quad", "engine", "models", "cutoff", "__version__"]
