"""Generalized Fourier transforms, spectral widths and uncertainty products
for Sturm-Liouville eigenbases."""

__version__ = "0.1.0"
