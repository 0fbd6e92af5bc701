"""Source-to-source OpenMP pattern analysis and transformation for a C subset."""

__version__ = "0.1.0"
