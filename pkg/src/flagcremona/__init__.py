"""Equalized C*-actions on rational homogeneous varieties and their Cremona maps."""

__version__ = "0.1.0"
