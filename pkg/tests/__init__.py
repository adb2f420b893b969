"""RENN Tests."""
