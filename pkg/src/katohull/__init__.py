"""Kato complexes and triangulated hulls over finite-dimensional algebras."""
