"""Idempotents, Peirce spectra and syzygies of commutative nonassociative algebras."""

__version__ = "0.1.0"
