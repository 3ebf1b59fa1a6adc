"""Symbolic and matrix-model tools for the level-zero quantum affine gl_n calculus."""

__version__ = "0.1.0"
