"""Zeta-function singularity structure for self-adjoint extensions on cones."""
