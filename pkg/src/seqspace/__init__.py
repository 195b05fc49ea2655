"""Constructive spaceability in invariant sequence spaces.

Submodules: :mod:`sequences` (lazy sequences, zerofree versions, the block
partition), :mod:`norms` (finite-depth norms and certificates),
:mod:`spaceability` (witnesses and the subspace construction),
:mod:`norm_attaining` (operator families attaining their norm at x0) and
:mod:`cli`.
"""
from .norms import SpaceDescriptor, lp_partial, lorentz_partial, orlicz_luxemburg
from .sequences import (
    ComputableSequence, block_index, block_of, combine, interleave, truncate, zerofree,
)
from .spaceability import AvoidanceSet, Witness, build_basis, witness_catalog

__version__ = "0.1.0"
