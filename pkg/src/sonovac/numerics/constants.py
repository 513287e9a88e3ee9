"""CODATA 2018 exact/recommended values in SI units."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    c: float = 2.99792458e8  # m / s
    k_B: float = 1.380649e-23  # J / K


CONSTANTS = PhysicalConstants()
HBAR = CONSTANTS.hbar
C_LIGHT = CONSTANTS.c
K_B = CONSTANTS.k_B
