"""Physical constants used throughout the package (SI units)."""

#: Reduced Planck constant, J*s (2018 CODATA exact-relation value).
HBAR = 1.054571817e-34

#: Bohr magneton, J/T. Default magnetic moment for an electron-spin beam.
BOHR_MAGNETON = 9.2740100783e-24
